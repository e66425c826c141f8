"""Immutable simple graphs, degree statistics and graph6 I/O."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, LoopError, ParseError, UnsupportedError

GRAPH6_MAX_N = 258047
_GRAPH6_HEADER = b">>graph6<<"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adjacency[u]`` is the sorted tuple of neighbours of ``u``.  Build
    instances with :func:`from_edge_list` rather than directly.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise InputError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        for u, nbrs in enumerate(self.adjacency):
            prev = -1
            for v in nbrs:
                if not 0 <= v < self.n:
                    raise InputError(f"neighbour {v} of {u} out of range")
                if v == u:
                    raise LoopError(f"loop at vertex {u}")
                if v <= prev:
                    raise InputError(f"neighbour list of {u} not strictly increasing")
                prev = v
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if not _contains(self.adjacency[v], u):
                    raise InputError(f"edge {u}-{v} is not symmetric")

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return _contains(self.adjacency[u], v)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, nbrs in enumerate(self.adjacency):
            a[u, list(nbrs)] = 1.0
        return a

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def is_bipartite(self) -> bool:
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for v in self.adjacency[u]:
                    if colour[v] < 0:
                        colour[v] = 1 - colour[u]
                        stack.append(v)
                    elif colour[v] == colour[u]:
                        return False
        return True


def _contains(sorted_nbrs: tuple[int, ...], v: int) -> bool:
    i = bisect.bisect_left(sorted_nbrs, v)
    return i < len(sorted_nbrs) and sorted_nbrs[i] == v


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from vertex pairs; duplicates and reversed pairs collapse."""
    if n < 0:
        raise InputError("vertex count must be nonnegative")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise LoopError(f"loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))


def empty_graph(n: int) -> Graph:
    return Graph(n, tuple(() for _ in range(n)))


@dataclass(frozen=True)
class DegreeSummary:
    max_degree: int
    average_degree: Fraction
    edge_count: int
    triangle_count: int


def triangle_count(g: Graph) -> int:
    sets = [set(a) for a in g.adjacency]
    count = 0
    for u, nbrs in enumerate(g.adjacency):
        for v in nbrs:
            if v <= u:
                continue
            # count each triangle once, at its smallest vertex u and middle v
            count += sum(1 for w in sets[u] & sets[v] if w > v)
    return count


def average_degree(g: Graph) -> Fraction:
    if g.n == 0:
        return Fraction(0)
    return Fraction(2 * g.edge_count, g.n)


def degree_stats(g: Graph) -> DegreeSummary:
    return DegreeSummary(
        max_degree=g.max_degree,
        average_degree=average_degree(g),
        edge_count=g.edge_count,
        triangle_count=triangle_count(g),
    )


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shift = a.n
    shifted = tuple(tuple(v + shift for v in nbrs) for nbrs in b.adjacency)
    return Graph(a.n + b.n, a.adjacency + shifted)


# -- graph6 -----------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n <= GRAPH6_MAX_N:
        return bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    raise UnsupportedError(f"graph6 encoding supports n <= {GRAPH6_MAX_N}, got {n}")


def to_graph6(g: Graph) -> bytes:
    """Encode ``g`` as graph6 bytes (no header, no trailing newline)."""
    out = bytearray(_encode_n(g.n))
    chunk = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.adjacency[j]
        for i in range(j):
            chunk = (chunk << 1) | int(_contains(row, i))
            nbits += 1
            if nbits == 6:
                out.append(chunk + 63)
                chunk = nbits = 0
    if nbits:
        out.append((chunk << (6 - nbits)) + 63)
    return bytes(out)


def from_graph6(text: bytes | str) -> Graph:
    if isinstance(text, str):
        text = text.encode("ascii", errors="replace")
    data = text.strip()
    if data.startswith(_GRAPH6_HEADER):
        data = data[len(_GRAPH6_HEADER):]
    if not data:
        raise ParseError("empty graph6 string")
    if any(c < 63 or c > 126 for c in data):
        raise ParseError("graph6 bytes must lie in 63..126")
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    else:
        if len(data) >= 2 and data[1] == 126:
            raise UnsupportedError("8-byte graph6 headers (n >= 258048) are not supported")
        if len(data) < 4:
            raise ParseError("truncated graph6 size header")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        pos = 4
        if n < 63:
            raise ParseError("non-canonical graph6 size header")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ParseError(f"graph6 body has {len(body)} bytes, expected {need} for n={n}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return from_edge_list(n, edges)
