"""Named graph families and seeded random corpora."""

from __future__ import annotations

from .errors import InputError
from .fields import galois_field
from .graph import Graph, disjoint_union, empty_graph, from_edge_list
from .rng import SplitMix64


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """Canonical representatives of PG(2, q): first nonzero coordinate is 1."""
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, a) for a in range(q)]
    pts.append((0, 0, 1))
    return pts


def projective_plane_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q).

    Points occupy vertices ``0..N-1`` and lines ``N..2N-1`` where
    ``N = q^2 + q + 1``; lines are indexed by the same normalized triples,
    read as linear functionals.
    """
    field = galois_field(q)
    add, mul = field.add, field.mul
    pts = projective_points(q)
    npts = len(pts)
    edges = []
    for i, (x0, x1, x2) in enumerate(pts):
        for j, (a0, a1, a2) in enumerate(pts):
            if add[add[mul[x0][a0]][mul[x1][a1]]][mul[x2][a2]] == 0:
                edges.append((i, npts + j))
    return from_edge_list(2 * npts, edges)


def heawood() -> Graph:
    return projective_plane_incidence(2)


def circulant(n: int, connection_set) -> Graph:
    """Cayley graph of Z/nZ: ``i ~ i+s`` for every ``s`` in the connection set."""
    s = {int(x) % n for x in connection_set} if n else set()
    if 0 in s:
        raise InputError("connection set must not contain 0")
    if any((-x) % n not in s for x in s):
        raise InputError(f"connection set {sorted(s)} is not closed under negation mod {n}")
    return from_edge_list(n, ((i, (i + x) % n) for i in range(n) for x in s))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return from_edge_list(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return from_edge_list(n, ((i, i + 1) for i in range(n - 1)))


def complete(n: int) -> Graph:
    return from_edge_list(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def matching(k: int) -> Graph:
    return from_edge_list(2 * k, ((2 * i, 2 * i + 1) for i in range(k)))


def complete_bipartite(a: int, b: int) -> Graph:
    return from_edge_list(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def triangle_union(a: int, b: int) -> Graph:
    """``a`` disjoint triangles followed by ``b`` disjoint single edges."""
    g = empty_graph(0)
    for _ in range(a):
        g = disjoint_union(g, complete(3))
    return disjoint_union(g, matching(b))


_ELEMENTARY = {
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "matching": matching,
    "empty": empty_graph,
    "complete_bipartite": complete_bipartite,
    "triangle_union": triangle_union,
}


def elementary(kind: str, *params: int) -> Graph:
    try:
        build = _ELEMENTARY[kind]
    except KeyError:
        raise InputError(f"unknown family {kind!r}; choose from {sorted(_ELEMENTARY)}") from None
    if any(p < 0 for p in params):
        raise InputError("family parameters must be nonnegative")
    return build(*params)


class _Pool:
    """Vertices still below the degree cap, with O(1) removal."""

    def __init__(self, vertices) -> None:
        self.items = list(vertices)
        self.pos = {v: i for i, v in enumerate(self.items)}

    def __len__(self) -> int:
        return len(self.items)

    def pick(self, rng: SplitMix64) -> int:
        return self.items[rng.below(len(self.items))]

    def remove(self, v: int) -> None:
        i = self.pos.pop(v)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i


def _grow(n, d, rng, left, right, max_edges):
    nbrs = [set() for _ in range(n)]
    a, b = _Pool(left), _Pool(right) if right is not None else None
    budget = 20 * n * d
    limit = max_edges if max_edges is not None else n * d
    edges = 0
    for _ in range(budget):
        if edges >= limit:
            break
        if b is None:
            if len(a) < 2:
                break
            u, v = a.pick(rng), a.pick(rng)
            if u == v:
                continue
        else:
            if not len(a) or not len(b):
                break
            u, v = a.pick(rng), b.pick(rng)
        if v in nbrs[u]:
            continue
        nbrs[u].add(v)
        nbrs[v].add(u)
        edges += 1
        for w, pool in ((u, a), (v, a if b is None else b)):
            if len(nbrs[w]) >= d:
                pool.remove(w)
    return from_edge_list(n, ((u, v) for u in range(n) for v in nbrs[u] if u < v))


def random_bounded_degree(n: int, d: int, seed: int, max_edges: int | None = None) -> Graph:
    """Random graph with maximum degree at most ``d``.

    Repeatedly draws a candidate pair uniformly among vertices still below
    the cap and keeps it unless it is a loop or duplicate; stops after
    ``20*n*d`` draws, when fewer than two unsaturated vertices remain, or
    once ``max_edges`` edges are placed.
    """
    if d < 1:
        raise InputError("degree cap must be at least 1")
    return _grow(n, d, SplitMix64(seed), range(n), None, max_edges)


def random_bipartite(a: int, b: int, d: int, seed: int, max_edges: int | None = None) -> Graph:
    """Random bipartite graph (sides ``0..a-1`` and ``a..a+b-1``), max degree <= d."""
    if d < 1:
        raise InputError("degree cap must be at least 1")
    return _grow(a + b, d, SplitMix64(seed), range(a), range(a, a + b), max_edges)
