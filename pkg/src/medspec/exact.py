"""Exact integer characteristic polynomials and what is built on them.

Polynomials are lists of Python ints, constant term first.  The
characteristic polynomial comes from Faddeev-LeVerrier (all divisions are
exact for integer matrices); the eigenvalue oracle isolates its real roots
with Sturm sequences evaluated exactly at dyadic rationals; the
integrality witness divides out the eigenvalues +-sqrt(s) and evaluates the
rest in Z[sqrt(s)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, UnsupportedError
from .graph import Graph
from .spectral import Spectrum

CHARPOLY_MAX_N = 200
ORACLE_MAX_N = 64
ORACLE_WIDTH_BITS = 34  # bracket width 2**-34 ~ 5.8e-11


@dataclass(frozen=True)
class ExactCharPoly:
    coeffs: tuple[int, ...]  # det(xI - A), constant term first, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def char_poly_exact(g: Graph) -> ExactCharPoly:
    n = g.n
    if n > CHARPOLY_MAX_N:
        raise UnsupportedError(f"exact characteristic polynomial capped at n={CHARPOLY_MAX_N}")
    nbrs = [list(a) for a in g.adjacency]
    c = [0] * (n + 1)
    c[n] = 1
    m = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I ; rows of A M are sums of neighbour rows
        am = np.zeros((n, n), dtype=object)
        for u in range(n):
            if nbrs[u]:
                am[u] = m[nbrs[u]].sum(axis=0)
        for i in range(n):
            am[i, i] += c[n - k + 1]
        m = am
        trace = sum(m[v, u] for u in range(n) for v in nbrs[u])
        q, r = divmod(-trace, k)
        if r:
            raise ArithmeticError("inexact Faddeev-LeVerrier division")
        c[n - k] = q
    return ExactCharPoly(tuple(c))


def det_exact(rows: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# -- polynomial helpers ----------------------------------------------------


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _deriv(p: list) -> list:
    return _trim([i * p[i] for i in range(1, len(p))] or [0])


def _divmod_q(a: list, b: list) -> tuple[list, list]:
    """Division over Q with Fraction coefficients."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] / lead
        q[i] = f
        if f:
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


def _primitive(p: list) -> list[int]:
    """Positive rational multiple of ``p`` with coprime integer coefficients."""
    den = 1
    for x in p:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in p]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints] if g else ints


def _is_zero(p: list) -> bool:
    return all(x == 0 for x in p)


def _gcd(a: list, b: list) -> list[int]:
    a, b = _primitive(a), _primitive(b)
    while not _is_zero(b):
        _, r = _divmod_q(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


def _exact_div(a: list, b: list) -> list[Fraction]:
    q, r = _divmod_q(a, b)
    if not _is_zero(r):
        raise ArithmeticError("polynomial division not exact")
    return q


def squarefree_decomposition(p: list[int]) -> list[tuple[list[int], int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with each ``f_i`` squarefree."""
    # b, c, d must stay exact quotients: rescaling them independently breaks d = c - b'
    out = []
    dp = _deriv(p)
    a = _gcd(p, dp)
    b = _exact_div(p, a)
    c = _exact_div(dp, a)
    d = _trim([x - y for x, y in _zip_pad(c, _deriv(b))])
    i = 1
    while len(b) > 1:
        a = _gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = _exact_div(b, a)
        c = _exact_div(d, a)
        d = _trim([x - y for x, y in _zip_pad(c, _deriv(b))])
        i += 1
    return out


def _zip_pad(a: list, b: list):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


# -- Sturm root isolation ---------------------------------------------------


class _DyadicEvaluator:
    """Sign of integer polynomials at points ``a / 2**E`` using integers only."""

    def __init__(self, bits: int, degree: int) -> None:
        self.bits = bits
        self.scale = [1 << (bits * k) for k in range(degree + 1)]

    def value(self, p: list[int], a: int) -> int:
        deg = len(p) - 1
        acc = p[deg]
        for i in range(deg - 1, -1, -1):
            acc = acc * a + p[i] * self.scale[deg - i]
        return acc


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(p: list[int]) -> list[list[int]]:
    seq = [_primitive(p), _primitive(_deriv(p))]
    while len(seq[-1]) > 1:
        _, r = _divmod_q(seq[-2], seq[-1])
        if _is_zero(r):
            break
        seq.append(_primitive([-x for x in r]))
    return seq


def _variations(seq, ev, a) -> int:
    signs = [s for s in (_sign(ev.value(p, a)) for p in seq) if s]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def isolate_real_roots(p: list[int], bound: int, bits: int = ORACLE_WIDTH_BITS) -> list[Fraction]:
    """Distinct real roots of a squarefree integer polynomial within (-bound, bound].

    Returns dyadic approximations, each within ``2**-bits`` of a root.
    """
    ev = _DyadicEvaluator(bits, len(p) - 1)
    seq = sturm_sequence(p)
    one = 1 << bits
    roots: list[int] = []

    def refine(lo: int, hi: int) -> int:
        # exactly one root in (lo, hi]
        s_hi = _sign(ev.value(p, hi))
        if s_hi == 0:
            return hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            s_mid = _sign(ev.value(p, mid))
            if s_mid == 0:
                return mid
            if s_mid != s_hi:
                lo = mid
            else:
                hi = mid
        return hi

    stack = [(-bound * one, bound * one, _variations(seq, ev, -bound * one),
              _variations(seq, ev, bound * one))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count == 0:
            continue
        if count == 1:
            roots.append(refine(lo, hi))
            continue
        if hi - lo <= 1:
            # distinct roots closer than the working resolution
            roots.extend([hi] * count)
            continue
        mid = (lo + hi) // 2
        vmid = _variations(seq, ev, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    return sorted((Fraction(r, one) for r in roots), reverse=True)


def eigenvalues_oracle(g: Graph) -> Spectrum:
    """Spectrum from Sturm isolation of the exact characteristic polynomial."""
    if g.n > ORACLE_MAX_N:
        raise UnsupportedError(f"Sturm oracle capped at n={ORACLE_MAX_N}")
    if g.n == 0:
        return Spectrum(np.zeros(0))
    cp = list(char_poly_exact(g).coeffs)
    bound = g.max_degree + 1
    vals: list[float] = []
    for factor, mult in squarefree_decomposition(cp):
        for r in isolate_real_roots(factor, bound):
            vals.extend([float(r)] * mult)
    if len(vals) != g.n:
        raise ArithmeticError(f"oracle found {len(vals)} eigenvalues for n={g.n}")
    return Spectrum(np.array(sorted(vals, reverse=True)))


# -- integrality witness ----------------------------------------------------


def _divide_monic(p: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Integer division by a monic polynomial."""
    p = list(p)
    m = len(b) - 1
    if len(p) - 1 < m:
        return [0], p
    q = [0] * (len(p) - m)
    for i in range(len(p) - 1 - m, -1, -1):
        f = p[i + m]
        q[i] = f
        if f:
            for j in range(m + 1):
                p[i + j] -= f * b[j]
    return q, _trim(p[:m] or [0])


def _strip_factor(p: list[int], b: list[int]) -> tuple[list[int], int]:
    m = 0
    while len(p) > len(b) - 1:
        q, r = _divide_monic(p, b)
        if any(r):
            break
        p, m = q, m + 1
    return p, m


def eval_quadratic(p: list[int], s: int) -> tuple[int, int]:
    """``p(sqrt(s)) = a + b*sqrt(s)`` as the integer pair ``(a, b)``."""
    a, b = 0, 0
    for c in reversed(p):
        a, b = b * s + c, a
    return a, b


@dataclass(frozen=True)
class IntegralityWitness:
    """Exact nonzero integers underlying the +-sqrt(d-1) counting argument.

    ``witness = R(sqrt(s)) * R(-sqrt(s)) = prod_{i in I} (lambda_i^2 - s)``
    with ``s = d-1`` and ``I`` the eigenvalues other than +-sqrt(s).  When
    ``s`` is a perfect square ``r^2`` the linear factors are stripped one at
    a time; ``witness_B = prod_{lambda_i != -r} (-r - lambda_i)``.
    """

    d: int
    square_factor_multiplicity: int
    witness: int
    remainder: tuple[int, ...]
    root_multiplicities: tuple[int, int] | None = None  # (+r, -r) when s = r^2
    witness_B: int | None = None


def integrality_witness(g: Graph, d: int) -> IntegralityWitness:
    if d < 2:
        raise DomainError("integrality witness needs d >= 2")
    cp = list(char_poly_exact(g).coeffs)
    s = d - 1
    rem, m = _strip_factor(cp, [-s, 0, 1])
    r = math.isqrt(s)
    if r * r != s:
        a, b = eval_quadratic(rem, s)
        w = a * a - s * b * b
        if w == 0:
            raise ArithmeticError("zero witness: x^2 - (d-1) not fully divided out")
        return IntegralityWitness(d, m, w, tuple(rem))
    # s = r^2: x^2 - s = (x - r)(x + r) may still divide the remainder once
    rem, mp = _strip_factor(rem, [-r, 1])
    rem, mm = _strip_factor(rem, [r, 1])
    w = _peval(rem, r) * _peval(rem, -r)
    if w == 0:
        raise ArithmeticError("zero witness after stripping +-sqrt(d-1)")
    # polynomial over I_B = {lambda != -r}: rem * (x - r)^(m + mp), evaluated at -r
    wb = _peval(rem, -r) * (-2 * r) ** (m + mp)
    if wb == 0:
        raise ArithmeticError("zero B-witness")
    return IntegralityWitness(d, m, w, tuple(rem), (m + mp, m + mm), wb)


def _peval(p: list[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def witness_float(spectrum: Spectrum, d: int, tol: float = 1e-6) -> float:
    """Floating product of ``lambda^2 - (d-1)`` over eigenvalues not near +-sqrt(d-1)."""
    eps0 = math.sqrt(d - 1)
    vals = [v for v in spectrum.values if abs(abs(v) - eps0) > tol]
    return float(np.prod([v * v - (d - 1) for v in vals])) if vals else 1.0
