"""Adjacency spectra: Jacobi eigensolver, median eigenvalues, energy, moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InconsistencyError
from .graph import Graph, average_degree, triangle_count

JACOBI_TOL = 1e-13
MAX_SWEEPS = 100
# above this order the dense Jacobi sweep is replaced by LAPACK (syevd)
JACOBI_MAX_N = 500


@njit(cache=True)
def _jacobi_sweeps(a, tol, max_sweeps):
    """Cyclic-by-row Jacobi on ``a`` in place; returns sweeps used or -1."""
    n = a.shape[0]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    scale = np.sqrt(scale)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if np.sqrt(off) <= tol * scale:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                # smaller root of t^2 + 2 tau t - 1 = 0 keeps |angle| <= pi/4
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
    return -1


def jacobi_eigenvalues(matrix: np.ndarray, tol: float = JACOBI_TOL) -> np.ndarray:
    """Eigenvalues of a dense symmetric matrix, descending."""
    a = np.array(matrix, dtype=np.float64, order="C")
    if a.size == 0:
        return np.zeros(0)
    sweeps = _jacobi_sweeps(a, tol, MAX_SWEEPS)
    if sweeps < 0:
        raise ArithmeticError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    return np.sort(np.diag(a))[::-1].copy()


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray  # descending

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)


def eigenvalues(g: Graph, method: str = "auto") -> Spectrum:
    """Adjacency eigenvalues of ``g`` in descending order.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_N`` vertices).
    """
    if method == "auto":
        method = "jacobi" if g.n <= JACOBI_MAX_N else "lapack"
    a = g.adjacency_matrix()
    if method == "jacobi":
        vals = jacobi_eigenvalues(a)
    elif method == "lapack":
        vals = np.linalg.eigvalsh(a)[::-1].copy() if g.n else np.zeros(0)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return Spectrum(vals)


def median_indices(n: int) -> tuple[int, int]:
    """1-indexed ``(h, l)`` with h = floor((n+1)/2), l = ceil((n+1)/2)."""
    return (n + 1) // 2, (n + 2) // 2


def median_eigenvalues(s: Spectrum) -> tuple[float, float]:
    if s.n == 0:
        return 0.0, 0.0
    h, l = median_indices(s.n)
    return float(s.values[h - 1]), float(s.values[l - 1])


def average_energy(s: Spectrum) -> float:
    if s.n == 0:
        return 0.0
    return float(np.abs(s.values).sum() / s.n)


def power_sums(s: Spectrum, kmax: int = 4) -> tuple[float, ...]:
    return tuple(float(np.sum(s.values**k)) for k in range(1, kmax + 1))


@dataclass(frozen=True)
class SpectralSummary:
    lambda_h: float
    lambda_l: float
    h: int
    l: int
    avg_energy: float
    power_sums: tuple[float, ...]
    triangle_count: int


def summarize(g: Graph, s: Spectrum) -> SpectralSummary:
    h, l = median_indices(g.n)
    lh, ll = median_eigenvalues(s)
    return SpectralSummary(
        lambda_h=lh,
        lambda_l=ll,
        h=h,
        l=l,
        avg_energy=average_energy(s),
        power_sums=power_sums(s),
        triangle_count=triangle_count(g),
    )


@dataclass(frozen=True)
class MomentReport:
    """Slack of each closed-walk identity; all entries must be within ``tol``."""

    p1: float
    p2_minus_2m: float
    p3_minus_6t: float
    p4_slack: float  # p4 - (2 dbar^2 - dbar) n, must be >= -tol
    tol: float


def moment_tolerance(n: int, d: int) -> float:
    return 1e-6 * n * (d + 1) ** 2


def moment_report(g: Graph, s: Spectrum, d: int | None = None) -> MomentReport:
    """Check the power-sum identities of the adjacency spectrum.

    p1 = 0, p2 = 2|E|, p3 = 6 * #triangles, p4 >= (2 dbar^2 - dbar) n.
    Raises :class:`InconsistencyError` naming the first violated identity.
    """
    if d is None:
        d = g.max_degree
    tol = moment_tolerance(g.n, d)
    p1, p2, p3, p4 = power_sums(s)
    dbar = float(average_degree(g))
    rep = MomentReport(
        p1=p1,
        p2_minus_2m=p2 - 2 * g.edge_count,
        p3_minus_6t=p3 - 6 * triangle_count(g),
        p4_slack=p4 - (2 * dbar * dbar - dbar) * g.n,
        tol=tol,
    )
    if abs(rep.p1) > tol:
        raise InconsistencyError(f"sum of eigenvalues is {p1}, expected 0")
    if abs(rep.p2_minus_2m) > tol:
        raise InconsistencyError(f"sum of squares off from 2|E| by {rep.p2_minus_2m}")
    if abs(rep.p3_minus_6t) > tol:
        raise InconsistencyError(f"sum of cubes off from 6*triangles by {rep.p3_minus_6t}")
    if rep.p4_slack < -tol:
        raise InconsistencyError(f"fourth-moment lower bound violated by {-rep.p4_slack}")
    return rep
