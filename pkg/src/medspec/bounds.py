"""Executable checks of the median-eigenvalue and average-energy inequalities.

Each checker returns a :class:`BoundReport`.  ``slack`` is oriented so that
a nonnegative value means the inequality holds; a report is satisfied when
``slack >= -SLACK_TOL``.  Graphs outside a theorem's hypotheses get
``applicable=False`` and are vacuously satisfied, so corpus sweeps can call
every checker on every graph.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph, average_degree, triangle_count
from .polynomials import energy_bound
from .spectral import Spectrum, average_energy, eigenvalues, median_eigenvalues

SLACK_TOL = 1e-8
LARGE_D = 75


class TheoremId(str, enum.Enum):
    MEDIAN_UPPER = "T1.1"
    LOWER_TRIANGLE_FREE = "T1.2"
    LOWER_PERFECT_SQUARE = "T1.3"
    LOWER_LARGE_D = "T1.4"
    AVG_ENERGY = "T1.5"
    COROLLARY = "C1.6"
    MCCLELLAND = "T3.1"
    MEDIAN_VS_ENERGY = "T_median_energy"


@dataclass(frozen=True)
class BoundReport:
    theorem_id: TheoremId
    applicable: bool
    lhs: float | None = None
    rhs: float | None = None
    slack: float | None = None
    satisfied: bool = True
    notes: str = ""
    equality_classified: bool | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "theorem_id": self.theorem_id.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "satisfied": self.satisfied,
            "applicable": self.applicable,
            "notes": self.notes,
        }


def _not_applicable(tid: TheoremId, why: str) -> BoundReport:
    return BoundReport(tid, applicable=False, notes=f"not applicable: {why}")


def _upper(tid, lhs, rhs, notes, tol=SLACK_TOL, **kw) -> BoundReport:
    """Report for ``lhs <= rhs``."""
    slack = rhs - lhs
    return BoundReport(tid, True, lhs, rhs, slack, slack >= -tol, notes, **kw)


def _lower(tid, lhs, rhs, notes, tol=SLACK_TOL) -> BoundReport:
    """Report for ``lhs >= rhs``."""
    slack = lhs - rhs
    return BoundReport(tid, True, lhs, rhs, slack, slack >= -tol, notes)


def _max_degree_gate(g: Graph, d: int, dmin: int) -> str | None:
    if d < dmin:
        return f"d={d} < {dmin}"
    if g.max_degree > d:
        return f"max degree {g.max_degree} > d={d}"
    return None


def _degree_note(g: Graph, d: int) -> str:
    return f"d={d}, max_degree={g.max_degree}"


def check_median_upper(g: Graph, s: Spectrum, d: int, tol: float = SLACK_TOL) -> BoundReport:
    tid = TheoremId.MEDIAN_UPPER
    why = _max_degree_gate(g, d, 3)
    if why:
        return _not_applicable(tid, why)
    lh, _ = median_eigenvalues(s)
    return _upper(tid, lh, math.sqrt(d - 1), _degree_note(g, d), tol)


def check_median_lower_triangle_free(g: Graph, s: Spectrum, d: int,
                                     tol: float = SLACK_TOL) -> BoundReport:
    tid = TheoremId.LOWER_TRIANGLE_FREE
    why = _max_degree_gate(g, d, 3)
    if why:
        return _not_applicable(tid, why)
    t = triangle_count(g)
    if t:
        return _not_applicable(tid, f"graph has {t} triangles")
    _, ll = median_eigenvalues(s)
    return _lower(tid, ll, -math.sqrt(d - 1), _degree_note(g, d) + ", triangle-free", tol)


def perfect_square_hypothesis(avg_degree: Fraction, d: int) -> str | None:
    """Reason the perfect-square lower bound does not apply, or None.

    The average-degree comparison is exact rational arithmetic.
    """
    if d < 2:
        return f"d={d} < 2"
    r = math.isqrt(d - 1)
    if r * r != d - 1:
        return f"d-1={d - 1} is not a perfect square"
    if Fraction(avg_degree) > d:
        return f"average degree {avg_degree} > d={d}"
    return None


def check_median_lower_perfect_square(g: Graph, s: Spectrum, d: int,
                                      tol: float = SLACK_TOL) -> BoundReport:
    tid = TheoremId.LOWER_PERFECT_SQUARE
    avg = average_degree(g)
    why = perfect_square_hypothesis(avg, d)
    if why:
        return _not_applicable(tid, why)
    _, ll = median_eigenvalues(s)
    return _lower(tid, ll, -math.sqrt(d - 1), f"d={d}, average_degree={avg}", tol)


def check_median_lower_large_d(g: Graph, s: Spectrum, d: int,
                               tol: float = SLACK_TOL) -> BoundReport:
    tid = TheoremId.LOWER_LARGE_D
    why = _max_degree_gate(g, d, LARGE_D)
    if why:
        return _not_applicable(tid, why)
    _, ll = median_eigenvalues(s)
    return _lower(tid, ll, -math.sqrt(d - 1), _degree_note(g, d), tol)


def mcclelland_equality_case(g: Graph) -> bool:
    """Empty graph or perfect matching: every component is K1, or every one is K2."""
    sizes = {len(c) for c in g.components()}
    return sizes <= {1} or sizes == {2}


def check_mcclelland(g: Graph, s: Spectrum, tol: float = SLACK_TOL) -> BoundReport:
    avg = average_degree(g)
    classified = mcclelland_equality_case(g)
    return _upper(
        TheoremId.MCCLELLAND,
        average_energy(s),
        math.sqrt(avg),
        f"average_degree={avg}, equality_classified={classified}",
        tol,
        equality_classified=classified,
    )


def check_avg_energy(g: Graph, s: Spectrum, d: int, tol: float = SLACK_TOL) -> BoundReport:
    tid = TheoremId.AVG_ENERGY
    why = _max_degree_gate(g, d, 3)
    if why:
        return _not_applicable(tid, why)
    return _upper(tid, average_energy(s), energy_bound(d), _degree_note(g, d), tol)


def check_median_vs_energy(g: Graph, s: Spectrum, tol: float = SLACK_TOL) -> BoundReport:
    lh, ll = median_eigenvalues(s)
    return _upper(TheoremId.MEDIAN_VS_ENERGY, max(abs(lh), abs(ll)), average_energy(s),
                  f"n={g.n}", tol)


def check_corollary(g: Graph, s: Spectrum, d: int, tol: float = SLACK_TOL) -> BoundReport:
    tid = TheoremId.COROLLARY
    why = _max_degree_gate(g, d, 3)
    if why:
        return _not_applicable(tid, why)
    lh, ll = median_eigenvalues(s)
    return _upper(tid, max(abs(lh), abs(ll)), energy_bound(d), _degree_note(g, d), tol)


def check_all(g: Graph, d: int, s: Spectrum | None = None,
              tol: float = SLACK_TOL) -> list[BoundReport]:
    if s is None:
        s = eigenvalues(g)
    return [
        check_median_upper(g, s, d, tol),
        check_median_lower_triangle_free(g, s, d, tol),
        check_median_lower_perfect_square(g, s, d, tol),
        check_median_lower_large_d(g, s, d, tol),
        check_avg_energy(g, s, d, tol),
        check_corollary(g, s, d, tol),
        check_mcclelland(g, s, tol),
        check_median_vs_energy(g, s, tol),
    ]


def violations(reports: list[BoundReport]) -> list[BoundReport]:
    return [r for r in reports if not r.satisfied]
