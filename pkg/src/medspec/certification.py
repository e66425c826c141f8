"""Numerical certification of the product bound behind the d >= 75 lower bound.

For ``d >= 75`` set ``e0 = sqrt(d-1)`` and ``e1 = e0 + 1/(d + e0)``.  The
objective

    (2 e0)^(x+y+z) * ((e0+e1)/(2 e0)) * (eps-e0)^x
        * (alpha(delta) (e1-eps) / y)^(y/2) * (d-e0)^z

must stay below 1 on ``e0 <= eps <= e1``, ``x >= 1/2``,
``0 <= y <= 1/2 - z``, ``0 <= z <= 1/(delta-e0)^2`` for a suitable
``delta``.  Maximizing stage by stage (x, then eps, then y, then z) gives a
one-line closed form per ``d``; :func:`grid_oracle` brute-forces the same
objective as an independent check.

All products are evaluated as sums of logarithms.  Floating point is
binary64 throughout; every record carries its margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, DomainError, PreconditionError
from .exact import integrality_witness, CHARPOLY_MAX_N
from .graph import Graph
from .polynomials import build_energy_poly, energy_bound
from .spectral import Spectrum, average_energy, eigenvalues, median_eigenvalues

MIN_D = 75
REGIME2_D = 140
CONSTRAINT_RTOL = 1e-12
DEFAULT_RESOLUTION = 200


def eps_pair(d: int) -> tuple[float, float]:
    return math.sqrt(d - 1), energy_bound(d)


def alpha_delta(d: int, delta: float) -> float:
    e0 = math.sqrt(d - 1)
    if not e0 < delta < d:
        raise DomainError(f"delta={delta} outside (sqrt(d-1), d) for d={d}")
    return 2 * e0 * (d + e0) ** 2 / ((d - delta) * (d + 2 * e0 + delta))


def regime(d: int) -> int:
    if d < MIN_D:
        raise DomainError(f"certification needs d >= {MIN_D}")
    return 1 if d < REGIME2_D else 2


def regime_target(d: int) -> float:
    """Value of alpha(delta) * (e1 - e0) that fixes delta: 1/4, or 1/5 for d >= 140."""
    return 0.25 if regime(d) == 1 else 0.2


def delta_for_regime(d: int) -> float:
    e0 = math.sqrt(d - 1)
    k = 7 if regime(d) == 1 else 9
    delta = math.sqrt((d + e0) * (d - k * e0)) - e0
    if not e0 < delta < d:
        raise CertificationError(f"regime delta {delta} outside (e0, d) at d={d}")
    return delta


def delta_by_bisection(d: int, target: float, iters: int = 200) -> float:
    """Solve alpha(delta) * (e1 - e0) = target on (e0, d); alpha is increasing there."""
    e0, e1 = eps_pair(d)
    lo, hi = e0, float(d)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if alpha_delta(d, mid) * (e1 - e0) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def constraint_values(d: int, delta: float) -> tuple[float, float]:
    """(alpha(delta)(e1-e0), delta-e0); need >= 1/5 and >= sqrt(2)."""
    e0, e1 = eps_pair(d)
    return alpha_delta(d, delta) * (e1 - e0), delta - e0


def constraints_hold(d: int, delta: float) -> bool:
    a, gap = constraint_values(d, delta)
    return a >= 0.2 * (1 - CONSTRAINT_RTOL) and gap >= math.sqrt(2)


# -- the objective and its stagewise reductions ------------------------------


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def log_objective(d: int, delta: float, eps: float, x: float, y: float, z: float) -> float:
    e0, e1 = eps_pair(d)
    a = alpha_delta(d, delta)
    val = (x + y + z) * math.log(2 * e0) + math.log((e0 + e1) / (2 * e0))
    val += x * _log(eps - e0)
    if y > 0:
        # split the log: a(e1-eps)/y overflows for subnormal y
        val += 0.5 * y * (_log(a * (e1 - eps)) - math.log(y))
    return val + z * math.log(d - e0)


def objective_full(d: int, delta: float, eps: float, x: float, y: float, z: float,
                   tol: float = 1e-12) -> float:
    """The four-variable objective; raises DomainError outside the constraint set."""
    e0, e1 = eps_pair(d)
    zmax = 1.0 / (delta - e0) ** 2
    if not (e0 - tol <= eps <= e1 + tol and x >= 0.5 - tol and -tol <= z <= zmax + tol
            and -tol <= y <= 0.5 - z + tol):
        raise DomainError(f"point eps={eps}, x={x}, y={y}, z={z} violates the constraints")
    eps = min(max(eps, e0), e1)
    return math.exp(log_objective(d, delta, eps, x, max(y, 0.0), max(z, 0.0)))


def stage2(d: int, delta: float, y: float, z: float) -> float:
    """Objective after x = 1/2 and the optimal eps = (y e0 + e1)/(y + 1)."""
    e0, e1 = eps_pair(d)
    a = alpha_delta(d, delta)
    val = (0.5 + y + z) * math.log(2 * e0) + math.log((e0 + e1) / (2 * e0))
    val += 0.5 * math.log((e1 - e0) / (y + 1))
    val += 0.5 * y * math.log(a * (e1 - e0) / (y + 1))
    return math.exp(val + z * math.log(d - e0))


def stage3(d: int, delta: float, z: float) -> float:
    """Objective after additionally y = 1/2 - z."""
    e0, e1 = eps_pair(d)
    a = alpha_delta(d, delta)
    w = 1.5 - z
    val = math.log(e0 + e1) + 0.5 * math.log((e1 - e0) / w)
    val += (0.25 - z / 2) * math.log(a * (e1 - e0) / w)
    return math.exp(val + z * math.log(d - e0))


def z_star(d: int, delta: float) -> float:
    return 1.0 / (delta - math.sqrt(d - 1)) ** 2


def stage4(d: int, delta: float) -> float:
    """Closed-form maximum: stage3 at z = z* = 1/(delta - e0)^2."""
    return stage3(d, delta, z_star(d, delta))


@dataclass(frozen=True)
class CertificationRecord:
    d: int
    regime: int
    eps0: float
    eps1: float
    delta: float
    alpha_delta: float
    z_star: float
    objective: float
    constraint_ok: bool
    certified: bool
    margin: float

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "regime": self.regime,
            "delta": self.delta,
            "alpha_delta": self.alpha_delta,
            "z_star": self.z_star,
            "objective": self.objective,
            "margin": self.margin,
            "constraints": self.constraint_ok,
            "certified": self.certified,
        }


def objective_closed_form(d: int) -> CertificationRecord:
    delta = delta_for_regime(d)
    e0, e1 = eps_pair(d)
    zs = z_star(d, delta)
    obj = stage4(d, delta)
    ok = constraints_hold(d, delta)
    return CertificationRecord(
        d=d,
        regime=regime(d),
        eps0=e0,
        eps1=e1,
        delta=delta,
        alpha_delta=alpha_delta(d, delta),
        z_star=zs,
        objective=obj,
        constraint_ok=ok,
        certified=ok and obj < 1.0,
        margin=1.0 - obj,
    )


def certify_range(d_lo: int, d_hi: int) -> list[CertificationRecord]:
    if d_lo < MIN_D or d_hi < d_lo:
        raise DomainError(f"need {MIN_D} <= d_lo <= d_hi, got {d_lo}..{d_hi}")
    records = [objective_closed_form(d) for d in range(d_lo, d_hi + 1)]
    bad = [r.d for r in records if not r.certified]
    if bad:
        raise CertificationError(f"certification fails for d in {bad}")
    return records


# -- d >= 140: three-factor chain -------------------------------------------

FACTOR_BOUNDS = (2 + 1 / 444, 1 / (2 + 1 / 40), 111 / 110)
PRODUCT_BOUND = 889 / 891


@dataclass(frozen=True)
class AsymptoticReport:
    d: int
    factors: tuple[float, float, float]
    bounds: tuple[float, float, float]
    product: float
    product_bound: float
    closed_form: float
    z_star: float
    delta_gap_over_d: float  # (delta - e0) / d, must be >= 1/3

    def slacks(self) -> tuple[float, ...]:
        return tuple(b - f for f, b in zip(self.factors, self.bounds)) + (
            self.product_bound - self.product,
        )

    def holds(self, tol: float = 0.0) -> bool:
        return all(s >= -tol for s in self.slacks()) and self.delta_gap_over_d >= 1 / 3


def certify_asymptotic(d: int, tol: float = 0.0) -> AsymptoticReport:
    if d < REGIME2_D:
        raise DomainError(f"three-factor chain needs d >= {REGIME2_D}")
    e0, e1 = eps_pair(d)
    delta = delta_for_regime(d)
    zs = z_star(d, delta)
    f1 = (e0 + e1) / math.sqrt(d + e0)
    f2 = math.sqrt(5) / (7.5 - 5 * zs) ** (0.75 - zs / 2)
    f3 = math.exp(math.log(d - e0) / (delta - e0) ** 2)
    rep = AsymptoticReport(
        d=d,
        factors=(f1, f2, f3),
        bounds=FACTOR_BOUNDS,
        product=f1 * f2 * f3,
        product_bound=PRODUCT_BOUND,
        closed_form=stage4(d, delta),
        z_star=zs,
        delta_gap_over_d=(delta - e0) / d,
    )
    if not rep.holds(tol):
        raise CertificationError(f"three-factor chain fails at d={d}: slacks {rep.slacks()}")
    return rep


# -- brute-force oracle -------------------------------------------------------


@dataclass(frozen=True)
class GridOracleResult:
    d: int
    delta: float
    grid_dims: tuple[int, int, int]  # (eps, y, z); x is fixed at 1/2
    max_value: float
    argmax: tuple[float, float, float, float]  # (eps, x, y, z)
    below_one: bool
    x_decrease_checked: int


def _x_decreasing(d: int, delta: float, eps: float, y: float, z: float) -> bool:
    vals = [log_objective(d, delta, eps, x, y, z) for x in (0.5, 1.0, 2.0, 4.0)]
    return all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def grid_oracle(d: int, delta: float | None = None,
                resolution: int = DEFAULT_RESOLUTION) -> GridOracleResult:
    """Maximize the objective over a (eps, y, z) grid with x pinned to 1/2.

    The x-collapse is verified first: at every corner and midpoint of the
    (eps, y, z) box the objective must not increase along x = 1/2, 1, 2, 4.
    """
    if d < MIN_D:
        raise DomainError(f"grid oracle needs d >= {MIN_D}")
    if resolution < 50:
        raise DomainError("resolution must be at least 50 per axis")
    if delta is None:
        delta = delta_for_regime(d)
    e0, e1 = eps_pair(d)
    a = alpha_delta(d, delta)
    zmax = min(0.5, 1.0 / (delta - e0) ** 2)

    checked = 0
    for eps in (e0 + 0.5 * (e1 - e0), e1, e0 + 1e-3 * (e1 - e0)):
        for z in (0.0, 0.5 * zmax, zmax):
            for y in (0.0, 0.5 * (0.5 - z), 0.5 - z):
                if not _x_decreasing(d, delta, eps, y, z):
                    raise CertificationError(
                        f"objective increases in x at eps={eps}, y={y}, z={z}, d={d}")
                checked += 1

    eps_axis = np.linspace(e0, e1, resolution)
    t_axis = np.linspace(0.0, 1.0, resolution)
    z_axis = np.linspace(0.0, zmax, resolution)
    log2e0 = math.log(2 * e0)
    base = math.log((e0 + e1) / (2 * e0))
    with np.errstate(divide="ignore", invalid="ignore"):
        log_eps_term = 0.5 * np.log(eps_axis - e0)  # -inf at eps = e0
        log_e1_minus = np.log(a * (e1 - eps_axis))  # -inf at eps = e1
    best = -math.inf
    arg = (e0, 0.5, 0.0, 0.0)
    for z in z_axis:
        y = t_axis * (0.5 - z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ylog = np.where(y > 0, np.log(np.where(y > 0, y, 1.0)), 0.0)
            yterm = 0.5 * y[None, :] * (log_e1_minus[:, None] - ylog[None, :])
        yterm = np.where(y[None, :] > 0, yterm, 0.0)
        yterm = np.nan_to_num(yterm, nan=-np.inf)
        vals = ((0.5 + y[None, :] + z) * log2e0 + base + log_eps_term[:, None] + yterm
                + z * math.log(d - e0))
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        if vals[i, j] > best:
            best = float(vals[i, j])
            arg = (float(eps_axis[i]), 0.5, float(y[j]), float(z))
    value = math.exp(best)
    return GridOracleResult(
        d=d,
        delta=delta,
        grid_dims=(resolution, resolution, resolution),
        max_value=value,
        argmax=arg,
        below_one=value < 1.0,
        x_decrease_checked=checked,
    )


# -- monotonicity helper facts -------------------------------------------------


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    holds: bool
    worst_step: float  # most negative relative increment seen (>= -1e-12 required)
    note: str = ""


MONOTONE_SAMPLES = 1000
MONOTONE_TOL = 1e-12


def _nondecreasing_log(name, log_f, lo, hi, note="", increasing=True) -> LemmaCheck:
    xs = np.linspace(lo, hi, MONOTONE_SAMPLES)
    v = np.array([log_f(x) for x in xs])
    steps = np.diff(v) if increasing else -np.diff(v)
    worst = float(steps.min())
    return LemmaCheck(name, worst >= -MONOTONE_TOL, worst, note)


def _stage_lemmas(d: int) -> list[LemmaCheck]:
    """The y- and z-stage facts, with their preconditions, at the regime delta."""
    e0, e1 = eps_pair(d)
    b = alpha_delta(d, delta_for_regime(d)) * (e1 - e0)
    ay = 2 * e0
    pre = ay * ay * b
    pre_ok = pre > 1.5 * math.e and pre >= 4 * (d - 1) / 5 * (1 - CONSTRAINT_RTOL) and pre >= 57
    c = _nondecreasing_log(
        "a^y (b/(y+1))^((y+1)/2) increasing on [0,1/2]",
        lambda y: y * math.log(ay) + 0.5 * (y + 1) * math.log(b / (y + 1)), 0.0, 0.5,
        f"a^2 b={pre:.6g}")
    out = [LemmaCheck(c.name, c.holds and pre_ok, c.worst_step, c.note)]

    az = d - e0
    pre_ok = az > math.exp(-0.5) and az >= 60
    c = _nondecreasing_log(
        "a^z/(3/2-z)^(3/4-z/2) increasing on [0,1/2]",
        lambda z: z * math.log(az) - (0.75 - z / 2) * math.log(1.5 - z), 0.0, 0.5,
        f"a=d-e0={az:.6g}")
    out.append(LemmaCheck(c.name, c.holds and pre_ok, c.worst_step, c.note))
    return out


def monotonicity_lemmas(d: int, strict: bool = True) -> list[LemmaCheck]:
    """Sample each helper monotonicity fact with its instantiated parameters.

    Values are compared in log scale, so the tolerance is relative.  The
    y- and z-stage facts are only instantiated for d >= 75, where their
    preconditions are claimed.
    """
    if d < 3:
        raise DomainError("monotonicity checks need d >= 3")
    e0 = math.sqrt(d - 1)
    e1 = energy_bound(d)
    checks = []

    checks.append(_nondecreasing_log(
        "(1+1/x)^x increasing", lambda x: x * math.log1p(1 / x), 1e-6, 100.0))

    # perfect-square argument: a = (sqrt(d) + sqrt(d-1))^2 > e
    a_sq = (math.sqrt(d) + e0) ** 2
    checks.append(_nondecreasing_log(
        "a^x/x increasing on [1/ln a, oo)", lambda x: x * math.log(a_sq) - math.log(x),
        1 / math.log(a_sq), 1 / math.log(a_sq) + 10.0, f"a={a_sq:.6g}"))
    checks.append(_nondecreasing_log(
        "(a/x)^x increasing on (0, a/e)", lambda x: x * (math.log(a_sq) - math.log(x)),
        1e-9, a_sq / math.e, f"a={a_sq:.6g}"))

    if d >= MIN_D:
        checks.extend(_stage_lemmas(d))

    checks.append(_nondecreasing_log(
        "ln x / x^2 decreasing on (sqrt e, oo)",
        lambda x: math.log(math.log(x)) - 2 * math.log(x),
        math.sqrt(math.e) + 1e-9, max(float(d), 10.0) * 10, increasing=False))

    xcollapse = 2 * e0 * (e1 - e0)
    checks.append(LemmaCheck("2 e0 (e1 - e0) < 1 (x-collapse)", xcollapse < 1,
                             1 - xcollapse, f"value={xcollapse:.6g}"))

    if strict:
        failed = [c.name for c in checks if not c.holds]
        if failed:
            raise CertificationError(f"monotonicity checks failed at d={d}: {failed}")
    return checks


# -- proof quantities on concrete graphs --------------------------------------

NOT_CHECKED = "not checked: contradiction hypothesis"


@dataclass(frozen=True)
class DiagnosticCheck:
    name: str
    holds: bool | None  # None: not evaluated
    slack: float | None
    note: str = ""


@dataclass
class ProofDiagnostics:
    d: int
    delta: float
    sizes: dict[str, int]
    log_products: dict[str, float]
    checks: list[DiagnosticCheck] = field(default_factory=list)
    exact_witness: int | None = None

    def product(self, name: str) -> float:
        return math.exp(self.log_products[name])

    def failed(self) -> list[DiagnosticCheck]:
        return [c for c in self.checks if c.holds is False]


def proof_diagnostics(g: Graph, d: int, delta: float, s: Spectrum | None = None,
                      match_tol: float = 1e-9) -> ProofDiagnostics:
    """Split the spectrum into the I/J/K/L classes and test the estimates that do
    not depend on the contradiction hypothesis ``lambda_l < -sqrt(d-1)``."""
    if g.max_degree > d:
        raise PreconditionError(f"max degree {g.max_degree} exceeds d={d}")
    e0 = math.sqrt(d - 1)
    if not e0 < delta < d:
        raise DomainError(f"delta={delta} outside (sqrt(d-1), d)")
    if s is None:
        s = eigenvalues(g)
    lam = np.asarray(s.values)
    n = len(lam)
    e1 = energy_bound(d)
    eps = average_energy(s)
    absl = np.abs(lam)

    in_i = np.abs(absl - e0) > match_tol
    in_j = in_i & (lam < -e0)
    rest = in_i & ~in_j
    in_k = rest & (absl <= delta)
    in_l = rest & (absl > delta)
    sizes = {"I": int(in_i.sum()), "J": int(in_j.sum()), "K": int(in_k.sum()),
             "L": int(in_l.sum()), "n": n}

    def logprod(mask, vals):
        return float(np.sum(np.log(vals[mask])))

    logs = {
        "A": logprod(in_i, e0 + absl),
        "B_J": logprod(in_j, np.abs(e0 - absl)),
        "B_K": logprod(in_k, np.abs(e0 - absl)),
        "B_L": logprod(in_l, np.abs(e0 - absl)),
    }
    logs["B"] = logs["B_J"] + logs["B_K"] + logs["B_L"]
    diag = ProofDiagnostics(d, delta, sizes, logs)
    checks = diag.checks

    # |L| <= n/(delta-e0)^2 once the energy is at least e0
    if eps >= e0:
        cap = n / (delta - e0) ** 2
        checks.append(DiagnosticCheck("L_size", sizes["L"] <= cap + 1e-9, cap - sizes["L"]))
    else:
        checks.append(DiagnosticCheck("L_size", None, None, "energy below sqrt(d-1)"))

    gap = sizes["L"] * math.log(d - e0) - logs["B_L"]
    checks.append(DiagnosticCheck("B_L_estimate", gap >= -1e-9, gap))

    gpoly = build_energy_poly(d)
    if n:
        mean_g = -float(np.mean(gpoly(absl)))
        cap = 2 * e0 * (d + e0) ** 2 * (e1 - eps)
        checks.append(DiagnosticCheck("g_estimate", mean_g <= cap + 1e-8, cap - mean_g))

    if sizes["K"]:
        a = alpha_delta(d, delta)
        rhs = 0.5 * sizes["K"] * math.log(a * max(e1 - eps, 0.0) * n / sizes["K"]) \
            if e1 > eps else -math.inf
        checks.append(DiagnosticCheck("B_K_estimate", logs["B_K"] <= rhs + 1e-9,
                                      rhs - logs["B_K"]))

    if eps >= e0 and n:
        rhs = sizes["I"] * math.log(2 * e0) + n * math.log((e0 + e1) / (2 * e0))
        checks.append(DiagnosticCheck("A_estimate", logs["A"] <= rhs + 1e-9, rhs - logs["A"]))
    else:
        checks.append(DiagnosticCheck("A_estimate", None, None, "energy below sqrt(d-1)"))

    _, ll = median_eigenvalues(s)
    if n and ll < -e0:
        rhs = sizes["J"] * _log(eps - e0)
        checks.append(DiagnosticCheck("B_J_estimate", logs["B_J"] <= rhs + 1e-9,
                                      rhs - logs["B_J"], "hypothesis lambda_l < -e0 holds"))
    else:
        checks.append(DiagnosticCheck("B_J_estimate", None, None, NOT_CHECKED))
        checks.append(DiagnosticCheck("product_below_one", None, None, NOT_CHECKED))

    if n <= CHARPOLY_MAX_N:
        w = integrality_witness(g, d).witness
        diag.exact_witness = w
        log_ab = logs["A"] + logs["B"]
        diff = abs(log_ab - math.log(abs(w)))
        checks.append(DiagnosticCheck("witness_match", diff <= 1e-5, 1e-5 - diff,
                                      f"|witness|={abs(w)}"))
    return diag
