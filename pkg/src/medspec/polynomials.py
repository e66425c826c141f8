"""The two quartic test polynomials and the four-point model spectrum.

``MagicPolynomial`` is ``(alpha - x)(x + e0)^2 (x + d)`` with ``e0 = sqrt(d-1)``
and ``alpha`` tuned so that ``f(e0) = f(d)``; its expectation over a
spectrum separates the upper median from ``e0``.  ``EnergyPolynomial`` is
``(x - d)(x - e0)^2 (x + d + 2 e0)``, which has no cubic term and turns the
fourth and second spectral moments into a bound on the average energy.

Both carry coefficient and product forms; construction cross-checks them on
a fixed grid and raises if they disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .graph import Graph
from .spectral import Spectrum, average_energy

GRID_POINTS = 1000
STRICT_MARGIN = 1e-3
_CROSSCHECK_RTOL = 1e-8


def _crosscheck(coeff_eval, product_eval, lo: float, hi: float, what: str) -> None:
    xs = np.linspace(lo, hi, 10)
    a = coeff_eval(xs)
    b = product_eval(xs)
    scale = max(1.0, float(np.max(np.abs(b))))
    if np.max(np.abs(a - b)) > _CROSSCHECK_RTOL * scale:
        raise ArithmeticError(f"{what}: coefficient and product forms disagree")


@dataclass(frozen=True)
class MagicPolynomial:
    d: int
    eps0: float
    alpha: float
    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return (((-x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0

    def product_form(self, x):
        x = np.asarray(x, dtype=float)
        return (self.alpha - x) * (x + self.eps0) ** 2 * (x + self.d)


def build_magic(d: int) -> MagicPolynomial:
    if d < 3:
        raise DomainError("magic polynomial defined for d >= 3")
    e0 = math.sqrt(d - 1)
    alpha = (d * d + 2 * d * e0 + 2 * e0 * e0) / (d + 2 * e0)
    # f = -(x - alpha)(x + e0)^2 (x + d); Viete on roots alpha, -e0, -e0, -d
    c3 = alpha - (d + 2 * e0)
    c2 = float(d * d + d - 1)
    c1 = alpha * e0 * e0 + 2 * alpha * e0 * d - e0 * e0 * d
    c0 = alpha * e0 * e0 * d
    p = MagicPolynomial(d, e0, alpha, c3, c2, c1, c0)
    _crosscheck(p, p.product_form, -d, alpha, f"magic polynomial d={d}")
    return p


def eval_magic(p: MagicPolynomial, x):
    return p(x)


def mu_distribution(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Support and probabilities of the model spectrum: the incidence graph of a
    projective plane of order d-1 has eigenvalues +-d once and +-sqrt(d-1)
    d^2-d times each."""
    e0 = math.sqrt(d - 1)
    big = 1.0 / (2 * (d * d - d + 1))
    small = (d * d - d) / (2 * (d * d - d + 1))
    return np.array([-d, -e0, e0, d], dtype=float), np.array([big, small, small, big])


def mu_moments(d: int) -> tuple[float, float, float, float]:
    if d < 2:
        raise DomainError("mu distribution needs d >= 2")
    support, probs = mu_distribution(d)
    # pair +-x so odd moments cancel exactly
    half, w = support[2:], probs[2:]
    return tuple(0.0 if k % 2 else float(2 * np.dot(w, half**k)) for k in range(1, 5))


def expected_magic_under_mu(p: MagicPolynomial) -> float:
    support, probs = mu_distribution(p.d)
    return float(np.dot(probs, p(support)))


@dataclass(frozen=True)
class EnergyPolynomial:
    """``f(x) = x^4 - alpha_e x^2 + beta x - gamma``."""

    d: int
    eps0: float
    alpha_e: float
    beta: float
    gamma: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        x2 = x * x
        return x2 * x2 - self.alpha_e * x2 + self.beta * x - self.gamma

    def product_form(self, x):
        x = np.asarray(x, dtype=float)
        return (x - self.d) * (x - self.eps0) ** 2 * (x + self.d + 2 * self.eps0)


def build_energy_poly(d: int) -> EnergyPolynomial:
    if d < 2:
        raise DomainError("energy polynomial defined for d >= 2")
    e0 = math.sqrt(d - 1)
    p = EnergyPolynomial(
        d=d,
        eps0=e0,
        alpha_e=d * d + 3 * d - 3 + 2 * d * e0,
        beta=2 * e0 * (d + e0) ** 2,
        gamma=d * (d - 1) * (d + 2 * e0),
    )
    _crosscheck(p, p.product_form, -(d + 2 * e0), d, f"energy polynomial d={d}")
    return p


def energy_bound(d: int) -> float:
    """Average-energy ceiling sqrt(d-1) + 1/(d + sqrt(d-1))."""
    e0 = math.sqrt(d - 1)
    return e0 + 1.0 / (d + e0)


def energy_bound_gap(d: int, g: Graph, s: Spectrum) -> float:
    """LHS - RHS of the energy-polynomial inequality; nonnegative for max degree <= d.

    LHS = mean of f(|lambda_i|), RHS = beta * (energy - sqrt(d-1) - 1/(d+sqrt(d-1))).
    """
    if d < 3:
        raise PreconditionError("energy bound gap needs d >= 3")
    if g.max_degree > d:
        raise PreconditionError(f"max degree {g.max_degree} exceeds d={d}")
    if g.n == 0:
        return 0.0
    p = build_energy_poly(d)
    lhs = float(np.mean(p(np.abs(s.values))))
    rhs = p.beta * (average_energy(s) - energy_bound(d))
    return lhs - rhs
