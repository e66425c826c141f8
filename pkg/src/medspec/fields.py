"""Small finite fields GF(p^k) as integer-labelled lookup tables.

Element ``e`` in ``0..q-1`` stands for the polynomial whose coefficient of
``t^i`` is the i-th base-p digit of ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import InputError, UnsupportedError

MAX_ORDER = 32

# Monic irreducible moduli, low-order coefficient first (t^2+t+1 -> [1, 1, 1]).
IRREDUCIBLE = {
    4: (2, (1, 1, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (1, 0, 1)),
    16: (2, (1, 1, 0, 0, 1)),
    25: (5, (2, 0, 1)),
    27: (3, (1, 2, 0, 1)),
    32: (2, (1, 0, 1, 0, 0, 1)),
}


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and p prime, or None."""
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 else None
    return None


def _polymod(coeffs: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    c = [x % p for x in coeffs]
    k = len(modulus) - 1
    for i in range(len(c) - 1, k - 1, -1):
        f = c[i]
        if f:
            for j in range(k + 1):
                c[i - k + j] = (c[i - k + j] - f * modulus[j]) % p
    return (c + [0] * k)[:k]


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..k//2 divides the modulus."""
    k = len(modulus) - 1
    if modulus[-1] % p != 1:
        return False
    for deg in range(1, k // 2 + 1):
        for low in product(range(p), repeat=deg):
            div = tuple(low) + (1,)
            if _divides(div, modulus, p):
                return False
    return True


def _divides(div: tuple[int, ...], poly: tuple[int, ...], p: int) -> bool:
    r = [x % p for x in poly]
    m = len(div) - 1
    for i in range(len(r) - 1, m - 1, -1):
        f = r[i]
        if f:
            for j in range(m + 1):
                r[i - m + j] = (r[i - m + j] - f * div[j]) % p
    return not any(r[:m])


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k


def field_spec(q: int) -> FieldSpec:
    pk = prime_power(q)
    if pk is None or q > MAX_ORDER:
        raise UnsupportedError(f"GF({q}) unsupported: need a prime power <= {MAX_ORDER}")
    p, k = pk
    if k == 1:
        return FieldSpec(p, 1, (0, 1))
    p2, modulus = IRREDUCIBLE[q]
    assert p2 == p and len(modulus) == k + 1
    if not is_irreducible(modulus, p):
        raise InputError(f"table modulus for GF({q}) is reducible")
    return FieldSpec(p, k, modulus)


class GF:
    """Addition and multiplication tables of GF(q)."""

    def __init__(self, spec: FieldSpec) -> None:
        self.spec = spec
        q, p, k = spec.q, spec.p, spec.k
        digits = [self._digits(e) for e in range(q)]
        self.add = [[self._index([(a + b) % p for a, b in zip(digits[x], digits[y])])
                     for y in range(q)] for x in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        for x in range(q):
            for y in range(q):
                prod = [0] * (2 * k - 1)
                for i, a in enumerate(digits[x]):
                    if a:
                        for j, b in enumerate(digits[y]):
                            prod[i + j] += a * b
                self.mul[x][y] = self._index(_polymod(prod, spec.modulus, p) if k > 1
                                             else [prod[0] % p])
        self.q = q

    def _digits(self, e: int) -> list[int]:
        out = []
        for _ in range(self.spec.k):
            out.append(e % self.spec.p)
            e //= self.spec.p
        return out

    def _index(self, digits: list[int]) -> int:
        e = 0
        for d in reversed(digits):
            e = e * self.spec.p + d
        return e

    def inverse(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        for y in range(1, self.q):
            if self.mul[x][y] == 1:
                return y
        raise ArithmeticError(f"no inverse for {x}: modulus not irreducible")


@lru_cache(maxsize=None)
def galois_field(q: int) -> GF:
    return GF(field_spec(q))
