"""Arithmetic mod p and mod p^2, plus the combinatorial coefficients used by
the Witt-carry operator and Frobenius-power expansions.

Moduli are restricted to machine-word primes (the interesting range here is
p <= 13); anything larger is rejected up front rather than half-supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_PRIME = 2**31 - 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Prime:
    """A verified prime characteristic."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")
        if self.p > MAX_PRIME:
            raise ValueError(f"prime {self.p} exceeds supported range (machine-word primes only)")

    def __int__(self) -> int:
        return self.p


@dataclass(frozen=True)
class Residue:
    """An element of Z/m with m = p or p^2, kept reduced."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: "Residue") -> None:
        if self.modulus != other.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue((self.value * other.value) % self.modulus, self.modulus)

    def inverse(self) -> "Residue":
        """Multiplicative inverse; the value must be a unit mod the modulus."""
        g = math.gcd(self.value, self.modulus)
        if g != 1:
            raise ZeroDivisionError(f"{self.value} is not a unit mod {self.modulus}")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)


def _factorial_stripped(n: int, p: int, modulus: int) -> tuple[int, int]:
    """Return (n! with all factors of p removed, reduced mod modulus; v_p(n!)).

    The p-adic valuation is tracked exactly so that quotients of factorials
    can be formed without modular wraparound.
    """
    unit = 1
    val = 0
    for k in range(2, n + 1):
        while k % p == 0:
            k //= p
            val += 1
        unit = (unit * k) % modulus
    return unit, val


def multinomial_mod(N: int, parts: list[int], modulus: int, p: int) -> Residue:
    """N! / prod(parts_i!) reduced mod `modulus` (p or p^2).

    Computed from p-stripped factorials with exact valuation bookkeeping, so
    the division never wraps around even when the modulus is not prime.
    """
    if any(a < 0 for a in parts) or N < 0:
        raise ValueError("multinomial arguments must be nonnegative")
    if sum(parts) != N:
        raise ValueError(f"parts {parts} do not sum to N={N}")
    if modulus not in (p, p * p):
        raise ValueError(f"modulus {modulus} is neither {p} nor {p * p}")
    num_unit, num_val = _factorial_stripped(N, p, modulus)
    den_unit, den_val = 1, 0
    for a in parts:
        u, v = _factorial_stripped(a, p, modulus)
        den_unit = (den_unit * u) % modulus
        den_val += v
    val = num_val - den_val  # >= 0: multinomials are integers
    if val < 0:
        raise AssertionError("negative p-adic valuation in a multinomial")
    result = num_unit * pow(den_unit, -1, modulus) % modulus
    result = result * pow(p, val, modulus) % modulus
    return Residue(result, modulus)


def delta_coefficient(alpha: list[int], p: int) -> Residue:
    """(1/p) * multinomial(p; alpha) mod p, for a composition of p with all
    parts in [0, p-1] and at least two parts nonzero.

    These are exactly the carry coefficients of the degree-one Witt carry;
    the division by p is exact since p | multinomial(p; alpha) here.
    """
    if sum(alpha) != p:
        raise ValueError(f"parts {alpha} do not sum to p={p}")
    if any(a >= p for a in alpha):
        raise ValueError("a part equal to p is excluded (no carry for a pure term)")
    if sum(1 for a in alpha if a > 0) < 2:
        raise ValueError("at least two parts must be nonzero")
    num_unit, num_val = _factorial_stripped(p, p, p)
    den_unit, den_val = 1, 0
    for a in alpha:
        u, v = _factorial_stripped(a, p, p)
        den_unit = (den_unit * u) % p
        den_val += v
    val = num_val - den_val - 1  # the formal division by p
    if val != 0:
        raise AssertionError("carry coefficient valuation is not exactly one")
    return Residue(num_unit * pow(den_unit, -1, p) % p, p)
