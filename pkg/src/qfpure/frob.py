"""nu_f(p^e), Fedder's criterion, and F-pure threshold bounds/resolution.

The nu search multiplies incrementally in A/m^[q]: membership of f^N in the
bracket power is monotone in N, so the first vanishing power ends the scan.
A dense box array over [0, q-1]^n carries the hot path; a sparse fallback
covers boxes too large to allocate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import Polynomial, multiply_sparse, truncate_bracket

# Largest dense box (number of lattice points in [0,q-1]^n) we allocate.
_DENSE_BOX_LIMIT = 2 * 10**7


class PrecondError(ValueError):
    pass


def _check_in_m(f: Polynomial) -> None:
    if f.is_zero():
        raise PrecondError("f must be nonzero")
    if f.constant_term() != 0:
        raise PrecondError("f must have zero constant term (f in m)")


def _nu_dense_homog(f: Polynomial, q: int) -> int:
    """Homogeneous fast path: f^N lives in a single degree, so the box only
    needs the first n-1 exponents; the last one is implied and terms whose
    implied exponent leaves [0, q) are masked out each step."""
    p = f.modulus
    n = f.nvars
    d = f.total_degree()
    shape = (q,) * (n - 1)
    idx_sum = np.indices(shape, dtype=np.int64).sum(axis=0)
    cur = np.zeros(shape, dtype=np.int64)
    cur[(0,) * (n - 1)] = 1
    terms = [(e, c) for e, c in f.terms.items() if all(x < q for x in e)]
    for N in range(1, q):
        deg = d * N
        nxt = np.zeros(shape, dtype=np.int64)
        for e, c in terms:
            src = cur[tuple(slice(0, q - k) for k in e[:-1])]
            nxt[tuple(slice(k, q) for k in e[:-1])] += c * src
        nxt %= p
        # Zero entries whose implied last exponent is negative or >= q.
        last = deg - idx_sum
        nxt[(last < 0) | (last >= q)] = 0
        if not nxt.any():
            return N - 1
        cur = nxt
    return q - 1


def _nu_dense(f: Polynomial, q: int) -> int:
    """Scan N = 1, 2, ... multiplying by f in the dense box mod p."""
    p = f.modulus
    n = f.nvars
    shape = (q,) * n
    cur = np.zeros(shape, dtype=np.int64)
    cur[(0,) * n] = 1
    terms = [(e, c) for e, c in f.terms.items() if all(x < q for x in e)]
    for N in range(1, q):
        nxt = np.zeros(shape, dtype=np.int64)
        for e, c in terms:
            src = cur[tuple(slice(0, q - k) for k in e)]
            nxt[tuple(slice(k, q) for k in e)] += c * src
        nxt %= p
        if not nxt.any():
            return N - 1
        cur = nxt
    return q - 1


def _nu_sparse(f: Polynomial, q: int) -> int:
    cur = Polynomial.constant(f.nvars, f.modulus, 1)
    base = truncate_bracket(f, q)
    for N in range(1, q):
        cur = truncate_bracket(multiply_sparse(cur, base), q)
        if cur.is_zero():
            return N - 1
    return q - 1


def nu(f: Polynomial, e: int) -> int:
    """The largest N with f^N not in m^[p^e]."""
    _check_in_m(f)
    if e < 1:
        raise PrecondError("e must be >= 1")
    p = f.modulus
    q = p**e
    if len(f.terms) > 4:
        if f.nvars >= 2 and f.is_homogeneous() and q ** (f.nvars - 1) <= _DENSE_BOX_LIMIT:
            return _nu_dense_homog(f, q)
        if q**f.nvars <= _DENSE_BOX_LIMIT:
            return _nu_dense(f, q)
    return _nu_sparse(f, q)


@dataclass
class NuTable:
    """Cached map e -> nu_f(p^e) with the monotonicity invariants checked."""

    f: Polynomial
    values: dict[int, int] = field(default_factory=dict)

    def get(self, e: int) -> int:
        if e not in self.values:
            self.values[e] = nu(self.f, e)
            self._check()
        return self.values[e]

    def _check(self) -> None:
        p = self.f.modulus
        for e, v in self.values.items():
            if not 0 <= v <= p**e - 1:
                raise AssertionError(f"nu(p^{e}) = {v} out of range")
            if e + 1 in self.values and self.values[e + 1] < p * v:
                raise AssertionError("nu(p^(e+1)) < p * nu(p^e)")


def fedder_f_pure(f: Polynomial) -> bool:
    """Fedder's criterion for a hypersurface: f^(p-1) not in m^[p]."""
    _check_in_m(f)
    return nu(f, 1) == f.modulus - 1


@dataclass
class FptReport:
    """Threshold data: certified bounds, the exact value when resolved, and
    the hypothesis flags governing resolution."""

    lower: Fraction
    upper: Fraction
    exact: Fraction | None
    method: str
    homogeneous: bool
    p_large_enough: bool  # p > n - 2
    p_odd: bool
    f_pure: bool
    nu_values: dict[int, int]

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError("fpt bounds crossed")
        if self.exact is not None and not (self.lower <= self.exact <= self.upper):
            raise AssertionError("exact fpt outside the certified bounds")


def _flags(f: Polynomial) -> tuple[bool, bool, bool]:
    p = f.modulus
    return (f.is_homogeneous(), p > f.nvars - 2, p % 2 == 1)


def fpt_bounds(f: Polynomial, e_max: int, table: NuTable | None = None) -> FptReport:
    """Nested interval [max nu_e/p^e, min (nu_e+1)/p^e] over e <= e_max."""
    _check_in_m(f)
    p = f.modulus
    table = table or NuTable(f)
    lower = Fraction(0)
    upper = Fraction(1)
    for e in range(1, e_max + 1):
        v = table.get(e)
        lo = Fraction(v, p**e)
        hi = Fraction(v + 1, p**e)
        lower = max(lower, lo)
        upper = min(upper, hi)
        if lower > upper:  # pragma: no cover - would contradict monotonicity
            raise AssertionError("fpt intervals failed to nest")
    hom, plarge, podd = _flags(f)
    return FptReport(
        lower, upper, None, "bounds", hom, plarge, podd,
        table.get(1) == p - 1, dict(table.values),
    )


def fpt_resolve(f: Polynomial) -> FptReport:
    """Exact fpt for standard-graded homogeneous f with p odd and p > n-2:
    either f is F-pure (fpt = 1) or fpt = 1 - h/p with h = p - 1 - nu_f(p),
    confirmed by the denominator-p exactness check nu_f(p^2) = p^2 - hp - 1.

    Outside the hypotheses, or if the check fails, bounds are returned with
    method "unresolved"; that is a value, not an error.
    """
    _check_in_m(f)
    p = f.modulus
    table = NuTable(f)
    hom, plarge, podd = _flags(f)
    v1 = table.get(1)
    if v1 == p - 1:
        rep = fpt_bounds(f, 1, table)
        return FptReport(
            rep.lower, Fraction(1), Fraction(1), "f-pure", hom, plarge, podd, True,
            dict(table.values),
        )
    if not (hom and plarge and podd):
        rep = fpt_bounds(f, 2, table)
        return FptReport(
            rep.lower, rep.upper, None, "unresolved: hypotheses not met",
            hom, plarge, podd, False, dict(table.values),
        )
    h = p - 1 - v1
    v2 = table.get(2)
    if v2 == p * p - h * p - 1:
        rep = fpt_bounds(f, 2, table)
        return FptReport(
            rep.lower, rep.upper, Fraction(p - h, p), f"form 1 - {h}/{p}",
            hom, plarge, podd, False, dict(table.values),
        )
    rep = fpt_bounds(f, 2, table)
    return FptReport(
        rep.lower, rep.upper, None, "unresolved: denominator check failed",
        hom, plarge, podd, False, dict(table.values),
    )
