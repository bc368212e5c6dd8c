"""Truncated p-typical Witt vectors over polynomial rings.

Arithmetic goes through ghost components computed on exact integer lifts and
is inverted by exact division, so no universal addition/multiplication
polynomials are hardcoded; the exactness of every division is itself a check
of the computation.  Truncation length is capped at 4 (only W_2 is needed by
the quasi-F-purity criterion; W_3/W_4 exist to exercise the identities).
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Exponent, Polynomial

MAX_LENGTH = 4

# Internal exact-integer polynomials: {exponent tuple: int}, no zero values.
ZPoly = dict[Exponent, int]


def _zclean(d: ZPoly) -> ZPoly:
    return {e: c for e, c in d.items() if c}


def _zadd(a: ZPoly, b: ZPoly) -> ZPoly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return _zclean(out)


def _zscale(a: ZPoly, k: int) -> ZPoly:
    return _zclean({e: c * k for e, c in a.items()})


def _zmul(a: ZPoly, b: ZPoly) -> ZPoly:
    out: ZPoly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return _zclean(out)


def _zpow(a: ZPoly, k: int) -> ZPoly:
    result: ZPoly = {(0,) * _zarity(a): 1} if a or k == 0 else {}
    if k == 0:
        return result
    base = dict(a)
    while k:
        if k & 1:
            result = _zmul(result, base)
        k >>= 1
        if k:
            base = _zmul(base, base)
    return result


def _zarity(a: ZPoly) -> int:
    for e in a:
        return len(e)
    return 0


def _zmod(a: ZPoly, p: int) -> ZPoly:
    return _zclean({e: c % p for e, c in a.items()})


def _zdiv_exact(a: ZPoly, k: int) -> ZPoly:
    out: ZPoly = {}
    for e, c in a.items():
        if c % k:
            raise AssertionError(f"non-exact division by {k} in ghost inversion")
        out[e] = c // k
    return out


@dataclass(frozen=True)
class WittVector:
    """A length-n truncated p-typical Witt vector with polynomial components
    given as exact integer lifts (coefficients in [0, p) when canonical)."""

    p: int
    nvars: int
    comps: tuple[ZPoly, ...]

    def __post_init__(self):
        if not 1 <= len(self.comps) <= MAX_LENGTH:
            raise ValueError(f"truncation length must be in [1, {MAX_LENGTH}]")

    @property
    def length(self) -> int:
        return len(self.comps)

    def ghost(self) -> list[ZPoly]:
        """w_i = sum_{j<=i} p^j * comps_j^(p^(i-j)), over exact integers."""
        p = self.p
        out = []
        for i in range(self.length):
            acc: ZPoly = {}
            for j in range(i + 1):
                acc = _zadd(acc, _zscale(_zpow(self.comps[j], p ** (i - j)), p**j))
            out.append(acc)
        return out

    def reduced(self) -> "WittVector":
        """Canonical representative: coefficients reduced to [0, p)."""
        return WittVector(self.p, self.nvars, tuple(_zmod(c, self.p) for c in self.comps))

    def component(self, i: int) -> Polynomial:
        """Component i as a Polynomial mod p."""
        return Polynomial(self.nvars, self.p, dict(self.comps[i]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        return (self.p, self.nvars) == (other.p, other.nvars) and (
            self.reduced().comps == other.reduced().comps
        )

    def __hash__(self) -> int:
        return hash((self.p, self.nvars, tuple(frozenset(c.items()) for c in self.reduced().comps)))


def from_ghost(p: int, nvars: int, ghost: list[ZPoly]) -> WittVector:
    """Invert the ghost map by exact division (valid over torsion-free
    coefficients, which integer lifts guarantee)."""
    comps: list[ZPoly] = []
    for i, w in enumerate(ghost):
        acc = dict(w)
        for j in range(i):
            acc = _zadd(acc, _zscale(_zpow(comps[j], p ** (i - j)), -(p**j)))
        comps.append(_zdiv_exact(acc, p**i))
    return WittVector(p, nvars, tuple(comps))


def _check_compat(a: WittVector, b: WittVector) -> None:
    if (a.p, a.nvars, a.length) != (b.p, b.nvars, b.length):
        raise ValueError("Witt vectors must share prime, arity, and length")


def witt_add(a: WittVector, b: WittVector, *, reduce: bool = True) -> WittVector:
    _check_compat(a, b)
    ga, gb = a.ghost(), b.ghost()
    out = from_ghost(a.p, a.nvars, [_zadd(x, y) for x, y in zip(ga, gb)])
    return out.reduced() if reduce else out


def witt_sub(a: WittVector, b: WittVector, *, reduce: bool = True) -> WittVector:
    _check_compat(a, b)
    ga, gb = a.ghost(), b.ghost()
    out = from_ghost(a.p, a.nvars, [_zadd(x, _zscale(y, -1)) for x, y in zip(ga, gb)])
    return out.reduced() if reduce else out


def witt_mul(a: WittVector, b: WittVector, *, reduce: bool = True) -> WittVector:
    _check_compat(a, b)
    ga, gb = a.ghost(), b.ghost()
    out = from_ghost(a.p, a.nvars, [_zmul(x, y) for x, y in zip(ga, gb)])
    return out.reduced() if reduce else out


def witt_zero(p: int, nvars: int, length: int) -> WittVector:
    return WittVector(p, nvars, tuple({} for _ in range(length)))


def teichmuller(f: Polynomial, length: int) -> WittVector:
    """[f] = (f, 0, ..., 0)."""
    comps = [dict(f.terms)] + [{} for _ in range(length - 1)]
    return WittVector(f.modulus, f.nvars, tuple(comps))


def p_element(p: int, nvars: int, length: int) -> WittVector:
    """The image of p in W_n of a characteristic-p ring: (0, 1, 0, ..., 0)."""
    comps: list[ZPoly] = [{} for _ in range(length)]
    if length >= 2:
        comps[1] = {(0,) * nvars: 1}
    return WittVector(p, nvars, tuple(comps))


def witt_frobenius(a: WittVector) -> WittVector:
    """F(a) = componentwise p-th power (coefficient ring of characteristic p)."""
    p = a.p
    return WittVector(p, a.nvars, tuple(_zmod(_zpow(c, p), p) for c in a.comps))


def verschiebung(a: WittVector) -> WittVector:
    """V(a): shift right and truncate to the same length."""
    comps = ({},) + a.comps[:-1]
    return WittVector(a.p, a.nvars, comps)


def restriction(a: WittVector) -> WittVector:
    """W_{n+1} -> W_n: drop the last component."""
    if a.length < 2:
        raise ValueError("cannot restrict below length 1")
    return WittVector(a.p, a.nvars, a.comps[:-1])


def delta1_witt_oracle(a: Polynomial) -> Polynomial:
    """The Witt carry of a via its defining property in W_2:
    (0, carry(a)) = (a, 0) - sum over terms (a_i M_i, 0)."""
    p = a.modulus
    acc = WittVector(p, a.nvars, (dict(a.terms), {}))
    for e, c in a.terms.items():
        acc = witt_sub(acc, WittVector(p, a.nvars, ({e: c}, {})), reduce=False)
    if acc.comps[0]:
        raise AssertionError("zeroth Witt component of the carry difference must vanish")
    return acc.component(1)
