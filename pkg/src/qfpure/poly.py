"""Multivariate polynomials over Z/p and Z/p^2.

The core representation is a sparse term map {exponent tuple: coefficient},
with a dense homogeneous "slab" (a numpy array indexed by all but the last
exponent) backing the multiplication hot path.  Polynomials are treated as
immutable values; every operation returns a fresh instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Exponent = tuple[int, ...]

# Above this estimated schoolbook cost the homogeneous dense kernel wins.
_DENSE_CUTOFF = 4096


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    """Malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Polynomial:
    """A polynomial in `nvars` variables with coefficients mod `modulus`.

    `modulus` is either a prime p or p^2; zero coefficients are never stored.
    """

    __slots__ = ("nvars", "modulus", "terms")

    def __init__(self, nvars: int, modulus: int, terms: dict[Exponent, int], *, _trusted: bool = False):
        self.nvars = nvars
        self.modulus = modulus
        if _trusted:
            self.terms = terms
        else:
            clean: dict[Exponent, int] = {}
            for e, c in terms.items():
                if len(e) != nvars:
                    raise PolyError(f"exponent {e} has arity {len(e)}, expected {nvars}")
                if any(x < 0 for x in e):
                    raise PolyError(f"negative exponent in {e}")
                c %= modulus
                if c:
                    clean[tuple(e)] = c
            self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, modulus: int) -> "Polynomial":
        return cls(nvars, modulus, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars: int, modulus: int, c: int) -> "Polynomial":
        return cls(nvars, modulus, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, modulus: int, index: int) -> "Polynomial":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, modulus, {tuple(e): 1})

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.nvars, self.modulus, self.terms) == (other.nvars, other.modulus, other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, self.modulus, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r} mod {self.modulus})"

    def _check_compat(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise PolyError(f"arity mismatch: {self.nvars} vs {other.nvars}")
        if self.modulus != other.modulus:
            raise PolyError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compat(other)
        m = self.modulus
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % m
            if v:
                out[e] = v
            elif e in out:
                del out[e]
        return Polynomial(self.nvars, m, out, _trusted=True)

    def __neg__(self) -> "Polynomial":
        m = self.modulus
        return Polynomial(self.nvars, m, {e: m - c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: int) -> "Polynomial":
        c %= self.modulus
        if c == 0:
            return Polynomial.zero(self.nvars, self.modulus)
        m = self.modulus
        out = {e: (v * c) % m for e, v in self.terms.items()}
        return Polynomial(self.nvars, m, {e: v for e, v in out.items() if v}, _trusted=True)

    def mul_monomial(self, exp: Exponent, c: int = 1) -> "Polynomial":
        m = self.modulus
        c %= m
        out: dict[Exponent, int] = {}
        for e, v in self.terms.items():
            w = (v * c) % m
            if w:
                out[tuple(a + b for a, b in zip(e, exp))] = w
        return Polynomial(self.nvars, m, out, _trusted=True)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return multiply(self, other)

    def derivative(self, index: int) -> "Polynomial":
        m = self.modulus
        out: dict[Exponent, int] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k == 0:
                continue
            v = (c * k) % m
            if v:
                d = list(e)
                d[index] = k - 1
                out[tuple(d)] = v
        return Polynomial(self.nvars, m, out, _trusted=True)

    # -- dense homogeneous slab ---------------------------------------------

    def to_dense(self) -> np.ndarray:
        """Dense slab of a homogeneous polynomial: an int64 array of shape
        (D+1,)*(nvars-1) indexed by the first nvars-1 exponents (the last
        exponent is determined by the degree)."""
        if not self.is_homogeneous():
            raise PolyError("dense slab requires a homogeneous polynomial")
        D = max(self.total_degree(), 0)
        arr = np.zeros((D + 1,) * (self.nvars - 1), dtype=np.int64)
        for e, c in self.terms.items():
            arr[e[:-1]] = c
        return arr

    @classmethod
    def from_dense(cls, arr: np.ndarray, degree: int, modulus: int) -> "Polynomial":
        nvars = arr.ndim + 1
        terms: dict[Exponent, int] = {}
        for idx in zip(*np.nonzero(arr)):
            head = tuple(int(i) for i in idx)
            last = degree - sum(head)
            if last < 0:
                raise PolyError("dense slab entry above the stated degree")
            terms[head + (last,)] = int(arr[idx]) % modulus
        return cls(nvars, modulus, terms)

    # -- printing -----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        """Terms in descending graded reverse lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def to_str(self, variables: list[str] | None = None) -> str:
        if variables is None:
            variables = default_variables(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(variables, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


def grevlex_key(e: Exponent):
    """Sort key realizing graded reverse lexicographic order (larger key = larger monomial)."""
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Exponent):
    return tuple(e)


def default_variables(nvars: int) -> list[str]:
    if nvars <= 4:
        return ["x", "y", "z", "w"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


# -- multiplication ---------------------------------------------------------


def multiply_sparse(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check_compat(g)
    m = f.modulus
    out: dict[Exponent, int] = {}
    if len(f.terms) < len(g.terms):
        f, g = g, f
    for eg, cg in g.terms.items():
        for ef, cf in f.terms.items():
            key = tuple(a + b for a, b in zip(ef, eg))
            out[key] = out.get(key, 0) + cf * cg
    clean = {}
    for e, c in out.items():
        c %= m
        if c:
            clean[e] = c
    return Polynomial(f.nvars, m, clean, _trusted=True)


def multiply_dense(f: Polynomial, g: Polynomial) -> Polynomial:
    """Homogeneous product via the dense slab: shift-accumulate the dense
    array of one factor by each term of the other."""
    f._check_compat(g)
    if f.is_zero() or g.is_zero():
        return Polynomial.zero(f.nvars, f.modulus)
    if not (f.is_homogeneous() and g.is_homogeneous()):
        raise PolyError("dense kernel requires homogeneous factors")
    if f.nvars < 2:
        return multiply_sparse(f, g)
    if len(f.terms) > len(g.terms):
        f, g = g, f
    df, dg = f.total_degree(), g.total_degree()
    D = df + dg
    G = g.to_dense()
    out = np.zeros((D + 1,) * (f.nvars - 1), dtype=np.int64)
    for e, c in f.terms.items():
        sl = tuple(slice(k, k + dg + 1) for k in e[:-1])
        out[sl] += c * G
    out %= f.modulus
    return Polynomial.from_dense(out, D, f.modulus)


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check_compat(g)
    if (
        f.nvars >= 2
        and len(f.terms) * len(g.terms) > _DENSE_CUTOFF
        and f.is_homogeneous()
        and g.is_homogeneous()
    ):
        return multiply_dense(f, g)
    return multiply_sparse(f, g)


# -- powering ---------------------------------------------------------------


def frobenius_power(f: Polynomial, e: int, p: int) -> Polynomial:
    """f^(p^e) over F_p: scale every exponent by p^e (coefficients are fixed
    by Frobenius over the prime field)."""
    if f.modulus != p:
        raise PolyError("frobenius_power requires coefficients mod p")
    if e < 0:
        raise PolyError("negative Frobenius power")
    if e == 0:
        return f
    q = p**e
    return Polynomial(
        f.nvars, p, {tuple(x * q for x in ex): c for ex, c in f.terms.items()}, _trusted=True
    )


def _binary_power(f: Polynomial, n: int) -> Polynomial:
    result = Polynomial.constant(f.nvars, f.modulus, 1)
    base = f
    while n:
        if n & 1:
            result = multiply(result, base)
        n >>= 1
        if n:
            base = multiply(base, base)
    return result


def power(f: Polynomial, N: int, p: int | None = None) -> Polynomial:
    """f^N.  Over F_p (prime modulus) the exponent is split in base p so that
    the p^i factors go through the exact Frobenius fast path."""
    if N < 0:
        raise PolyError("negative power")
    if N == 0:
        return Polynomial.constant(f.nvars, f.modulus, 1)
    if p is None and _is_prime_modulus(f.modulus):
        p = f.modulus
    if p is None or f.modulus != p:
        return _binary_power(f, N)
    result = Polynomial.constant(f.nvars, p, 1)
    i = 0
    while N:
        digit = N % p
        if digit:
            result = multiply(result, _binary_power(frobenius_power(f, i, p), digit))
        N //= p
        i += 1
    return result


def _is_prime_modulus(m: int) -> bool:
    from .field import _is_prime

    return _is_prime(m)


def truncate_bracket(f: Polynomial, q: int) -> Polynomial:
    """Discard every term with some exponent >= q (reduction in A/m^[q])."""
    out = {e: c for e, c in f.terms.items() if all(x < q for x in e)}
    return Polynomial(f.nvars, f.modulus, out, _trusted=True)


def pow_mod_bracket(f: Polynomial, N: int, q: int) -> Polynomial:
    """f^N reduced in A/m^[q] (q a power of the characteristic).  Truncating
    after every multiplication is sound because m^[q] is an ideal; the result
    is zero iff f^N lies in m^[q]."""
    result = Polynomial.constant(f.nvars, f.modulus, 1)
    base = truncate_bracket(f, q)
    n = N
    while n:
        if n & 1:
            result = truncate_bracket(multiply(result, base), q)
        n >>= 1
        if n:
            base = truncate_bracket(multiply(base, base), q)
    return result


# -- grading ----------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    """Positive integer weights making a polynomial weighted-homogeneous."""

    weights: tuple[int, ...]
    degree: int


def find_grading(f: Polynomial) -> Grading | None:
    """Positive integer weights w with <w, e> constant over the exponent
    vectors of f, minimal (cleared denominators divided by gcd), or None.

    Solved as a rational linear system on the differences of exponent
    vectors; when the solution space is a ray the positive check is exact.
    """
    if f.is_zero():
        raise PolyError("find_grading requires a nonzero polynomial")
    n = f.nvars
    exps = list(f.terms)
    base = exps[0]
    rows = [[Fraction(a - b) for a, b in zip(e, base)] for e in exps[1:]]
    # Row-reduce over Q.
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][col] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None  # only the zero solution
    # Pivot weights are linear in the free weights; search small positive
    # integer assignments of the free weights (the generic case is a ray,
    # where (1,...,1) on the single free variable suffices).
    from itertools import product as iproduct

    for bound in (1, 2, 4, 8):
        for assign in iproduct(range(1, bound + 1), repeat=len(free)):
            if bound > 1 and max(assign) < bound:
                continue  # already tried under a smaller bound
            w = [Fraction(0)] * n
            for c, v in zip(free, assign):
                w[c] = Fraction(v)
            ok = True
            for i, col in enumerate(pivots):
                val = -sum(rows[i][c] * w[c] for c in free)
                if val <= 0:
                    ok = False
                    break
                w[col] = val
            if ok:
                lcm = 1
                for x in w:
                    lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
                ints = [int(x * lcm) for x in w]
                g = 0
                for x in ints:
                    g = math.gcd(g, x)
                ints = [x // g for x in ints]
                deg = sum(a * b for a, b in zip(ints, base))
                return Grading(tuple(ints), deg)
    return None


# -- parsing ----------------------------------------------------------------


def parse_poly(text: str, p: int, variables: list[str]) -> Polynomial:
    """Parse the input grammar: sums/differences of terms, where a term is an
    optional decimal coefficient followed by variable factors with optional
    '^' powers; '*' and juxtaposition both mean multiplication."""
    n = len(variables)
    # Each declared name also matches its underscore variant (x1 <-> x_1).
    tokens: dict[str, int] = {}
    for i, name in enumerate(variables):
        tokens[name] = i
        if "_" in name:
            tokens.setdefault(name.replace("_", ""), i)
        else:
            head = name.rstrip("0123456789")
            if head and head != name:
                tokens.setdefault(f"{head}_{name[len(head):]}", i)
    varset = sorted(tokens, key=len, reverse=True)  # longest-match first
    modulus = p
    pos = 0
    length = len(text)

    def skip_ws():
        nonlocal pos
        while pos < length and text[pos].isspace():
            pos += 1

    def parse_nat() -> int:
        nonlocal pos
        start = pos
        while pos < length and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParseError("expected a number", start)
        return int(text[start:pos])

    def try_var() -> int | None:
        nonlocal pos
        for name in varset:
            if text.startswith(name, pos):
                pos += len(name)
                return tokens[name]
        return None

    def parse_term() -> Polynomial:
        nonlocal pos
        skip_ws()
        start = pos
        coeff = 1
        has_coeff = False
        if pos < length and text[pos].isdigit():
            coeff = parse_nat()
            has_coeff = True
            skip_ws()
            if pos < length and text[pos] == "*":
                pos += 1
                skip_ws()
        exps = [0] * n
        has_factor = False
        while True:
            skip_ws()
            idx = try_var()
            if idx is None:
                if pos < length and (text[pos].isalpha() or text[pos] == "_"):
                    raise ParseError("unknown variable", pos)
                break
            has_factor = True
            k = 1
            skip_ws()
            if pos < length and text[pos] == "^":
                pos += 1
                skip_ws()
                k = parse_nat()
            exps[idx] += k
            skip_ws()
            if pos < length and text[pos] == "*":
                pos += 1
        if not has_coeff and not has_factor:
            raise ParseError("expected a term", start)
        return Polynomial(n, modulus, {tuple(exps): coeff})

    skip_ws()
    if pos >= length:
        raise ParseError("empty input", pos)
    negate = False
    if text[pos] == "-":
        negate = True
        pos += 1
    result = parse_term()
    if negate:
        result = -result
    while True:
        skip_ws()
        if pos >= length:
            break
        op = text[pos]
        if op not in "+-":
            raise ParseError(f"unexpected character {op!r}", pos)
        pos += 1
        term = parse_term()
        result = result + term if op == "+" else result - term
    return result
