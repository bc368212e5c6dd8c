"""The quasi-Fedder machinery: the Witt carry of a polynomial, the dual-basis
trace u, the twisted trace theta, the ideal recursion, non-quasi-F-purity
certificates, and the height computation.

The recursion I_{m+1} = theta(I_m ∩ ker u) + (f^(p-1)) is realized through
syzygies of the u-images of the module generators x^alpha * g_i.  Since a
monomial multiple x^alpha * g has a nonzero u-image only when the exponent
residues line up mod p, the alpha loop collapses to a bucketing of terms by
residue class; the worked-trace path below keeps the literal enumeration for
cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .field import delta_coefficient, multinomial_mod
from .groebner import (
    GREVLEX,
    Ideal,
    MonomialOrder,
    groebner_basis,
    ideal_contained_in_bracket,
    ideal_equal,
    syzygy_generators,
)
from .poly import Exponent, Polynomial, multiply, pow_mod_bracket, power, truncate_bracket


class QfpError(ValueError):
    pass


# -- the Witt carry ---------------------------------------------------------


def delta1(a: Polynomial) -> Polynomial:
    """Witt carry of a (canonical monomial decomposition), by the Z/p^2 lift:
    ((sum of lifted terms)^p - sum of lifted term p-th powers) / p, mod p."""
    p = a.modulus
    m2 = p * p
    lifted = Polynomial(a.nvars, m2, dict(a.terms))
    total = power(lifted, p)
    for e, c in a.terms.items():
        total = total - Polynomial(
            a.nvars, m2, {tuple(x * p for x in e): pow(c, p, m2)}, _trusted=True
        )
    out: dict[Exponent, int] = {}
    for e, c in total.terms.items():
        if c % p:
            raise AssertionError("Witt carry numerator not divisible by p")
        v = (c // p) % p
        if v:
            out[e] = v
    return Polynomial(a.nvars, p, out, _trusted=True)


def delta1_multinomial(a: Polynomial) -> Polynomial:
    """Witt carry by direct evaluation of the carry-coefficient sum over all
    compositions of p across the terms of a.  Combinatorial: small inputs
    only; serves as an independent oracle for `delta1`."""
    p = a.modulus
    terms = list(a.terms.items())
    m = len(terms)
    out = Polynomial.zero(a.nvars, p)
    for alpha in _compositions(p, m, p - 1):
        if sum(1 for x in alpha if x > 0) < 2:
            continue
        coeff = delta_coefficient(list(alpha), p).value
        exp = tuple(
            sum(k * e[i] for k, (e, _) in zip(alpha, terms)) for i in range(a.nvars)
        )
        c = coeff
        for k, (_, cv) in zip(alpha, terms):
            c = c * pow(cv, k, p) % p
        out = out + Polynomial(a.nvars, p, {exp: c})
    return out


def _compositions(total: int, parts: int, cap: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap) + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


# -- the trace maps ---------------------------------------------------------


def u_map(b: Polynomial) -> Polynomial:
    """The dual-basis trace on F_*A: keep terms whose exponents are congruent
    to (p-1, ..., p-1) mod p and strip a factor p from the exponents."""
    p = b.modulus
    out: dict[Exponent, int] = {}
    for e, c in b.terms.items():
        if all(x % p == p - 1 for x in e):
            out[tuple(x // p for x in e)] = c
    return Polynomial(b.nvars, p, out, _trusted=True)


@dataclass
class Delta1Context:
    """Precomputed data for the recursion: f, g = f^(p-1), and the Witt carry
    of g."""

    f: Polynomial
    g: Polynomial = field(init=False)
    delta: Polynomial = field(init=False)

    def __post_init__(self):
        p = self.f.modulus
        self.g = power(self.f, p - 1)
        self.delta = delta1(self.g)

    @property
    def p(self) -> int:
        return self.f.modulus


def theta(ctx: Delta1Context, a: Polynomial) -> Polynomial:
    """theta(F_* a) = u(F_* (carry(f^(p-1)) * a))."""
    if ctx.delta.is_zero() or a.is_zero():
        return Polynomial.zero(a.nvars, a.modulus)
    return u_map(multiply(ctx.delta, a))


# -- the ideal recursion ----------------------------------------------------


def _bucket_u_images(h: Polynomial, p: int) -> dict[Exponent, Polynomial]:
    """All nonzero u(x^alpha * h) indexed by alpha in [0, p-1]^n: a term with
    exponent v contributes exactly to alpha = (p-1-v) mod p."""
    n = h.nvars
    buckets: dict[Exponent, dict[Exponent, int]] = {}
    for v, c in h.terms.items():
        alpha = tuple((p - 1 - x) % p for x in v)
        w = tuple((x + a - (p - 1)) // p for x, a in zip(v, alpha))
        buckets.setdefault(alpha, {})[w] = c
    return {a: Polynomial(n, p, t, _trusted=True) for a, t in buckets.items()}


def next_ideal(ctx: Delta1Context, I: Ideal) -> Ideal:
    """One step of the recursion: theta(I ∩ ker u) + (f^(p-1)), with the
    result interreduced (the returned generators are a reduced GB)."""
    p = ctx.p
    gens = [g for g in I.gens if not g.is_zero()]
    new_gens: list[Polynomial] = [ctx.g]

    entries: list[tuple[int, Exponent]] = []  # (generator index, alpha) with h != 0
    hs: list[Polynomial] = []
    theta_images: list[dict[Exponent, Polynomial]] = []
    for i, g in enumerate(gens):
        h_buckets = _bucket_u_images(g, p)
        d = multiply(ctx.delta, g) if not ctx.delta.is_zero() else Polynomial.zero(g.nvars, p)
        t_buckets = _bucket_u_images(d, p)
        theta_images.append(t_buckets)
        for alpha, h in h_buckets.items():
            entries.append((i, alpha))
            hs.append(h)
        # alpha with h = 0: the unit syzygy contributes theta(x^alpha g) directly.
        for alpha, timg in t_buckets.items():
            if alpha not in h_buckets:
                new_gens.append(timg)
    if hs:
        for sigma in syzygy_generators(hs, I.order):
            acc = Polynomial.zero(ctx.f.nvars, p)
            for c, (i, alpha) in zip(sigma, entries):
                timg = theta_images[i].get(alpha)
                if timg is not None and not c.is_zero():
                    acc = acc + multiply(c, timg)
            if not acc.is_zero():
                new_gens.append(acc)
    gb = groebner_basis(new_gens, I.order)
    return Ideal(gb, I.order, gb)


@dataclass
class IterationTrace:
    """Literal-enumeration record of one recursion step for one generator
    list: the ordered alpha grid, the h-vector, the syzygies, and the theta
    images of the syzygy combinations."""

    alphas: list[Exponent]
    h_vector: list[Polynomial]
    syzygies: list[list[Polynomial]]
    theta_images: list[Polynomial]


def next_ideal_literal(ctx: Delta1Context, I: Ideal) -> tuple[Ideal, IterationTrace]:
    """The recursion step exactly as specified, enumerating every alpha in
    [0, p-1]^n (first variable fastest).  Exponential in n; used for
    cross-checks and the worked char-2 trace."""
    p = ctx.p
    n = ctx.f.nvars
    gens = [g for g in I.gens if not g.is_zero()]
    alphas = [tuple(reversed(a)) for a in iproduct(range(p), repeat=n)]
    pairs = [(g, alpha) for g in gens for alpha in alphas]
    hs = [u_map(g.mul_monomial(alpha)) for g, alpha in pairs]
    syz = syzygy_generators(hs, I.order)
    timgs = []
    new_gens = [ctx.g]
    for sigma in syz:
        b = Polynomial.zero(n, p)
        for c, (g, alpha) in zip(sigma, pairs):
            if not c.is_zero():
                cp = power(c, p)
                b = b + multiply(cp, g.mul_monomial(alpha))
        timg = theta(ctx, b)
        timgs.append(timg)
        if not timg.is_zero():
            new_gens.append(timg)
    gb = groebner_basis(new_gens, I.order)
    trace = IterationTrace(alphas, hs, syz, timgs)
    return Ideal(gb, I.order, gb), trace


# -- graded variant ---------------------------------------------------------


def _monomials_of_degree(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def _solve_kernel_mod_p(matrix, p):
    """Basis of the right kernel of an integer matrix mod p (lists of ints)."""
    import numpy as np

    A = np.array(matrix, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and A[i, c] % p:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * cols
        v[fcol] = 1
        for i, c in enumerate(pivots):
            v[c] = (-int(A[i, fcol])) % p
        basis.append(v)
    return basis


def next_ideal_graded(ctx: Delta1Context, I: Ideal, window: int) -> Ideal:
    """Degree-by-degree step for homogeneous input: for each ideal degree up
    to `window`, intersect the degree slice of I with ker u by linear algebra
    and add the theta images of a kernel basis.  Heuristic unless the window
    is certified: ideals beyond the window are silently truncated."""
    p = ctx.p
    n = ctx.f.nvars
    gens = [g for g in I.gens if not g.is_zero()]
    new_gens: list[Polynomial] = [ctx.g]
    degs = sorted({d for g in gens for d in range(g.total_degree(), window + 1)})
    for D in degs:
        # Spanning set of the degree-D slice of I.
        slice_polys = []
        for g in gens:
            dg = g.total_degree()
            if dg <= D:
                for mono in _monomials_of_degree(n, D - dg):
                    slice_polys.append(g.mul_monomial(mono))
        if not slice_polys:
            continue
        monos = sorted({e for q in slice_polys for e in q.terms})
        mono_idx = {e: i for i, e in enumerate(monos)}
        # Column j = coefficient vector of slice_polys[j]; rows = u-image coords.
        u_rows: dict[Exponent, int] = {}
        matrix_rows = []
        cols = len(slice_polys)
        u_images = [u_map(q) for q in slice_polys]
        u_monos = sorted({e for q in u_images for e in q.terms})
        u_idx = {e: i for i, e in enumerate(u_monos)}
        mat = [[0] * cols for _ in range(len(u_monos))]
        for j, q in enumerate(u_images):
            for e, c in q.terms.items():
                mat[u_idx[e]][j] = c
        kernel = (
            _solve_kernel_mod_p(mat, p)
            if u_monos
            else [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
        )
        for v in kernel:
            a = Polynomial.zero(n, p)
            for j, c in enumerate(v):
                if c:
                    a = a + slice_polys[j].scale(c)
            timg = theta(ctx, a)
            if not timg.is_zero():
                new_gens.append(timg)
    gb = groebner_basis(new_gens, I.order)
    return Ideal(gb, I.order, gb)


# -- certificates and the height --------------------------------------------


def not_qfp_certificate(f: Polynomial) -> str | None:
    """'cert-a' if f^(p-2) lies in m^[p]; 'cert-b' if f^(p-1) lies in m^[p]
    and f^((p+1)(p-2)) * carry(f) lies in m^[p^2] (canonical carry
    representative); else None.  Either certificate proves height infinity;
    failure of cert-b with the canonical representative proves nothing."""
    p = f.modulus
    if f.is_zero() or f.constant_term() != 0:
        raise QfpError("f must be a nonzero element of m")
    if pow_mod_bracket(f, p - 2, p).is_zero():
        return "cert-a"
    if not pow_mod_bracket(f, p - 1, p).is_zero():
        return None  # F-pure, hence quasi-F-pure of height 1
    q2 = p * p
    d1 = truncate_bracket(delta1(f), q2)
    prod = truncate_bracket(multiply(pow_mod_bracket(f, (p + 1) * (p - 2), q2), d1), q2)
    if prod.is_zero():
        return "cert-b"
    return None


@dataclass
class HeightResult:
    """Outcome of the height computation: a finite height, a certified
    infinity, or unknown beyond the iteration cutoff."""

    outcome: str  # 'finite' | 'infinite' | 'unknown'
    height: int | None
    certificate: str | None  # 'cert-a' | 'cert-b' | 'stabilized at m'
    cutoff: int
    method: str
    iterations: list[dict] = field(default_factory=list)

    def is_finite(self) -> bool:
        return self.outcome == "finite"


def qfp_height(
    f: Polynomial,
    cutoff: int = 4,
    method: str = "exact",
    order: MonomialOrder = GREVLEX,
    window: int | None = None,
    use_certificates: bool = True,
) -> HeightResult:
    """Iterate I_1 = (f^(p-1)), I_{m+1} = theta(I_m ∩ ker u) + (f^(p-1)) and
    return the first m with I_m not contained in m^[p], a certified infinity
    (certificate or chain stabilization inside m^[p]), or unknown at the
    cutoff."""
    p = f.modulus
    if f.is_zero():
        raise QfpError("f must be nonzero")
    if f.constant_term() != 0:
        raise QfpError("f must lie in m (zero constant term)")
    if method not in ("exact", "graded"):
        raise QfpError(f"unknown method {method!r}")
    if method == "graded" and not f.is_homogeneous():
        raise QfpError("the graded method requires homogeneous f")

    iterations: list[dict] = []
    # Cheap certificate pass before any iteration.
    if use_certificates:
        cert = not_qfp_certificate(f)
        if cert is not None:
            return HeightResult("infinite", None, cert, cutoff, method, iterations)

    ctx = Delta1Context(f)
    if window is None and f.is_homogeneous():
        window = 2 * max(f.total_degree(), 1) * max(p - 1, 1)
    I = Ideal([ctx.g], order)
    for m in range(1, cutoff + 1):
        iterations.append(
            {
                "m": m,
                "generators": len(I.gens),
                "max_degree": max((g.total_degree() for g in I.gens), default=-1),
            }
        )
        if not ideal_contained_in_bracket(I, p):
            return HeightResult("finite", m, None, cutoff, method, iterations)
        if m == cutoff:
            break
        if method == "graded":
            J = next_ideal_graded(ctx, I, window)
        else:
            J = next_ideal(ctx, I)
        if ideal_equal(I, J):
            return HeightResult(
                "infinite", None, f"stabilized at {m}", cutoff, method, iterations
            )
        I = J
    return HeightResult("unknown", None, None, cutoff, method, iterations)
