"""Groebner bases, normal forms, syzygies, and ideal predicates over F_p.

Buchberger's algorithm with Gebauer-Moeller pair elimination and normal
(minimal lcm degree) selection.  Syzygy generators come from the classical
two-matrix construction: S-pair syzygies of the Groebner basis, pulled back
through the change-of-basis matrices between the input list and the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .poly import Exponent, Polynomial, grevlex_key, lex_key, multiply


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"  # "grevlex" or "lex"
    permutation: tuple[int, ...] | None = None  # applied to exponent vectors first

    def key(self, e: Exponent):
        if self.permutation is not None:
            e = tuple(e[i] for i in self.permutation)
        if self.kind == "grevlex":
            return grevlex_key(e)
        if self.kind == "lex":
            return lex_key(e)
        raise ValueError(f"unknown monomial order {self.kind!r}")


GREVLEX = MonomialOrder("grevlex")


def leading_term(f: Polynomial, order: MonomialOrder = GREVLEX) -> tuple[Exponent, int]:
    if f.is_zero():
        raise ValueError("zero polynomial has no leading term")
    e = max(f.terms, key=order.key)
    return e, f.terms[e]


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))

def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))

def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))

def _coprime(a: Exponent, b: Exponent) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _monic(f: Polynomial, order: MonomialOrder) -> Polynomial:
    _, c = leading_term(f, order)
    if c == 1:
        return f
    return f.scale(pow(c, -1, f.modulus))


def reduce(
    f: Polynomial, basis: list[Polynomial], order: MonomialOrder = GREVLEX
) -> Polynomial:
    """Normal form of f modulo basis (full reduction of every term)."""
    return reduce_with_quotients(f, basis, order)[0]


def reduce_with_quotients(
    f: Polynomial, basis: list[Polynomial], order: MonomialOrder = GREVLEX
) -> tuple[Polynomial, list[Polynomial]]:
    """Division algorithm: returns (r, q) with f = sum q_i basis_i + r and no
    term of r divisible by any basis leading monomial."""
    m = f.modulus
    lts = [leading_term(g, order) for g in basis]
    quot: list[dict[Exponent, int]] = [{} for _ in basis]
    rem: dict[Exponent, int] = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=order.key)
        c = work.pop(e)
        for i, (le, lc) in enumerate(lts):
            if _divides(le, e):
                factor = c * pow(lc, -1, m) % m
                shift = _sub(e, le)
                quot[i][shift] = (quot[i].get(shift, 0) + factor) % m
                for eg, cg in basis[i].terms.items():
                    if eg == le:
                        continue
                    key = tuple(a + b for a, b in zip(eg, shift))
                    v = (work.get(key, 0) - factor * cg) % m
                    if v:
                        work[key] = v
                    elif key in work:
                        del work[key]
                break
        else:
            rem[e] = c
    r = Polynomial(f.nvars, m, rem, _trusted=True)
    qs = [Polynomial(f.nvars, m, q) for q in quot]
    return r, qs


def _spoly(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S-polynomial of monic f, g."""
    ef, _ = leading_term(f, order)
    eg, _ = leading_term(g, order)
    gamma = _lcm(ef, eg)
    return f.mul_monomial(_sub(gamma, ef)) - g.mul_monomial(_sub(gamma, eg))


def _update_pairs(
    pairs: set[tuple[int, int]], basis_lts: list[Exponent], t: int
) -> set[tuple[int, int]]:
    """Gebauer-Moeller update on adding element t to the basis."""
    lt_t = basis_lts[t]
    new_pairs = []
    for i in range(t):
        new_pairs.append((i, t))
    # Drop old pairs whose lcm is strictly divisible by lt_t.
    kept = set()
    for (i, j) in pairs:
        lcm_ij = _lcm(basis_lts[i], basis_lts[j])
        if (
            _divides(lt_t, lcm_ij)
            and lcm_ij != _lcm(basis_lts[i], lt_t)
            and lcm_ij != _lcm(basis_lts[j], lt_t)
        ):
            continue
        kept.add((i, j))
    # Among the new pairs, drop those with redundant lcm (M and F criteria,
    # in their simple multiple-elimination form), and coprime pairs.
    lcms = {i: _lcm(basis_lts[i], lt_t) for (i, _) in new_pairs}
    for i, _ in new_pairs:
        if _coprime(basis_lts[i], lt_t):
            continue
        redundant = False
        for k, _ in new_pairs:
            if k == i:
                continue
            if lcms[k] != lcms[i] and _divides(lcms[k], lcms[i]):
                redundant = True
                break
            if lcms[k] == lcms[i] and k < i:
                redundant = True
                break
        if not redundant:
            kept.add((i, t))
    return kept


def groebner_basis(
    gens: list[Polynomial], order: MonomialOrder = GREVLEX
) -> list[Polynomial]:
    """The reduced Groebner basis of the ideal generated by gens."""
    work = [g for g in gens if not g.is_zero()]
    if not work:
        return []
    basis: list[Polynomial] = []
    lts: list[Exponent] = []
    pairs: set[tuple[int, int]] = set()
    for g in work:
        g = reduce(_monic(g, order), basis, order)
        if g.is_zero():
            continue
        basis.append(_monic(g, order))
        lts.append(leading_term(basis[-1], order)[0])
        pairs = _update_pairs(pairs, lts, len(basis) - 1)
    while pairs:
        i, j = min(
            pairs, key=lambda ij: order.key(_lcm(lts[ij[0]], lts[ij[1]]))
        )
        pairs.discard((i, j))
        s = _spoly(basis[i], basis[j], order)
        r = reduce(s, basis, order)
        if r.is_zero():
            continue
        basis.append(_monic(r, order))
        lts.append(leading_term(basis[-1], order)[0])
        pairs = _update_pairs(pairs, lts, len(basis) - 1)
    return interreduce(basis, order)


def interreduce(basis: list[Polynomial], order: MonomialOrder = GREVLEX) -> list[Polynomial]:
    """Minimal, fully reduced, monic basis with deterministic ordering."""
    # Drop elements whose leading term is divisible by another's.
    lts = [leading_term(g, order)[0] for g in basis]
    keep = []
    for i, e in enumerate(lts):
        if any(
            j != i and _divides(lts[j], e) and (lts[j] != e or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = reduce(g, others, order) if others else g
        if not r.is_zero():
            reduced.append(_monic(r, order))
    reduced.sort(key=lambda g: order.key(leading_term(g, order)[0]))
    return reduced


@dataclass
class Ideal:
    """A finitely generated ideal of F_p[x_1..x_n] with a cached reduced
    Groebner basis."""

    gens: list[Polynomial]
    order: MonomialOrder = field(default_factory=lambda: GREVLEX)
    _gb: list[Polynomial] | None = field(default=None, repr=False)

    def groebner(self) -> list[Polynomial]:
        if self._gb is None:
            self._gb = groebner_basis(self.gens, self.order)
        return self._gb

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        gb = self.groebner()
        if not gb:
            return False
        return reduce(f, gb, self.order).is_zero()


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    """True iff the ideals coincide (reduced GBs are unique per order)."""
    return I.groebner() == J.groebner()


def zero_dimensional(I: Ideal) -> bool:
    """True iff A/I is a finite-dimensional vector space: every variable has
    a pure power among the GB leading terms."""
    gb = I.groebner()
    if not gb:
        return False
    if len(gb) == 1 and gb[0].total_degree() == 0:
        return True  # unit ideal
    nvars = gb[0].nvars
    lts = [leading_term(g, I.order)[0] for g in gb]
    for v in range(nvars):
        if not any(e[v] > 0 and all(e[w] == 0 for w in range(nvars) if w != v) for e in lts):
            return False
    return True


def contained_in_bracket(f: Polynomial, q: int) -> bool:
    """f in m^[q] = (x_1^q, ..., x_n^q).  The bracket power is a monomial
    ideal, so membership is term-wise."""
    return all(any(x >= q for x in e) for e in f.terms)


def ideal_contained_in_bracket(I: Ideal, q: int) -> bool:
    return all(contained_in_bracket(g, q) for g in I.gens)


# -- syzygies ---------------------------------------------------------------

SyzygyVector = list[Polynomial]


def _syz_apply(sigma: SyzygyVector, h: list[Polynomial]) -> Polynomial:
    acc = Polynomial.zero(h[0].nvars, h[0].modulus)
    for c, g in zip(sigma, h):
        if not c.is_zero() and not g.is_zero():
            acc = acc + multiply(c, g)
    return acc


def syzygy_generators(
    h: list[Polynomial], order: MonomialOrder = GREVLEX
) -> list[SyzygyVector]:
    """A generating set of {(c_1..c_N) : sum c_j h_j = 0}.

    Method: run Buchberger on the nonzero h_j with cofactor tracking, then
    assemble (a) the S-pair syzygies of the resulting basis, pulled back to
    the input, and (b) the rows of I - S*T where T expresses the basis in the
    input and S the input in the basis.  Every returned vector is verified to
    annihilate h exactly.
    """
    if not h:
        return []
    nvars, m = h[0].nvars, h[0].modulus
    zero = Polynomial.zero(nvars, m)
    one = Polynomial.constant(nvars, m, 1)
    N = len(h)
    syzygies: list[SyzygyVector] = []
    # Zero entries contribute unit syzygies.
    nz = [j for j in range(N) if not h[j].is_zero()]
    for j in range(N):
        if h[j].is_zero():
            sigma = [zero] * N
            sigma[j] = one
            syzygies.append(sigma)
    if nz:
        syzygies.extend(_syzygies_of_nonzero([h[j] for j in nz], nz, N, order))
    for sigma in syzygies:
        if not _syz_apply(sigma, h).is_zero():
            raise AssertionError("syzygy check failed: vector does not annihilate input")
    return syzygies


def _syzygies_of_nonzero(
    hs: list[Polynomial], positions: list[int], N: int, order: MonomialOrder
) -> list[SyzygyVector]:
    nvars, m = hs[0].nvars, hs[0].modulus
    zero = Polynomial.zero(nvars, m)

    # Basis elements carry cofactor rows: g = sum cof[j] * hs[j].
    basis: list[Polynomial] = []
    cofs: list[list[Polynomial]] = []
    lts: list[Exponent] = []

    def red_tracked(f: Polynomial, cof: list[Polynomial]) -> tuple[Polynomial, list[Polynomial]]:
        r, qs = reduce_with_quotients(f, basis, order) if basis else (f, [])
        for k, q in enumerate(qs):
            if q.is_zero():
                continue
            for j in range(len(hs)):
                if not cofs[k][j].is_zero():
                    cof[j] = cof[j] - multiply(q, cofs[k][j])
        return r, cof

    def add_elem(g: Polynomial, cof: list[Polynomial]) -> None:
        _, c = leading_term(g, order)
        if c != 1:
            inv = pow(c, -1, m)
            g = g.scale(inv)
            cof = [x.scale(inv) for x in cof]
        basis.append(g)
        cofs.append(cof)
        lts.append(leading_term(g, order)[0])

    for i, f in enumerate(hs):
        cof = [zero] * len(hs)
        cof[i] = Polynomial.constant(nvars, m, 1)
        r, cof = red_tracked(f, cof)
        if not r.is_zero():
            add_elem(r, cof)

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        i, j = min(pairs, key=lambda ij: order.key(_lcm(lts[ij[0]], lts[ij[1]])))
        pairs.discard((i, j))
        s = _spoly(basis[i], basis[j], order)
        if s.is_zero():
            continue
        gamma = _lcm(lts[i], lts[j])
        cof = [
            cofs[i][t].mul_monomial(_sub(gamma, lts[i]))
            - cofs[j][t].mul_monomial(_sub(gamma, lts[j]))
            for t in range(len(hs))
        ]
        r, cof = red_tracked(s, cof)
        if not r.is_zero():
            t = len(basis)
            add_elem(r, cof)
            pairs |= {(i2, t) for i2 in range(t)}

    out: list[SyzygyVector] = []

    def expand(vec: list[Polynomial]) -> SyzygyVector:
        sigma = [zero] * N
        for t, pos in enumerate(positions):
            sigma[pos] = vec[t]
        return sigma

    # (a) S-pair syzygies of the basis, pulled back via T (the cofactors).
    # All pairs are used: criteria-skipped pairs are not known to be
    # redundant for syzygy generation.
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            gamma = _lcm(lts[i], lts[j])
            s = _spoly(basis[i], basis[j], order)
            r, qs = reduce_with_quotients(s, basis, order)
            if not r.is_zero():
                raise AssertionError("S-polynomial of a Groebner basis did not reduce to zero")
            vec = [
                cofs[i][t].mul_monomial(_sub(gamma, lts[i]))
                - cofs[j][t].mul_monomial(_sub(gamma, lts[j]))
                for t in range(len(hs))
            ]
            for k, q in enumerate(qs):
                if q.is_zero():
                    continue
                for t in range(len(hs)):
                    if not cofs[k][t].is_zero():
                        vec[t] = vec[t] - multiply(q, cofs[k][t])
            if any(not v.is_zero() for v in vec):
                out.append(expand(vec))
    # (b) rows of I - S*T.
    for i, f in enumerate(hs):
        r, qs = reduce_with_quotients(f, basis, order)
        if not r.is_zero():
            raise AssertionError("input element did not reduce to zero modulo its own basis")
        vec = [zero] * len(hs)
        vec[i] = Polynomial.constant(nvars, m, 1)
        for k, q in enumerate(qs):
            if q.is_zero():
                continue
            for t in range(len(hs)):
                if not cofs[k][t].is_zero():
                    vec[t] = vec[t] - multiply(q, cofs[k][t])
        if any(not v.is_zero() for v in vec):
            out.append(expand(vec))
    return out
