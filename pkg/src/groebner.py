# src/groebner.py
"""
Ideal computations for J = <f_1, ..., f_m> over Q(i).

Buchberger's algorithm with cofactor tracking, normal forms and the
membership oracle, standard monomials of zero-dimensional quotients,
localization at the origin, Schreyer syzygies, module membership,
intersections and colon ideals.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm, monomial_mul
from sympy.polys.orderings import grevlex, lex

from poly import MultiPoly, Monomial, constant_term, embed, monomials_up_to, poly_ring, restrict

logger = logging.getLogger(__name__)

LOCALIZATION_MAX_ORDER = 24

Vector = Tuple[MultiPoly, ...]

_ORDER_KEYS = {"grevlex": grevlex, "lex": lex}


class NotZeroDimensionalError(ValueError):
    """The quotient by the ideal is infinite-dimensional."""


class IdealError(ValueError):
    """An ideal violates the precondition of an operation."""


@dataclass(frozen=True)
class MonomialOrder:
    """Global monomial order on a fixed number of variables."""
    kind: str
    nvars: int

    def __post_init__(self):
        if self.kind not in _ORDER_KEYS:
            raise ValueError(f"unsupported monomial order {self.kind!r}")

    @property
    def key(self) -> Callable[[Monomial], tuple]:
        return _ORDER_KEYS[self.kind]

    @classmethod
    def grevlex(cls, nvars: int) -> "MonomialOrder":
        return cls("grevlex", nvars)

    @classmethod
    def lex(cls, nvars: int) -> "MonomialOrder":
        return cls("lex", nvars)


@dataclass(frozen=True)
class GroebnerBasis:
    """
    Reduced Groebner basis with cofactors.

    Attributes:
        generators: the original f_j
        basis: reduced, monic, sorted by ascending leading monomial
        cofactors: basis[k] = sum_j cofactors[k][j] * generators[j]
        order: monomial order the basis is reduced for
    """
    generators: Tuple[MultiPoly, ...]
    basis: Tuple[MultiPoly, ...]
    cofactors: Tuple[Vector, ...]
    order: MonomialOrder

    @property
    def nvars(self) -> int:
        return self.order.nvars

    @property
    def ring(self):
        return poly_ring(self.nvars)

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(leading_monomial(g, self.order) for g in self.basis)

    def is_unit_ideal(self) -> bool:
        return self.ring.zero_monom in self.leading_monomials


@dataclass(frozen=True)
class QuotientBasis:
    """Standard monomials of a zero-dimensional quotient."""
    monomials: Tuple[Monomial, ...]

    @property
    def dim(self) -> int:
        return len(self.monomials)


def leading_monomial(p: MultiPoly, order: MonomialOrder) -> Monomial:
    return max(p.itermonoms(), key=order.key)


def leading_term(p: MultiPoly, order: MonomialOrder):
    m = leading_monomial(p, order)
    return m, p[m]


def _check_ring(p: MultiPoly, nvars: int) -> None:
    if p.ring.ngens != nvars:
        raise ValueError(f"polynomial has {p.ring.ngens} variables, ideal has {nvars}")


def _divide(
    p: MultiPoly,
    divisors: Sequence[MultiPoly],
    leads: Sequence[Monomial],
    key: Callable,
) -> Tuple[List[Dict[Monomial, object]], Dict[Monomial, object]]:
    """
    Full multivariate division; always uses the first divisor whose leading
    monomial divides. Divisors must be monic.
    """
    zero = QQ_I.zero
    work = dict(p)
    quotients: List[Dict[Monomial, object]] = [{} for _ in divisors]
    remainder: Dict[Monomial, object] = {}
    while work:
        lm = max(work, key=key)
        lc = work[lm]
        for k, glm in enumerate(leads):
            if monomial_divides(glm, lm):
                shift = monomial_div(lm, glm)
                quotients[k][shift] = lc
                for gm, gc in divisors[k].iterterms():
                    mm = monomial_mul(gm, shift)
                    value = work.get(mm, zero) - gc * lc
                    if value:
                        work[mm] = value
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[lm] = lc
            del work[lm]
    return quotients, remainder


def _combine(R, weights: Sequence[MultiPoly], vectors: Sequence[Sequence[MultiPoly]], width: int) -> List[MultiPoly]:
    out = [R.zero] * width
    for w, vec in zip(weights, vectors):
        if not w:
            continue
        for j in range(width):
            if vec[j]:
                out[j] = out[j] + w * vec[j]
    return out


def _buchberger(
    gens: Sequence[MultiPoly],
    order: MonomialOrder,
    track: bool = True,
) -> Tuple[List[MultiPoly], List[List[MultiPoly]]]:
    """Reduced basis (monic, ascending) and, when tracked, cofactor rows."""
    R = poly_ring(order.nvars)
    key = order.key
    width = len(gens)
    basis: List[MultiPoly] = []
    cofs: List[List[MultiPoly]] = []
    leads: List[Monomial] = []

    def unit(j: int) -> List[MultiPoly]:
        return [R.one if k == j else R.zero for k in range(width)] if track else []

    def add_element(poly: MultiPoly, cof: List[MultiPoly]) -> None:
        lm, lc = leading_term(poly, order)
        inv = QQ_I.one / lc
        basis.append(poly.mul_ground(inv))
        cofs.append([c.mul_ground(inv) for c in cof] if track else [])
        leads.append(lm)

    for j, g in enumerate(gens):
        if g:
            add_element(g, unit(j))

    pending = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    n_reductions = 0
    while pending:
        i, j = min(pending, key=lambda ij: (key(monomial_lcm(leads[ij[0]], leads[ij[1]])), ij))
        pending.discard((i, j))
        lcm = monomial_lcm(leads[i], leads[j])
        if monomial_mul(leads[i], leads[j]) == lcm:
            continue
        if any(
            k != i and k != j
            and monomial_divides(leads[k], lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(basis))
        ):
            continue
        mi, mj = monomial_div(lcm, leads[i]), monomial_div(lcm, leads[j])
        s_poly = basis[i].mul_monom(mi) - basis[j].mul_monom(mj)
        n_reductions += 1
        if not s_poly:
            continue
        quotients, remainder = _divide(s_poly, basis, leads, key)
        if not remainder:
            continue
        cof: List[MultiPoly] = []
        if track:
            cof = [cofs[i][t].mul_monom(mi) - cofs[j][t].mul_monom(mj) for t in range(width)]
            qpolys = [R.from_dict(q) for q in quotients]
            correction = _combine(R, qpolys, cofs, width)
            cof = [c - d for c, d in zip(cof, correction)]
        add_element(R.from_dict(remainder), cof)
        new = len(basis) - 1
        pending.update((k, new) for k in range(new))

    logger.debug("buchberger: %d S-pairs reduced, %d elements before reduction", n_reductions, len(basis))
    return _interreduce(R, basis, cofs, leads, order, track, width)


def _interreduce(R, basis, cofs, leads, order, track, width):
    key = order.key
    keep = []
    for i, lm in enumerate(leads):
        dominated = any(
            j != i and monomial_divides(leads[j], lm) and (leads[j] != lm or j < i)
            for j in range(len(leads))
        )
        if not dominated:
            keep.append(i)
    keep.sort(key=lambda i: key(leads[i]))
    basis = [basis[i] for i in keep]
    cofs = [cofs[i] for i in keep]
    leads = [leads[i] for i in keep]
    for i in range(len(basis)):
        lm = leads[i]
        tail = basis[i] - R.term_new(lm, QQ_I.one)
        others = [k for k in range(len(basis)) if k != i]
        quotients, remainder = _divide(tail, [basis[k] for k in others], [leads[k] for k in others], key)
        basis[i] = R.from_dict(remainder) + R.term_new(lm, QQ_I.one)
        if track:
            qpolys = [R.from_dict(q) for q in quotients]
            correction = _combine(R, qpolys, [cofs[k] for k in others], width)
            cofs[i] = [c - d for c, d in zip(cofs[i], correction)]
    return basis, cofs


def buchberger(gens: Sequence[MultiPoly], order: Optional[MonomialOrder] = None) -> GroebnerBasis:
    """
    Reduced Groebner basis of <gens> with cofactors.

    Args:
        gens: nonempty sequence of polynomials in a common ring
        order: monomial order (grevlex by default)

    Returns:
        GroebnerBasis whose basis elements are explicit combinations of gens
    """
    gens = tuple(gens)
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    nvars = gens[0].ring.ngens
    for g in gens:
        _check_ring(g, nvars)
    order = order or MonomialOrder.grevlex(nvars)
    if order.nvars != nvars:
        raise ValueError(f"order is for {order.nvars} variables, generators have {nvars}")
    basis, cofs = _buchberger(gens, order, track=True)
    return GroebnerBasis(
        generators=gens,
        basis=tuple(basis),
        cofactors=tuple(tuple(row) for row in cofs),
        order=order,
    )


def s_polynomial(p: MultiPoly, q: MultiPoly, order: MonomialOrder) -> MultiPoly:
    lm_p, lc_p = leading_term(p, order)
    lm_q, lc_q = leading_term(q, order)
    lcm = monomial_lcm(lm_p, lm_q)
    return (p.mul_term((monomial_div(lcm, lm_p), QQ_I.one / lc_p))
            - q.mul_term((monomial_div(lcm, lm_q), QQ_I.one / lc_q)))


def reduce_with_quotients(p: MultiPoly, gb: GroebnerBasis) -> Tuple[List[MultiPoly], MultiPoly]:
    """Division by the basis: p = sum q_k * basis[k] + r."""
    _check_ring(p, gb.nvars)
    R = gb.ring
    quotients, remainder = _divide(p, gb.basis, gb.leading_monomials, gb.order.key)
    return [R.from_dict(q) for q in quotients], R.from_dict(remainder)


def normal_form(p: MultiPoly, gb: GroebnerBasis) -> MultiPoly:
    return reduce_with_quotients(p, gb)[1]


def is_member(p: MultiPoly, gb: GroebnerBasis) -> bool:
    return not normal_form(p, gb)


def extended_member(p: MultiPoly, gb: GroebnerBasis) -> Optional[Vector]:
    """
    Express p in the original generators.

    Returns:
        psi with p = sum psi_j * generators[j], or None if p is not in the ideal.
        A ring mismatch raises ValueError.
    """
    quotients, remainder = reduce_with_quotients(p, gb)
    if remainder:
        return None
    R = gb.ring
    psi = _combine(R, quotients, gb.cofactors, len(gb.generators))
    check = R.zero
    for c, f in zip(psi, gb.generators):
        check += c * f
    if check != p:
        raise RuntimeError("cofactor composition failed to reproduce the input")
    return tuple(psi)


def verify_cofactors(gb: GroebnerBasis) -> bool:
    R = gb.ring
    for g, row in zip(gb.basis, gb.cofactors):
        total = R.zero
        for c, f in zip(row, gb.generators):
            total += c * f
        if total != g:
            return False
    return True


def verify_buchberger_criterion(gb: GroebnerBasis) -> bool:
    """Every S-polynomial of the basis reduces to zero."""
    for p, q in itertools.combinations(gb.basis, 2):
        if normal_form(s_polynomial(p, q, gb.order), gb):
            return False
    return True


def quotient_basis(gb: GroebnerBasis) -> QuotientBasis:
    """
    Standard monomials of C[z]/J.

    Raises:
        NotZeroDimensionalError: some variable has no pure power among the leading monomials
    """
    leads = gb.leading_monomials
    n = gb.nvars
    if gb.is_unit_ideal():
        return QuotientBasis(())
    bounds = []
    for i in range(n):
        powers = [m[i] for m in leads if m[i] > 0 and sum(m) == m[i]]
        if not powers:
            raise NotZeroDimensionalError(
                f"ideal is not zero-dimensional: no power of variable {i + 1} is a leading monomial"
            )
        bounds.append(min(powers))
    standard = [
        m for m in itertools.product(*(range(b) for b in bounds))
        if not any(monomial_divides(lm, m) for lm in leads)
    ]
    return QuotientBasis(tuple(sorted(standard, key=grevlex)))


def is_primary_at_origin(gb: GroebnerBasis) -> bool:
    """True iff V(J) = {0}: every coordinate is nilpotent in the finite quotient."""
    try:
        dim = quotient_basis(gb).dim
    except NotZeroDimensionalError:
        return False
    if dim == 0:
        return False
    R = gb.ring
    return all(is_member(x ** dim, gb) for x in R.gens)


def origin_is_zero(gb: GroebnerBasis) -> bool:
    return all(not constant_term(f) for f in gb.generators) and not gb.is_unit_ideal()


def localize_at_origin(gb: GroebnerBasis, max_order: int = LOCALIZATION_MAX_ORDER) -> GroebnerBasis:
    """
    Polynomial ideal J*O_0 ∩ C[z] of an ideal with an isolated zero at the origin.

    Returns J itself when V(J) = {0}; otherwise J + m^k for the least k with
    J + m^k = J + m^(k+1).

    Raises:
        IdealError: the origin is not a zero of J
        NotZeroDimensionalError: the origin is not an isolated zero (no stabilization up to max_order)
    """
    if not origin_is_zero(gb):
        raise IdealError("the origin is not a zero of the ideal")
    if is_primary_at_origin(gb):
        return gb
    R = gb.ring
    n = gb.nvars

    def with_power(k: int) -> GroebnerBasis:
        extra = [R.term_new(m, QQ_I.one) for m in monomials_up_to(n, k) if sum(m) == k]
        return buchberger(tuple(gb.generators) + tuple(extra), gb.order)

    previous = with_power(1)
    for k in range(1, max_order + 1):
        current = with_power(k + 1)
        if current.basis == previous.basis:
            logger.debug("localization stabilized at m^%d", k)
            return previous
        previous = current
    raise NotZeroDimensionalError(
        f"origin is not an isolated zero (no stabilization of J + m^k up to k = {max_order})"
    )


def local_multiplicity(gb: GroebnerBasis) -> int:
    return quotient_basis(localize_at_origin(gb)).dim


# ---------------------------------------------------------------------------
# Syzygies and modules
# ---------------------------------------------------------------------------

def syzygies(gens: Sequence[MultiPoly]) -> List[Vector]:
    """
    Generators of {v : sum v_j * gens_j = 0} by Schreyer's construction.

    S-pair standard representations of the reduced basis give the syzygies
    of the basis; they are pulled back through the cofactor matrix and
    completed by e_j - (division quotients of f_j) * cofactors.
    """
    gens = tuple(gens)
    if not gens:
        return []
    R = gens[0].ring
    width = len(gens)
    if not any(gens):
        return [tuple(R.one if k == j else R.zero for k in range(width)) for j in range(width)]
    gb = buchberger(gens)
    leads = gb.leading_monomials
    key = gb.order.key
    found: List[Vector] = []

    def push(vec: Sequence[MultiPoly]) -> None:
        vec = tuple(vec)
        if any(vec) and vec not in found:
            found.append(vec)

    for k, l in itertools.combinations(range(len(gb.basis)), 2):
        lcm = monomial_lcm(leads[k], leads[l])
        mk, ml = monomial_div(lcm, leads[k]), monomial_div(lcm, leads[l])
        s_poly = gb.basis[k].mul_monom(mk) - gb.basis[l].mul_monom(ml)
        quotients, remainder = _divide(s_poly, gb.basis, leads, key)
        if remainder:
            raise RuntimeError("S-polynomial of a Groebner basis failed to reduce to zero")
        coeffs = [-R.from_dict(q) for q in quotients]
        coeffs[k] += R.term_new(mk, QQ_I.one)
        coeffs[l] -= R.term_new(ml, QQ_I.one)
        push(_combine(R, coeffs, gb.cofactors, width))

    for j, f in enumerate(gens):
        quotients, _ = reduce_with_quotients(f, gb)
        back = _combine(R, quotients, gb.cofactors, width)
        back[j] = back[j] - R.one
        push(tuple(-c for c in back))
    logger.debug("syzygies: %d generators for %d polynomials", len(found), width)
    return found


def _module_ring_data(vectors: Sequence[Sequence[MultiPoly]], rank: int, R):
    """Encode vectors of R^rank as linear forms in extra variables e_1..e_rank."""
    n = R.ngens
    big = poly_ring(n + rank)
    e = big.gens[n:]
    forms = []
    for vec in vectors:
        form = big.zero
        for i, entry in enumerate(vec):
            if entry:
                form += embed(entry, big) * e[i]
        forms.append(form)
    squares = [e[i] * e[j] for i in range(rank) for j in range(i, rank)]
    return big, forms, squares


def _e_free_part(p: MultiPoly, R) -> MultiPoly:
    n = R.ngens
    return R.from_dict({m[:n]: c for m, c in p.iterterms() if not any(m[n:])})


def module_syzygies(vectors: Sequence[Sequence[MultiPoly]]) -> List[Vector]:
    """Generators of {a : sum_l a_l * vectors[l] = 0} for vectors in R^r."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    rank = len(vectors[0])
    R = next((x.ring for v in vectors for x in v), None)
    if R is None:
        raise ValueError("module_syzygies needs polynomial entries")
    if not any(any(v) for v in vectors):
        width = len(vectors)
        return [tuple(R.one if k == j else R.zero for k in range(width)) for j in range(width)]
    big, forms, squares = _module_ring_data(vectors, rank, R)
    s = len(forms)
    found: List[Vector] = []
    for syz in syzygies(forms + squares):
        vec = tuple(_e_free_part(c, R) for c in syz[:s])
        if any(vec) and vec not in found:
            found.append(vec)
    return found


def in_module(u: Sequence[MultiPoly], vectors: Sequence[Sequence[MultiPoly]]) -> bool:
    """Membership of u in the submodule of R^r generated by vectors."""
    u = tuple(u)
    vectors = [tuple(v) for v in vectors if any(v)]
    if not any(u):
        return True
    if not vectors:
        return False
    R = next(x.ring for x in u if x)
    big, forms, squares = _module_ring_data(vectors + [u], len(u), R)
    target = forms[-1]
    gb = buchberger(forms[:-1] + squares)
    return is_member(target, gb)


def intersect_ideals(first: Sequence[MultiPoly], second: Sequence[MultiPoly]) -> List[MultiPoly]:
    """Generators of I ∩ K by eliminating t from t*I + (1 - t)*K (lex, t first)."""
    first = [p for p in first if p]
    second = [p for p in second if p]
    if not first or not second:
        return []
    R = first[0].ring
    n = R.ngens
    big = poly_ring(n + 1)
    t = big.gens[0]
    gens = [t * embed(p, big, shift=1) for p in first] + [(big.one - t) * embed(p, big, shift=1) for p in second]
    basis, _ = _buchberger(gens, MonomialOrder.lex(n + 1), track=False)
    return [restrict(g, R, shift=1) for g in basis if not any(m[0] for m in g.itermonoms())]


def quotient_by_element(gb: GroebnerBasis, h: MultiPoly) -> GroebnerBasis:
    """(J : h) = (J ∩ <h>) / h."""
    _check_ring(h, gb.nvars)
    R = gb.ring
    if not h or is_member(h, gb):
        return buchberger([R.one], gb.order)
    inter = intersect_ideals(list(gb.basis), [h])
    return buchberger([g.exquo(h) for g in inter], gb.order)


def colon_ideal(gb_g: GroebnerBasis, gb_j: GroebnerBasis) -> GroebnerBasis:
    """
    (g : J) = {h : h*J ⊆ g}, the intersection of (g : f_i) over the generators of J.

    Raises:
        IdealError: some generator of g is not in J
    """
    if gb_g.nvars != gb_j.nvars:
        raise ValueError("colon_ideal needs ideals in the same ring")
    for k, gen in enumerate(gb_g.generators):
        if not is_member(gen, gb_j):
            raise IdealError(f"generator {k + 1} of the inner ideal is not contained in J")
    current: Optional[List[MultiPoly]] = None
    for f in gb_j.generators:
        if not f:
            continue
        part = list(quotient_by_element(gb_g, f).basis)
        current = part if current is None else intersect_ideals(current, part)
    if current is None:
        return buchberger([gb_g.ring.one], gb_g.order)
    return buchberger(current, gb_g.order)


def unit_in_ideal(gens: Sequence[MultiPoly]) -> Optional[MultiPoly]:
    """An element of <gens> with nonzero constant term, or None if <gens> ⊆ m."""
    gens = [g for g in gens if g]
    if not gens:
        return None
    R = gens[0].ring
    gb = buchberger(gens + list(R.gens))
    psi = extended_member(R.one, gb)
    if psi is None:
        return None
    unit = R.zero
    for c, g in zip(psi[:len(gens)], gens):
        unit += c * g
    return unit
