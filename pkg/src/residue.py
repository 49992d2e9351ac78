# src/residue.py
"""
Exact Grothendieck residues at the origin and the duality harness.

The residue of a complete intersection f is reduced to a monomial one by the
transformation law: if s_i * z_i^{m_i} = sum_j A[i][j] f_j with s_i(0) != 0,
then Res_f(h) is the coefficient of z^{m-1} in h * det(A) / prod(s_i).
Non-complete intersections are handled through the colon ideal (g : J) of
the monomial complete intersection g = (z_i^{m_i}) inside J.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from groebner import (
    GroebnerBasis,
    QuotientBasis,
    buchberger,
    colon_ideal,
    extended_member,
    is_member,
    is_primary_at_origin,
    localize_at_origin,
    quotient_basis,
    quotient_by_element,
    unit_in_ideal,
)
from poly import (
    GaussianRational,
    MultiPoly,
    Monomial,
    coefficient,
    constant_term,
    monomials_up_to,
    partial_derivative,
    truncate,
)

logger = logging.getLogger(__name__)


class DominatingPowerError(RuntimeError):
    """No power z_i^m with m <= D lies in the local ideal."""


@dataclass(frozen=True)
class DominatingPowers:
    """
    units[i] * z_i^m[i] = sum_j A[i][j] * generators[j], units[i](0) != 0.

    For an ideal with V(J) = {0} every unit is 1.
    """
    m: Tuple[int, ...]
    A: Tuple[Tuple[MultiPoly, ...], ...]
    units: Tuple[MultiPoly, ...]
    generators: Tuple[MultiPoly, ...]

    @property
    def nvars(self) -> int:
        return len(self.m)

    def powers(self) -> Tuple[MultiPoly, ...]:
        R = self.generators[0].ring
        return tuple(R.gens[i] ** e for i, e in enumerate(self.m))

    def identity_holds(self) -> bool:
        for i, (s, z_pow) in enumerate(zip(self.units, self.powers())):
            total = sum((a * f for a, f in zip(self.A[i], self.generators)), z_pow.ring.zero)
            if total != s * z_pow:
                return False
        return True

    def raised(self, i: int) -> "DominatingPowers":
        """Same data for z_i^(m_i + 1) = z_i * z_i^m_i."""
        z = self.generators[0].ring.gens[i]
        m = tuple(e + 1 if k == i else e for k, e in enumerate(self.m))
        A = tuple(tuple(z * a for a in row) if k == i else row for k, row in enumerate(self.A))
        return DominatingPowers(m=m, A=A, units=self.units, generators=self.generators)


@dataclass(frozen=True)
class ResidueFunctional:
    """
    Res on the local quotient, tabulated on monomials.

    kernel is the truncated series K with Res(h) = coefficient of z^(m-1) in h*K;
    pairing[alpha] = Res(z^alpha) for |alpha| < bound.
    """
    ideal: GroebnerBasis
    local: GroebnerBasis
    ci: Tuple[MultiPoly, ...]
    m: Tuple[int, ...]
    kernel: MultiPoly
    bound: int
    pairing: Dict[Monomial, GaussianRational] = field(compare=False)
    standard: QuotientBasis = field(compare=False)
    is_ci: bool = True

    def value(self, h: MultiPoly) -> GaussianRational:
        return _residue_from_kernel(self.m, self.kernel, h)


def monomial_residue(powers: Sequence[int], h: MultiPoly) -> GaussianRational:
    """Res of h dz / (z_1^m_1 ... z_n^m_n): the coefficient of z^(m-1) in h."""
    if any(e < 1 for e in powers):
        raise ValueError(f"powers must be positive, got {tuple(powers)}")
    return coefficient(h, tuple(e - 1 for e in powers))


def _residue_from_kernel(m: Sequence[int], kernel: MultiPoly, h: MultiPoly) -> GaussianRational:
    top = tuple(e - 1 for e in m)
    total = QQ_I.zero
    for beta, c in h.iterterms():
        shift = tuple(t - b for t, b in zip(top, beta))
        if min(shift) < 0:
            continue
        k = kernel.get(shift)
        if k:
            total += c * k
    return total


def truncated_inverse(s: MultiPoly, degree: int) -> MultiPoly:
    """1/s as a power series truncated past total degree `degree` (s(0) != 0)."""
    c0 = constant_term(s)
    if not c0:
        raise ValueError("truncated_inverse needs a nonzero constant term")
    R = s.ring
    u = R.one - s.mul_ground(QQ_I.one / c0)
    term = R.one
    total = R.one
    for _ in range(degree):
        term = truncate(term * u, degree)
        if not term:
            break
        total += term
    return total.mul_ground(QQ_I.one / c0)


def determinant(rows: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square matrix of polynomials, by fraction-free elimination."""
    n = len(rows)
    R = rows[0][0].ring
    return DomainMatrix([list(row) for row in rows], (n, n), R.to_domain()).det()


def is_complete_intersection(gb: GroebnerBasis) -> bool:
    return sum(1 for f in gb.generators if f) == gb.nvars


def find_dominating_powers(gb: GroebnerBasis) -> DominatingPowers:
    """
    Smallest m_i with z_i^m_i in the local ideal, with explicit cofactors.

    Raises:
        IdealError / NotZeroDimensionalError: from localization
        DominatingPowerError: no power <= D is a member
    """
    local = localize_at_origin(gb)
    primary = is_primary_at_origin(gb)
    dim = quotient_basis(local).dim
    R = gb.ring
    m, rows, units = [], [], []
    for i, z in enumerate(R.gens):
        exponent = next((e for e in range(1, dim + 1) if is_member(z ** e, local)), None)
        if exponent is None:
            raise DominatingPowerError(f"no power z{i + 1}^m with m <= {dim} lies in the local ideal")
        power = z ** exponent
        if primary:
            unit = R.one
        else:
            unit = unit_in_ideal(list(quotient_by_element(gb, power).basis))
            if unit is None:
                raise DominatingPowerError(f"z{i + 1}^{exponent} has no unit multiple in the ideal")
        row = extended_member(unit * power, gb)
        if row is None:
            raise DominatingPowerError(f"cofactors for z{i + 1}^{exponent} not found")
        m.append(exponent)
        rows.append(row)
        units.append(unit)
    powers = DominatingPowers(m=tuple(m), A=tuple(rows), units=tuple(units), generators=tuple(gb.generators))
    logger.debug("dominating powers %s (local dimension %d)", powers.m, dim)
    return powers


def residue_kernel(powers: DominatingPowers) -> MultiPoly:
    """det(A) / prod(units), truncated at the degree of z^(m-1)."""
    if len(powers.generators) != powers.nvars:
        raise ValueError("the residue kernel needs a square cofactor matrix (complete intersection)")
    degree = sum(e - 1 for e in powers.m)
    kernel = truncate(determinant(powers.A), degree)
    for s in powers.units:
        if s != s.ring.one:
            kernel = truncate(kernel * truncated_inverse(s, degree), degree)
    return kernel


def transform_residue(
    f: Sequence[MultiPoly],
    h: MultiPoly,
    powers: Optional[DominatingPowers] = None,
) -> GaussianRational:
    """
    Res_f(h dz) for n polynomials with an isolated common zero at the origin.

    Args:
        f: the complete intersection f_1..f_n
        h: numerator
        powers: optional precomputed dominating powers (any valid choice)
    """
    f = tuple(f)
    nvars = h.ring.ngens
    if len(f) != nvars:
        raise ValueError(f"transform_residue needs {nvars} generators, got {len(f)}")
    if powers is None:
        powers = find_dominating_powers(buchberger(f))
    return _residue_from_kernel(powers.m, residue_kernel(powers), h)


def jacobian_residue(f: Sequence[MultiPoly]) -> GaussianRational:
    """Res_f(det(df_i/dz_j) dz), which equals the local multiplicity."""
    f = tuple(f)
    jac = [[partial_derivative(fi, j) for j in range(len(f))] for fi in f]
    return transform_residue(f, determinant(jac))


def _tabulate(m, kernel, nvars, bound) -> Dict[Monomial, GaussianRational]:
    R_one = kernel.ring.one
    table = {}
    for alpha in monomials_up_to(nvars, bound - 1):
        table[alpha] = _residue_from_kernel(m, kernel, R_one.mul_monom(alpha))
    return table


def residue_pairing(gb: GroebnerBasis) -> ResidueFunctional:
    """
    Tabulate Res(z^alpha) for |alpha| < 2D, D the local multiplicity.

    Complete intersections use their own generators; other ideals use the
    monomial complete intersection of their dominating powers.
    """
    local = localize_at_origin(gb)
    standard = quotient_basis(local)
    bound = 2 * standard.dim
    powers = find_dominating_powers(gb)
    R = gb.ring
    ci_case = is_complete_intersection(gb)
    if ci_case:
        kernel = residue_kernel(powers)
        ci = tuple(f for f in gb.generators if f)
    else:
        kernel = R.one
        ci = powers.powers()
    return ResidueFunctional(
        ideal=gb,
        local=local,
        ci=ci,
        m=powers.m,
        kernel=kernel,
        bound=bound,
        pairing=_tabulate(powers.m, kernel, gb.nvars, bound),
        standard=standard,
        is_ci=ci_case,
    )


def module_action(rf: ResidueFunctional, phi: MultiPoly) -> ResidueFunctional:
    """The functional xi -> Res(phi * xi)."""
    degree = sum(e - 1 for e in rf.m)
    kernel = truncate(rf.kernel * phi, degree)
    return ResidueFunctional(
        ideal=rf.ideal,
        local=rf.local,
        ci=rf.ci,
        m=rf.m,
        kernel=kernel,
        bound=rf.bound,
        pairing=_tabulate(rf.m, kernel, rf.ideal.nvars, rf.bound),
        standard=rf.standard,
        is_ci=rf.is_ci,
    )


def pairing_matrix(rf: ResidueFunctional) -> Tuple[List[List[GaussianRational]], int]:
    """Matrix Res(z^(alpha+beta)) over standard monomials and its exact rank."""
    mons = rf.standard.monomials
    rows = [[rf.pairing[tuple(a + b for a, b in zip(alpha, beta))] for beta in mons] for alpha in mons]
    if not rows:
        return rows, 0
    return rows, DomainMatrix([list(r) for r in rows], (len(rows), len(rows)), QQ_I).rank()


def annihilator_test_ci(rf: ResidueFunctional, phi: MultiPoly) -> bool:
    """phi * Res_f = 0, tested on the standard monomials of the local quotient."""
    if not rf.is_ci:
        raise ValueError("annihilator_test_ci needs a complete intersection")
    return all(not rf.value(phi.mul_monom(alpha)) for alpha in rf.standard.monomials)


def duality_membership(gb: GroebnerBasis, phi: MultiPoly, rf: Optional[ResidueFunctional] = None) -> bool:
    """
    Decide phi in J*O_0 through residues only.

    Complete intersections: phi * Res_f = 0. Otherwise, with g the dominating
    powers: Res_g(phi * h * z^beta) = 0 for every generator h of (g : J) and
    every standard monomial z^beta of <g>.
    """
    if is_complete_intersection(gb):
        return annihilator_test_ci(rf or residue_pairing(gb), phi)
    if rf is None:
        rf = residue_pairing(gb)
    g = rf.ci
    colon = colon_ideal(buchberger(g, rf.local.order), rf.local)
    box = list(itertools.product(*(range(e) for e in rf.m)))
    for h in colon.basis:
        product = phi * h
        for beta in box:
            if monomial_residue(rf.m, product.mul_monom(beta)):
                return False
    return True


def local_annihilation_violations(rf: ResidueFunctional) -> List[str]:
    """Pairs (f_j, z^alpha), |alpha| < D, with Res(f_j z^alpha) != 0 (complete intersections)."""
    if not rf.is_ci:
        return []
    bad = []
    for j, f in enumerate(rf.ideal.generators):
        for alpha in monomials_up_to(rf.ideal.nvars, rf.standard.dim - 1):
            if rf.value(f.mul_monom(alpha)):
                bad.append(f"Res(f{j + 1} * z^{alpha}) != 0")
    return bad
