# src/validation.py
"""
Validation harnesses: duality against ideal membership, resolution checks,
the Koszul-case form identities, and exact-versus-quadrature residues.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from bmform import AntiForm, build_v, cap, dbar, delta_f, nabla, sigma, top_component, vp_constant
from groebner import buchberger, is_member
from poly import (
    GaussianRational,
    MultiPoly,
    constant_term,
    format_gaussian,
    gaussian,
    monomials_up_to,
    random_poly,
    render_poly,
    to_complex,
)
from quad import INNER_RADIUS_RATIO, RADIUS_GAP_TOL, BMCalibration, bm_calibration, sphere_bm_residue, sphere_radius, tolerance_for
from residue import (
    ResidueFunctional,
    duality_membership,
    jacobian_residue,
    local_annihilation_violations,
    residue_pairing,
    transform_residue,
)
from resolution import (
    cohen_macaulay_check,
    free_resolution,
    koszul_ranks,
    pointwise_exactness_check,
    verify_complex,
)

logger = logging.getLogger(__name__)


@dataclass
class DualityValidation:
    """Agreement of residue annihilation with local ideal membership."""
    is_valid: bool
    local_dimension: int
    dominating_powers: Tuple[int, ...]
    monomials_checked: int
    random_checked: int
    members_seen: int
    disagreements: List[str]


@dataclass
class ResolutionValidation:
    """Checks on the minimal free resolution of C[z]/J."""
    is_valid: bool
    ranks: Tuple[int, ...]
    composition_zero: bool
    minimal: bool
    pointwise_exact: bool
    cohen_macaulay: bool
    koszul_agreement: Optional[bool]
    violations: List[str]


@dataclass
class FormValidation:
    """Identities of sigma, v and v_p in the Koszul case."""
    is_valid: bool
    p: int
    delta_sigma_is_one: bool
    dbar_sigma_power_vanishes: bool
    nabla_v_is_one: bool
    top_is_closed: bool
    vp_constant: Optional[GaussianRational]
    violations: List[str]


@dataclass
class QuadratureValidation:
    """Exact residue against the calibrated sphere integral at two radii."""
    is_valid: bool
    exact: GaussianRational
    quadrature: complex
    quadrature_inner: complex
    tolerance: float
    error: float
    radius_gap: float
    calibration: BMCalibration
    violations: List[str] = field(default_factory=list)
    radii: Tuple[float, float] = (0.0, 0.0)


def _banner(title: str) -> None:
    print("=" * 80)
    print(title)
    print("=" * 80)


def _random_member(gens: Sequence[MultiPoly], local_dim: int, rng: random.Random) -> MultiPoly:
    """sum q_j f_j plus an element of m^D, which lies in the local ideal."""
    R = gens[0].ring
    phi = R.zero
    for f in gens:
        phi += random_poly(R.ngens, 2, rng, height=5) * f
    z = R.gens[rng.randrange(R.ngens)]
    return phi + random_poly(R.ngens, 1, rng, height=5) * z ** local_dim


def validate_duality(
    gens: Sequence[MultiPoly],
    degree: int = 4,
    samples: int = 100,
    seed: int = 0,
    verbose: bool = True,
) -> DualityValidation:
    """
    Compare duality_membership with membership in the localized ideal.

    Every monomial of total degree <= degree is checked, then samples random
    polynomials alternating between ideal members and unconstrained ones.
    """
    gens = tuple(gens)
    gb = buchberger(gens)
    rf = residue_pairing(gb)
    R = gb.ring
    disagreements = []
    members = 0

    def check(phi: MultiPoly, label: str) -> None:
        nonlocal members
        oracle = is_member(phi, rf.local)
        verdict = duality_membership(gb, phi, rf)
        members += oracle
        if oracle != verdict:
            disagreements.append(f"{label}: member={oracle} duality={verdict} for {render_poly(phi)}")

    mons = monomials_up_to(R.ngens, degree)
    for alpha in mons:
        check(R.one.mul_monom(alpha), "monomial")

    rng = random.Random(seed)
    D = rf.standard.dim
    for k in range(samples):
        if k % 2 == 0:
            phi = _random_member(gens, D, rng)
        else:
            phi = random_poly(R.ngens, degree, rng, height=5)
        check(phi, f"sample {k}")

    is_valid = not disagreements
    logger.debug("duality: %d monomials, %d samples, %d disagreements", len(mons), samples, len(disagreements))

    if verbose:
        _banner("DUALITY VALIDATION REPORT")
        print(f"\nOVERALL: {'VALID' if is_valid else 'INVALID'}")
        print(f"Ideal: <{', '.join(render_poly(g) for g in gens)}>")
        print(f"Local dimension: {D}")
        print(f"Dominating powers: {rf.m}")
        print(f"Monomials checked (degree <= {degree}): {len(mons)}")
        print(f"Random polynomials checked: {samples}")
        print(f"Members seen: {members}")
        if disagreements:
            print(f"\nDISAGREEMENTS ({len(disagreements)}):")
            for d in disagreements[:5]:
                print(f"  {d}")
            if len(disagreements) > 5:
                print(f"  ... and {len(disagreements) - 5} more")
        print("\n" + "=" * 80)

    return DualityValidation(
        is_valid=is_valid,
        local_dimension=D,
        dominating_powers=rf.m,
        monomials_checked=len(mons),
        random_checked=samples,
        members_seen=members,
        disagreements=disagreements,
    )


def validate_resolution(
    gens: Sequence[MultiPoly],
    points: Optional[Sequence[Sequence]] = None,
    verbose: bool = True,
) -> ResolutionValidation:
    """Resolve C[z]/<gens> and check composition, minimality, exactness and CM."""
    gens = tuple(gens)
    c = free_resolution(gens)
    violations = []

    composition_zero = verify_complex(c)
    if not composition_zero:
        violations.append("some composition f^k f^(k+1) is nonzero")

    minimal = all(not constant_term(entry) for f in c.maps[1:] for row in f for entry in row)
    if not minimal:
        violations.append("a map beyond f^1 has a unit entry")

    pointwise_exact = pointwise_exactness_check(c, points)
    if not pointwise_exact:
        violations.append("evaluated complex is not exact off the zero set")

    cohen_macaulay = cohen_macaulay_check(c)
    koszul_agreement = None
    nonzero = [g for g in gens if g]
    if len(nonzero) == c.nvars:
        koszul_agreement = list(c.ranks) == koszul_ranks(c.nvars)
        if not koszul_agreement:
            violations.append(f"complete intersection resolved with ranks {c.ranks}, expected Koszul ranks")
        if not cohen_macaulay:
            violations.append("complete intersection reported as not Cohen-Macaulay")

    is_valid = not violations

    if verbose:
        _banner("RESOLUTION VALIDATION REPORT")
        print(f"\nOVERALL: {'VALID' if is_valid else 'INVALID'}")
        print(f"Ranks: {list(c.ranks)} (length {c.length}, {c.nvars} variables)")
        print(f"Composition zero: {'OK' if composition_zero else 'FAILED'}")
        print(f"Minimal: {'OK' if minimal else 'FAILED'}")
        print(f"Pointwise exact: {'OK' if pointwise_exact else 'FAILED'}")
        print(f"Cohen-Macaulay: {cohen_macaulay}")
        if koszul_agreement is not None:
            print(f"Koszul ranks: {'OK' if koszul_agreement else 'FAILED'}")
        for v in violations:
            print(f"  {v}")
        print("\n" + "=" * 80)

    return ResolutionValidation(
        is_valid=is_valid,
        ranks=c.ranks,
        composition_zero=composition_zero,
        minimal=minimal,
        pointwise_exact=pointwise_exact,
        cohen_macaulay=cohen_macaulay,
        koszul_agreement=koszul_agreement,
        violations=violations,
    )


def validate_bm_identities(f: Sequence[MultiPoly], verbose: bool = True) -> FormValidation:
    """delta sigma = 1, (dbar sigma)^p = 0, nabla v = 1, dbar v_p = 0, and c(p)."""
    f = tuple(f)
    p = len(f)
    one = AntiForm.scalar(f, f[0].ring.one)
    violations = []

    s = sigma(f)
    delta_sigma_is_one = delta_f(f, s).equals(one)
    if not delta_sigma_is_one:
        violations.append("delta_f(sigma) != 1")

    ds = dbar(s)
    power = ds
    for _ in range(p - 1):
        power = cap(power, ds)
    dbar_sigma_power_vanishes = power.is_zero()
    if not dbar_sigma_power_vanishes:
        violations.append(f"(dbar sigma)^{p} != 0")

    v = build_v(f)
    nabla_v_is_one = nabla(f, v).equals(one)
    if not nabla_v_is_one:
        violations.append("nabla(v) != 1")

    top_is_closed = dbar(top_component(v)).is_zero()
    if not top_is_closed:
        violations.append("dbar(v_p) != 0")

    c = vp_constant(f)
    if c is None:
        violations.append("top component of v is not proportional to the closed form")

    is_valid = not violations

    if verbose:
        _banner("FORM IDENTITY VALIDATION REPORT")
        print(f"\nOVERALL: {'VALID' if is_valid else 'INVALID'}")
        print(f"Generators: ({', '.join(render_poly(g) for g in f)}), p = {p}")
        print(f"delta_f(sigma) = 1: {'OK' if delta_sigma_is_one else 'FAILED'}")
        print(f"(dbar sigma)^p = 0: {'OK' if dbar_sigma_power_vanishes else 'FAILED'}")
        print(f"nabla(v) = 1: {'OK' if nabla_v_is_one else 'FAILED'}")
        print(f"dbar(v_p) = 0: {'OK' if top_is_closed else 'FAILED'}")
        print(f"c(p): {format_gaussian(c) if c is not None else 'n/a'}")
        print("\n" + "=" * 80)

    return FormValidation(
        is_valid=is_valid,
        p=p,
        delta_sigma_is_one=delta_sigma_is_one,
        dbar_sigma_power_vanishes=dbar_sigma_power_vanishes,
        nabla_v_is_one=nabla_v_is_one,
        top_is_closed=top_is_closed,
        vp_constant=c,
        violations=violations,
    )


def validate_quadrature(
    f: Sequence[MultiPoly],
    h: MultiPoly,
    radii: Optional[Tuple[float, float]] = None,
    grid: Optional[Sequence[int]] = None,
    verbose: bool = True,
) -> QuadratureValidation:
    """
    transform_residue against sphere_bm_residue at two radii, by default
    sphere_radius(f) and INNER_RADIUS_RATIO times it.

    Raises:
        ValueError: f is not n generators in n <= 2 variables
    """
    f = tuple(f)
    n = h.ring.ngens
    if len(f) != n or n > 2:
        raise ValueError(f"sphere cross-checks need n = len(f) <= 2, got n = {n}, len(f) = {len(f)}")
    grid = tuple(grid) if grid is not None else None
    if radii is None:
        r = sphere_radius(f)
        radii = (r, INNER_RADIUS_RATIO * r)
    exact = transform_residue(f, h)
    outer = sphere_bm_residue(f, h, radius=radii[0], grid=grid)
    inner = sphere_bm_residue(f, h, radius=radii[1], grid=grid)
    tolerance = tolerance_for(n)
    exact_c = to_complex(exact)
    error = abs(outer - exact_c) / max(1.0, abs(exact_c))
    gap = abs(outer - inner)
    violations = []
    if error >= tolerance:
        violations.append(f"quadrature {outer:.10g} differs from exact {format_gaussian(exact)} by {error:.3e}")
    if gap >= RADIUS_GAP_TOL:
        violations.append(f"radius dependence {gap:.3e} between r = {radii[0]} and r = {radii[1]}")
    calibration = bm_calibration(n, radii[0], grid)
    is_valid = not violations

    if verbose:
        _banner("QUADRATURE VALIDATION REPORT")
        print(f"\nOVERALL: {'VALID' if is_valid else 'INVALID'}")
        print(f"Generators: ({', '.join(render_poly(g) for g in f)}), h = {render_poly(h)}")
        print(f"Exact residue: {format_gaussian(exact)}")
        print(f"Quadrature (r = {radii[0]}): {outer:.12g}")
        print(f"Quadrature (r = {radii[1]}): {inner:.12g}")
        print(f"Relative error: {error:.3e} (tolerance {tolerance:g})")
        print(f"Calibration kappa: {calibration.kappa:.12g} (orientation {calibration.orientation_sign:+d})")
        for v in violations:
            print(f"  {v}")
        print("\n" + "=" * 80)

    return QuadratureValidation(
        is_valid=is_valid,
        exact=exact,
        quadrature=outer,
        quadrature_inner=inner,
        tolerance=tolerance,
        error=error,
        radius_gap=gap,
        calibration=calibration,
        violations=violations,
        radii=tuple(radii),
    )


def validate_local_annihilation(rf: ResidueFunctional, verbose: bool = False) -> List[str]:
    """Res(f_j z^alpha) = 0 for |alpha| < D, plus Res(Jacobian) = local multiplicity."""
    violations = local_annihilation_violations(rf)
    if rf.is_ci:
        f = tuple(g for g in rf.ideal.generators if g)
        jac = jacobian_residue(f)
        if jac != gaussian(rf.standard.dim):
            violations.append(f"Res(Jacobian) = {format_gaussian(jac)}, local multiplicity {rf.standard.dim}")
    if verbose:
        _banner("LOCAL ANNIHILATION REPORT")
        print(f"\nOVERALL: {'VALID' if not violations else 'INVALID'}")
        for v in violations[:5]:
            print(f"  {v}")
        print("\n" + "=" * 80)
    return violations
