# src/quad.py
"""
Floating-point cross-checks: torus integrals of h/z^m and sphere integrals of
h dz ^ (Bochner-Martinelli type form of f), for n <= 2 on spheres.

Periodic angles use the trapezoid rule (spectral on analytic integrands), the
Hopf latitude uses Gauss-Legendre nodes. Grid points are split into fixed
chunks whose partial sums are added in chunk order, so results do not depend
on the number of worker threads.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_legendre

from bmform import closed_form_vp
from groebner import GroebnerBasis, NotZeroDimensionalError, buchberger, is_primary_at_origin, normal_form, quotient_basis
from poly import MultiPoly, evaluate, poly_ring, to_complex

logger = logging.getLogger(__name__)

DEFAULT_GRID = 64
DEFAULT_ETA_NODES = 48
DEFAULT_RADIUS = 1.0
LOCAL_RADIUS = 0.5
DEFAULT_TORUS_RADIUS = 0.5
INNER_RADIUS_RATIO = 0.7
SPHERE_TOL = 1e-4
CIRCLE_TOL = 1e-10
RADIUS_GAP_TOL = 1e-6
ZERO_COORDINATE_EPS = 0.05
CHUNK_SIZE = 8192

Index = Tuple[int, ...]
Coefficient = Callable[[Tuple[np.ndarray, ...]], np.ndarray]


class SingularCycleError(RuntimeError):
    """The integrand is not finite somewhere on the cycle."""


def worker_threads() -> int:
    """Thread cap from RESIDUE_THREADS (default 1)."""
    raw = os.environ.get("RESIDUE_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring RESIDUE_THREADS=%r (not an integer)", raw)
        return 1
    return max(1, value)


@dataclass(frozen=True)
class ParametrizedCycle:
    """
    Torus {|z_i| = r_i} with one angle per coordinate, or the sphere of radius
    radii[0] (circle for n = 1, Hopf coordinates (eta, alpha, beta) for n = 2).
    grid holds the node count per parameter.
    """
    kind: str
    nvars: int
    radii: Tuple[float, ...]
    grid: Tuple[int, ...]
    orientation: int = 1

    def __post_init__(self):
        if self.kind not in ("torus", "sphere"):
            raise ValueError(f"unknown cycle kind {self.kind!r}")
        if self.kind == "sphere" and self.nvars > 2:
            raise ValueError("sphere quadrature is implemented for n <= 2")
        if any(r <= 0 for r in self.radii):
            raise ValueError(f"radii must be positive, got {self.radii}")
        if len(self.grid) != self.dimension:
            raise ValueError(f"{self.kind} in C^{self.nvars} needs {self.dimension} grid sizes, got {len(self.grid)}")
        if any(g < 8 for g in self.grid):
            raise ValueError(f"grid sizes must be >= 8, got {self.grid}")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @classmethod
    def torus(cls, radii: Sequence[float], grid: Optional[Sequence[int]] = None) -> "ParametrizedCycle":
        radii = tuple(float(r) for r in radii)
        grid = tuple(grid) if grid is not None else (DEFAULT_GRID,) * len(radii)
        return cls("torus", len(radii), radii, grid)

    @classmethod
    def sphere(cls, nvars: int, radius: float = DEFAULT_RADIUS, grid: Optional[Sequence[int]] = None) -> "ParametrizedCycle":
        if grid is None:
            grid = (DEFAULT_GRID,) if nvars == 1 else (DEFAULT_ETA_NODES, DEFAULT_GRID, DEFAULT_GRID)
        return cls("sphere", nvars, (float(radius),), tuple(grid))

    @property
    def dimension(self) -> int:
        return self.nvars if self.kind == "torus" else 2 * self.nvars - 1


@dataclass(frozen=True)
class NumericForm:
    """
    Sum of coeff(z) dz_I ^ dzb_J; coefficients take the tuple of coordinate
    arrays and return complex arrays of the same shape.
    """
    nvars: int
    components: Tuple[Tuple[Index, Index, Coefficient], ...]

    @property
    def degrees(self) -> set:
        return {len(I) + len(J) for I, J, _ in self.components}


def _angles(count: int) -> np.ndarray:
    return np.arange(count) * (2.0 * np.pi / count)


def _sample(cycle: ParametrizedCycle) -> Tuple[List[np.ndarray], np.ndarray, np.ndarray]:
    """Flattened coordinates z_i, derivatives dz_i/dt_a of shape (n, d, points), and weights."""
    n = cycle.nvars
    if cycle.kind == "torus" or n == 1:
        radii = cycle.radii if cycle.kind == "torus" else cycle.radii * n
        mesh = np.meshgrid(*[_angles(g) for g in cycle.grid], indexing="ij")
        z = [r * np.exp(1j * t.ravel()) for r, t in zip(radii, mesh)]
        jac = np.zeros((n, n, z[0].size), dtype=complex)
        for i in range(n):
            jac[i, i] = 1j * z[i]
        weights = np.full(z[0].size, float(np.prod([2.0 * np.pi / g for g in cycle.grid])))
        return z, jac, weights

    r = cycle.radii[0]
    n_eta, n_alpha, n_beta = cycle.grid
    nodes, w = roots_legendre(n_eta)
    eta = (np.pi / 4.0) * (nodes + 1.0)
    w_eta = (np.pi / 4.0) * w
    E, A, B = (m.ravel() for m in np.meshgrid(eta, _angles(n_alpha), _angles(n_beta), indexing="ij"))
    phase_a, phase_b = np.exp(1j * A), np.exp(1j * B)
    z1 = r * np.cos(E) * phase_a
    z2 = r * np.sin(E) * phase_b
    jac = np.zeros((2, 3, E.size), dtype=complex)
    jac[0, 0] = -r * np.sin(E) * phase_a
    jac[0, 1] = 1j * z1
    jac[1, 0] = r * np.cos(E) * phase_b
    jac[1, 2] = 1j * z2
    weights = np.repeat(w_eta, n_alpha * n_beta) * (2.0 * np.pi / n_alpha) * (2.0 * np.pi / n_beta)
    return [z1, z2], jac, weights


def _chunk_sum(form: NumericForm, z: List[np.ndarray], jac: np.ndarray, weights: np.ndarray, sl: slice) -> complex:
    coords = tuple(c[sl] for c in z)
    total = 0j
    for I, J, coeff in form.components:
        rows = [jac[i, :, sl] for i in I] + [np.conj(jac[j, :, sl]) for j in J]
        det = np.linalg.det(np.moveaxis(np.stack(rows, axis=0), -1, 0))
        values = coeff(coords) * det * weights[sl]
        if not np.all(np.isfinite(values)):
            raise SingularCycleError("integrand is not finite on the cycle (cycle meets the zero set?)")
        total += complex(values.sum())
    return total


def integrate_form(form: NumericForm, cycle: ParametrizedCycle, threads: Optional[int] = None) -> complex:
    """
    Integral of form over cycle via the pullback dz_I ^ dzb_J -> det(rows) dt.

    Raises:
        ValueError: form degree differs from the cycle dimension
        SingularCycleError: a sample is not finite
    """
    if form.nvars != cycle.nvars:
        raise ValueError(f"form in {form.nvars} variables on a cycle in C^{cycle.nvars}")
    if form.degrees - {cycle.dimension}:
        raise ValueError(f"form degrees {sorted(form.degrees)} do not match cycle dimension {cycle.dimension}")
    z, jac, weights = _sample(cycle)
    slices = [slice(start, start + CHUNK_SIZE) for start in range(0, weights.size, CHUNK_SIZE)]
    threads = threads or worker_threads()
    if threads == 1:
        partials = [_chunk_sum(form, z, jac, weights, sl) for sl in slices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda sl: _chunk_sum(form, z, jac, weights, sl), slices))
    total = 0j
    for part in partials:
        total += part
    return cycle.orientation * total


def torus_residue(
    powers: Sequence[int],
    h: MultiPoly,
    radii: Optional[Sequence[float]] = None,
    grid: Optional[Sequence[int]] = None,
    threads: Optional[int] = None,
) -> complex:
    """(2 pi i)^-n times the torus integral of h dz / z^m."""
    n = len(powers)
    if h.ring.ngens != n:
        raise ValueError(f"{len(powers)} powers for a polynomial in {h.ring.ngens} variables")
    radii = tuple(radii) if radii is not None else (DEFAULT_TORUS_RADIUS,) * n
    cycle = ParametrizedCycle.torus(radii, grid)

    def coeff(coords):
        denom = np.ones_like(coords[0])
        for c, m in zip(coords, powers):
            denom = denom * c ** m
        return evaluate(h, list(coords)) / denom

    form = NumericForm(nvars=n, components=((tuple(range(n)), (), coeff),))
    return integrate_form(form, cycle, threads) / (2j * np.pi) ** n


def _multiplication_matrix(x: MultiPoly, gb: GroebnerBasis, monomials) -> np.ndarray:
    """Matrix of multiplication by x on C[z]/J in the standard-monomial basis."""
    index = {m: i for i, m in enumerate(monomials)}
    M = np.zeros((len(monomials), len(monomials)), dtype=complex)
    for j, m in enumerate(monomials):
        for mono, c in normal_form(x.mul_monom(m), gb).iterterms():
            M[index[mono], j] = to_complex(c)
    return M


def nearest_other_zero(f: Sequence[MultiPoly]) -> float:
    """
    Lower bound on |a| over the zeros a != 0 of f, inf when V(f) = {0}.

    The eigenvalues of multiplication by z_i are the i-th coordinates of the
    zeros; a zero other than the origin has some coordinate of modulus at
    least the smallest nonzero eigenvalue modulus.

    Raises:
        NotZeroDimensionalError: V(f) is not finite
    """
    gb = buchberger(f)
    if is_primary_at_origin(gb):
        return float("inf")
    monomials = quotient_basis(gb).monomials
    if not monomials:
        return float("inf")
    bound = float("inf")
    for x in gb.ring.gens:
        moduli = np.abs(np.linalg.eigvals(_multiplication_matrix(x, gb, monomials)))
        far = moduli[moduli > ZERO_COORDINATE_EPS]
        if far.size:
            bound = min(bound, float(far.min()))
    return bound


def sphere_radius(f: Sequence[MultiPoly]) -> float:
    """DEFAULT_RADIUS, shrunk to half the distance of the nearest other zero."""
    try:
        distance = nearest_other_zero(f)
    except NotZeroDimensionalError:
        logger.warning("sphere_radius: V(f) is not finite, using r = %g", LOCAL_RADIUS)
        return LOCAL_RADIUS
    radius = min(DEFAULT_RADIUS, distance / 2.0)
    if radius < DEFAULT_RADIUS:
        logger.debug("sphere_radius: other zeros at distance >= %.4g, using r = %.4g", distance, radius)
    return radius


def bm_integrand(f: Sequence[MultiPoly], h: MultiPoly) -> NumericForm:
    """h dz_1^..^dz_n ^ closed_form_vp(f) as a numeric (n, n-1) form."""
    f = tuple(f)
    n = f[0].ring.ngens
    if len(f) != n:
        raise ValueError(f"sphere integrals need n = {n} generators, got {len(f)}")
    vp = closed_form_vp(f)
    everything = tuple(range(n))

    def make(num, power):
        def coeff(coords):
            coords = list(coords)
            norm = sum(np.abs(evaluate(fk, coords)) ** 2 for fk in f)
            full = coords + [np.conj(c) for c in coords]
            return evaluate(h, coords) * evaluate(num, full) / norm ** power
        return coeff

    comps = tuple((everything, I, make(num, vp.power)) for I, _, num in vp.components)
    return NumericForm(nvars=n, components=comps)


@dataclass(frozen=True)
class BMCalibration:
    """
    Raw identity integral and the analytic value n (2 pi i)^n. The orientation
    sign is read off the raw integral; kappa = 1 / (sign * expected).
    """
    nvars: int
    raw: complex
    kappa: complex
    expected: complex
    orientation_sign: int


@lru_cache(maxsize=None)
def bm_calibration(nvars: int, radius: float = DEFAULT_RADIUS, grid: Optional[Tuple[int, ...]] = None) -> BMCalibration:
    """Analytic normalization; f = (z_1..z_n), h = 1 then gives +1 up to quadrature error."""
    R = poly_ring(nvars)
    raw = integrate_form(bm_integrand(R.gens, R.one), ParametrizedCycle.sphere(nvars, radius, grid))
    expected = nvars * (2j * np.pi) ** nvars
    sign = 1 if (raw / expected).real > 0 else -1
    ratio = raw / (sign * expected)
    logger.debug("bm calibration n=%d r=%g: raw/expected = %s (sign %+d)", nvars, radius, ratio, sign)
    if abs(ratio - 1.0) > SPHERE_TOL:
        logger.warning("bm calibration n=%d r=%g: identity integral off by %.3e", nvars, radius, abs(ratio - 1.0))
    return BMCalibration(nvars=nvars, raw=raw, kappa=1.0 / (sign * expected), expected=expected, orientation_sign=sign)


def sphere_bm_residue(
    f: Sequence[MultiPoly],
    h: MultiPoly,
    radius: Optional[float] = None,
    grid: Optional[Sequence[int]] = None,
    threads: Optional[int] = None,
) -> complex:
    """
    Calibrated sphere integral of h dz ^ closed_form_vp(f); equals Res_f(h)
    when the origin is the only zero inside the sphere. radius defaults to
    sphere_radius(f).
    """
    f = tuple(f)
    n = f[0].ring.ngens
    grid = tuple(grid) if grid is not None else None
    radius = sphere_radius(f) if radius is None else radius
    raw = integrate_form(bm_integrand(f, h), ParametrizedCycle.sphere(n, radius, grid), threads)
    return raw * bm_calibration(n, radius, grid).kappa


def tolerance_for(nvars: int) -> float:
    return CIRCLE_TOL if nvars == 1 else SPHERE_TOL
