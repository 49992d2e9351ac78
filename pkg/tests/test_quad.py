# tests/test_quad.py
import numpy as np
import pytest

from poly import parse_poly, to_complex
from quad import (
    CIRCLE_TOL,
    DEFAULT_RADIUS,
    LOCAL_RADIUS,
    SPHERE_TOL,
    NumericForm,
    ParametrizedCycle,
    SingularCycleError,
    bm_calibration,
    bm_integrand,
    nearest_other_zero,
    integrate_form,
    sphere_bm_residue,
    sphere_radius,
    tolerance_for,
    torus_residue,
    worker_threads,
)
from residue import transform_residue

TWO_PI_I = 2j * np.pi


def test_cauchy_on_unit_circle():
    cycle = ParametrizedCycle.torus((1.0,))
    simple = NumericForm(nvars=1, components=(((0,), (), lambda c: 1.0 / (TWO_PI_I * c[0])),))
    double = NumericForm(nvars=1, components=(((0,), (), lambda c: 1.0 / (TWO_PI_I * c[0] ** 2)),))
    assert abs(integrate_form(simple, cycle) - 1.0) < 1e-12
    assert abs(integrate_form(double, cycle)) < 1e-12


def test_constant_log_form_on_torus():
    cycle = ParametrizedCycle.torus((0.5, 0.3), grid=(16, 16))
    form = NumericForm(nvars=2, components=(((0, 1), (), lambda c: 3.0 / (c[0] * c[1])),))
    assert abs(integrate_form(form, cycle) - 3.0 * TWO_PI_I ** 2) < 1e-10


def test_orientation_flips_sign():
    form = NumericForm(nvars=1, components=(((0,), (), lambda c: 1.0 / c[0]),))
    forward = ParametrizedCycle("torus", 1, (1.0,), (32,))
    backward = ParametrizedCycle("torus", 1, (1.0,), (32,), orientation=-1)
    assert integrate_form(form, backward) == -integrate_form(form, forward)


@pytest.mark.parametrize("powers,h,expected", [
    ((2, 2), "z*w", 1.0),
    ((2, 3), "z*w^2", 1.0),
    ((2, 2), "z^2 + w", 0.0),
    ((3, 1), "(2+i)*z^2 - w", 2 + 1j),
])
def test_torus_residue(P, powers, h, expected):
    assert abs(torus_residue(powers, P(h)) - expected) < 1e-10


@pytest.mark.parametrize("powers,h", [
    ((2, 2), "z*w"),
    ((1, 4), "w^3 + z*w^2"),
    ((3, 3), "z^2*w^2 - 4*z*w"),
    ((4, 5), "z^3*w^4"),
])
def test_torus_residue_is_radius_independent(P, powers, h):
    a = torus_residue(powers, P(h), radii=(0.5, 0.5))
    b = torus_residue(powers, P(h), radii=(0.3, 0.8))
    assert abs(a - b) < 1e-9


def test_torus_grid_refinement(P):
    coarse = torus_residue((2, 2), P("z*w + z^3"), grid=(32, 32))
    fine = torus_residue((2, 2), P("z*w + z^3"), grid=(64, 64))
    assert abs(coarse - fine) < 1e-8


def test_torus_residue_checks_variables(P):
    with pytest.raises(ValueError):
        torus_residue((2,), P("z*w"))


def test_circle_sphere_residues():
    z = parse_poly("z", 1)
    assert abs(sphere_bm_residue((z,), z.ring.one) - 1.0) < CIRCLE_TOL
    assert abs(sphere_bm_residue((z ** 2,), z) - 1.0) < CIRCLE_TOL
    assert abs(sphere_bm_residue((z ** 2,), z.ring.one)) < CIRCLE_TOL
    assert abs(sphere_bm_residue((z ** 3 - 2 * z ** 4,), z ** 2, radius=0.3) - 1.0) < 1e-8


def test_calibration_magnitude():
    for n in (1, 2):
        cal = bm_calibration(n)
        assert abs(abs(cal.raw) / abs(cal.expected) - 1.0) < 1e-6
        assert cal.orientation_sign in (1, -1)
        assert cal.kappa == 1.0 / (cal.orientation_sign * cal.expected)
        assert abs(cal.raw * cal.kappa - 1.0) < 1e-6


@pytest.mark.slow
def test_sphere_residue_of_squares(ideal, P):
    value = sphere_bm_residue(ideal("z^2, w^2"), P("z*w"))
    assert abs(value - 1.0) < SPHERE_TOL


@pytest.mark.slow
def test_sphere_residue_is_radius_independent(ideal, P):
    f = ideal("z^2, w^2")
    inner = sphere_bm_residue(f, P("z*w"), radius=0.7)
    outer = sphere_bm_residue(f, P("z*w"), radius=1.0)
    assert abs(inner - outer) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("h", ["1", "z", "w", "z*w", "w^2 + 2*z"])
def test_sphere_residue_matches_transformation_law(ideal, P, h):
    f = ideal("z - w, w^2")
    exact = to_complex(transform_residue(f, P(h)))
    assert abs(sphere_bm_residue(f, P(h)) - exact) / max(1.0, abs(exact)) < SPHERE_TOL


def test_singular_cycle_is_reported():
    z = parse_poly("z", 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        with pytest.raises(SingularCycleError):
            sphere_bm_residue((z - 1,), z.ring.one, radius=1.0)


def test_bm_integrand_needs_square_system(ideal, P):
    with pytest.raises(ValueError):
        bm_integrand(ideal("z^2, z*w, w^2"), P("1"))


@pytest.mark.parametrize("kwargs", [
    dict(kind="torus", nvars=1, radii=(1.0,), grid=(4,)),
    dict(kind="torus", nvars=1, radii=(-1.0,), grid=(16,)),
    dict(kind="torus", nvars=2, radii=(1.0, 1.0), grid=(16,)),
    dict(kind="sphere", nvars=3, radii=(1.0,), grid=(16, 16, 16, 16, 16)),
    dict(kind="disk", nvars=1, radii=(1.0,), grid=(16,)),
    dict(kind="torus", nvars=1, radii=(1.0,), grid=(16,), orientation=2),
])
def test_cycle_validation(kwargs):
    with pytest.raises(ValueError):
        ParametrizedCycle(**kwargs)


def test_degree_mismatch_is_rejected():
    form = NumericForm(nvars=2, components=(((0,), (), lambda c: c[0]),))
    with pytest.raises(ValueError):
        integrate_form(form, ParametrizedCycle.torus((1.0, 1.0), grid=(8, 8)))


def test_thread_count_does_not_change_the_sum(P):
    args = ((2, 2), P("z*w + 3*z^2*w - w"))
    single = torus_residue(*args, grid=(128, 128), threads=1)
    pooled = torus_residue(*args, grid=(128, 128), threads=4)
    assert single == pooled


def test_worker_threads_from_environment(monkeypatch):
    monkeypatch.setenv("RESIDUE_THREADS", "3")
    assert worker_threads() == 3
    monkeypatch.setenv("RESIDUE_THREADS", "0")
    assert worker_threads() == 1
    monkeypatch.setenv("RESIDUE_THREADS", "many")
    assert worker_threads() == 1
    monkeypatch.delenv("RESIDUE_THREADS")
    assert worker_threads() == 1


def test_tolerances():
    assert tolerance_for(1) == CIRCLE_TOL
    assert tolerance_for(2) == SPHERE_TOL


def test_sphere_radius_avoids_other_zeros(ideal):
    assert nearest_other_zero(ideal("z^2, w^2")) == float("inf")
    assert sphere_radius(ideal("z^2, w^2")) == DEFAULT_RADIUS
    cusp = ideal("z^2 - w^3, w^2 - z^3")
    assert nearest_other_zero(cusp) == pytest.approx(1.0, abs=1e-6)
    assert sphere_radius(cusp) == pytest.approx(0.5, abs=1e-6)


def test_sphere_radius_one_variable():
    z = parse_poly("z", 1)
    assert sphere_radius((z ** 3 - 2 * z ** 4,)) == pytest.approx(0.25, abs=1e-9)


def test_sphere_radius_without_finite_variety(ideal):
    assert sphere_radius(ideal("z*w, z*w")) == LOCAL_RADIUS


@pytest.mark.slow
@pytest.mark.parametrize("h", ["1", "z*w", "z^2"])
def test_sphere_residue_on_cusp_pair(ideal, P, h):
    f = ideal("z^2 - w^3, w^2 - z^3")
    exact = to_complex(transform_residue(f, P(h)))
    assert abs(sphere_bm_residue(f, P(h)) - exact) / max(1.0, abs(exact)) < SPHERE_TOL
