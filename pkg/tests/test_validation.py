# tests/test_validation.py
import pytest

from conftest import INSTANCES
from groebner import buchberger
from instance import list_instances, load_ideal_instance
from poly import gaussian, parse_poly
from residue import residue_pairing
import validation
from validation import (
    validate_bm_identities,
    validate_duality,
    validate_local_annihilation,
    validate_quadrature,
    validate_resolution,
)


@pytest.mark.parametrize("gens", [
    "z^2, z*w, w^2",
    "z - w, w^2",
    "z^2 - w^3, w^2 - z^3",
])
def test_duality_harness_agrees(ideal, gens):
    result = validate_duality(ideal(gens), degree=4, samples=8, verbose=False)
    assert result.is_valid, result.disagreements
    assert result.monomials_checked == 15
    assert result.random_checked == 8
    assert result.members_seen > 0


def test_duality_harness_reports_dimension(ideal):
    result = validate_duality(ideal("z^2 - w^3, w^2 - z^3"), degree=2, samples=0, verbose=False)
    assert result.local_dimension == 4
    assert result.dominating_powers == (2, 2)


def test_duality_report_is_printed(ideal, capsys):
    validate_duality(ideal("z^2, w^2"), degree=2, samples=2, verbose=True)
    out = capsys.readouterr().out
    assert "DUALITY VALIDATION REPORT" in out
    assert "OVERALL: VALID" in out


def test_resolution_harness(ideal):
    result = validate_resolution(ideal("z^2, z*w, w^2"), verbose=False)
    assert result.is_valid
    assert result.ranks == (1, 3, 2)
    assert result.cohen_macaulay
    assert result.koszul_agreement is None


def test_resolution_harness_on_complete_intersection(ideal):
    result = validate_resolution(ideal("z^2, w^3"), verbose=False)
    assert result.is_valid
    assert result.koszul_agreement is True


def test_form_identities(ideal):
    result = validate_bm_identities(ideal("z^2, w^2"), verbose=False)
    assert result.is_valid, result.violations
    assert result.p == 2
    assert result.vp_constant == gaussian("1/2")


def test_form_identities_one_generator():
    result = validate_bm_identities([parse_poly("z^2", 1)], verbose=False)
    assert result.is_valid
    assert result.vp_constant == gaussian(1)


def test_quadrature_harness_on_circle():
    z = parse_poly("z", 1)
    result = validate_quadrature([z ** 2], z, verbose=False)
    assert result.is_valid, result.violations
    assert result.exact == gaussian(1)
    assert result.error < result.tolerance
    assert result.radius_gap < 1e-8


def test_quadrature_harness_rejects_three_variables(R3):
    with pytest.raises(ValueError):
        validate_quadrature(list(R3.gens), R3.one, verbose=False)


def test_local_annihilation(ideal):
    for gens in ("z^2, w^2", "z^2 - w^3, w^2 - z^3"):
        assert validate_local_annihilation(residue_pairing(buchberger(ideal(gens)))) == []


@pytest.mark.slow
@pytest.mark.parametrize("h", ["1", "z*w"])
def test_quadrature_harness_on_cusp_pair(ideal, P, h):
    result = validate_quadrature(ideal("z^2 - w^3, w^2 - z^3"), P(h), verbose=False)
    assert result.is_valid, result.violations
    assert result.radii == pytest.approx((0.5, 0.35))
    assert result.radius_gap < 1e-6


def test_quadrature_gap_uses_its_own_tolerance(ideal, P, monkeypatch):
    # both radii within the 1e-4 sphere tolerance of the exact value, 1e-5 apart
    def fake_sphere(f, h, radius, grid=None):
        return 1.0 + (1e-5 if radius < 0.9 else 0.0)

    monkeypatch.setattr(validation, "sphere_bm_residue", fake_sphere)
    monkeypatch.setattr(validation, "bm_calibration", lambda n, r, grid=None: None)
    result = validate_quadrature(ideal("z^2, w^2"), P("z*w"), radii=(1.0, 0.7), verbose=False)
    assert result.error < result.tolerance
    assert not result.is_valid
    assert result.violations == [f"radius dependence {result.radius_gap:.3e} between r = 1.0 and r = 0.7"]


def test_quadrature_harness_sees_a_zero_between_the_radii():
    z = parse_poly("z", 1)
    result = validate_quadrature([z ** 2 - parse_poly("5/4", 1) * z ** 3], z, radii=(1.0, 0.5), verbose=False)
    assert not result.is_valid
    assert any("radius dependence" in v for v in result.violations)


@pytest.mark.slow
@pytest.mark.parametrize("path", list_instances(INSTANCES), ids=lambda p: p.stem)
def test_duality_harness_on_corpus(path):
    inst = load_ideal_instance(path)
    result = validate_duality(list(inst.generators), degree=4, samples=100, verbose=False)
    assert result.is_valid, result.disagreements
    assert result.random_checked == 100
