# tests/test_residue.py
import pytest

from groebner import buchberger, is_member
from poly import coefficient, gaussian, monomials_up_to, parse_poly, random_poly
from residue import (
    annihilator_test_ci,
    determinant,
    duality_membership,
    find_dominating_powers,
    is_complete_intersection,
    jacobian_residue,
    local_annihilation_violations,
    module_action,
    monomial_residue,
    pairing_matrix,
    residue_kernel,
    residue_pairing,
    transform_residue,
    truncated_inverse,
)


@pytest.mark.parametrize("powers,h,expected", [
    ((1, 1), "1", 1),
    ((2, 2), "z*w", 1),
    ((2, 2), "z^2", 0),
    ((2, 3), "5*z*w^2 + z^2*w", 5),
])
def test_monomial_residue(P, powers, h, expected):
    assert monomial_residue(powers, P(h)) == gaussian(expected)


def test_monomial_residue_rejects_zero_power(P):
    with pytest.raises(ValueError):
        monomial_residue((0, 1), P("1"))


def test_truncated_inverse(P):
    assert truncated_inverse(P("1 - z"), 3) == P("1 + z + z^2 + z^3")
    assert truncated_inverse(P("2"), 5) == P("1/2")
    with pytest.raises(ValueError):
        truncated_inverse(P("z"), 2)


def test_determinant(P):
    assert determinant([[P("z"), P("1")], [P("w"), P("2")]]) == P("2*z - w")


def test_dominating_powers_of_monomial_ideal(ideal, R2):
    dp = find_dominating_powers(buchberger(ideal("z^2, z*w, w^2")))
    assert dp.m == (2, 2)
    one, zero = R2.one, R2.zero
    assert dp.A == ((one, zero, zero), (zero, zero, one))
    assert dp.identity_holds()


def test_dominating_powers_of_linear_pair(ideal, P):
    dp = find_dominating_powers(buchberger(ideal("z - w, w^2")))
    assert dp.m == (2, 2)
    assert dp.A[0] == (P("z + w"), P("1"))
    assert dp.identity_holds()
    assert residue_kernel(dp) == P("z + w")


def test_dominating_powers_one_variable():
    z = parse_poly("z", 1)
    dp = find_dominating_powers(buchberger([z]))
    assert dp.m == (1,)
    assert dp.A == ((z.ring.one,),)


def test_raised_powers_give_the_same_residue(ideal, P):
    f = ideal("z - w, w^2")
    dp = find_dominating_powers(buchberger(f))
    bigger = dp.raised(0).raised(1)
    assert bigger.m == (3, 3)
    assert bigger.identity_holds()
    for h in ("1", "z", "w", "z*w", "z^2 + 3*w"):
        assert transform_residue(f, P(h), bigger) == transform_residue(f, P(h))


def test_transform_residue_identity(R2):
    assert transform_residue(R2.gens, R2.one) == gaussian(1)


@pytest.mark.parametrize("h,expected", [
    ("1", 0),
    ("z", 1),
    ("w", 1),
    ("z*w", 0),
    ("z^2", 0),
])
def test_transform_residue_linear_pair(ideal, P, h, expected):
    assert transform_residue(ideal("z - w, w^2"), P(h)) == gaussian(expected)


def test_transform_residue_requires_square_system(ideal, P):
    with pytest.raises(ValueError):
        transform_residue(ideal("z^2, z*w, w^2"), P("1"))


def test_monomial_complete_intersection(ideal, P):
    assert transform_residue(ideal("z^2, w^2"), P("z*w")) == gaussian(1)


def test_cusp_residues(ideal, P):
    f = ideal("z^2 - w^3, w^2 - z^3")
    dp = find_dominating_powers(buchberger(f))
    assert dp.m == (2, 2)
    assert dp.identity_holds()
    assert transform_residue(f, P("1"), dp) == gaussian(1)
    assert transform_residue(f, P("z*w"), dp) == gaussian(1)
    assert transform_residue(f, P("z"), dp) == gaussian(0)


@pytest.mark.parametrize("gens,multiplicity", [
    ("z - w, w^2", 2),
    ("z^2, w^2", 4),
    ("z^2, w^3", 6),
    ("z^2 - w^3, w^2 - z^3", 4),
])
def test_jacobian_residue_is_local_multiplicity(ideal, gens, multiplicity):
    assert jacobian_residue(ideal(gens)) == gaussian(multiplicity)


def test_pairing_of_monomial_complete_intersection(ideal):
    rf = residue_pairing(buchberger(ideal("z^2, w^2")))
    assert rf.is_ci
    assert rf.bound == 8
    for alpha, value in rf.pairing.items():
        assert value == gaussian(1 if alpha == (1, 1) else 0)


def test_pairing_of_maximal_ideal(R3):
    rf = residue_pairing(buchberger(list(R3.gens)))
    assert rf.pairing[(0, 0, 0)] == gaussian(1)
    assert all(not v for a, v in rf.pairing.items() if a != (0, 0, 0))


def test_pairing_of_linear_pair(ideal):
    rf = residue_pairing(buchberger(ideal("z - w, w^2")))
    assert rf.pairing[(0, 0)] == gaussian(0)
    assert rf.pairing[(1, 0)] == gaussian(1)
    assert rf.pairing[(0, 1)] == gaussian(1)
    assert rf.pairing[(1, 1)] == gaussian(0)


def test_pairing_of_non_complete_intersection(ideal):
    gb = buchberger(ideal("z^2, z*w, w^2"))
    rf = residue_pairing(gb)
    assert not is_complete_intersection(gb)
    assert not rf.is_ci
    assert rf.m == (2, 2)
    assert rf.ci == tuple(ideal("z^2, w^2"))


def test_pairing_matrix_is_nondegenerate(ideal):
    for gens, dim in (("z^2, w^2", 4), ("z - w, w^2", 2), ("z^2 - w^3, w^2 - z^3", 4)):
        rows, rank = pairing_matrix(residue_pairing(buchberger(ideal(gens))))
        assert len(rows) == dim
        assert rank == dim


def test_module_action(ideal, P):
    rf = residue_pairing(buchberger(ideal("z^2, w^2")))
    shifted = module_action(rf, P("z"))
    assert shifted.value(P("w")) == rf.value(P("z*w"))
    assert shifted.pairing[(0, 1)] == gaussian(1)
    assert shifted.pairing[(1, 1)] == gaussian(0)


def test_annihilator_test_ci(ideal, P):
    gb = buchberger(ideal("z^2, w^2"))
    rf = residue_pairing(gb)
    assert annihilator_test_ci(rf, P("z^2"))
    assert is_member(P("z^2"), gb)
    assert not annihilator_test_ci(rf, P("z*w"))
    assert not is_member(P("z*w"), gb)


def test_annihilator_test_needs_complete_intersection(ideal, P):
    rf = residue_pairing(buchberger(ideal("z^2, z*w, w^2")))
    with pytest.raises(ValueError):
        annihilator_test_ci(rf, P("z"))


def test_duality_for_maximal_square(ideal, P):
    gb = buchberger(ideal("z^2, z*w, w^2"))
    assert not duality_membership(gb, P("z"))
    assert duality_membership(gb, P("z^2"))
    assert duality_membership(gb, P("z*w + 7*w^2"))
    assert not duality_membership(gb, P("1 + z^2"))


@pytest.mark.parametrize("gens", [
    "z^2, z*w, w^2",
    "z - w, w^2",
    "z^2, w^3",
    "z^3, z^2*w, w^2",
])
def test_duality_agrees_with_membership_on_monomials(ideal, P, gens):
    gb = buchberger(ideal(gens))
    rf = residue_pairing(gb)
    R = gb.ring
    for alpha in monomials_up_to(2, 4):
        phi = R.one.mul_monom(alpha)
        assert duality_membership(gb, phi, rf) == is_member(phi, rf.local)


def test_duality_on_cusp_uses_local_ideal(ideal, P):
    gb = buchberger(ideal("z^2 - w^3, w^2 - z^3"))
    rf = residue_pairing(gb)
    # z^2 is in the local ideal but not in the global one
    assert duality_membership(gb, P("z^2"), rf)
    assert is_member(P("z^2"), rf.local)
    assert not is_member(P("z^2"), gb)
    assert not duality_membership(gb, P("z*w"), rf)


def test_local_annihilation(ideal):
    for gens in ("z^2, w^2", "z - w, w^2", "z^2 - w^3, w^2 - z^3"):
        rf = residue_pairing(buchberger(ideal(gens)))
        assert local_annihilation_violations(rf) == []
    non_ci = residue_pairing(buchberger(ideal("z^2, z*w, w^2")))
    assert local_annihilation_violations(non_ci) == []


def test_monomial_residue_picks_the_corner_coefficient(rng):
    for _ in range(30):
        powers = tuple(rng.randint(1, 3) for _ in range(2))
        h = random_poly(2, 5, rng)
        corner = tuple(m - 1 for m in powers)
        assert monomial_residue(powers, h) == coefficient(h, corner)


def test_transform_residue_of_monomial_system_on_random_numerators(R2, rng):
    z, w = R2.gens
    for _ in range(10):
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        h = random_poly(2, 5, rng)
        assert transform_residue((z**a, w**b), h) == monomial_residue((a, b), h)


def test_determinant_three_by_three(P):
    rows = [
        [P("z"), P("1"), P("0")],
        [P("0"), P("w"), P("2")],
        [P("1"), P("0"), P("z*w")],
    ]
    assert determinant(rows) == P("z^2*w^2 + 2")
