# tests/test_poly.py
import numpy as np
import pytest

from poly import (
    PolySyntaxError,
    add,
    coefficient,
    evaluate,
    exact_eval,
    format_gaussian,
    gaussian,
    monomials_up_to,
    mul,
    parse_poly,
    partial_derivative,
    poly_ring,
    random_poly,
    render_poly,
)


def test_add_cancels(P):
    assert add(P("z + w"), P("z - w")) == P("2*z")
    assert add(P("z^2"), P("-z^2")) == 0
    assert not add(P("z^2"), P("-z^2"))


def test_add_zero_is_identity(P, R2):
    p = P("3*z*w - i*w^2 + 1/2")
    assert add(p, R2.zero) == p


def test_mul(P):
    assert mul(P("z + w"), P("z - w")) == P("z^2 - w^2")
    assert mul(P("z^2 + z*w"), P("w")) == P("z^2*w + z*w^2")
    assert P("i*i") == P("-1")


def test_variable_count_mismatch(P):
    with pytest.raises(ValueError):
        add(P("z"), parse_poly("z", 1))


@pytest.mark.parametrize("monomial,expected", [
    ((2, 1), gaussian(3)),
    ((0, 1), gaussian(-1)),
    ((5, 5), gaussian(0)),
])
def test_coefficient(P, monomial, expected):
    assert coefficient(P("3*z^2*w - w"), monomial) == expected


def test_partial_derivative(P):
    assert partial_derivative(P("z^2*w"), 0) == P("2*z*w")
    assert partial_derivative(P("z^2"), 1) == 0
    assert partial_derivative(parse_poly("z^3 - 3*z", 1), 0) == parse_poly("3*z^2 - 3", 1)
    with pytest.raises(ValueError):
        partial_derivative(P("z"), 2)


def test_exact_eval(P, R2):
    assert exact_eval(P("z^2 + w"), (2, 3)) == gaussian(7)
    assert exact_eval(parse_poly("i*z", 1), (gaussian(1, 0),)) == gaussian(0, 1)
    assert exact_eval(R2.zero, (5, 7)) == gaussian(0)


def test_numeric_eval_on_arrays(P):
    z = np.array([2.0, 1j])
    w = np.array([3.0, 0.0])
    values = evaluate(P("z^2 + w"), [z, w])
    assert np.allclose(values, [7.0, -1.0])
    assert evaluate(P("i*z*w"), [1.0, 2.0]) == pytest.approx(2j)


def test_parse_example_polynomial():
    p = parse_poly("z1^2*z2 - (3/2+i)*z2^3", 2)
    assert coefficient(p, (2, 1)) == gaussian(1)
    assert coefficient(p, (0, 3)) == gaussian("-3/2", -1)
    assert render_poly(p) == "z1^2*z2 - (3/2+i)*z2^3"


def test_parse_collects_like_terms():
    assert render_poly(parse_poly("z*w + w*z", 2), ("z", "w")) == "2*z*w"
    assert parse_poly("z ** 2", 1) == parse_poly("z^2", 1)


@pytest.mark.parametrize("text,offset", [
    ("z^", 2),
    ("z + ", 4),
    ("(z + w", 6),
    ("z $ w", 2),
    ("q", 0),
])
def test_syntax_errors_report_offset(text, offset):
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly(text, 2)
    assert exc.value.offset == offset


def test_division_only_by_constants():
    assert parse_poly("z/2", 1) == parse_poly("1/2*z", 1)
    with pytest.raises(PolySyntaxError):
        parse_poly("1/z", 1)
    with pytest.raises(PolySyntaxError):
        parse_poly("z/0", 1)


def test_syntax_error_line_and_column():
    err = PolySyntaxError("bad", 7, "z + w\nz^")
    assert err.line == 2
    assert err.column == 2


@pytest.mark.parametrize("c,text", [
    (gaussian("3/2"), "3/2"),
    (gaussian(0, 1), "i"),
    (gaussian(0, -1), "-i"),
    (gaussian("1/2", 3), "1/2+3*i"),
    (gaussian(-2, "-1/3"), "-2-1/3*i"),
])
def test_format_gaussian(c, text):
    assert format_gaussian(c) == text


@pytest.mark.parametrize("text", [
    "z^2 - (1/2-3*i)*z*w + i",
    "-z1^3 + 2*z1*z2 - 5",
    "i*z2^2 - 3/4*z1",
    "0",
])
def test_render_parse_identity_on_canonical_text(text):
    assert render_poly(parse_poly(text, 2), ("z1", "z2") if "z1" in text else ("z", "w")) == text


def test_parse_render_identity(rng):
    for nvars in (1, 2, 3):
        for _ in range(25):
            p = random_poly(nvars, 4, rng)
            assert parse_poly(render_poly(p), nvars) == p


def test_monomials_up_to_counts():
    assert len(monomials_up_to(2, 4)) == 15
    assert len(monomials_up_to(3, 2)) == 10
    assert monomials_up_to(2, 0) == [(0, 0)]


def test_ring_is_cached():
    assert poly_ring(2) is poly_ring(2)
    with pytest.raises(ValueError):
        poly_ring(0)


def test_ring_axioms_on_random_polynomials(rng):
    for _ in range(20):
        p, q, r = (random_poly(2, 3, rng) for _ in range(3))
        assert add(p, q) == add(q, p)
        assert mul(p, q) == mul(q, p)
        assert mul(mul(p, q), r) == mul(p, mul(q, r))
        assert mul(p, add(q, r)) == add(mul(p, q), mul(p, r))
        assert add(p, -p) == 0
        assert mul(p, p.ring.one) == p


def test_partial_derivative_leibniz_rule(rng):
    for _ in range(20):
        p, q = random_poly(3, 3, rng), random_poly(3, 3, rng)
        for var in range(3):
            lhs = partial_derivative(mul(p, q), var)
            rhs = add(mul(partial_derivative(p, var), q), mul(p, partial_derivative(q, var)))
            assert lhs == rhs


def test_evaluation_is_a_ring_homomorphism(rng):
    for _ in range(20):
        p, q = random_poly(2, 4, rng), random_poly(2, 4, rng)
        point = tuple(gaussian(f"{rng.randint(-9, 9)}/{rng.randint(1, 5)}", rng.randint(-3, 3)) for _ in range(2))
        assert exact_eval(add(p, q), point) == exact_eval(p, point) + exact_eval(q, point)
        assert exact_eval(mul(p, q), point) == exact_eval(p, point) * exact_eval(q, point)
        numeric = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2)]
        expected = evaluate(p, numeric) * evaluate(q, numeric)
        assert abs(evaluate(mul(p, q), numeric) - expected) <= 1e-9 * max(1.0, abs(expected))
