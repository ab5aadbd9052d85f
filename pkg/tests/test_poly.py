import random

import pytest
from fractions import Fraction

from rinehart.poly import (
    Polynomial,
    PolyDerivation,
    PolyParseError,
    VariableMismatch,
    parse_poly,
)

XY = ("x", "y")


def P(s, vars=XY):
    return parse_poly(vars, s)


def random_poly(rng, vars, max_deg=3):
    p = Polynomial.zero(vars)
    for _ in range(rng.randint(1, 4)):
        exp = tuple(rng.randint(0, max_deg) for _ in vars)
        p = p + Polynomial.monomial(vars, exp, rng.choice([-2, -1, 1, 2]))
    return p


def test_mul_ring_identity():
    assert P("x+1") * P("x-1") == P("x^2-1")


def test_derivation_leibniz_example():
    ddx = PolyDerivation.coordinate(XY, "x")
    assert ddx(P("x^2*y")) == P("2*x*y")


def test_euler_derivation_on_monomial():
    # x d/dx + y d/dy scales a monomial by its total degree
    euler = PolyDerivation(XY, [P("x"), P("y")])
    assert euler(P("x^3*y")) == P("4*x^3*y")


def test_mismatched_variables_rejected():
    with pytest.raises(VariableMismatch):
        P("x") + parse_poly(("x",), "x")


def test_weight_split_standard():
    pieces = P("x^2 + x*y^3").weight_split((1, 1))
    assert set(pieces) == {2, 4}
    assert pieces[2] == P("x^2") and pieces[4] == P("x*y^3")


def test_weight_split_zero():
    assert Polynomial.zero(XY).weight_split((1, 1)) == {}


def test_weight_split_declared_weights():
    vars = ("x", "D")
    p = parse_poly(vars, "x + D")
    pieces = p.weight_split((1, 2))
    assert pieces[1] == parse_poly(vars, "x")
    assert pieces[2] == parse_poly(vars, "D")


def test_weight_split_pieces_sum_and_homogeneous():
    rng = random.Random(7)
    w = (1, 3)
    for _ in range(25):
        p = random_poly(rng, XY)
        pieces = p.weight_split(w)
        total = Polynomial.zero(XY)
        for wt, piece in pieces.items():
            assert piece.is_weight_homogeneous(w)
            assert piece.weight(w) == wt
            total = total + piece
        assert total == p


def test_ring_axioms_randomized():
    rng = random.Random(11)
    for _ in range(30):
        p, q, s = (random_poly(rng, XY) for _ in range(3))
        assert (p * q) * s == p * (q * s)
        assert p * q == q * p
        assert p * (q + s) == p * q + p * s


def test_derivation_leibniz_randomized():
    rng = random.Random(13)
    d = PolyDerivation(XY, [P("y^2"), P("x*y - 1")])
    for _ in range(30):
        p, q = random_poly(rng, XY), random_poly(rng, XY)
        assert d(p * q) == d(p) * q + p * d(q)


def test_derivation_commutator_is_derivation():
    rng = random.Random(17)
    d1 = PolyDerivation(XY, [P("y"), P("x^2")])
    d2 = PolyDerivation(XY, [P("1"), P("x*y")])
    c = d1.commutator(d2)
    for _ in range(20):
        p, q = random_poly(rng, XY), random_poly(rng, XY)
        assert c(p * q) == c(p) * q + p * c(q)
        assert c(p) == d1(d2(p)) - d2(d1(p))


def test_parse_rejects_garbage():
    with pytest.raises(PolyParseError):
        P("x +")
    with pytest.raises(PolyParseError):
        P("z")
    with pytest.raises(PolyParseError):
        P("x / y")


def test_parse_precedence_and_unary_minus():
    assert P("-x^2 + 2*(x - 1)") == P("2*x - x^2 - 2")
    assert P("--3") == Polynomial.const(XY, 3)


def test_constant_coefficients_exact():
    p = Polynomial.const(XY, Fraction(1, 3))
    assert (p + p + p) == Polynomial.const(XY, 1)


def test_zero_variable_ring():
    one = Polynomial.const((), 1)
    assert (one + one).constant_value() == 2
    assert parse_poly((), "7 - 5") == Polynomial.const((), 2)
