import random

import pytest

from rinehart import presets
from rinehart.lie_rinehart import (
    Connection,
    LieRinehartAlgebra,
    PresentationError,
    anchor_apply,
    bracket_extend,
    check_axioms,
    from_action,
    from_vector_fields,
    poly_divide_exact,
    ruth_check,
)
from rinehart.poly import Polynomial, PolyDerivation, parse_poly


def rand_poly(rng, alg, max_deg=2):
    p = alg.zero_poly()
    for _ in range(rng.randint(1, 3)):
        exp = tuple(rng.randint(0, max_deg) for _ in alg.vars)
        p = p + Polynomial.monomial(alg.vars, exp, rng.choice([-2, -1, 1, 2]))
    return p


def rand_element(rng, alg):
    return alg.element([rand_poly(rng, alg) for _ in range(alg.rank)])


# -- axioms ---------------------------------------------------------------


def test_abelian_passes():
    assert check_axioms(presets.lie("abelian2")).ok


def test_weyl_passes():
    assert check_axioms(presets.weyl(1)).ok
    assert check_axioms(presets.weyl(2)).ok


def test_sl2_passes_and_flipped_sign_fails_with_witness():
    assert check_axioms(presets.lie("sl2")).ok
    vars = ()
    basis = ("e", "f", "h")
    z = PolyDerivation.zero(vars)
    c = lambda v: Polynomial.const(vars, v)
    bad = LieRinehartAlgebra(
        vars,
        basis,
        (z, z, z),
        {  # [e,h] sign flipped
            (0, 1): (c(0), c(0), c(1)),
            (0, 2): (c(2), c(0), c(0)),
            (1, 2): (c(0), c(2), c(0)),
        },
    )
    rep = check_axioms(bad)
    assert not rep.ok
    assert any("Jacobi" in f and "e" in f and "f" in f and "h" in f for f in rep.failures)


def test_weight_homogeneity_checked():
    alg = presets.arrangement(["x", "y-x", "y+x"])
    assert check_axioms(alg).ok
    bad = LieRinehartAlgebra(
        alg.vars, alg.basis, alg.anchor, alg.structure,
        weights={"x": 1, "y": 2, "E": 0, "D": 1},
    )
    rep = check_axioms(bad)
    assert not rep.ok and any("homogeneous" in f for f in rep.failures)


# -- bracket and anchor -----------------------------------------------------


def test_weyl_bracket_forced_by_leibniz():
    alg = presets.weyl(1)
    e = alg.basis_element(0)
    xe = e.scale(alg.poly("x"))
    assert bracket_extend(xe, e) == -e
    assert bracket_extend(xe, xe).is_zero()


def test_arrangement_bracket():
    alg = presets.arrangement(["x", "y-x", "y+x"])  # r = 1
    E, D = alg.basis_element(0), alg.basis_element(1)
    assert bracket_extend(E, D) == D


def test_anchor_apply():
    alg = presets.weyl(1)
    e = alg.basis_element(0)
    assert anchor_apply(e, alg.poly("x^2")) == alg.poly("2*x")
    ab = presets.lie("abelian2")
    assert anchor_apply(ab.basis_element(0), ab.poly("3")).is_zero()


def test_arrangement_euler_weight():
    alg = presets.arrangement(["x", "y-x", "y+x"])
    E = alg.basis_element(0)
    assert anchor_apply(E, alg.poly("x^2*y")) == alg.poly("3*x^2*y")


def test_leibniz_random():
    rng = random.Random(23)
    for alg in (presets.weyl(2), presets.arrangement(["x", "y", "y-x", "y+x"])):
        for _ in range(10):
            X, Y = rand_element(rng, alg), rand_element(rng, alg)
            f = rand_poly(rng, alg)
            lhs = bracket_extend(X, Y.scale(f))
            rhs = Y.scale(anchor_apply(X, f)) + bracket_extend(X, Y).scale(f)
            assert (lhs - rhs).is_zero()


def test_jacobi_and_antisymmetry_random():
    rng = random.Random(29)
    alg = presets.semidirect_sl2()
    for _ in range(8):
        X, Y, Z = (rand_element(rng, alg) for _ in range(3))
        assert (bracket_extend(X, Y) + bracket_extend(Y, X)).is_zero()
        jac = (
            bracket_extend(bracket_extend(X, Y), Z)
            + bracket_extend(bracket_extend(Y, Z), X)
            + bracket_extend(bracket_extend(Z, X), Y)
        )
        assert jac.is_zero()


# -- connections ------------------------------------------------------------


def test_basic_connection_weyl_examples():
    alg = presets.weyl(1)
    conn = Connection(alg)
    e = alg.basis_element(0)
    xe = e.scale(alg.poly("x"))
    assert conn.basic_l(e, xe) == e
    assert conn.basic_der(e, alg.coordinate_field("x")).is_zero()


def test_basic_connection_compatibility_random():
    rng = random.Random(31)
    for alg in (presets.weyl(2), presets.semidirect_sl2()):
        conn = Connection(alg)
        rconn = Connection(
            alg,
            [[rand_element(rng, alg) for _ in range(alg.rank)]
             for _ in range(len(alg.vars))],
        )
        for c in (conn, rconn):
            for _ in range(6):
                X, Y = rand_element(rng, alg), rand_element(rng, alg)
                lhs = c.basic_l(X, Y).anchor_derivation()
                rhs = c.basic_der(X, Y.anchor_derivation())
                assert lhs == rhs


def test_basic_curvature_vanishes_for_lie_algebras():
    alg = presets.lie("sl2")
    conn = Connection(alg)
    rng = random.Random(37)
    for _ in range(5):
        X, Y = rand_element(rng, alg), rand_element(rng, alg)
        D = PolyDerivation.zero(alg.vars)
        assert conn.basic_curvature(X, Y, D).is_zero()


def test_basic_curvature_weyl_trivial_connection_value():
    alg = presets.weyl(1)
    conn = Connection(alg)
    e = alg.basis_element(0)
    xe = e.scale(alg.poly("x"))
    dx = alg.coordinate_field("x")
    k = conn.basic_curvature(e, xe, dx)
    assert k.is_zero()
    # both composite curvatures agree with the plain ones on these inputs
    assert k.anchor_derivation() == conn.plain_curvature_der(e, xe, dx).scale_by(-1)


def test_curvature_relations_random_connection():
    # the five-term tensor composed with the anchor reproduces the plain
    # curvatures up to the documented global sign (docs/signs.md)
    rng = random.Random(41)
    alg = presets.weyl(2)
    table = [[rand_element(rng, alg) for _ in range(alg.rank)]
             for _ in range(len(alg.vars))]
    conn = Connection(alg, table)
    for _ in range(5):
        X, Y, Z = (rand_element(rng, alg) for _ in range(3))
        D = PolyDerivation(alg.vars, [rand_poly(rng, alg) for _ in alg.vars])
        lhs = conn.basic_curvature(X, Y, Z.anchor_derivation())
        assert (lhs + conn.plain_curvature_l(X, Y, Z)).is_zero()
        lhs2 = conn.basic_curvature(X, Y, D).anchor_derivation()
        assert (lhs2 + conn.plain_curvature_der(X, Y, D)).is_zero()


# -- the two-term adjoint complex -------------------------------------------


@pytest.mark.parametrize(
    "maker",
    [
        lambda: presets.lie("sl2"),
        lambda: presets.weyl(1),
        lambda: presets.weyl(2),
        lambda: presets.semidirect_sl2(),
        lambda: presets.arrangement(["x", "y-x", "y+x"]),
        lambda: presets.arrangement(["x", "y", "y-x", "y+x"]),
    ],
)
def test_ruth_check_builtin_trivial_connection(maker):
    alg = maker()
    assert ruth_check(Connection(alg), degree_cap=3, samples=2).ok


def test_ruth_check_random_connection():
    rng = random.Random(43)
    alg = presets.weyl(2)
    table = [[rand_element(rng, alg) for _ in range(alg.rank)]
             for _ in range(len(alg.vars))]
    assert ruth_check(Connection(alg, table), degree_cap=2, samples=2).ok


# -- constructors ------------------------------------------------------------


def test_from_vector_fields_weyl():
    vars = ("x",)
    alg = from_vector_fields(vars, (PolyDerivation.coordinate(vars, "x"),), ("e",))
    assert check_axioms(alg).ok
    assert alg.structure == {}


def test_from_vector_fields_two_lines():
    vars = ("x", "y")
    E = PolyDerivation(vars, [parse_poly(vars, "x"), parse_poly(vars, "y")])
    D = PolyDerivation(vars, [parse_poly(vars, "0"), parse_poly(vars, "y")])
    alg = from_vector_fields(vars, (E, D), ("E", "D"))
    assert bracket_extend(alg.basis_element(0), alg.basis_element(1)).is_zero()


def test_from_vector_fields_three_lines():
    vars = ("x", "y")
    E = PolyDerivation(vars, [parse_poly(vars, "x"), parse_poly(vars, "y")])
    D = PolyDerivation(vars, [parse_poly(vars, "0"), parse_poly(vars, "y^2-x^2")])
    alg = from_vector_fields(vars, (E, D), ("E", "D"))
    assert bracket_extend(alg.basis_element(0), alg.basis_element(1)) == alg.basis_element(1)


def test_from_vector_fields_rejects_commutator_outside_span():
    vars = ("x", "y")
    a = PolyDerivation(vars, [parse_poly(vars, "y"), parse_poly(vars, "0")])
    b = PolyDerivation(vars, [parse_poly(vars, "0"), parse_poly(vars, "x")])
    with pytest.raises(PresentationError, match="not in the R-span"):
        from_vector_fields(vars, (a, b))


def test_poly_divide_exact():
    vars = ("x", "y")
    f = parse_poly(vars, "x^2*y - y^3")
    g = parse_poly(vars, "x - y")
    q = poly_divide_exact(f * g, g)
    assert q == f
    assert poly_divide_exact(parse_poly(vars, "x^2 + 1"), g) is None


def test_from_action_abelian_scaling():
    vars = ("x",)
    act = (PolyDerivation(vars, [parse_poly(vars, "x")]),)
    alg = from_action(vars, ("t",), {}, act)
    assert check_axioms(alg).ok
    assert alg.structure == {}


def test_from_action_sl2_zero_action():
    vars = ()
    z = PolyDerivation.zero(vars)
    alg = from_action(
        vars, ("e", "f", "h"),
        {(0, 1): (0, 0, 1), (0, 2): (-2, 0, 0), (1, 2): (0, 2, 0)},
        (z, z, z),
    )
    assert check_axioms(alg).ok


def test_from_action_sl2_standard_action_passes():
    alg = presets.semidirect_sl2()
    assert check_axioms(alg).ok


def test_from_action_rejects_non_morphism():
    vars = ("x", "y")
    e = PolyDerivation(vars, [parse_poly(vars, "0"), parse_poly(vars, "x")])
    f = PolyDerivation(vars, [parse_poly(vars, "y"), parse_poly(vars, "0")])
    h = PolyDerivation(vars, [parse_poly(vars, "x"), parse_poly(vars, "y")])  # wrong
    with pytest.raises(PresentationError, match="morphism"):
        from_action(
            vars, ("e", "f", "h"),
            {(0, 1): (0, 0, 1), (0, 2): (-2, 0, 0), (1, 2): (0, 2, 0)},
            (e, f, h),
        )


def test_arrangement_presets():
    three = presets.arrangement(["x", "y-x", "y+x"])
    four = presets.arrangement(["x", "y", "y-x", "y+x"])
    assert check_axioms(three).ok and check_axioms(four).ok
    # [E, D] = r D with r = deg F - 1
    assert bracket_extend(four.basis_element(0), four.basis_element(1)) == \
        four.basis_element(1).scale(2)
    with pytest.raises(PresentationError):
        presets.arrangement(["y", "y-x"])  # x missing
    with pytest.raises(PresentationError):
        presets.arrangement(["x", "y", "2*y"])  # proportional lines
