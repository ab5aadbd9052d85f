import itertools
import random

import pytest

from rinehart import presets
from rinehart.poisson import (
    Multivector,
    NonlinearRejection,
    SymAlgebra,
    mv_to_nonlinear,
    nonlinear_to_mv,
    poisson_cohomology,
    poisson_differential,
)
from rinehart.poly import Polynomial


def rand_mv(rng, P, k, max_deg=2):
    terms = {}
    for legs in itertools.combinations(range(P.N), k):
        if rng.random() < 0.7:
            exp = tuple(rng.randint(0, max_deg) for _ in range(P.N))
            terms[legs] = Polynomial.monomial(P.vars, exp, rng.choice([-2, -1, 1, 2]))
    return Multivector(P, k, terms)


def rand_sym(rng, P, max_deg=2):
    p = Polynomial.zero(P.vars)
    for _ in range(rng.randint(1, 3)):
        exp = tuple(rng.randint(0, max_deg) for _ in range(P.N))
        p = p + Polynomial.monomial(P.vars, exp, rng.choice([-2, -1, 1, 2]))
    return p


ALGEBRAS = [
    ("weyl1", lambda: presets.weyl(1)),
    ("sl2", lambda: presets.lie("sl2")),
    ("semidirect", lambda: presets.semidirect_sl2()),
    ("arr3", lambda: presets.arrangement(["x", "y-x", "y+x"])),
    ("arr4", lambda: presets.arrangement(["x", "y", "y-x", "y+x"])),
]


def test_bracket_generators_weyl():
    P = SymAlgebra(presets.weyl(1))
    x, xi = P.coordinate(0), P.coordinate(1)
    assert P.bracket(xi, x) == Polynomial.const(P.vars, 1)
    assert P.bracket(xi * xi, x) == xi.scale(2)
    assert P.bracket(x, x).is_zero()


def test_bracket_structure_constants_sl2():
    P = SymAlgebra(presets.lie("sl2"))
    e, f, h = (P.coordinate(i) for i in range(3))
    assert P.bracket(e, f) == h
    assert P.bracket(h, e) == e.scale(2)


def test_bracket_arrangement_generators():
    # [E, D] = r D turns into {D, E} = -r D on symbols
    alg = presets.arrangement(["x", "y-x", "y+x"])  # r = 1
    P = SymAlgebra(alg)
    E, D = P.poly("E"), P.poly("D")
    assert P.bracket(D, E) == -D


@pytest.mark.parametrize("name,maker", ALGEBRAS)
def test_bracket_laws(name, maker):
    P = SymAlgebra(maker())
    rng = random.Random(5)
    for _ in range(6):
        f, g, h = (rand_sym(rng, P) for _ in range(3))
        assert (P.bracket(f, g) + P.bracket(g, f)).is_zero()
        assert P.bracket(f, g * h) == P.bracket(f, g) * h + g * P.bracket(f, h)
        jac = (
            P.bracket(f, P.bracket(g, h))
            + P.bracket(g, P.bracket(h, f))
            + P.bracket(h, P.bracket(f, g))
        )
        assert jac.is_zero()


def test_differential_on_coordinates_weyl():
    P = SymAlgebra(presets.weyl(1))
    d = poisson_differential(Multivector.function(P, P.coordinate(0)))
    # single leg d/d(e) with coefficient {e, x} = 1
    assert d.terms == {(1,): Polynomial.const(P.vars, 1)}


def test_differential_kills_constants_and_zero_bracket():
    P = SymAlgebra(presets.weyl(1))
    assert poisson_differential(
        Multivector.function(P, Polynomial.const(P.vars, 5))
    ).is_zero()
    A = SymAlgebra(presets.lie("abelian2"))
    rng = random.Random(7)
    for k in range(0, 2):
        assert poisson_differential(rand_mv(rng, A, k)).is_zero()


@pytest.mark.parametrize("name,maker", ALGEBRAS)
def test_differential_squares_to_zero(name, maker):
    P = SymAlgebra(maker())
    rng = random.Random(11)
    for k in range(0, min(3, P.N)):
        for _ in range(4):
            D = rand_mv(rng, P, k)
            assert poisson_differential(poisson_differential(D)).is_zero()


def test_casimirs_are_constants_weyl():
    table = poisson_cohomology(presets.weyl(1), 8, 2)
    assert table[(0, 0)] == 1
    totals = {}
    for (w, k), dim in table.items():
        totals[k] = totals.get(k, 0) + dim
    assert totals == {0: 1, 1: 0, 2: 0}


def test_weyl2_cohomology_pattern():
    table = poisson_cohomology(presets.weyl(2), 4, 2)
    totals = {}
    for (w, k), dim in table.items():
        totals[k] = totals.get(k, 0) + dim
    assert totals == {0: 1, 1: 0, 2: 0}


def test_sl2_casimir_row():
    table = poisson_cohomology(presets.lie("sl2"), 6, 3)
    assert [table.get((q, 0), 0) for q in range(7)] == [1, 0, 1, 0, 1, 0, 1]


def test_abelian_cohomology_is_everything():
    import math

    table = poisson_cohomology(presets.lie("abelian2"), 3, 2)
    # zero differential: at coefficient degree q the degree-p piece has
    # dimension C(2,p) * dim Sym^q; slice weight is q - p (legs weigh in)
    for q in range(4):
        for p in range(3):
            want = math.comb(2, p) * (q + 1)
            assert table.get((q - p, p), 0) == want


def test_cohomology_requires_positive_weights():
    with pytest.raises(ValueError, match="positive weights"):
        poisson_cohomology(presets.arrangement(["x", "y-x", "y+x"]), 4, 2)


def test_nonlinear_tables_read_values():
    P = SymAlgebra(presets.weyl(1))
    D = Multivector(P, 1, {(1,): Polynomial.const(P.vars, 1)})  # d/d(e)
    t = mv_to_nonlinear(D, cap=1)
    zero_mono = (0,)
    assert t.value(0, ((zero_mono, 0),), ()) == Polynomial.const(P.vars, 1)
    assert t.value(1, (), (0,)).is_zero()


@pytest.mark.parametrize("name,maker", ALGEBRAS[:4])
def test_nonlinear_round_trip(name, maker):
    P = SymAlgebra(maker())
    rng = random.Random(13)
    for k in range(0, min(3, P.N)):
        D = rand_mv(rng, P, k)
        assert nonlinear_to_mv(mv_to_nonlinear(D, cap=1)) == D


def test_nonlinear_rejects_perturbed_entry():
    P = SymAlgebra(presets.semidirect_sl2())
    rng = random.Random(17)
    D = rand_mv(rng, P, 2)
    t = mv_to_nonlinear(D, cap=1)
    for table in t.tables:
        for (largs, rargs) in list(table):
            if any(sum(m) > 0 for m, _ in largs):
                table[(largs, rargs)] = table[(largs, rargs)] + Polynomial.const(P.vars, 1)
                with pytest.raises(NonlinearRejection):
                    nonlinear_to_mv(t)
                return
    pytest.fail("no coefficient-bearing entry found to perturb")
