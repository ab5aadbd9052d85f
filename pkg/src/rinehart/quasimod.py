"""Quasi-module structures: complexes with ring and module actions compatible
only up to explicit homotopies, their nonlinear Chevalley-Eilenberg cochains,
and exact CE cohomology for honest modules.

Two instances are provided: the adjoint one (multivectors with base-direction
legs over the symbol algebra) and the Hochschild one (ring cochains valued in
the enveloping algebra).  All laws are verified pointwise with seeded inputs.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cochain import (
    CapExceededError,
    TableCochain,
    add as cochain_add,
    cochain_equal,
    hochschild_b,
    homotopy,
    lie_action,
    monomial_tuples,
    r_action,
    scale as cochain_scale,
    zero_cochain,
)
from .lie_rinehart import Connection, LElement, LieRinehartAlgebra, bracket_extend
from .linalg import ComplexSlice, SparseMatrixQ, cohomology_dims
from .poisson import Multivector, SymAlgebra
from .poly import Polynomial
from .uea import EnvelopingAlgebra

LArg = tuple[tuple[int, ...], int]  # (ring monomial exponent, generator index)


# -- adjoint-side elementary operators ----------------------------------------


def adj_delta(P: SymAlgebra, v: Multivector) -> Multivector:
    """Koszul differential: wedge an anchor leg for each symbol factor."""
    out = Multivector(P, v.degree + 1)
    for legs, c in v.terms.items():
        for a in range(P.d):
            dc = c.partial(P.n + a)
            if dc.is_zero():
                continue
            rho = P.alg.anchor[a]
            for u, im in enumerate(rho.images):
                if im.is_zero() or u in legs:
                    continue
                pos = sum(1 for l in legs if l < u)
                new = tuple(sorted(legs + (u,)))
                sign = 1 if pos % 2 == 0 else -1
                out = out + Multivector(P, v.degree + 1, {new: (P.lift(im) * dc).scale(sign)})
    return out


def adj_lie(P: SymAlgebra, X: LElement, v: Multivector) -> Multivector:
    """Commute the anchor field into each leg plus the bracket on coefficients."""
    xsym = P.element_symbol(X)
    rho = X.anchor_derivation()
    out = Multivector(P, v.degree)
    for legs, c in v.terms.items():
        br = P.bracket(xsym, c)
        if not br.is_zero():
            out = out + Multivector(P, v.degree, {legs: br})
        for t, u in enumerate(legs):
            # [rho(X), d/dx_u] = -sum_v d(rho X x_v)/dx_u * d/dx_v
            for w in range(P.n):
                coeff = -rho.images[w].partial(u)
                if coeff.is_zero() or w in legs[:t] + legs[t + 1:]:
                    continue
                rest = legs[:t] + legs[t + 1:]
                pos = sum(1 for l in rest if l < w)
                new = tuple(sorted(rest + (w,)))
                sign = 1 if (pos + t) % 2 == 0 else -1
                out = out + Multivector(P, v.degree, {new: (P.lift(coeff) * c).scale(sign)})
    return out


def adj_h(P: SymAlgebra, r: Polynomial, X: LElement, v: Multivector) -> Multivector:
    """Leg-lowering homotopy: contract a leg with dr and multiply by X."""
    xsym = P.element_symbol(X)
    rl = P.lift(r)
    out = Multivector(P, max(v.degree - 1, 0))
    for legs, c in v.terms.items():
        for t, u in enumerate(legs):
            dr = rl.partial(u)
            if dr.is_zero():
                continue
            rest = legs[:t] + legs[t + 1:]
            sign = 1 if t % 2 == 0 else -1
            out = out + Multivector(P, v.degree - 1, {rest: (dr * c * xsym).scale(sign)})
    return out


def adj_r_action(P: SymAlgebra, r: Polynomial, v: Multivector) -> Multivector:
    return v.scale(P.lift(r))


def adj_nabla_b(P: SymAlgebra, conn: Connection, X: LElement, v: Multivector) -> Multivector:
    """The induced connection along X on legs and coefficients."""
    alg = P.alg
    out = Multivector(P, v.degree)
    # derivation on the coefficient: anchor on base variables, induced
    # connection on symbol variables
    rho = X.anchor_derivation()
    gen_images = [
        P.element_symbol(conn.basic_l(X, alg.basis_element(a))) for a in range(P.d)
    ]
    for legs, c in v.terms.items():
        deriv = Polynomial.zero(P.vars)
        for u in range(P.n):
            if not rho.images[u].is_zero():
                deriv = deriv + c.partial(u) * P.lift(rho.images[u])
        for a in range(P.d):
            if not gen_images[a].is_zero():
                deriv = deriv + c.partial(P.n + a) * gen_images[a]
        if not deriv.is_zero():
            out = out + Multivector(P, v.degree, {legs: deriv})
        for t, u in enumerate(legs):
            img = conn.basic_der(X, alg.coordinate_field(alg.vars[u]))
            rest = legs[:t] + legs[t + 1:]
            for w, im in enumerate(img.images):
                if im.is_zero() or w in rest:
                    continue
                pos = sum(1 for l in rest if l < w)
                new = tuple(sorted(rest + (w,)))
                sign = 1 if (pos + t) % 2 == 0 else -1
                out = out + Multivector(P, v.degree, {new: (P.lift(im) * c).scale(sign)})
    return out


# -- instances ------------------------------------------------------------------


@dataclass
class QuasiModuleInstance:
    """Operator bundle: differential, two actions, and the homotopy."""

    name: str
    d: Callable
    r_act: Callable
    lie: Callable
    h: Callable
    equal: Callable
    random_element: Callable
    degrees: tuple[int, ...]
    zero: Callable = None


def adjoint_instance(alg: LieRinehartAlgebra) -> QuasiModuleInstance:
    """Multivectors with base legs; the differential is minus the Koszul one."""
    P = SymAlgebra(alg)

    def rand(rng: random.Random, degree: int) -> Multivector:
        terms = {}
        for legs in itertools.combinations(range(P.n), degree):
            if rng.random() < 0.8:
                exp = tuple(rng.randint(0, 2) for _ in range(P.N))
                if sum(exp) > 3:
                    exp = tuple(0 for _ in range(P.N))
                terms[legs] = Polynomial.monomial(P.vars, exp, rng.choice([-2, -1, 1, 2]))
        return Multivector(P, degree, terms)

    def mv_equal(a: Multivector, b: Multivector) -> bool:
        if a.is_zero() or b.is_zero():
            return a.terms == b.terms
        return a.degree == b.degree and a.terms == b.terms

    inst = QuasiModuleInstance(
        name=f"adjoint({alg.name})",
        d=lambda v: -adj_delta(P, v),
        r_act=lambda r, v: adj_r_action(P, r, v),
        lie=lambda X, v: adj_lie(P, X, v),
        h=lambda r, X, v: adj_h(P, r, X, v),
        equal=mv_equal,
        random_element=rand,
        degrees=tuple(range(0, P.n + 1)),
        zero=lambda degree: Multivector(P, max(degree, 0)),
    )
    inst.sym = P
    return inst


def hochschild_instance(alg: LieRinehartAlgebra, cap: int = 3,
                        probe_degree: int = 2) -> QuasiModuleInstance:
    """Ring cochains with enveloping-algebra values; differential raises arity."""
    U = EnvelopingAlgebra(alg)

    def rand(rng: random.Random, arity: int) -> TableCochain:
        table = {}
        for exps in monomial_tuples(len(alg.vars), arity, cap):
            out = U.zero()
            for _ in range(2):
                g = [0] * alg.rank
                for _ in range(rng.randint(0, 2)):
                    g[rng.randrange(alg.rank)] += 1
                c = Polynomial.monomial(
                    alg.vars, tuple(rng.randint(0, 1) for _ in alg.vars),
                    rng.choice([-2, -1, 1, 2]),
                )
                out = out + U.monomial(c, tuple(g))
            table[exps] = out
        # generous backing cap: the laws compose several operators
        return TableCochain.from_table(U, arity, table, cap=cap + 60)

    inst = QuasiModuleInstance(
        name=f"hochschild({alg.name})",
        d=hochschild_b,
        r_act=r_action,
        lie=lie_action,
        h=homotopy,
        equal=lambda a, b: cochain_equal(a, b, probe_degree),
        random_element=rand,
        degrees=(0, 1, 2),
        zero=lambda degree: zero_cochain(U, degree),
    )
    inst.uea = U
    return inst


# -- the law harness --------------------------------------------------------------


@dataclass
class CheckReport:
    ok: bool
    trials: int
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _rand_poly(rng, alg, max_deg=2):
    exp = tuple(rng.randint(0, 1) for _ in alg.vars)
    if sum(exp) > max_deg:
        exp = tuple(0 for _ in alg.vars)
    return Polynomial.monomial(alg.vars, exp, rng.choice([-2, -1, 1, 2]))


def _rand_lelement(rng, alg):
    return alg.element([_rand_poly(rng, alg) for _ in range(alg.rank)])


def quasi_axiom_check(inst: QuasiModuleInstance, alg: LieRinehartAlgebra,
                      trials: int = 100, seed: int = 0) -> CheckReport:
    """Pointwise verification of the five compatibility laws on seeded inputs."""
    rng = random.Random(seed)
    failures = []
    for trial in range(trials):
        degree = rng.choice(inst.degrees)
        m = inst.random_element(rng, degree)
        r = _rand_poly(rng, alg)
        X = _rand_lelement(rng, alg)
        Y = _rand_lelement(rng, alg)

        def check(label, a, b):
            if not inst.equal(a, b):
                failures.append(
                    f"trial {trial}: {label} fails (degree {degree}, r={r}, X={X})"
                )

        dd = inst.d(inst.d(m))
        check("d o d = 0", dd, inst.zero(degree + 2))
        check("d o r = r o d", inst.d(inst.r_act(r, m)), inst.r_act(r, inst.d(m)))
        check("d o lie = lie o d", inst.d(inst.lie(X, m)), inst.lie(X, inst.d(m)))
        leib_rhs = _sum3(inst, inst.r_act(r, inst.lie(X, m)),
                         inst.r_act(X.anchor_derivation()(r), m), None)
        check("Leibniz", inst.lie(X, inst.r_act(r, m)), leib_rhs)
        def_rhs = _sum3(
            inst,
            inst.r_act(r, inst.lie(X, m)),
            inst.h(r, X, inst.d(m)),
            inst.d(inst.h(r, X, m)),
        )
        check("scaled action homotopy", inst.lie(X.scale(r), m), def_rhs)
        prop_rhs = _sum3(
            inst,
            inst.h(r, X, inst.lie(Y, m)),
            inst.h(Y.anchor_derivation()(r), X, m),
            inst.h(r, bracket_extend(Y, X), m),
        )
        check("homotopy equivariance", inst.lie(Y, inst.h(r, X, m)), prop_rhs)
        if len(failures) >= 5:
            return CheckReport(False, trial + 1, failures)
    return CheckReport(not failures, trials, failures)


def _sum3(inst, a, b, c):
    parts = [p for p in (a, b, c) if p is not None]
    if isinstance(a, TableCochain):
        return cochain_add(*parts)
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


# -- nonlinear cochains ------------------------------------------------------------


def _larg_element(alg: LieRinehartAlgebra, arg: LArg) -> LElement:
    exp, a = arg
    coeffs = [Polynomial.zero(alg.vars) for _ in range(alg.rank)]
    coeffs[a] = Polynomial.monomial(alg.vars, exp, 1)
    return LElement(alg, tuple(coeffs))


def _largs_universe(alg: LieRinehartAlgebra, cap: int) -> list[LArg]:
    monos = []

    def rec(i, left, acc):
        if i == len(alg.vars):
            monos.append(tuple(acc))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, acc + [e])

    rec(0, cap, [])
    return [(m, a) for a in range(alg.rank) for m in sorted(monos)]


class NLCochainElement:
    """Tuple (phi_0.., phi_k): phi_i takes (k-i) module-generator arguments of
    the shape monomial*basis and returns a module element of degree i.

    Tables are only consulted within the declared cap; anything beyond raises.
    """

    def __init__(self, inst: QuasiModuleInstance, alg: LieRinehartAlgebra,
                 degree: int, cap: int, tables: list[dict]):
        self.inst = inst
        self.alg = alg
        self.degree = degree
        self.cap = cap
        self.tables = tables  # tables[i]: dict[tuple[LArg,...]] -> element

    def phi(self, i: int, largs: tuple[LArg, ...]):
        if any(sum(m) > self.cap for m, _ in largs):
            raise CapExceededError(f"argument tuple {largs} beyond cap {self.cap}")
        return self.tables[i].get(tuple(largs))

    def evaluate(self, i: int, args: list[LElement]):
        """Multilinear (over the constants) evaluation of phi_i."""
        out = None
        for combo in itertools.product(
            *[[(exp, a, c) for a, f in enumerate(arg.coeffs) for exp, c in f.terms.items()]
              for arg in args]
        ):
            largs = tuple((exp, a) for exp, a, _ in combo)
            coeff = Fraction(1)
            for _, _, c in combo:
                coeff *= c
            order = sorted(range(len(largs)), key=lambda t: (largs[t][1], largs[t][0]))
            sorted_largs = tuple(largs[t] for t in order)
            if len(set(sorted_largs)) != len(sorted_largs):
                continue
            sign = _perm_sign(order)
            v = self.phi(i, sorted_largs)
            if v is None:
                continue
            piece = _scale_element(self.inst, v, coeff * sign)
            out = piece if out is None else _add_elements(self.inst, out, piece)
        if out is None:
            return _zero_element(self.inst, i)
        return out


def _perm_sign(order):
    sign = 1
    order = list(order)
    for i in range(len(order)):
        while order[i] != i:
            j = order[i]
            order[i], order[j] = order[j], order[i]
            sign = -sign
    return sign


def _scale_element(inst, v, c):
    if isinstance(v, TableCochain):
        return cochain_scale(c, v)
    return v.scale(c)


def _add_elements(inst, a, b):
    if isinstance(a, TableCochain):
        return cochain_add(a, b)
    return a + b


def _zero_element(inst, i):
    if hasattr(inst, "uea"):
        return zero_cochain(inst.uea, i)
    return Multivector(inst.sym, i)


def nl_ce_apply(el: NLCochainElement, out_cap: int | None = None) -> NLCochainElement:
    """Total differential: alternating action/bracket sum on the arguments
    plus (-1)^{argument count} times the module differential of the previous
    column."""
    inst, alg = el.inst, el.alg
    k = el.degree
    cap = el.cap if out_cap is None else out_cap
    universe = [a for a in _largs_universe(alg, cap)]
    tables: list[dict] = []
    for i in range(k + 2):
        table = {}
        m = k + 1 - i
        for largs in itertools.combinations(universe, m):
            elems = [_larg_element(alg, a) for a in largs]
            total = _zero_element(inst, i)
            if i <= k:
                for j in range(m):
                    rest = elems[:j] + elems[j + 1:]
                    v = el.evaluate(i, rest)
                    term = inst.lie(elems[j], v)
                    total = _add_elements(
                        inst, total, _scale_element(inst, term, 1 if j % 2 == 0 else -1)
                    )
                for j, l in itertools.combinations(range(m), 2):
                    br = bracket_extend(elems[j], elems[l])
                    rest = [elems[t] for t in range(m) if t not in (j, l)]
                    v = el.evaluate(i, [br] + rest)
                    total = _add_elements(
                        inst, total, _scale_element(inst, v, 1 if (j + l) % 2 == 0 else -1)
                    )
            if i >= 1:
                prev = el.evaluate(i - 1, elems)
                term = inst.d(prev)
                total = _add_elements(
                    inst, total, _scale_element(inst, term, 1 if m % 2 == 0 else -1)
                )
            table[largs] = total
        tables.append(table)
    return NLCochainElement(inst, alg, k + 1, cap, tables)


def nl_square_is_zero(el: NLCochainElement, out_cap: int) -> bool:
    once = nl_ce_apply(el, out_cap)
    twice = nl_ce_apply(once, out_cap)
    zero = True
    for i, table in enumerate(twice.tables):
        for largs, v in table.items():
            if not el.inst.equal(v, _zero_element(el.inst, i)):
                zero = False
    return zero


def nl_membership(el: NLCochainElement, report: list | None = None) -> bool:
    """The nonlinearity constraint tying consecutive tables through the
    homotopy, checked on generator tuples within the cap."""
    inst, alg = el.inst, el.alg
    k = el.degree
    ok = True
    variables = [
        Polynomial.variable(alg.vars, v) for v in alg.vars
    ]
    universe = _largs_universe(alg, el.cap)
    for i in range(k):
        m = k - i
        for largs in itertools.combinations(universe, m):
            elems = [_larg_element(alg, a) for a in largs]
            last = elems[-1]
            for r in variables:
                mono_deg = sum(largs[-1][0]) + 1
                if mono_deg > el.cap:
                    continue
                lhs = _add_elements(
                    inst,
                    el.evaluate(i, elems[:-1] + [last.scale(r)]),
                    _scale_element(inst, inst.r_act(r, el.evaluate(i, elems)), -1),
                )
                rhs = inst.h(r, last, el.evaluate(i + 1, elems[:-1]))
                if not inst.equal(lhs, rhs):
                    ok = False
                    if report is not None:
                        report.append((i, largs, r))
                    else:
                        return False
    return ok


# -- transport between multivectors and adjoint nonlinear cochains -----------------


def multivector_to_nl(inst: QuasiModuleInstance, D: Multivector, cap: int = 1) -> NLCochainElement:
    """Split a multivector by how many base-direction legs each value keeps."""
    P = inst.sym
    alg = P.alg
    p = D.degree
    universe = _largs_universe(alg, cap)
    tables = []
    for i in range(p + 1):
        table = {}
        for largs in itertools.combinations(universe, p - i):
            syms = [P.element_symbol(_larg_element(alg, a)) for a in largs]
            terms = {}
            for legs in itertools.combinations(range(P.n), i):
                v = D.evaluate(syms + [P.coordinate(u) for u in legs])
                if not v.is_zero():
                    terms[legs] = v
            table[largs] = Multivector(P, i, terms)
        tables.append(table)
    return NLCochainElement(inst, alg, p, cap, tables)


def nl_to_multivector(el: NLCochainElement) -> Multivector:
    """Inverse of the splitting, from the pure-generator entries."""
    P = el.inst.sym
    alg = el.alg
    p = el.degree
    zero_mono = tuple(0 for _ in alg.vars)
    terms = {}
    for i in range(p + 1):
        for gens in itertools.combinations(range(P.d), p - i):
            largs = tuple((zero_mono, a) for a in gens)
            v = el.tables[i].get(largs)
            if v is None:
                continue
            for xlegs, c in v.terms.items():
                full = tuple(sorted(xlegs)) + tuple(P.n + a for a in gens)
                sign = 1 if (i * (p - i)) % 2 == 0 else -1
                cur = terms.get(full, Polynomial.zero(P.vars))
                s = cur + c.scale(sign)
                if s.is_zero():
                    terms.pop(full, None)
                else:
                    terms[full] = s
    return Multivector(P, p, terms)


# -- honest-module CE cohomology ------------------------------------------------


def _ce_slice(alg: LieRinehartAlgebra, value_vars, lie_images, W: int,
              max_position: int, value_weights) -> ComplexSlice:
    """CE complex slice for an honest module of polynomial type.

    lie_images[k] is a derivation-style callable value -> value for the
    action of basis element k; values are polynomials over value_vars.
    """
    d = alg.rank

    def monos_of_weight(w):
        out = []

        def rec(i, left, acc):
            if i == len(value_vars):
                if left == 0:
                    out.append(tuple(acc))
                return
            step = value_weights[i]
            for e in range(left // step + 1):
                rec(i + 1, left - e * step, acc + [e])

        if w >= 0:
            rec(0, w, [])
        return out

    if alg.weights is None:
        raise ValueError("ce_cohomology needs declared weights")
    gen_w = [alg.generator_weight(k) for k in range(d)]
    wbr = alg.bracket_weight()

    def basis_at(m):
        out = []
        for T in itertools.combinations(range(d), m):
            need = W + m * wbr + sum(gen_w[a] for a in T)
            for exp in monos_of_weight(need):
                out.append((T, exp))
        return sorted(out)

    bases = [basis_at(m) for m in range(max_position + 1)]
    labels = [[f"{exp}|{T}" for T, exp in b] for b in bases]

    def eval_cochain(table, args_idx):
        """R/K-multilinear alternating evaluation on basis-index tuples."""
        if len(set(args_idx)) != len(args_idx):
            return Polynomial.zero(value_vars)
        order = sorted(range(len(args_idx)), key=lambda t: args_idx[t])
        sign = _perm_sign(order)
        key = tuple(sorted(args_idx))
        val = table.get(key, Polynomial.zero(value_vars))
        return val if sign == 1 else -val

    diffs = []
    for m in range(max_position):
        src, tgt = bases[m], bases[m + 1]
        index = {key: i for i, key in enumerate(tgt)}
        mat = SparseMatrixQ(len(tgt), len(src))
        for col, (T, exp) in enumerate(src):
            table = {T: Polynomial.monomial(value_vars, exp, 1)}
            for S in itertools.combinations(range(d), m + 1):
                total = Polynomial.zero(value_vars)
                for j in range(m + 1):
                    rest = S[:j] + S[j + 1:]
                    v = eval_cochain(table, rest)
                    if not v.is_zero():
                        term = lie_images[S[j]](v)
                        total = total + (term if j % 2 == 0 else -term)
                for j, l in itertools.combinations(range(m + 1), 2):
                    rest = [S[t] for t in range(m + 1) if t not in (j, l)]
                    for kk, c in enumerate(alg.structure_vector(S[j], S[l])):
                        if c.is_zero():
                            continue
                        v = eval_cochain(table, [kk] + rest)
                        if v.is_zero():
                            continue
                        lifted = _lift_to(value_vars, c)
                        term = lifted * v
                        total = total + (term if (j + l) % 2 == 0 else -term)
                if total.is_zero():
                    continue
                for texp, coeff in total.terms.items():
                    row = index.get((S, texp))
                    if row is None:
                        raise AssertionError("CE differential left the weight slice")
                    mat.set(row, col, mat.get(row, col) + coeff)
        diffs.append(mat)
    return ComplexSlice(labels, diffs, name=f"ce W={W}")


def _lift_to(value_vars, c: Polynomial) -> Polynomial:
    out = Polynomial.zero(value_vars)
    extra = len(value_vars) - len(c.vars)
    for exp, v in c.terms.items():
        out = out + Polynomial.monomial(value_vars, tuple(exp) + (0,) * extra, v)
    return out


def ce_cohomology(alg: LieRinehartAlgebra, module: str, max_weight: int,
                  max_degree: int) -> dict[tuple[int, int], int]:
    """Exact CE cohomology per weight for the honest modules.

    module: "trivial" (the base ring through the anchor) or
    "sym_adjoint_lie" (symbols with the bracket action; constants base only).
    """
    d = alg.rank
    if module == "trivial":
        value_vars = alg.vars
        value_weights = [alg.weights[v] for v in alg.vars] if alg.vars else []
        lie_images = [alg.anchor[k] for k in range(d)]
        lie_calls = [(lambda v, k=k: lie_images[k](v)) for k in range(d)]
    elif module == "sym_adjoint_lie":
        if alg.vars:
            raise ValueError("sym_adjoint_lie module requires a constants base")
        P = SymAlgebra(alg)
        value_vars = P.vars
        value_weights = [alg.weights[b] for b in alg.basis]
        lie_calls = [
            (lambda v, k=k: P.bracket(P.generator_symbol(k), v)) for k in range(d)
        ]
    else:
        raise ValueError(f"unknown module {module!r}")

    if any(w <= 0 for w in value_weights) and value_weights:
        raise ValueError("module is not weight-finite")
    top = min(max_degree + 1, d)
    gen_w = [alg.generator_weight(k) for k in range(d)]
    wbr = alg.bracket_weight()
    weights = set()
    for m in range(top + 1):
        for T in itertools.combinations(range(d), m):
            base = -m * wbr - sum(gen_w[a] for a in T)
            for W in range(base, max_weight + 1):
                weights.add(W)
    table: dict[tuple[int, int], int] = {}
    for W in sorted(weights):
        dims = cohomology_dims(
            _ce_slice(alg, value_vars, lie_calls, W, top, value_weights)
        )
        for m in range(min(max_degree, len(dims) - 1) + 1):
            if m == top and top < d:
                continue
            table[(W, m)] = dims[m]
    return table

# -- linear cochains and the comparison map -------------------------------------


class LinearCECochain:
    """R-multilinear cochain tuple valued in leg-graded adjoint elements.

    tables[i] maps increasing basis-index tuples of length (degree - i) to
    multivectors with i base legs; evaluation extends R-multilinearly.
    """

    def __init__(self, inst: QuasiModuleInstance, alg: LieRinehartAlgebra,
                 degree: int, tables: list[dict]):
        self.inst = inst
        self.alg = alg
        self.degree = degree
        self.tables = tables

    def evaluate(self, i: int, args: list[LElement]) -> Multivector:
        P = self.inst.sym
        out = Multivector(P, i)
        m = len(args)
        for idx in itertools.product(range(self.alg.rank), repeat=m):
            coeff = Polynomial.const(self.alg.vars, 1)
            for arg, a in zip(args, idx):
                coeff = coeff * arg.coeffs[a]
                if coeff.is_zero():
                    break
            if coeff.is_zero():
                continue
            if len(set(idx)) != len(idx):
                continue
            order = sorted(range(m), key=lambda t: idx[t])
            sign = _perm_sign(order)
            v = self.tables[i].get(tuple(sorted(idx)))
            if v is None:
                continue
            out = out + v.scale(P.lift(coeff)).scale(sign)
        return out


def _sigma_apply(P: SymAlgebra, conn: Connection, A: Multivector,
                 coords: list[int], arg: LArg) -> Polynomial:
    """Evaluate the connection splitting of the derivation A(-, x_coords) on a
    monomial*generator argument.

    The splitting acts as the identity on ring arguments and sends a symbol
    generator to the symbol-linear extension of the connection applied to the
    derivation's coordinate values.
    """
    alg = P.alg
    exp, a = arg
    mono = Polynomial.monomial(alg.vars, exp, 1)
    coord_polys = [P.coordinate(u) for u in coords]
    d_mono = A.evaluate([P.lift(mono)] + coord_polys)
    out = d_mono * P.generator_symbol(a)
    for u in range(P.n):
        nabla = conn.table[u][a]
        if nabla.is_zero():
            continue
        du = A.evaluate([P.coordinate(u)] + coord_polys)
        if du.is_zero():
            continue
        out = out + P.lift(mono) * du * P.element_symbol(nabla)
    return out


def linear_to_nonlinear(c: LinearCECochain, conn: Connection | None = None,
                        cap: int = 2) -> NLCochainElement:
    """The section of the nonlinear cochains determined by the constraint.

    Values on pure generator tuples are the given R-multilinear ones; a
    coefficient variable is peeled off the last offending argument through the
    instance homotopy, which is exactly what membership demands.  The result
    is independent of any connection; the connection argument is kept for
    call-site symmetry with the structure operator and may be None.
    """
    inst, alg = c.inst, c.alg
    P = inst.sym
    k = c.degree
    universe = _largs_universe(alg, cap)
    tables: list[dict] = [dict() for _ in range(k + 1)]
    out = NLCochainElement(inst, alg, k, cap, tables)

    def build(i, largs):
        cached = tables[i].get(largs)
        if cached is not None:
            return cached
        elems = [_larg_element(alg, arg) for arg in largs]
        peel = None
        for t in range(len(largs) - 1, -1, -1):
            if sum(largs[t][0]) > 0:
                peel = t
                break
        if peel is None:
            value = c.evaluate(i, elems)
        else:
            exp, a = largs[peel]
            u = next(idx for idx, e in enumerate(exp) if e > 0)
            smaller = list(exp)
            smaller[u] -= 1
            inner_arg = (tuple(smaller), a)
            reordered = [largs[t] for t in range(len(largs)) if t != peel]
            sign = 1 if (len(largs) - 1 - peel) % 2 == 0 else -1
            xvar = Polynomial.variable(alg.vars, alg.vars[u])
            inner_elems = [_larg_element(alg, arg) for arg in reordered]
            head = out.evaluate(i, [
                _larg_element(alg, arg) for arg in reordered
            ] + [_larg_element(alg, inner_arg)])
            value = inst.r_act(xvar, head)
            if i + 1 <= k:
                tail = inst.h(xvar, _larg_element(alg, inner_arg),
                              out.evaluate(i + 1, inner_elems))
                value = value + tail
            value = value.scale(sign)
        tables[i][largs] = value
        return value

    for i in range(k, -1, -1):
        m = k - i
        # fill by increasing coefficient degree so the recursion only looks up
        for total in range(0, cap * m + 1):
            for largs in itertools.combinations(universe, m):
                if sum(sum(e) for e, _ in largs) == total:
                    build(i, largs)
    return out


def nonlinear_to_linear(el: NLCochainElement) -> LinearCECochain:
    """Restrict to pure generator tuples (the section inverts by restriction)."""
    inst, alg = el.inst, el.alg
    k = el.degree
    zero_mono = tuple(0 for _ in alg.vars)
    tables: list[dict] = []
    for i in range(k + 1):
        table = {}
        for gens in itertools.combinations(range(alg.rank), k - i):
            largs = tuple((zero_mono, a) for a in gens)
            elems = [_larg_element(alg, arg) for arg in largs]
            table[gens] = el.evaluate(i, elems)
        tables.append(table)
    return LinearCECochain(inst, alg, k, tables)


# -- the symmetric-power structure operator --------------------------------------


def _curvature_replace(P: SymAlgebra, conn: Connection, X: LElement, Y: LElement,
                       v: Multivector) -> Multivector:
    """Replace one base leg at a time by the five-term curvature value."""
    alg = P.alg
    out = Multivector(P, max(v.degree - 1, 0))
    for legs, c in v.terms.items():
        for t, u in enumerate(legs):
            img = conn.basic_curvature(X, Y, alg.coordinate_field(alg.vars[u]))
            if img.is_zero():
                continue
            rest = legs[:t] + legs[t + 1:]
            sign = 1 if t % 2 == 0 else -1
            out = out + Multivector(
                P, v.degree - 1,
                {rest: (c * P.element_symbol(img)).scale(sign)},
            )
    return out


def linear_structure_operator(c: LinearCECochain, conn: Connection) -> LinearCECochain:
    """Total differential on the linear side: covariant CE derivative, the
    Koszul piece on values, and the curvature correction.  Signs follow the
    total convention of the nonlinear side (docs/signs.md)."""
    inst, alg = c.inst, c.alg
    P = inst.sym
    k = c.degree
    tables: list[dict] = []
    for i in range(k + 2):
        m = k + 1 - i
        table = {}
        for T in itertools.combinations(range(alg.rank), m):
            elems = [alg.basis_element(a) for a in T]
            total = Multivector(P, i)
            if i <= k:
                # exterior covariant derivative of c_i
                for j in range(m):
                    rest = elems[:j] + elems[j + 1:]
                    v = c.evaluate(i, rest)
                    term = adj_nabla_b(P, conn, elems[j], v)
                    total = total + term.scale(1 if j % 2 == 0 else -1)
                for j, l in itertools.combinations(range(m), 2):
                    br = bracket_extend(elems[j], elems[l])
                    rest = [elems[t] for t in range(m) if t not in (j, l)]
                    v = c.evaluate(i, [br] + rest)
                    total = total + v.scale(1 if (j + l) % 2 == 0 else -1)
            if i >= 1:
                # value differential of the previous column, total-complex sign
                prev = c.evaluate(i - 1, elems)
                term = -adj_delta(P, prev)
                total = total + term.scale(1 if m % 2 == 0 else -1)
            if i + 1 <= k:
                # curvature correction from the next column
                for j, l in itertools.combinations(range(m), 2):
                    rest = [elems[t] for t in range(m) if t not in (j, l)]
                    v = c.evaluate(i + 1, rest)
                    term = _curvature_replace(P, conn, elems[j], elems[l], v)
                    total = total + term.scale(1 if (j + l) % 2 == 0 else -1)
            table[T] = total
        tables.append(table)
    return LinearCECochain(inst, alg, k + 1, tables)


def ce_cohomology_matrix_module(alg: LieRinehartAlgebra,
                                actions: list[list[list[Fraction | int]]]) -> list[int]:
    """CE cohomology of a finite-dimensional module over a constants base.

    actions[k] is the matrix of the k-th generator; the matrices must satisfy
    the bracket relations exactly.
    """
    if alg.vars:
        raise ValueError("matrix modules require a constants base")
    d = alg.rank
    dim = len(actions[0]) if actions else 0
    mats = [
        {(i, j): Fraction(c) for i, row in enumerate(m) for j, c in enumerate(row) if c}
        for m in actions
    ]

    def act(k, vec):
        out = [Fraction(0)] * dim
        for (i, j), c in mats[k].items():
            if vec[j]:
                out[i] += c * vec[j]
        return out

    for i, j in itertools.combinations(range(d), 2):
        for col in range(dim):
            vec = [Fraction(0)] * dim
            vec[col] = Fraction(1)
            lhs = [a - b for a, b in zip(act(i, act(j, vec)), act(j, act(i, vec)))]
            rhs = [Fraction(0)] * dim
            for k, c in enumerate(alg.structure_vector(i, j)):
                cv = c.constant_value()
                if cv:
                    rhs = [r + cv * v for r, v in zip(rhs, act(k, vec))]
            if lhs != rhs:
                raise ValueError(
                    f"matrices do not represent the bracket on generators ({i}, {j})"
                )

    def basis_at(m):
        return [(T, t) for T in itertools.combinations(range(d), m) for t in range(dim)]

    def eval_cochain(table, args_idx, comp):
        if len(set(args_idx)) != len(args_idx):
            return Fraction(0)
        order = sorted(range(len(args_idx)), key=lambda s: args_idx[s])
        sign = _perm_sign(order)
        vec = table.get(tuple(sorted(args_idx)))
        return sign * vec[comp] if vec is not None else Fraction(0)

    labels = []
    diffs = []
    top = d
    bases = [basis_at(m) for m in range(top + 1)]
    for m in range(top):
        src, tgt = bases[m], bases[m + 1]
        index = {key: i for i, key in enumerate(tgt)}
        mat = SparseMatrixQ(len(tgt), len(src))
        for col, (T, t) in enumerate(src):
            vec = [Fraction(0)] * dim
            vec[t] = Fraction(1)
            table = {T: vec}
            for S in itertools.combinations(range(d), m + 1):
                out = [Fraction(0)] * dim
                for j in range(m + 1):
                    rest = S[:j] + S[j + 1:]
                    v = [eval_cochain(table, rest, comp) for comp in range(dim)]
                    if any(v):
                        av = act(S[j], v)
                        sgn = 1 if j % 2 == 0 else -1
                        out = [o + sgn * a for o, a in zip(out, av)]
                for j, l in itertools.combinations(range(m + 1), 2):
                    rest = [S[s] for s in range(m + 1) if s not in (j, l)]
                    for kk, c in enumerate(alg.structure_vector(S[j], S[l])):
                        cv = c.constant_value()
                        if not cv:
                            continue
                        v = [eval_cochain(table, [kk] + rest, comp) for comp in range(dim)]
                        sgn = 1 if (j + l) % 2 == 0 else -1
                        out = [o + sgn * cv * a for o, a in zip(out, v)]
                for comp, val in enumerate(out):
                    if val:
                        row = index[(S, comp)]
                        mat.set(row, col, mat.get(row, col) + val)
        diffs.append(mat)
    labels = [[f"{T}.{t}" for T, t in b] for b in bases]
    return cohomology_dims(ComplexSlice(labels, diffs, name="ce matrix module"))
