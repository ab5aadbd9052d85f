"""The graded Poisson algebra of symbols and its multivector cohomology.

Symbols live in Q[x_1..x_n, g_1..g_d] (ring variables then one symbol per
module generator).  Multivectors are stored in coordinates as finite maps
(sorted leg set) -> symbol coefficient; the differential is evaluated on
coordinate tuples, which determines a multiderivation completely.
"""
from __future__ import annotations

import itertools

from .lie_rinehart import LieRinehartAlgebra
from .linalg import ComplexSlice, SparseMatrixQ, cohomology_dims
from .poly import Polynomial

Legs = tuple[int, ...]


class SymAlgebra:
    """Poisson bracket on symbols, generated by the anchor and the bracket."""

    def __init__(self, alg: LieRinehartAlgebra):
        self.alg = alg
        self.n = len(alg.vars)
        self.d = alg.rank
        self.vars = alg.vars + alg.basis
        self.N = self.n + self.d
        self._table: dict[tuple[int, int], Polynomial] = {}
        for a in range(self.N):
            for b in range(a + 1, self.N):
                self._table[(a, b)] = self._generator_bracket(a, b)

    def lift(self, f: Polynomial) -> Polynomial:
        """Include a ring element into the symbol algebra."""
        out = Polynomial.zero(self.vars)
        for exp, c in f.terms.items():
            out = out + Polynomial.monomial(self.vars, exp + (0,) * self.d, c)
        return out

    def generator_symbol(self, k: int) -> Polynomial:
        return Polynomial.variable(self.vars, self.alg.basis[k])

    def coordinate(self, a: int) -> Polynomial:
        return Polynomial.variable(self.vars, self.vars[a])

    def poly(self, text: str) -> Polynomial:
        from .poly import parse_poly

        return parse_poly(self.vars, text)

    def element_symbol(self, x) -> Polynomial:
        out = Polynomial.zero(self.vars)
        for k, f in enumerate(x.coeffs):
            out = out + self.lift(f) * self.generator_symbol(k)
        return out

    def _generator_bracket(self, a: int, b: int) -> Polynomial:
        n = self.n
        if a < n and b < n:
            return Polynomial.zero(self.vars)
        if a < n <= b:
            # {x_a, g_i} = -rho(e_i)(x_a)
            return -self.lift(self.alg.anchor[b - n].images[a])
        i, j = a - n, b - n
        out = Polynomial.zero(self.vars)
        for k, c in enumerate(self.alg.structure_vector(i, j)):
            if not c.is_zero():
                out = out + self.lift(c) * self.generator_symbol(k)
        return out

    def coordinate_bracket(self, a: int, b: int) -> Polynomial:
        if a == b:
            return Polynomial.zero(self.vars)
        if a < b:
            return self._table[(a, b)]
        return -self._table[(b, a)]

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """Biderivation extension of the generator brackets."""
        out = Polynomial.zero(self.vars)
        fps = [f.partial(a) for a in range(self.N)]
        gps = [g.partial(b) for b in range(self.N)]
        for (a, b), coef in self._table.items():
            if coef.is_zero():
                continue
            term = fps[a] * gps[b] - fps[b] * gps[a]
            if not term.is_zero():
                out = out + coef * term
        return out

    # -- weights -------------------------------------------------------

    def weight_vector(self) -> tuple[int, ...]:
        alg = self.alg
        if alg.weights is None:
            raise ValueError("presentation has no declared weights")
        return tuple(alg.weights[v] for v in self.vars)

    def bracket_weight(self) -> int:
        return self.alg.bracket_weight()

    def monomials_of_weight(self, w: int) -> list[tuple[int, ...]]:
        vw = self.weight_vector()
        if any(x <= 0 for x in vw):
            raise ValueError("positive weights required to enumerate monomials")
        out = []

        def rec(i, left, acc):
            if i == self.N:
                if left == 0:
                    out.append(tuple(acc))
                return
            step = vw[i]
            for a in range(0, left // step + 1):
                rec(i + 1, left - a * step, acc + [a])

        if w >= 0:
            rec(0, w, [])
        return out


class Multivector:
    """Alternating multiderivation in coordinates: map (sorted legs) -> symbol."""

    __slots__ = ("parent", "degree", "terms")

    def __init__(self, parent: SymAlgebra, degree: int, terms: dict[Legs, Polynomial] | None = None):
        self.parent = parent
        self.degree = degree
        self.terms: dict[Legs, Polynomial] = {}
        if terms:
            for legs, c in terms.items():
                if c.is_zero():
                    continue
                if len(legs) != degree or list(legs) != sorted(set(legs)):
                    raise ValueError(f"bad leg set {legs} for degree {degree}")
                self.terms[tuple(legs)] = c

    @classmethod
    def function(cls, parent: SymAlgebra, f: Polynomial) -> "Multivector":
        return cls(parent, 0, {(): f})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Multivector") -> "Multivector":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        assert self.degree == other.degree
        out = dict(self.terms)
        for legs, c in other.terms.items():
            s = out.get(legs)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(legs, None)
            else:
                out[legs] = s
        m = Multivector(self.parent, self.degree)
        m.terms = out
        return m

    def __neg__(self):
        m = Multivector(self.parent, self.degree)
        m.terms = {l: -c for l, c in self.terms.items()}
        return m

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Multivector":
        m = Multivector(self.parent, self.degree)
        if isinstance(c, Polynomial):
            m.terms = {l: c * v for l, v in self.terms.items() if not (c * v).is_zero()}
        else:
            m.terms = {l: v.scale(c) for l, v in self.terms.items() if v.scale(c)}
        return m

    def __eq__(self, other):
        return (
            isinstance(other, Multivector)
            and self.parent is other.parent
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def evaluate(self, args: list[Polynomial]) -> Polynomial:
        """Value on symbol arguments (determinant of partials per leg set)."""
        P = self.parent
        if len(args) != self.degree:
            raise ValueError("wrong number of arguments")
        partials = [[arg.partial(a) for a in range(P.N)] for arg in args]
        out = Polynomial.zero(P.vars)
        for legs, c in self.terms.items():
            det = Polynomial.zero(P.vars)
            for perm in itertools.permutations(range(self.degree)):
                sign = _perm_sign(list(perm))
                term = Polynomial.const(P.vars, sign)
                for row, leg in enumerate(legs):
                    term = term * partials[perm[row]][leg]
                    if term.is_zero():
                        break
                det = det + term
            if not det.is_zero():
                out = out + c * det
        return out

    def coefficient(self, legs: Legs) -> Polynomial:
        return self.terms.get(tuple(legs), Polynomial.zero(self.parent.vars))

    def weight_of_term(self, legs: Legs, exp: tuple[int, ...]) -> int:
        vw = self.parent.weight_vector()
        return sum(e * w for e, w in zip(exp, vw)) - sum(vw[a] for a in legs)

    def __repr__(self):
        P = self.parent
        parts = []
        for legs, c in sorted(self.terms.items()):
            legstr = "^".join(f"d/d{P.vars[a]}" for a in legs) or "1"
            parts.append(f"({c})*{legstr}")
        return " + ".join(parts) if parts else "0"


def _perm_sign(order) -> int:
    sign = 1
    order = list(order)
    for i in range(len(order)):
        while order[i] != i:
            j = order[i]
            order[i], order[j] = order[j], order[i]
            sign = -sign
    return sign


def poisson_differential(D: Multivector) -> Multivector:
    """The degree +1 differential of the bracket, on coordinate tuples.

    Value on coordinates (gamma_1..gamma_{k+1}):
      sum_i (-1)^{i+1} {gamma_i, D(..hat i..)}
      + sum_{i<j} (-1)^{i+j} D({gamma_i, gamma_j}, ..hat i, hat j..).
    """
    P = D.parent
    k = D.degree
    out = Multivector(P, k + 1)
    terms: dict[Legs, Polynomial] = {}
    for legs in itertools.combinations(range(P.N), k + 1):
        total = Polynomial.zero(P.vars)
        for i in range(k + 1):
            rest = legs[:i] + legs[i + 1:]
            v = D.coefficient(rest)
            if not v.is_zero():
                term = P.bracket(P.coordinate(legs[i]), v)
                total = total + (term if i % 2 == 0 else -term)
        for i, j in itertools.combinations(range(k + 1), 2):
            br = P.coordinate_bracket(legs[i], legs[j])
            if br.is_zero():
                continue
            rest = [P.coordinate(legs[t]) for t in range(k + 1) if t not in (i, j)]
            term = D.evaluate([br] + rest)
            # one-based sign (-1)^{i+j}
            total = total + (term if (i + j) % 2 == 0 else -term)
        if not total.is_zero():
            terms[legs] = total
    out.terms = terms
    return out


# -- weight-sliced cohomology -------------------------------------------------


def _slice_basis(P: SymAlgebra, W: int, k: int) -> list[tuple[Legs, tuple[int, ...]]]:
    vw = P.weight_vector()
    wbr = P.bracket_weight()
    out = []
    for legs in itertools.combinations(range(P.N), k):
        need = W + k * wbr + sum(vw[a] for a in legs)
        for exp in P.monomials_of_weight(need):
            out.append((legs, exp))
    out.sort()
    return out


def _label(P: SymAlgebra, legs: Legs, exp: tuple[int, ...]) -> str:
    mono = "*".join(
        f"{v}^{e}" if e > 1 else v for v, e in zip(P.vars, exp) if e
    ) or "1"
    legstr = "^".join(f"d/d{P.vars[a]}" for a in legs) or "1"
    return f"{mono}|{legstr}"


def cochain_slice(P: SymAlgebra, W: int, max_position: int, name: str = "") -> ComplexSlice:
    """The weight-W multivector complex through cochain degree max_position."""
    bases = [_slice_basis(P, W, k) for k in range(max_position + 1)]
    labels = [[_label(P, legs, exp) for legs, exp in b] for b in bases]
    diffs = []
    for k in range(max_position):
        index = {key: i for i, key in enumerate(bases[k + 1])}
        m = SparseMatrixQ(len(bases[k + 1]), len(bases[k]))
        for col, (legs, exp) in enumerate(bases[k]):
            D = Multivector(P, k, {legs: Polynomial.monomial(P.vars, exp, 1)})
            dD = poisson_differential(D)
            for tlegs, c in dD.terms.items():
                for texp, coeff in c.terms.items():
                    row = index.get((tlegs, texp))
                    if row is None:
                        raise AssertionError(
                            "differential left the weight slice; grading is broken"
                        )
                    m.set(row, col, m.get(row, col) + coeff)
        diffs.append(m)
    return ComplexSlice(labels, diffs, name=name or f"poisson-cochain W={W}")


def poisson_cohomology(
    alg: LieRinehartAlgebra, max_weight: int, max_degree: int
) -> dict[tuple[int, int], int]:
    """Exact Poisson cohomology dimensions per (weight, cochain degree).

    Requires declared positive weights (the weight-zero directions of the
    line arrangements are handled by the Euler contraction instead).
    """
    P = SymAlgebra(alg)
    vw = P.weight_vector()
    if any(w <= 0 for w in vw):
        raise ValueError(
            "poisson_cohomology needs positive weights on every variable; "
            "use euler_contraction_check / capped_casimir_search instead"
        )
    wbr = P.bracket_weight()
    top = min(max_degree + 1, P.N)
    weights = set()
    for k in range(top + 1):
        for legs in itertools.combinations(range(P.N), k):
            base = -k * wbr - sum(vw[a] for a in legs)
            # monomial weight w >= 0 gives slice weight base + w
            for W in range(base, max_weight + 1):
                weights.add(W)
    table: dict[tuple[int, int], int] = {}
    for W in sorted(weights):
        slice_ = cochain_slice(P, W, top)
        dims = cohomology_dims(slice_)
        for k in range(min(max_degree, len(dims) - 1) + 1):
            if k == top and top < P.N:
                continue  # truncated position, kernel not meaningful
            table[(W, k)] = dims[k]
    return table


# -- nonlinear tuples ---------------------------------------------------------

LArg = tuple[tuple[int, ...], int]  # (ring monomial exponent, generator index)


class NonlinearRejection(ValueError):
    pass


class NonlinearTuple:
    """Tables phi_i on ((p-i) monomial*generator arguments, i ring variables).

    Values are the multivector evaluated there; consecutive tables are tied
    by the multiderivation expansion of a coefficient-bearing argument, which
    nonlinear_to_mv verifies entry by entry.
    """

    def __init__(self, parent: SymAlgebra, degree: int, cap: int,
                 tables: list[dict[tuple[tuple[LArg, ...], tuple[int, ...]], Polynomial]]):
        self.parent = parent
        self.degree = degree
        self.cap = cap
        self.tables = tables

    def value(self, i: int, largs: tuple[LArg, ...], rargs: tuple[int, ...]) -> Polynomial:
        return self.tables[i].get((largs, rargs), Polynomial.zero(self.parent.vars))


def _larg_symbol(P: SymAlgebra, arg: LArg) -> Polynomial:
    exp, a = arg
    return Polynomial.monomial(P.vars, tuple(exp) + (0,) * P.d, 1) * P.generator_symbol(a)


def _largs_universe(P: SymAlgebra, cap: int) -> list[LArg]:
    monos = []

    def rec(i, left, acc):
        if i == P.n:
            monos.append(tuple(acc))
            return
        for e in range(0, left + 1):
            rec(i + 1, left - e, acc + [e])

    rec(0, cap, [])
    return [(m, a) for a in range(P.d) for m in sorted(monos)]


def mv_to_nonlinear(D: Multivector, cap: int = 2) -> NonlinearTuple:
    """Tabulate the multivector on mixed generator tuples up to the cap."""
    P = D.parent
    p = D.degree
    universe = _largs_universe(P, cap)
    tables = []
    for i in range(p + 1):
        table = {}
        for largs in itertools.combinations(universe, p - i):
            for rargs in itertools.combinations(range(P.n), i):
                args = [_larg_symbol(P, a) for a in largs]
                args += [P.coordinate(u) for u in rargs]
                v = D.evaluate(args)
                if not v.is_zero():
                    table[(tuple(largs), tuple(rargs))] = v
        tables.append(table)
    return NonlinearTuple(P, p, cap, tables)


def nonlinear_to_mv(t: NonlinearTuple) -> Multivector:
    """Rebuild the multivector from the pure-generator entries, then check
    every table entry against it; a single perturbed entry is rejected."""
    P = t.parent
    p = t.degree
    zero_mono = (0,) * P.n
    terms: dict[Legs, Polynomial] = {}
    for i in range(p + 1):
        for gens in itertools.combinations(range(P.d), p - i):
            for rargs in itertools.combinations(range(P.n), i):
                largs = tuple((zero_mono, a) for a in gens)
                v = t.value(i, largs, rargs)
                if v.is_zero():
                    continue
                # arguments are (generators.., variables..); sorted coordinate
                # order puts the variables first
                legs = tuple(sorted(rargs)) + tuple(P.n + a for a in gens)
                sign = 1 if (i * (p - i)) % 2 == 0 else -1
                key = tuple(sorted(legs))
                cur = terms.get(key, Polynomial.zero(P.vars))
                terms[key] = cur + v.scale(sign)
    D = Multivector(P, p, terms)
    for i in range(p + 1):
        for (largs, rargs), v in t.tables[i].items():
            args = [_larg_symbol(P, a) for a in largs] + [P.coordinate(u) for u in rargs]
            if D.evaluate(args) != v:
                raise NonlinearRejection(
                    f"table entry phi_{i}{largs}{rargs} is incompatible with the "
                    "multiderivation expansion of its neighbours"
                )
    return D
