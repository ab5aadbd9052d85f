"""Kahler forms on the symbol algebra, the Poisson boundary, cyclic theory,
the duality cap, and the Euler contraction used for weight-zero directions."""
from __future__ import annotations

import itertools

from .lie_rinehart import LieRinehartAlgebra
from .linalg import ComplexSlice, SparseMatrixQ, cohomology_dims, kernel_and_rank
from .poisson import Legs, Multivector, SymAlgebra, poisson_differential
from .poly import Polynomial


class KahlerForm:
    """Differential form: finite map (sorted d-gamma leg set) -> symbol."""

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
    def function(cls, parent: SymAlgebra, f: Polynomial) -> "KahlerForm":
        return cls(parent, 0, {(): f})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
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
        w = KahlerForm(self.parent, self.degree)
        w.terms = out
        return w

    def __neg__(self):
        w = KahlerForm(self.parent, self.degree)
        w.terms = {l: -c for l, c in self.terms.items()}
        return w

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        w = KahlerForm(self.parent, self.degree)
        for l, v in self.terms.items():
            s = c * v if isinstance(c, Polynomial) else v.scale(c)
            if not s.is_zero():
                w.terms[l] = s
        return w

    def __eq__(self, other):
        return (
            isinstance(other, KahlerForm)
            and self.parent is other.parent
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __repr__(self):
        P = self.parent
        parts = []
        for legs, c in sorted(self.terms.items()):
            legstr = "^".join(f"d{P.vars[a]}" for a in legs) or "1"
            parts.append(f"({c})*{legstr}")
        return " + ".join(parts) if parts else "0"


def kahler_d(w: KahlerForm) -> KahlerForm:
    """Exterior derivative."""
    P = w.parent
    out = KahlerForm(P, w.degree + 1)
    acc: dict[Legs, Polynomial] = {}
    for legs, c in w.terms.items():
        for a in range(P.N):
            if a in legs:
                continue
            dc = c.partial(a)
            if dc.is_zero():
                continue
            pos = sum(1 for l in legs if l < a)
            new = tuple(sorted(legs + (a,)))
            sign = 1 if pos % 2 == 0 else -1
            cur = acc.get(new, Polynomial.zero(P.vars))
            s = cur + (dc if sign == 1 else -dc)
            if s.is_zero():
                acc.pop(new, None)
            else:
                acc[new] = s
    out.terms = acc
    return out


def interior(a: int, w: KahlerForm) -> KahlerForm:
    """Interior product with the coordinate vector field of index a."""
    P = w.parent
    out = KahlerForm(P, w.degree - 1) if w.degree else KahlerForm(P, 0)
    if w.degree == 0:
        return KahlerForm(P, 0)
    acc: dict[Legs, Polynomial] = {}
    for legs, c in w.terms.items():
        if a not in legs:
            continue
        t = legs.index(a)
        new = legs[:t] + legs[t + 1:]
        sign = 1 if t % 2 == 0 else -1
        cur = acc.get(new, Polynomial.zero(P.vars))
        s = cur + (c if sign == 1 else -c)
        if s.is_zero():
            acc.pop(new, None)
        else:
            acc[new] = s
    out.terms = acc
    return out


def contract_bivector(w: KahlerForm) -> KahlerForm:
    """Contraction with the structure bivector: sum_{a<b} {g_a, g_b} i_a i_b.

    The two interior products are applied innermost-leg-first (i_a after i_b).
    """
    P = w.parent
    if w.degree < 2:
        return KahlerForm(P, max(w.degree - 2, 0))
    out = KahlerForm(P, w.degree - 2)
    for (a, b), coef in P._table.items():
        if coef.is_zero():
            continue
        piece = interior(a, interior(b, w)).scale(coef)
        if not piece.is_zero():
            out = out + piece
    return out


def poisson_boundary(w: KahlerForm) -> KahlerForm:
    """The degree -1 boundary: commutator of contraction and d."""
    P = w.parent
    if w.degree == 0:
        return KahlerForm(P, 0)
    if w.degree == 1:
        return contract_bivector(kahler_d(w))
    return contract_bivector(kahler_d(w)) - kahler_d(contract_bivector(w))


# -- weight slices -----------------------------------------------------------


def _form_basis(P: SymAlgebra, lam: int, k: int, jweight: int = 0) -> list[tuple[Legs, tuple[int, ...]]]:
    """Forms of homological degree k in the slice lam (offset by u-columns)."""
    vw = P.weight_vector()
    wbr = P.bracket_weight()
    out = []
    if not 0 <= k <= P.N:
        return out
    for legs in itertools.combinations(range(P.N), k):
        need = lam - (k + jweight) * wbr - sum(vw[a] for a in legs)
        for exp in P.monomials_of_weight(need):
            out.append((legs, exp))
    out.sort()
    return out


def _form_label(P: SymAlgebra, legs: Legs, exp) -> str:
    mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(P.vars, exp) if e) or "1"
    legstr = "^".join(f"d{P.vars[a]}" for a in legs) or "1"
    return f"{mono}|{legstr}"


def homology_slice(P: SymAlgebra, lam: int) -> ComplexSlice:
    """The boundary complex of slice lam as a cochain slice (positions are
    N - homological degree)."""
    bases = [_form_basis(P, lam, P.N - p) for p in range(P.N + 1)]
    labels = [[_form_label(P, legs, exp) for legs, exp in b] for b in bases]
    diffs = []
    for p in range(P.N):
        src, tgt = bases[p], bases[p + 1]
        index = {key: i for i, key in enumerate(tgt)}
        m = SparseMatrixQ(len(tgt), len(src))
        for col, (legs, exp) in enumerate(src):
            w = KahlerForm(P, len(legs), {legs: Polynomial.monomial(P.vars, exp, 1)})
            bw = poisson_boundary(w)
            for tlegs, c in bw.terms.items():
                for texp, coeff in c.terms.items():
                    row = index.get((tlegs, texp))
                    if row is None:
                        raise AssertionError("boundary left the weight slice")
                    m.set(row, col, m.get(row, col) + coeff)
        diffs.append(m)
    return ComplexSlice(labels, diffs, name=f"poisson-chain L={lam}")


def poisson_homology(alg: LieRinehartAlgebra, max_weight: int) -> dict[tuple[int, int], int]:
    """Exact boundary homology per (slice weight, homological degree)."""
    P = SymAlgebra(alg)
    vw = P.weight_vector()
    if any(w <= 0 for w in vw):
        raise ValueError("poisson_homology needs positive weights")
    wbr = P.bracket_weight()
    lams = set()
    for k in range(P.N + 1):
        for legs in itertools.combinations(range(P.N), k):
            base = sum(vw[a] for a in legs)
            for wt in range(base, max_weight + 1):
                lams.add(wt + k * wbr)
    table: dict[tuple[int, int], int] = {}
    for lam in sorted(lams):
        dims = cohomology_dims(homology_slice(P, lam))
        for p, dim in enumerate(dims):
            k = P.N - p
            table[(lam, k)] = table.get((lam, k), 0) + dim
    return table


def homology_totals(table: dict[tuple[int, int], int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for (_, k), dim in table.items():
        out[k] = out.get(k, 0) + dim
    return out


# -- cyclic -------------------------------------------------------------------


def cyclic_slice(P: SymAlgebra, lam: int, u_cap: int, t_max: int) -> ComplexSlice:
    """Total complex of the u-truncated mixed complex in slice lam.

    Objects at total degree t are pairs (form of degree t - 2j, column j),
    differential (w, j) -> (boundary w, j) + (d w, j - 1).
    """
    def basis_at(t):
        out = []
        for j in range(0, u_cap + 1):
            k = t - 2 * j
            for legs, exp in _form_basis(P, lam, k, jweight=j):
                out.append((j, legs, exp))
        return sorted(out)

    bases = [basis_at(t_max - p) for p in range(t_max + 1)]
    labels = [
        [f"u^{j}*{_form_label(P, legs, exp)}" for j, legs, exp in b] for b in bases
    ]
    diffs = []
    for p in range(t_max):
        src, tgt = bases[p], bases[p + 1]
        index = {key: i for i, key in enumerate(tgt)}
        m = SparseMatrixQ(len(tgt), len(src))
        for col, (j, legs, exp) in enumerate(src):
            w = KahlerForm(P, len(legs), {legs: Polynomial.monomial(P.vars, exp, 1)})
            for jj, piece in ((j, poisson_boundary(w)), (j - 1, kahler_d(w))):
                if jj < 0:
                    continue
                for tlegs, c in piece.terms.items():
                    for texp, coeff in c.terms.items():
                        row = index.get((jj, tlegs, texp))
                        if row is None:
                            raise AssertionError("mixed differential left the slice")
                        m.set(row, col, m.get(row, col) + coeff)
        diffs.append(m)
    return ComplexSlice(labels, diffs, name=f"cyclic L={lam} cap={u_cap}")


def cyclic_homology(
    alg: LieRinehartAlgebra, max_weight: int, u_cap: int
) -> tuple[dict[tuple[int, int], int], bool]:
    """Cyclic dimensions per (slice weight, total degree) plus a flag that the
    truncation column made no difference against u_cap - 1."""
    P = SymAlgebra(alg)
    vw = P.weight_vector()
    if any(w <= 0 for w in vw):
        raise ValueError("cyclic_homology needs positive weights")
    if u_cap < 2:
        raise ValueError("u_cap must be at least 2 to detect stabilization")
    wbr = P.bracket_weight()

    def run(cap):
        # slices carry all columns j <= cap; degrees above the complete range
        # t <= N + 2cap - 2 are truncation edge and not reported
        t_top = P.N + 2 * cap
        report = P.N + 2 * cap - 2
        lams = set()
        for j in range(cap + 1):
            for k in range(P.N + 1):
                for legs in itertools.combinations(range(P.N), k):
                    base = sum(vw[a] for a in legs)
                    for wt in range(base, max_weight + 1):
                        lams.add(wt + (k + j) * wbr)
        table: dict[tuple[int, int], int] = {}
        for lam in sorted(lams):
            dims = cohomology_dims(cyclic_slice(P, lam, cap, t_top))
            for p, dim in enumerate(dims):
                t = t_top - p
                if dim and t <= report:
                    table[(lam, t)] = table.get((lam, t), 0) + dim
        return table, report

    full, full_report = run(u_cap)
    smaller, small_report = run(u_cap - 1)
    stabilized = all(
        full.get((lam, t), 0) == smaller.get((lam, t), 0)
        for lam, t in set(full) | set(smaller)
        if t <= small_report
    )
    return full, stabilized


# -- duality cap ---------------------------------------------------------------


def duality_cap(D: Multivector) -> KahlerForm:
    """Contract a multivector into the coordinate top form.

    Interior products are applied right to left along each leg set; the image
    of the leg set S is +/- the complementary form.
    """
    P = D.parent
    out = KahlerForm(P, P.N - D.degree)
    top_legs = tuple(range(P.N))
    for legs, c in D.terms.items():
        w = KahlerForm(P, P.N, {top_legs: c})
        for a in reversed(legs):
            w = interior(a, w)
        out = out + KahlerForm(P, P.N - D.degree, w.terms)
    return out


def duality_cap_rank_check(alg: LieRinehartAlgebra, weight: int, degree: int) -> tuple[int, int]:
    """(rank, dimension) of the cap on one cochain weight slice."""
    from .poisson import _slice_basis

    P = SymAlgebra(alg)
    basis = _slice_basis(P, weight, degree)
    targets: dict[tuple[Legs, tuple[int, ...]], int] = {}
    cols = []
    for legs, exp in basis:
        D = Multivector(P, degree, {legs: Polynomial.monomial(P.vars, exp, 1)})
        w = duality_cap(D)
        col = []
        for tlegs, c in w.terms.items():
            for texp, coeff in c.terms.items():
                idx = targets.setdefault((tlegs, texp), len(targets))
                col.append((idx, coeff))
        cols.append(col)
    m = SparseMatrixQ(len(targets), len(basis))
    for j, col in enumerate(cols):
        for i, v in col:
            m.set(i, j, m.get(i, j) + v)
    _, rk = kernel_and_rank(m)
    return rk, len(basis)


# -- Euler contraction ----------------------------------------------------------


class EulerReport:
    def __init__(self, ok: bool, failures: list[str], checked: int):
        self.ok = ok
        self.failures = failures
        self.checked = checked

    def __bool__(self):
        return self.ok


def euler_insertion(D: Multivector, euler: Polynomial) -> Multivector:
    """Insert the Euler element into the first slot of a multivector."""
    P = D.parent
    if D.degree == 0:
        return Multivector(P, 0)
    out = Multivector(P, D.degree - 1)
    acc: dict[Legs, Polynomial] = {}
    for legs in itertools.combinations(range(P.N), D.degree - 1):
        args = [euler] + [P.coordinate(a) for a in legs]
        v = D.evaluate(args)
        if not v.is_zero():
            acc[legs] = v
    out.terms = acc
    return out


def _euler_eigenweights(P: SymAlgebra, euler: Polynomial):
    """Eigenvalues of {euler, -} on the coordinates; the element must act
    diagonally for the contraction identity to make sense."""
    out = []
    for a in range(P.N):
        b = P.bracket(euler, P.coordinate(a))
        if b.is_zero():
            out.append(0)
            continue
        coords = P.coordinate(a)
        exp = next(iter(coords.terms))
        if set(b.terms) != {exp}:
            raise ValueError(
                f"{{euler, {P.vars[a]}}} = {b} is not a multiple of {P.vars[a]}"
            )
        out.append(b.terms[exp])
    return out


def euler_contraction_check(
    alg: LieRinehartAlgebra,
    euler: str | Polynomial,
    max_weight: int,
    max_degree: int,
    euler_degree_cap: int = 2,
) -> EulerReport:
    """Check that inserting the Euler element splits the differential:
    delta(s0 D) + s0(delta D) = weight(D) * D on every basis multivector.

    The weight of a term is taken in the grading generated by the Euler
    element itself; for the arrangement presets that is the declared one.
    """
    P = SymAlgebra(alg)
    vw = P.weight_vector()
    if isinstance(euler, str):
        euler = P.poly(euler)
    eigws = _euler_eigenweights(P, euler)
    failures = []
    checked = 0

    def monomials(budget: int):
        """Exponents with positive-weight part <= budget, weight-zero part
        capped by exponent."""
        out = [()]
        for i in range(P.N):
            new = []
            for acc in out:
                used = sum(e * w for e, w in zip(acc, vw))
                if vw[i] == 0:
                    cap = euler_degree_cap
                else:
                    cap = (budget - used) // vw[i]
                for e in range(cap + 1):
                    new.append(acc + (e,))
            out = new
        return out

    for k in range(0, min(max_degree, P.N) + 1):
        for legs in itertools.combinations(range(P.N), k):
            legw = sum(vw[a] for a in legs)
            for exp in monomials(max_weight + legw):
                wt = sum(e * w for e, w in zip(exp, vw)) - legw
                if wt > max_weight or wt < -max_weight:
                    continue
                eig = sum(e * w for e, w in zip(exp, eigws)) - sum(eigws[a] for a in legs)
                D = Multivector(P, k, {legs: Polynomial.monomial(P.vars, exp, 1)})
                lhs = poisson_differential(euler_insertion(D, euler)) + euler_insertion(
                    poisson_differential(D), euler
                )
                rhs = D.scale(eig)
                if not (lhs - rhs).is_zero():
                    failures.append(
                        f"anticommutator is not weight*id on {_form_label(P, legs, exp)} "
                        f"(weight {eig})"
                    )
                    if len(failures) >= 3:
                        return EulerReport(False, failures, checked)
                checked += 1
    return EulerReport(not failures, failures, checked)


def capped_casimir_search(
    alg: LieRinehartAlgebra,
    max_weight: int,
    euler_degree_cap: int = 4,
) -> list[Polynomial]:
    """Exact kernel of the differential on functions, within the caps.

    Weight-zero variables (the Euler direction) are capped separately by
    exponent; everything else by weight.
    """
    P = SymAlgebra(alg)
    vw = P.weight_vector()
    monos: list[tuple[int, ...]] = []

    def rec(i, wleft, acc):
        if i == P.N:
            monos.append(tuple(acc))
            return
        if vw[i] == 0:
            for e in range(euler_degree_cap + 1):
                rec(i + 1, wleft, acc + [e])
        elif vw[i] > 0:
            for e in range(wleft // vw[i] + 1):
                rec(i + 1, wleft - e * vw[i], acc + [e])
        else:
            raise ValueError("negative weights are not supported")

    rec(0, max_weight, [])
    monos.sort()
    targets: dict[tuple[Legs, tuple[int, ...]], int] = {}
    cols = []
    for exp in monos:
        D = Multivector.function(P, Polynomial.monomial(P.vars, exp, 1))
        dD = poisson_differential(D)
        col = []
        for legs, c in dD.terms.items():
            for texp, coeff in c.terms.items():
                idx = targets.setdefault((legs, texp), len(targets))
                col.append((idx, coeff))
        cols.append(col)
    m = SparseMatrixQ(len(targets), len(monos))
    for j, col in enumerate(cols):
        for i, v in col:
            m.set(i, j, m.get(i, j) + v)
    kernel, _ = kernel_and_rank(m)
    out = []
    for vec in kernel:
        p = Polynomial.zero(P.vars)
        for j, c in enumerate(vec):
            if c:
                p = p + Polynomial.monomial(P.vars, monos[j], c)
        out.append(p)
    return out
