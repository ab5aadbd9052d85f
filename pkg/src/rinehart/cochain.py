"""Cochains on the base ring with enveloping-algebra values.

C^q(R, U) is infinite dimensional, but every identity we verify is pointwise,
so a cochain is just a kernel evaluable on q-tuples of ring monomials plus a
degree cap; polynomial arguments expand multilinearly.  Table-backed cochains
raise CapExceededError instead of silently truncating.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .lie_rinehart import LElement
from .poly import Polynomial, PolyDerivation
from .uea import EnvelopingAlgebra, UEAElement

Mono = tuple[int, ...]


class CapExceededError(RuntimeError):
    """An operator needed a cochain value beyond the stored degree cap."""


class TableCochain:
    """Arity-q cochain with values in the enveloping algebra."""

    def __init__(self, U: EnvelopingAlgebra, arity: int, kernel, cap: int | None = None,
                 label: str = ""):
        self.U = U
        self.arity = arity
        self.kernel = kernel
        self.cap = cap
        self.label = label

    @classmethod
    def constant(cls, U: EnvelopingAlgebra, value: UEAElement) -> "TableCochain":
        return cls(U, 0, lambda exps: value, cap=None, label="const")

    @classmethod
    def from_table(cls, U: EnvelopingAlgebra, arity: int,
                   table: dict[tuple[Mono, ...], UEAElement], cap: int) -> "TableCochain":
        def kernel(exps):
            if sum(sum(e) for e in exps) > cap:
                raise CapExceededError(
                    f"monomial tuple {exps} exceeds the table cap {cap}"
                )
            return table.get(exps, U.zero())

        return cls(U, arity, kernel, cap=cap, label="table")

    def eval_monos(self, exps: tuple[Mono, ...]) -> UEAElement:
        if len(exps) != self.arity:
            raise ValueError(f"arity {self.arity} cochain got {len(exps)} arguments")
        return self.kernel(exps)

    def __call__(self, *args: Polynomial) -> UEAElement:
        """Multilinear evaluation on polynomial arguments."""
        if len(args) != self.arity:
            raise ValueError(f"arity {self.arity} cochain got {len(args)} arguments")
        out = self.U.zero()
        for combo in itertools.product(*(list(a.terms.items()) for a in args)):
            exps = tuple(t[0] for t in combo)
            coeff = Fraction(1)
            for t in combo:
                coeff *= t[1]
            out = out + self.eval_monos(exps).scale(coeff)
        return out


def monomial_tuples(nvars: int, arity: int, total_degree: int):
    """All arity-tuples of monomial exponents with total degree <= bound."""
    monos = []

    def rec(i, left, acc):
        if i == nvars:
            monos.append(tuple(acc))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, acc + [e])

    rec(0, total_degree, [])
    out = []
    for combo in itertools.product(monos, repeat=arity):
        if sum(sum(e) for e in combo) <= total_degree:
            out.append(combo)
    return out


def cochain_equal(a: TableCochain, b: TableCochain, probe_degree: int = 3) -> bool:
    """Pointwise equality on every monomial tuple within the probe degree."""
    if a.arity != b.arity:
        return False
    if a.arity < 0:
        return True
    n = len(a.U.alg.vars)
    for exps in monomial_tuples(n, a.arity, probe_degree):
        if a.eval_monos(exps) != b.eval_monos(exps):
            return False
    return True


# -- operators ---------------------------------------------------------------


def hochschild_b(phi: TableCochain) -> TableCochain:
    """The arity-raising differential (ring arguments, algebra values)."""
    U = phi.U
    q = phi.arity
    if q < 0:
        return zero_cochain(U, q + 1)

    def kernel(exps):
        mono = lambda e: Polynomial.monomial(U.alg.vars, e, 1)
        out = U.scalar(mono(exps[0])) * phi.eval_monos(exps[1:])
        for i in range(q):
            merged = exps[:i] + (tuple(x + y for x, y in zip(exps[i], exps[i + 1])),) + exps[i + 2:]
            term = phi.eval_monos(merged)
            out = out + (term if i % 2 == 1 else -term)
        last = phi.eval_monos(exps[:-1]) * U.scalar(mono(exps[-1]))
        out = out + (last if q % 2 == 1 else -last)
        return out

    return TableCochain(U, q + 1, kernel, cap=phi.cap, label=f"b({phi.label})")


def r_action(f: Polynomial, phi: TableCochain) -> TableCochain:
    U = phi.U
    return TableCochain(
        U, phi.arity,
        lambda exps: U.scalar(f) * phi.eval_monos(exps),
        cap=phi.cap, label=f"r.{phi.label}",
    )


def lie_action(X: LElement, phi: TableCochain) -> TableCochain:
    """Commutator with the module element minus the anchor on the arguments."""
    U = phi.U
    q = phi.arity
    rho = X.anchor_derivation()
    iX = U.include(X)

    def kernel(exps):
        mono = lambda e: Polynomial.monomial(U.alg.vars, e, 1)
        val = phi.eval_monos(exps)
        out = iX * val - val * iX
        for i in range(q):
            moved = rho(mono(exps[i]))
            if moved.is_zero():
                continue
            args = [mono(e) for e in exps]
            args[i] = moved
            out = out - phi(*args)
        return out

    return TableCochain(U, q, kernel, cap=phi.cap, label=f"L({phi.label})")


def homotopy(r: Polynomial, X: LElement, phi: TableCochain) -> TableCochain:
    """The arity-lowering homotopy tying the two module structures.

    Insert r at position i with sign (-1)^{i+1}, right-multiplied by X; plus
    the insert-and-act sum where the anchor hits an original argument at or
    after the insertion point, same sign.
    """
    U = phi.U
    q = phi.arity
    if q == 0:
        # maps into arity -1, which is zero; kept as a formal zero so that
        # b(h(phi)) lands in arity 0 again
        return zero_cochain(U, -1)
    rho = X.anchor_derivation()
    iX = U.include(X)

    def kernel(exps):
        mono = lambda e: Polynomial.monomial(U.alg.vars, e, 1)
        args = [mono(e) for e in exps]
        out = U.zero()
        for i in range(1, q + 1):
            inserted = args[: i - 1] + [r] + args[i - 1:]
            term = phi(*inserted) * iX
            out = out + (term if i % 2 == 1 else -term)
        for i in range(1, q):
            for j in range(i, q):
                # act on original argument j, which sits one slot right of r
                acted = args[: i - 1] + [r] + args[i - 1:]
                acted[j] = rho(args[j - 1])
                term = phi(*acted)
                out = out + (term if i % 2 == 1 else -term)
        return out

    return TableCochain(U, q - 1, kernel, cap=phi.cap, label=f"h({phi.label})")


def cup_derivation(D: PolyDerivation, phi: TableCochain) -> TableCochain:
    """Prepend a derivation argument: (D u phi)(r0, ..) = D(r0) * phi(..)."""
    U = phi.U

    def kernel(exps):
        mono = Polynomial.monomial(U.alg.vars, exps[0], 1)
        head = D(mono)
        if head.is_zero():
            return U.zero()
        return U.scalar(head) * phi.eval_monos(exps[1:])

    return TableCochain(U, phi.arity + 1, kernel, cap=phi.cap, label=f"cup({phi.label})")


def left_multiply(u: UEAElement, phi: TableCochain) -> TableCochain:
    U = phi.U
    return TableCochain(
        U, phi.arity, lambda exps: u * phi.eval_monos(exps),
        cap=phi.cap, label=f"mul.{phi.label}",
    )


def add(*cochains: TableCochain) -> TableCochain:
    U = cochains[0].U
    arity = cochains[0].arity
    assert all(c.arity == arity for c in cochains)

    def kernel(exps):
        out = U.zero()
        for c in cochains:
            out = out + c.eval_monos(exps)
        return out

    return TableCochain(U, arity, kernel, label="sum")


def scale(c, phi: TableCochain) -> TableCochain:
    return TableCochain(
        phi.U, phi.arity, lambda exps: phi.eval_monos(exps).scale(c),
        cap=phi.cap, label=f"scale.{phi.label}",
    )


def zero_cochain(U: EnvelopingAlgebra, arity: int) -> TableCochain:
    return TableCochain(U, arity, lambda exps: U.zero(), label="0")
