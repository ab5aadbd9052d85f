"""Exact sparse linear algebra over Q and finite graded complex slices."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class NotAComplexError(ValueError):
    """A slice whose consecutive differentials fail to compose to zero."""

    def __init__(self, position: int):
        self.position = position
        super().__init__(f"d_{position + 1} o d_{position} != 0")


class SparseMatrixQ:
    """Sparse exact matrix: finite map (row, col) -> nonzero Fraction."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (i, j), c in entries.items():
                self.set(i, j, c)

    def set(self, i: int, j: int, c):
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))
        c = Fraction(c)
        if c:
            self.entries[(i, j)] = c
        else:
            self.entries.pop((i, j), None)

    def get(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def rows(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.nrows)]
        for (i, j), c in self.entries.items():
            out[i][j] = c
        return out

    def matmul(self, other: "SparseMatrixQ") -> "SparseMatrixQ":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols_of_other: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), c in other.entries.items():
            cols_of_other.setdefault(i, []).append((j, c))
        out = SparseMatrixQ(self.nrows, other.ncols)
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), c in self.entries.items():
            for j, d in cols_of_other.get(k, ()):
                key = (i, j)
                s = acc.get(key, Fraction(0)) + c * d
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        out.entries = acc
        return out

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.nrows
        for (i, j), c in self.entries.items():
            if vec[j]:
                out[i] += c * vec[j]
        return out

    def __repr__(self):
        return f"SparseMatrixQ({self.nrows}x{self.ncols}, {len(self.entries)} entries)"


def _rref(m: SparseMatrixQ) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns).

    Pivot choice per column: smallest |numerator|, then smallest denominator,
    then lowest row index; keeps entries small and the output deterministic.
    """
    rows = [r for r in m.rows() if r]
    pivots: list[int] = []
    reduced: list[dict[int, Fraction]] = []
    for col in range(m.ncols):
        candidates = [(abs(r[col].numerator), r[col].denominator, idx)
                      for idx, r in enumerate(rows) if col in r]
        if not candidates:
            continue
        _, _, best = min(candidates)
        pivot_row = rows.pop(best)
        inv = 1 / pivot_row[col]
        pivot_row = {j: c * inv for j, c in pivot_row.items()}
        for target in (rows, reduced):
            for idx, r in enumerate(target):
                if col in r:
                    f = r[col]
                    newr = dict(r)
                    for j, c in pivot_row.items():
                        s = newr.get(j, Fraction(0)) - f * c
                        if s:
                            newr[j] = s
                        else:
                            newr.pop(j, None)
                    target[idx] = newr
        rows = [r for r in rows if r]
        reduced.append(pivot_row)
        pivots.append(col)
        if not rows:
            break
    return reduced, pivots


def kernel_and_rank(m: SparseMatrixQ) -> tuple[list[list[Fraction]], int]:
    """Exact kernel basis (one vector per free column) and the rank."""
    reduced, pivots = _rref(m)
    rank = len(pivots)
    pivot_set = set(pivots)
    pivot_of_row = {col: row for row, col in enumerate(pivots)}
    basis: list[list[Fraction]] = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * m.ncols
        vec[free] = Fraction(1)
        for col in pivots:
            r = reduced[pivot_of_row[col]]
            if free in r:
                vec[col] = -r[free]
        basis.append(vec)
    return basis, rank


def rank(m: SparseMatrixQ) -> int:
    return kernel_and_rank(m)[1]


def solve(m: SparseMatrixQ, rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of m x = rhs, or None if inconsistent."""
    aug = SparseMatrixQ(m.nrows, m.ncols + 1)
    aug.entries = dict(m.entries)
    for i, c in enumerate(rhs):
        if c:
            aug.entries[(i, m.ncols)] = Fraction(c)
    reduced, pivots = _rref(aug)
    sol = [Fraction(0)] * m.ncols
    for row, col in zip(reduced, pivots):
        if col == m.ncols:
            return None
        sol[col] = row.get(m.ncols, Fraction(0))
    return sol


class ComplexSlice:
    """A finite weight-homogeneous piece of a cochain complex.

    Position k carries an ordered basis-label list; differentials map
    position k to k+1 (columns indexed by the source basis).
    """

    def __init__(self, labels: list[list[str]], diffs: list[SparseMatrixQ], name: str = ""):
        if len(diffs) != max(len(labels) - 1, 0):
            raise ValueError("need one differential per adjacent pair of positions")
        for k, d in enumerate(diffs):
            if d.ncols != len(labels[k]) or d.nrows != len(labels[k + 1]):
                raise ValueError(f"differential {k} has wrong shape")
        self.labels = labels
        self.diffs = diffs
        self.name = name

    def check_complex(self):
        for k in range(len(self.diffs) - 1):
            if not self.diffs[k + 1].matmul(self.diffs[k]).is_zero():
                raise NotAComplexError(k)

    def dimensions(self) -> list[int]:
        return [len(lbl) for lbl in self.labels]


def cohomology_dims(slice: ComplexSlice) -> list[int]:
    """dim H^k = dim ker(d_k) - rank(d_{k-1}) for every position of the slice."""
    slice.check_complex()
    n = len(slice.labels)
    out = []
    prev_rank = 0
    for k in range(n):
        dim_k = len(slice.labels[k])
        if k < len(slice.diffs):
            _, rk = kernel_and_rank(slice.diffs[k])
            ker_dim = dim_k - rk
        else:
            ker_dim = dim_k
            rk = 0
        out.append(ker_dim - prev_rank)
        prev_rank = rk
    return out
