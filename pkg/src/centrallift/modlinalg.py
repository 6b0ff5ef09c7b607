"""Exact linear algebra over Z and Z/m.

Smith normal form with unimodular transforms, and complete solution sets
of M*v = w modulo m.  Modulus 0 means "over the integers", which serves
infinite cyclic targets through the same code path.  All arithmetic is on
Python ints, so relator exponents like p^(n-1) never overflow.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Sequence

INFINITE = float("inf")


class InfiniteSolutionSet(ValueError):
    """Exhaustive enumeration was requested for an infinite solution set."""


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major integer matrix."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in row)
        return cls(nrows, ncols, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def get(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.get(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def mulvec(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(
            sum(self.get(i, k) * vec[k] for k in range(self.cols))
            for i in range(self.rows)
        )

    def stack_rows(self, extra: Sequence[Sequence[int]]) -> "IntMatrix":
        """New matrix with the given rows appended."""
        rows = self.to_rows()
        for r in extra:
            if len(r) != self.cols:
                raise ValueError("dimension mismatch")
            rows.append(list(r))
        return IntMatrix.from_rows(rows) if rows else IntMatrix(0, self.cols, ())

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """U*M*V = D with U, V unimodular and D diagonal, d_i | d_(i+1)."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D.get(i, i) for i in range(min(self.D.rows, self.D.cols)))


@dataclass(frozen=True)
class LinearSystem:
    """M*v = w modulo `modulus`; modulus 0 solves over the integers."""

    matrix: IntMatrix
    rhs: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if len(self.rhs) != self.matrix.rows:
            raise ValueError("right-hand side length must match the row count")
        if self.modulus < 0:
            raise ValueError("modulus must be non-negative")


@dataclass(frozen=True)
class SolutionSet:
    """All solutions of a linear system.

    kernel_basis pairs a vector with its period: multiples 0..period-1
    of the vector shift the particular solution to distinct solutions
    (period 0 means all integer multiples are distinct).
    """

    solvable: bool
    particular: tuple[int, ...]
    kernel_basis: tuple[tuple[tuple[int, ...], int], ...]
    count: int | float
    modulus: int


def _find_pivot(a: list[list[int]], t: int, rows: int, cols: int):
    # smallest nonzero absolute value; ties broken by lowest (row, col)
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = abs(a[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return None if best is None else (best[1], best[2])


def smith(matrix: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms; deterministic for fixed input."""
    rows, cols = matrix.rows, matrix.cols
    a = matrix.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, factor):
        # row[dst] += factor * row[src]
        arow, asrc = a[dst], a[src]
        for k in range(cols):
            arow[k] += factor * asrc[k]
        urow, usrc = u[dst], u[src]
        for k in range(rows):
            urow[k] += factor * usrc[k]

    def add_col(src, dst, factor):
        for row in a:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        pivot = _find_pivot(a, t, rows, cols)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            if a[t][t] < 0:
                for k in range(cols):
                    a[t][k] = -a[t][k]
                for k in range(rows):
                    u[t][k] = -u[t][k]
            restart = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        # remainder is a strictly smaller pivot
                        swap_rows(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        restart = True
                        break
            if restart:
                continue
            # row and column are clear; enforce the divisibility chain
            d = a[t][t]
            fixed = False
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % d:
                        add_row(i, t, 1)
                        fixed = True
                        break
                if fixed:
                    break
            if not fixed:
                break
        t += 1

    rank = sum(1 for i in range(limit) if a[i][i])
    return SmithDecomposition(
        U=IntMatrix.from_rows(u) if rows else IntMatrix(0, 0, ()),
        D=IntMatrix(rows, cols, tuple(x for row in a for x in row)),
        V=IntMatrix.from_rows(v) if cols else IntMatrix(0, 0, ()),
        rank=rank,
    )


def _unsolvable(cols: int, modulus: int) -> SolutionSet:
    return SolutionSet(False, (0,) * cols, (), 0, modulus)


def solve(system: LinearSystem) -> SolutionSet:
    """Complete description of {v : M*v = w (mod modulus)}."""
    matrix, w, mod = system.matrix, system.rhs, system.modulus
    rows, cols = matrix.rows, matrix.cols
    dec = smith(matrix)
    c = dec.U.mulvec(w) if rows else ()
    diag = [dec.D.get(i, i) for i in range(dec.rank)]

    y = [0] * cols
    kernel_y: list[tuple[int, int]] = []  # (pivot column, step) plus free columns
    count: int | float = 1

    if mod == 0:
        for i, d in enumerate(diag):
            if c[i] % d:
                return _unsolvable(cols, mod)
            y[i] = c[i] // d
        for i in range(dec.rank, rows):
            if c[i]:
                return _unsolvable(cols, mod)
        steps = []
        for j in range(dec.rank, cols):
            steps.append((j, 1, 0))  # step 1, period 0 = infinite
        if steps:
            count = INFINITE
    else:
        steps = []
        for i, d in enumerate(diag):
            g = gcd(d, mod)
            if c[i] % g:
                return _unsolvable(cols, mod)
            mg = mod // g
            y[i] = ((c[i] // g) * pow((d // g) % mg, -1, mg)) % mg if mg > 1 else 0
            if g > 1:
                steps.append((i, mg, g))
                count *= g
        for i in range(dec.rank, rows):
            if c[i] % mod:
                return _unsolvable(cols, mod)
        for j in range(dec.rank, cols):
            if mod > 1:
                steps.append((j, 1, mod))
                count *= mod

    particular = list(dec.V.mulvec(y))
    if mod:
        particular = [x % mod for x in particular]
    kernel = []
    for col, step, period in steps:
        vec = [step * dec.V.get(r, col) for r in range(cols)]
        if mod:
            vec = [x % mod for x in vec]
        kernel.append((tuple(vec), period))
    return SolutionSet(True, tuple(particular), tuple(kernel), count, mod)


def _combination(sol: SolutionSet, coeffs: Sequence[int]) -> tuple[int, ...]:
    vec = list(sol.particular)
    for (basis, _), c in zip(sol.kernel_basis, coeffs):
        if c:
            for k, b in enumerate(basis):
                vec[k] += c * b
    if sol.modulus:
        vec = [x % sol.modulus for x in vec]
    return tuple(vec)


def enumerate_solutions(sol: SolutionSet, cap: int | None = None) -> list[tuple[int, ...]]:
    """Distinct solutions, lexicographically ordered, up to cap.

    cap=None asks for the full list and raises InfiniteSolutionSet when
    the set is infinite; a finite cap on an infinite set walks kernel
    coefficients in growing max-norm shells (deterministic order).
    """
    if cap is not None and cap < 0:
        raise ValueError("cap must be >= 0")
    if not sol.solvable or cap == 0:
        return []
    if sol.count is INFINITE or sol.count == INFINITE:
        if cap is None:
            raise InfiniteSolutionSet("solution set is infinite; pass a cap")
        found: list[tuple[int, ...]] = []
        seen = set()
        ranges = [p for _, p in sol.kernel_basis]
        shell = 0
        while len(found) < cap:
            batch = []
            for coeffs in itertools.product(
                *(
                    range(p) if p else range(-shell, shell + 1)
                    for p in ranges
                )
            ):
                infinite_coeffs = [c for c, (_, p) in zip(coeffs, sol.kernel_basis) if p == 0]
                if max((abs(c) for c in infinite_coeffs), default=0) != shell:
                    continue
                batch.append(_combination(sol, coeffs))
            for vec in sorted(batch):
                if vec not in seen:
                    seen.add(vec)
                    found.append(vec)
                    if len(found) == cap:
                        break
            shell += 1
        return found
    vectors = sorted(
        _combination(sol, coeffs)
        for coeffs in itertools.product(*(range(p) for _, p in sol.kernel_basis))
    )
    return vectors if cap is None else vectors[:cap]


def matrix_to_strings(matrix: IntMatrix) -> list[list[str]]:
    """Rows of decimal strings, the JSON wire form for matrices."""
    return [[str(x) for x in matrix.row(i)] for i in range(matrix.rows)]


def vector_to_strings(vec: Sequence[int]) -> list[str]:
    return [str(x) for x in vec]
