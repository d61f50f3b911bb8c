"""Exact integer and rational linear algebra: matrices over Z, Smith and
Hermite normal forms, saturated kernels, and finite abelian quotients.

Everything here is arbitrary-precision exact; no floating point is used
anywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Iterable, Sequence


class InfiniteQuotient(Exception):
    """Raised when a lattice quotient has free rank (is not a finite group)."""


class DimensionMismatch(Exception):
    """Raised when vector or matrix dimensions are inconsistent."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * cols for _ in range(rows)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        bt = other.transpose().entries
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                               for row in self.entries))

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector; entries of v may be int or Fraction."""
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector length {len(v)} vs {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.entries)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.rows
        if n != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
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

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)

    def inverse_unimodular(self) -> "IntMatrix":
        """Inverse of a determinant +-1 matrix, exact over Z."""
        d = self.det()
        if d not in (1, -1):
            raise ValueError("matrix is not unimodular")
        n = self.rows
        aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(self.entries)]
        frac = [[Fraction(x) for x in row] for row in aug]
        for col in range(n):
            piv = next(i for i in range(col, n) if frac[i][col] != 0)
            frac[col], frac[piv] = frac[piv], frac[col]
            inv = 1 / frac[col][col]
            frac[col] = [x * inv for x in frac[col]]
            for i in range(n):
                if i != col and frac[i][col] != 0:
                    f = frac[i][col]
                    frac[i] = [x - f * y for x, y in zip(frac[i], frac[col])]
        out = tuple(tuple(int(x) for x in row[n:]) for row in frac)
        return IntMatrix(out)


@dataclass(frozen=True)
class Rat01:
    """Reduced rational in [0, 1): a coordinate of (Q/Z)^r."""

    numerator: int
    denominator: int

    def __lt__(self, other: "Rat01") -> bool:
        return self.numerator * other.denominator < other.numerator * self.denominator

    def __le__(self, other: "Rat01") -> bool:
        return self.numerator * other.denominator <= other.numerator * self.denominator

    def __init__(self, numerator, denominator: int = 1):
        if isinstance(numerator, Fraction):
            numerator, denominator = numerator.numerator, numerator.denominator * denominator
        if denominator == 0:
            raise ZeroDivisionError("Rat01 with zero denominator")
        if denominator < 0:
            numerator, denominator = -numerator, -denominator
        numerator %= denominator
        g = gcd(numerator, denominator)
        object.__setattr__(self, "numerator", numerator // g)
        object.__setattr__(self, "denominator", denominator // g)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def order(self) -> int:
        """Order in Q/Z: the reduced denominator."""
        return self.denominator

    def __add__(self, other: "Rat01") -> "Rat01":
        return Rat01(self.numerator * other.denominator + other.numerator * self.denominator,
                     self.denominator * other.denominator)

    def __neg__(self) -> "Rat01":
        return Rat01(-self.numerator, self.denominator)

    def __sub__(self, other: "Rat01") -> "Rat01":
        return self + (-other)

    def __mul__(self, k: int) -> "Rat01":
        return Rat01(self.numerator * k, self.denominator)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "0" if self.numerator == 0 else f"{self.numerator}/{self.denominator}"

    @staticmethod
    def parse(text: str) -> "Rat01":
        if "/" in text:
            num, den = text.split("/")
            return Rat01(int(num), int(den))
        return Rat01(int(text))


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group given by invariant factors d1 | d2 | ..., all > 1."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors)
        for d in facs:
            if d <= 1:
                raise ValueError("invariant factors must exceed 1")
        for a, b in zip(facs, facs[1:]):
            if b % a != 0:
                raise ValueError(f"broken divisibility chain: {a} does not divide {b}")
        object.__setattr__(self, "invariant_factors", facs)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def torsion_count(self, n: int) -> int:
        """Number of elements of order dividing n."""
        return prod(gcd(d, n) for d in self.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "Z/1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (S, P, Q) with P*A*Q = S diagonal, d1 | d2 | ..., P and Q unimodular."""
    m, n = A.rows, A.cols
    a = [list(row) for row in A.entries]
    p = [[int(i == j) for j in range(m)] for i in range(m)]
    q = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row[dst] += c * row[src], mirrored into P
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        p[dst] = [x + c * y for x, y in zip(p[dst], p[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in q:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            candidates = [(abs(a[i][j]), i, j)
                          for i in range(t, m) for j in range(t, n) if a[i][j] != 0]
            if not candidates:
                break
            _, pi, pj = min(candidates)
            swap_rows(t, pi)
            swap_cols(t, pj)
            # euclidean steps until the pivot divides its row and column
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] % a[t][t] != 0:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    dirty = True
            for j in range(t + 1, n):
                if a[t][j] % a[t][t] != 0:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    dirty = True
            if dirty:
                continue
            for i in range(t + 1, m):
                if a[i][t] != 0:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            # the pivot must divide the whole remaining block for the chain to hold
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t] != 0), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            p[t] = [-x for x in p[t]]

    return IntMatrix(tuple(map(tuple, a))), IntMatrix(tuple(map(tuple, p))), IntMatrix(tuple(map(tuple, q)))


def invariant_factors(A: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form (including 1s)."""
    s, _, _ = smith_normal_form(A)
    return tuple(s.entries[i][i] for i in range(min(s.rows, s.cols)) if s.entries[i][i] != 0)


def quotient_structure(A: IntMatrix, ambient_rank: int) -> FinAbGroup:
    """Structure of Z^ambient_rank / (row span of A) as a finite abelian group."""
    if A.rows and A.cols != ambient_rank:
        raise DimensionMismatch(f"rows of A have length {A.cols}, ambient rank is {ambient_rank}")
    facs = invariant_factors(A) if A.rows else ()
    if len(facs) < ambient_rank:
        raise InfiniteQuotient(f"row span has rank {len(facs)} < {ambient_rank}")
    return FinAbGroup(tuple(d for d in facs if d > 1))


def hermite_row_form(rows: Iterable[Sequence[int]], width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical row Hermite normal form: positive pivots in echelon position,
    entries above each pivot reduced into [0, pivot). Zero rows dropped."""
    work = [list(map(int, r)) for r in rows]
    for r in work:
        if len(r) != width:
            raise DimensionMismatch("row width mismatch")
    pivot_rows: list[list[int]] = []
    col = 0
    while col < width and work:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        # gcd-combine all rows with a nonzero entry in this column
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            base = live[0]
            for r in live[1:]:
                c = r[col] // base[col]
                for k in range(width):
                    r[k] -= c * base[k]
            live = [r for r in live if r[col] != 0]
        piv = live[0]
        work.remove(piv)
        work = [r for r in work if any(r)]
        for r in work:
            if r[col] != 0:
                c = r[col] // piv[col]
                for k in range(width):
                    r[k] -= c * piv[k]
        work = [r for r in work if any(r)]
        pivot_rows.append(piv)
        col += 1
    # normalize: positive pivots, reduce entries above each pivot
    for r in pivot_rows:
        lead = next(j for j in range(width) if r[j] != 0)
        if r[lead] < 0:
            r[:] = [-x for x in r]
    for i in reversed(range(len(pivot_rows))):
        lead = next(j for j in range(width) if pivot_rows[i][j] != 0)
        for k in range(i):
            c = pivot_rows[k][lead] // pivot_rows[i][lead]
            if c:
                pivot_rows[k] = [x - c * y for x, y in zip(pivot_rows[k], pivot_rows[i])]
    return tuple(tuple(r) for r in pivot_rows)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^ambient_rank in canonical row Hermite form, so equality
    of lattices is equality of the stored bases."""

    ambient_rank: int
    basis: IntMatrix

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]], ambient_rank: int) -> "Lattice":
        return Lattice(ambient_rank, IntMatrix(hermite_row_form(rows, ambient_rank)))

    @staticmethod
    def full(ambient_rank: int) -> "Lattice":
        return Lattice(ambient_rank, IntMatrix.identity(ambient_rank))

    @property
    def rank(self) -> int:
        return self.basis.rows


def saturation(A: IntMatrix) -> Lattice:
    """Smallest saturated sublattice of Z^cols(A) containing the rows of A,
    i.e. Z^cols ∩ (Q-span of the rows)."""
    _, _, q = smith_normal_form(A)
    r = len(invariant_factors(A))
    # row span over Q of A = span of the first r rows of Q^-1, which are an
    # integral basis of the saturation since Q is unimodular
    qinv = q.inverse_unimodular()
    return Lattice.from_rows(qinv.entries[:r], A.cols)


def saturated_kernel(A: IntMatrix) -> Lattice:
    """The saturated sublattice {v in Z^rows(A) : v * A = 0}."""
    _, p, _ = smith_normal_form(A)
    r = len(invariant_factors(A))
    # w*S = 0 forces the first r coordinates of w to vanish; v = w*P
    rows = p.entries[r:]
    return Lattice.from_rows(rows, A.rows)


def lattice_member(L: Lattice, v: Sequence[int]) -> bool:
    """True iff v is an integral combination of the basis rows of L."""
    if len(v) != L.ambient_rank:
        raise DimensionMismatch(f"vector length {len(v)} vs ambient rank {L.ambient_rank}")
    rest = list(map(int, v))
    for row in L.basis.entries:
        lead = next(j for j in range(L.ambient_rank) if row[j] != 0)
        c, rem = divmod(rest[lead], row[lead])
        if rem != 0:
            continue
        rest = [x - c * y for x, y in zip(rest, row)]
    return not any(rest)


def frac_solve(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Solve A*x = b exactly over Q; None if inconsistent. A need not be square;
    when the solution space is positive-dimensional, free variables are set to 0."""
    m = len(A)
    n = len(A[0]) if m else len(b)
    mat = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in mat):
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = mat[i][n]
    return tuple(x)


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of integer vectors, by fraction-free elimination."""
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return 0
    width = len(work[0])
    rank = 0
    col = 0
    while col < width and rank < len(work):
        piv = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        work[rank], work[piv] = work[piv], work[rank]
        for i in range(rank + 1, len(work)):
            if work[i][col] != 0:
                f, g = work[rank][col], work[i][col]
                work[i] = [f * x - g * y for x, y in zip(work[i], work[rank])]
        rank += 1
        col += 1
    return rank


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = lcm(out, v)
    return out
