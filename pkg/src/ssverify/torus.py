"""Arithmetic of F-stable tori: finite-order automorphisms phi of the
cocharacter lattice, cyclotomic factorization of their characteristic
polynomials, fixed points of F = q*phi, and Sylow Phi_m-subtori.

Polynomials are coefficient lists over Z, lowest degree first.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod

from .intlinalg import (
    DimensionMismatch,
    FinAbGroup,
    IntMatrix,
    Lattice,
    frac_solve,
    lcm_all,
    quotient_structure,
    saturated_kernel,
)


class NotFiniteOrder(Exception):
    """Raised when an automorphism is not of finite multiplicative order."""


class UnsupportedCyclotomic(Exception):
    """Raised when a cyclotomic index has no display rule."""


def euler_phi(m: int) -> int:
    out, rest, p = 1, m, 2
    while p * p <= rest:
        if rest % p == 0:
            out *= p - 1
            rest //= p
            while rest % p == 0:
                out *= p
                rest //= p
        p += 1
    if rest > 1:
        out *= rest - 1
    return out


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_div_exact(a: list[int], b: list[int]) -> list[int] | None:
    """Quotient of a by monic b over Z, or None when the division is inexact."""
    assert b[-1] == 1, "divisor must be monic"
    rem = list(a)
    if len(rem) < len(b):
        return None
    quot = [0] * (len(rem) - len(b) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + len(b) - 1]
        quot[i] = c
        if c:
            for j, y in enumerate(b):
                rem[i + j] -= c * y
    if any(rem):
        return None
    return quot


def poly_eval(a: list[int], x: int) -> int:
    out = 0
    for c in reversed(a):
        out = out * x + c
    return out


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            q = poly_div_exact(poly, list(cyclotomic(d)))
            assert q is not None
            poly = q
    return tuple(poly)


def charpoly(a: IntMatrix) -> list[int]:
    """det(x*I - a) over Z by the Faddeev-LeVerrier recurrence (all divisions
    are exact), lowest degree first; monic of degree a.rows."""
    n = a.rows
    if a.cols != n:
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = IntMatrix.identity(n)
    for k in range(1, n + 1):
        am = a @ m
        tr = sum(am.entries[i][i] for i in range(n))
        c = -tr // k
        coeffs[n - k] = c
        m = IntMatrix(tuple(tuple(am.entries[i][j] + c * (i == j) for j in range(n))
                            for i in range(n)))
    return coeffs


@dataclass(frozen=True)
class TwistedTorus:
    """Torus S with cocharacter lattice Y(S) (a sublattice of an ambient Y)
    and a finite-order automorphism phi written in the lattice basis, so that
    Frobenius acts on Y(S) as F = q*phi."""

    lattice: Lattice
    phi: IntMatrix

    def __post_init__(self):
        if self.phi.rows != self.phi.cols:
            raise DimensionMismatch("phi must be square")
        if self.phi.rows != self.lattice.rank:
            raise DimensionMismatch(
                f"phi is {self.phi.rows}x{self.phi.cols} on a rank-{self.lattice.rank} lattice")

    @property
    def dim(self) -> int:
        return self.lattice.rank


def full_torus(phi: IntMatrix) -> TwistedTorus:
    """Torus whose lattice is all of Z^rank with the given phi."""
    return TwistedTorus(Lattice.full(phi.rows), phi)


@dataclass(frozen=True)
class CycloFactorization:
    """Multiset of (cyclotomic index, multiplicity) pairs, sorted by index."""

    factors: tuple[tuple[int, int], ...]

    @property
    def dim(self) -> int:
        return sum(mult * euler_phi(m) for m, mult in self.factors)

    def multiplicity(self, m: int) -> int:
        return dict(self.factors).get(m, 0)

    def value_at(self, q: int) -> int:
        """chi_{S,F}(q) = product of Phi_m(q)^multiplicity."""
        return prod(poly_eval(list(cyclotomic(m)), q) ** mult for m, mult in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"Phi{m}" + (f"^{k}" if k > 1 else "") for m, k in self.factors)


def cyclo_factor(t: TwistedTorus) -> CycloFactorization:
    """Factor the characteristic polynomial of phi into cyclotomics."""
    poly = charpoly(t.phi)
    dim = t.dim
    factors = []
    # deg Phi_m <= 8 forces m <= 30; scan a safe margin
    for m in range(1, 16 * max(dim, 1)):
        if euler_phi(m) > dim:
            continue
        cyc = list(cyclotomic(m))
        mult = 0
        while True:
            q = poly_div_exact(poly, cyc)
            if q is None:
                break
            poly = q
            mult += 1
        if mult:
            factors.append((m, mult))
        if len(poly) == 1:
            break
    if poly != [1]:
        raise NotFiniteOrder(f"non-cyclotomic factor of degree {len(poly) - 1} remains")
    return CycloFactorization(tuple(factors))


def phi_order(t: TwistedTorus) -> int:
    """Multiplicative order of phi; NotFiniteOrder when phi is not semisimple
    of finite order (e.g. a unipotent block)."""
    fac = cyclo_factor(t)
    n = lcm_all(m for m, _ in fac.factors) if fac.factors else 1
    power = IntMatrix.identity(t.phi.rows)
    for _ in range(n):
        power = power @ t.phi
    if power != IntMatrix.identity(t.phi.rows):
        raise NotFiniteOrder("phi^lcm(indices) != identity")
    return n


def fixed_structure(t: TwistedTorus, q: int) -> FinAbGroup:
    """Structure of S^F = Y(S)/(q*phi - 1)Y(S) as a finite abelian group."""
    r = t.dim
    a = IntMatrix(tuple(tuple(q * t.phi.entries[i][j] - (i == j) for j in range(r))
                        for i in range(r)))
    # rows of a^T are the images of the basis vectors
    return quotient_structure(a.transpose(), r)


def restrict_to_lattice(m: IntMatrix, lattice: Lattice) -> IntMatrix:
    """Rewrite an ambient automorphism in the basis of an invariant sublattice.
    Column j of the result expresses m(basis_j) in the basis."""
    cols = []
    bt = lattice.basis.transpose().entries  # ambient x rank, columns = basis rows
    for j in range(lattice.rank):
        image = m.apply(lattice.basis.row(j))
        x = frac_solve(bt, image)
        if x is None or any(v.denominator != 1 for v in x):
            raise DimensionMismatch("matrix does not preserve the lattice")
        cols.append([int(v) for v in x])
    return IntMatrix(tuple(zip(*cols))) if cols else IntMatrix(())


def sylow_phi_subtorus(t: TwistedTorus, m: int) -> TwistedTorus:
    """The unique Sylow Phi_m-subtorus: the saturated kernel of Phi_m(phi),
    with phi restricted. Rank 0 when Phi_m does not divide chi_{S,F}."""
    if m < 1:
        raise ValueError("cyclotomic index must be >= 1")
    cyc = cyclotomic(m)
    n = t.phi.rows
    value = IntMatrix.zero(n, n)
    power = IntMatrix.identity(n)
    for c in cyc:
        if c:
            value = IntMatrix(tuple(tuple(value.entries[i][j] + c * power.entries[i][j]
                                          for j in range(n)) for i in range(n)))
        power = power @ t.phi
    kernel = saturated_kernel(value.transpose())  # column kernel of value
    if kernel.rank == 0:
        return TwistedTorus(Lattice.from_rows((), t.lattice.ambient_rank), IntMatrix(()))
    ambient_rows = (kernel.basis @ t.lattice.basis).entries
    sub = Lattice.from_rows(ambient_rows, t.lattice.ambient_rank)
    # phi in the canonical basis of sub: push each basis row through phi via
    # its coordinates in t's basis, then solve back in sub's basis
    t_basis_t = t.lattice.basis.transpose().entries
    sub_basis_t = sub.basis.transpose().entries
    cols = []
    for j in range(sub.rank):
        x = frac_solve(t_basis_t, sub.basis.row(j))
        assert x is not None and all(v.denominator == 1 for v in x)
        image_in_t = t.phi.apply([int(v) for v in x])
        image_ambient = [sum(image_in_t[i] * t.lattice.basis.entries[i][a]
                             for i in range(t.lattice.rank))
                         for a in range(t.lattice.ambient_rank)]
        z = frac_solve(sub_basis_t, image_ambient)
        assert z is not None and all(v.denominator == 1 for v in z)
        cols.append([int(v) for v in z])
    return TwistedTorus(sub, IntMatrix(tuple(zip(*cols))))


_DISPLAY = {
    1: "(q-1)",
    2: "(q+1)",
    3: "(q^2+q+1)",
    4: "(q^2+1)",
    6: "(q^2-q+1)",
    8: "(q^4+1)",
    12: "(q^4-q^2+1)",
}


def order_polynomial_text(t: TwistedTorus) -> str:
    """|S^F| as a polynomial in q, in the expanded bracket notation, factors
    sorted by cyclotomic index and joined with '*'."""
    return factorization_text(cyclo_factor(t))


def factorization_text(fac: CycloFactorization) -> str:
    parts = []
    for m, mult in fac.factors:
        if m not in _DISPLAY:
            raise UnsupportedCyclotomic(f"no display rule for cyclotomic index {m}")
        parts.append(_DISPLAY[m] + (f"^{mult}" if mult > 1 else ""))
    return "*".join(parts) if parts else "1"
