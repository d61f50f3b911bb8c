"""Semisimple elements of the maximal torus as rational vectors mod 1:
root pairings, orders, algebraic centres, torsion subgroups, Weyl orbits
and stabilizers, quasi-isolated tests, and classification of quasi-isolated
classes.

The classification and stabilizer computations go through the fundamental
alcove of the affine Weyl group W_aff = W  ⋉ ZPhi^vee acting on the span V of
the coroots: the closed alcove is a strict fundamental domain for W_aff, the
stabilizer of a point s = x mod Y is W(Psi) ⋊ Omega_x with
Psi = {alpha : <alpha, x> in Z} and Omega_x the stabilizer of the reduced
point inside Omega = (Y ∩ V)/ZPhi^vee, and W-orbits on V/Y correspond to
alcove points modulo the affine Omega-action. For a reflection subgroup M
the same machinery runs on (span Phi_M, Phi_M, Y ∩ span Phi_M^vee), which
covers stabilizers taken inside W_M.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

from .intlinalg import (
    FinAbGroup,
    IntMatrix,
    Lattice,
    Rat01,
    frac_solve,
    int_rank,
    invariant_factors,
    saturated_kernel,
    saturation,
    smith_normal_form,
)
from .rootdata import (
    ReflectionSubgroup,
    RootDatum,
    WeylElement,
    classify_cartan,
    identity_weyl,
    inverse,
    multiply,
    reflection_element,
    reflection_subgroup,
    weyl_order,
)

DEFAULT_ORBIT_CAP = 10 ** 7
_REDUCE_CAP = 100_000


class OrbitBound(Exception):
    """Raised when an orbit enumeration exceeds the configured cap."""


def orbit_cap() -> int:
    return int(os.environ.get("SSVERIFY_ORBIT_CAP", DEFAULT_ORBIT_CAP))


@dataclass(frozen=True)
class TorusElement:
    """Element of the maximal torus: a vector of Rat01 coordinates on Y."""

    coords: tuple[Rat01, ...]
    datum: RootDatum

    def __post_init__(self):
        if len(self.coords) != self.datum.rank:
            raise ValueError(f"{len(self.coords)} coordinates on a rank-{self.datum.rank} torus")

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(c.as_fraction() for c in self.coords)

    def __add__(self, other: "TorusElement") -> "TorusElement":
        assert self.datum is other.datum or self.datum == other.datum
        return TorusElement(tuple(a + b for a, b in zip(self.coords, other.coords)), self.datum)

    def __neg__(self) -> "TorusElement":
        return TorusElement(tuple(-c for c in self.coords), self.datum)

    def __lt__(self, other: "TorusElement") -> bool:
        return self.coords < other.coords

    def __str__(self) -> str:
        return "<" + ",".join(str(c) for c in self.coords) + ">"


def element(datum: RootDatum, values: Iterable) -> TorusElement:
    """TorusElement from ints, Fractions, Rat01s, or strings like '2/3'."""
    coords = []
    for v in values:
        if isinstance(v, Rat01):
            coords.append(v)
        elif isinstance(v, str):
            coords.append(Rat01.parse(v))
        else:
            coords.append(Rat01(Fraction(v)))
    return TorusElement(tuple(coords), datum)


def zero_element(datum: RootDatum) -> TorusElement:
    return element(datum, [0] * datum.rank)


def pair_root(s: TorusElement, root_index: int) -> Rat01:
    """<alpha, s> mod 1 for the root with the given 1-based index."""
    alpha = s.datum.root(root_index).x_vector
    total = sum((c * a for c, a in zip(s.coords, alpha)), start=Rat01(0))
    return total


def element_order(s: TorusElement) -> int:
    """Order of s in the torus: lcm of the coordinate denominators."""
    out = 1
    for c in s.coords:
        out = lcm(out, c.denominator)
    return out


def weyl_on_element(w: WeylElement, s: TorusElement) -> TorusElement:
    image = w.y_matrix.apply(s.as_fractions())
    return TorusElement(tuple(Rat01(f) for f in image), s.datum)


# ---------------------------------------------------------------------------
# centres and torsion subgroups


def algebraic_centre(m: ReflectionSubgroup | RootDatum) -> tuple[Lattice, FinAbGroup]:
    """(Y of the connected centre, component group) of the subgroup generated
    by the torus and the root subgroups of m.

    Z0 is the saturated annihilator of m's roots in Y; the component group is
    read off the Smith form of the matrix of m's simple roots: solutions of
    R*v = 0 mod 1 form (Q/Z)^(r-n) x product Z/d_i over the invariant factors."""
    if isinstance(m, RootDatum):
        datum, rows = m, m.simple_roots.entries
    else:
        datum = m.parent
        rows = tuple(datum.root(i).x_vector for i in m.simple_indices)
    if not rows:
        return Lattice.full(datum.rank), FinAbGroup(())
    z0 = saturated_kernel(IntMatrix(rows).transpose())
    component = FinAbGroup(tuple(d for d in invariant_factors(IntMatrix(rows)) if d > 1))
    return z0, component


def torsion_subgroup(datum: RootDatum, lattice: Lattice, n: int) -> list[TorusElement]:
    """All elements of the subtorus with cocharacter lattice `lattice` whose
    order divides n, sorted lexicographically. For a saturated lattice the
    count is exactly n^rank."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rank = lattice.rank
    out = set()
    basis = lattice.basis.entries
    counters = [0] * rank
    while True:
        coords = [0] * datum.rank
        for k, row in zip(counters, basis):
            for j, b in enumerate(row):
                coords[j] += k * b
        out.add(tuple(Rat01(c, n) for c in coords))
        i = 0
        while i < rank and counters[i] == n - 1:
            counters[i] = 0
            i += 1
        if i == rank:
            break
        counters[i] += 1
    return sorted(TorusElement(c, datum) for c in out)


# ---------------------------------------------------------------------------
# orbits and stabilizers by breadth-first search


def _scaled(s: TorusElement) -> tuple[tuple[int, ...], int]:
    n = element_order(s)
    return tuple(c.numerator * (n // c.denominator) for c in s.coords), n


def orbit(gens: Sequence[WeylElement], s: TorusElement, cap: int | None = None) -> list[TorusElement]:
    """W-orbit of s under the group generated by gens, sorted; OrbitBound if
    the orbit exceeds the cap (default 10^7, env SSVERIFY_ORBIT_CAP)."""
    cap = orbit_cap() if cap is None else cap
    v, n = _scaled(s)
    mats = [g.y_matrix.entries for g in gens]
    seen = {v}
    frontier = [v]
    while frontier:
        fresh = []
        for p in frontier:
            for mat in mats:
                q = tuple(sum(row[j] * p[j] for j in range(len(p))) % n for row in mat)
                if q not in seen:
                    seen.add(q)
                    fresh.append(q)
        if len(seen) > cap:
            raise OrbitBound(f"orbit exceeded cap {cap}")
        frontier = fresh
    return sorted(TorusElement(tuple(Rat01(x, n) for x in p), s.datum) for p in seen)


def stabilizer(gens: Sequence[WeylElement], s: TorusElement,
               cap: int | None = None) -> tuple[list[TorusElement], list[WeylElement]]:
    """(orbit, stabilizer generators) via Schreier's lemma: for each orbit
    point p with transversal element u_p and each generator g, the product
    u_p g u_{pg}^-1 stabilizes s; together these generate stab(s)."""
    cap = orbit_cap() if cap is None else cap
    v, n = _scaled(s)
    datum = s.datum

    def act(mat, p):
        return tuple(sum(row[j] * p[j] for j in range(len(p))) % n for row in mat)

    transversal = {v: identity_weyl(datum)}
    order = [v]
    frontier = [v]
    while frontier:
        fresh = []
        for p in frontier:
            for g in gens:
                q = act(g.y_matrix.entries, p)
                if q not in transversal:
                    transversal[q] = multiply(g, transversal[p])
                    order.append(q)
                    fresh.append(q)
        if len(transversal) > cap:
            raise OrbitBound(f"orbit exceeded cap {cap}")
        frontier = fresh
    stab_gens: list[WeylElement] = []
    seen_perms = set()
    for p in order:
        u_p = transversal[p]
        for g in gens:
            q = act(g.y_matrix.entries, p)
            candidate = multiply(inverse(transversal[q]), multiply(g, u_p))
            if candidate != identity_weyl(datum) and candidate.root_perm not in seen_perms:
                seen_perms.add(candidate.root_perm)
                stab_gens.append(candidate)
    points = sorted(TorusElement(tuple(Rat01(x, n) for x in p), datum) for p in transversal)
    return points, stab_gens


# ---------------------------------------------------------------------------
# alcove machinery


@dataclass(frozen=True)
class OmegaMap:
    """Affine alcove symmetry v -> matrix*v + delta in lattice coordinates,
    with its linear part as an ambient Weyl element."""

    matrix: IntMatrix
    delta: tuple[int, ...]
    linear: WeylElement

    def apply_scaled(self, v: tuple[int, ...], n: int) -> tuple[int, ...]:
        return tuple(sum(row[j] * v[j] for j in range(len(v))) + n * d
                     for row, d in zip(self.matrix.entries, self.delta))

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(sum(row[j] * v[j] for j in range(len(v))) + d
                     for row, d in zip(self.matrix.entries, self.delta))


class AlcoveContext:
    """Fundamental-alcove data for a subsystem M of a root datum, in the
    basis of Y_M = Y ∩ span(Phi_M^vee)."""

    def __init__(self, datum: RootDatum, sub: ReflectionSubgroup | None):
        self.datum = datum
        if sub is None:
            simple_parent = tuple(range(1, datum.n + 1))
            label = datum.type_label
            m_datum = datum
        elif not sub.simple_indices:
            simple_parent, label, m_datum = (), "", None
        else:
            simple_parent = sub.simple_indices
            label = sub.type_label
            r_rows = tuple(datum.root(i).x_vector for i in simple_parent)
            c_rows = tuple(datum.root(i).coroot for i in simple_parent)
            m_datum = RootDatum(label, "explicit", IntMatrix(r_rows), IntMatrix(c_rows))
        self.simple_parent = simple_parent
        self.n_m = len(simple_parent)
        self.label = label
        if not simple_parent:
            self.lattice = Lattice.from_rows((), datum.rank)
            self.m = 0
            self.parent_positive = ()
            self.forms = ()
            self.coroots_local = ()
            self.simple_walls = ()
            self.component_count = 0
            self.components = ()
            self.component_of_positive = ()
            self.theta_positions = ()
            self.marks = ()
            self.x0 = ()
            self.omega_order = 1
            self.omega_maps = (OmegaMap(IntMatrix.identity(0), (), identity_weyl(datum)),)
            return
        coroot_rows = IntMatrix(tuple(datum.root(i).coroot for i in simple_parent))
        self.lattice = saturation(coroot_rows)
        self.m = self.lattice.rank
        basis = self.lattice.basis
        basis_t = basis.transpose().entries

        def local_covector(x_vector):
            # linear form on Y_M coordinates
            return tuple(sum(a * b for a, b in zip(x_vector, basis.row(i))) for i in range(self.m))

        def local_coords(y_vector):
            x = frac_solve(basis_t, y_vector)
            assert x is not None and all(f.denominator == 1 for f in x)
            return tuple(int(f) for f in x)

        positives = m_datum.roots[: m_datum.num_positive]
        self.parent_positive = tuple(datum.position_of_x(rt.x_vector) + 1 for rt in positives)
        self.forms = tuple(local_covector(rt.x_vector) for rt in positives)
        self.coroots_local = tuple(local_coords(rt.coroot) for rt in positives)
        # walls: the m simple walls plus one affine wall per component
        self.simple_walls = tuple(range(self.n_m))
        comp_of = {}
        for ci, comp in enumerate(m_datum.components):
            for node in comp:
                comp_of[node] = ci
        self.component_count = len(m_datum.components)
        self.components = m_datum.components
        highest = [None] * self.component_count
        comp_of_positive = []
        for pos, rt in enumerate(positives):
            ci = comp_of[next(i for i, c in enumerate(rt.coeffs) if c != 0)]
            comp_of_positive.append(ci)
            highest[ci] = pos
        self.component_of_positive = tuple(comp_of_positive)
        self.theta_positions = tuple(highest)
        self.marks = tuple(tuple(positives[h].coeffs[i] for i in comp)
                           for h, comp in zip(self.theta_positions, m_datum.components))
        # interior point x0: <alpha_i, x0> = 1/h_c with h_c the Coxeter number
        if self.m:
            cox = [sum(positives[h].coeffs) + 1 for h in self.theta_positions]
            rhs = [Fraction(1, cox[comp_of[i]]) for i in range(self.n_m)]
            x0 = frac_solve([self.forms[i] for i in range(self.n_m)], rhs)
            assert x0 is not None
            self.x0 = x0
        else:
            self.x0 = ()
        # Omega = Y_M / ZPhi_M^vee
        if self.m:
            d = IntMatrix(tuple(self.coroots_local[i] for i in range(self.n_m)))
            facs = invariant_factors(d)
            self.omega_order = 1
            for f in facs:
                self.omega_order *= f
        else:
            self.omega_order = 1
        self.omega_maps = (OmegaMap(IntMatrix.identity(self.m), (0,) * self.m,
                                    identity_weyl(datum)),)
        if self.omega_order > 1:
            self.omega_maps += tuple(self._build_omega(d))

    def _build_omega(self, d: IntMatrix):
        s, _, q = smith_normal_form(d)
        qinv = q.inverse_unimodular()
        diag = [s.entries[i][i] for i in range(self.m)]
        reps = []
        counters = [0] * self.m
        while True:
            if any(counters):
                rep = tuple(sum(counters[i] * qinv.entries[i][j] for i in range(self.m))
                            for j in range(self.m))
                reps.append(rep)
            i = 0
            while i < self.m and counters[i] == diag[i] - 1:
                counters[i] = 0
                i += 1
            if i == self.m:
                break
            counters[i] += 1
        out = []
        for t in reps:
            z = [x + Fraction(ti) for x, ti in zip(self.x0, t)]
            y, w_loc, mu, steps = self.reduce_tracked(z)
            delta = tuple(sum(w_loc.entries[i][j] * t[j] for j in range(self.m)) + mu[i]
                          for i in range(self.m))
            linear = identity_weyl(self.datum)
            for parent_index in steps:
                linear = multiply(_cached_reflection(self.datum, parent_index), linear)
            out.append(OmegaMap(w_loc, delta, linear))
        return out

    # -- reduction into the closed alcove

    def reduce_scaled(self, v: tuple[int, ...], n: int) -> tuple[int, ...]:
        """Reduce v/n into the closed alcove by reflecting in violated walls;
        returns the reduced vector, still scaled by n."""
        v = list(v)
        for _ in range(_REDUCE_CAP):
            moved = False
            for i in self.simple_walls:
                p = sum(f * x for f, x in zip(self.forms[i], v))
                if p < 0:
                    cr = self.coroots_local[i]
                    for j in range(self.m):
                        v[j] -= p * cr[j]
                    moved = True
            for h in self.theta_positions:
                p = sum(f * x for f, x in zip(self.forms[h], v))
                if p > n:
                    cr = self.coroots_local[h]
                    for j in range(self.m):
                        v[j] -= (p - n) * cr[j]
                    moved = True
            if not moved:
                return tuple(v)
        raise RuntimeError("alcove reduction did not terminate")

    def reduce_tracked(self, z: Sequence[Fraction]):
        """Reduce exactly, tracking the affine map: returns (y, w, mu, steps)
        with y = w*z + mu, w the matrix of an element of W_M in lattice
        coordinates, mu in ZPhi_M^vee, and steps the parent root indices of
        the reflections applied (first applied first)."""
        v = [Fraction(x) for x in z]
        w = IntMatrix.identity(self.m)
        mu = [0] * self.m
        steps: list[int] = []

        def reflect(pos: int, affine: bool):
            nonlocal w
            cr = self.coroots_local[pos]
            form = self.forms[pos]
            p = sum(f * x for f, x in zip(form, v))
            shift = p - 1 if affine else p
            for j in range(self.m):
                v[j] -= shift * cr[j]
            # linear part: L = I - coroot (x) form; mu -> L*mu (+ coroot if affine)
            lw = [[(i == j) - cr[i] * form[j] for j in range(self.m)] for i in range(self.m)]
            w = IntMatrix(tuple(map(tuple, lw))) @ w
            new_mu = [sum(lw[i][j] * mu[j] for j in range(self.m)) for i in range(self.m)]
            if affine:
                for i in range(self.m):
                    new_mu[i] += cr[i]
            mu[:] = new_mu
            steps.append(self.parent_positive[pos])

        for _ in range(_REDUCE_CAP):
            moved = False
            for i in self.simple_walls:
                if sum(f * x for f, x in zip(self.forms[i], v)) < 0:
                    reflect(i, affine=False)
                    moved = True
            for h in self.theta_positions:
                if sum(f * x for f, x in zip(self.forms[h], v)) > 1:
                    reflect(h, affine=True)
                    moved = True
            if not moved:
                return tuple(v), w, tuple(mu), steps
        raise RuntimeError("alcove reduction did not terminate")

    def project_local(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Coordinates in the lattice basis of the projection of x onto
        span(Phi_M^vee) along the W_M-fixed subspace."""
        pairings = [sum(Fraction(a) * Fraction(c) for a, c in
                        zip(self.datum.root(self.simple_parent[i]).x_vector, x))
                    for i in range(self.n_m)]
        sol = frac_solve([self.forms[i] for i in range(self.n_m)], pairings)
        assert sol is not None
        return sol


@lru_cache(maxsize=None)
def _cached_reflection(datum: RootDatum, root_index: int) -> WeylElement:
    return reflection_element(datum, root_index)


@lru_cache(maxsize=None)
def subsystem_context(datum: RootDatum, sub: ReflectionSubgroup | None = None) -> AlcoveContext:
    return AlcoveContext(datum, sub)


def canonical_form(datum: RootDatum, s: TorusElement) -> tuple[Fraction, ...]:
    """Canonical representative of the W-orbit of s on Y ⊗ Q/Z: the alcove
    point of its class, minimized lexicographically over the Omega-action.
    Two elements are W-conjugate iff their canonical forms coincide."""
    ctx = subsystem_context(datum, None)
    if ctx.m != datum.rank:
        raise ValueError("canonical forms require a semisimple datum")
    v, n = _scaled(s)
    reduced = ctx.reduce_scaled(v, n)
    best = min(om.apply_scaled(reduced, n) for om in ctx.omega_maps)
    return tuple(Fraction(x, n) for x in best)


# ---------------------------------------------------------------------------
# stabilizer structure and quasi-isolated tests


@dataclass(frozen=True)
class StabInfo:
    """Structure of stab_{W_M}(s) = W(Psi) ⋊ Gamma."""

    psi_positive: tuple[int, ...]     # parent indices of Psi+ (integral pairing)
    psi_simples: tuple[int, ...]      # parent indices of the simple system of Psi
    psi_label: str
    gamma: tuple[WeylElement, ...]    # distinguished reps of the nontrivial cosets
    order: int


def _psi_simples(datum: RootDatum, psi_positive: Sequence[int]) -> tuple[int, ...]:
    # indecomposables: psi is simple iff psi - phi is not in Psi+ for phi in Psi+
    xs = {datum.root(i).x_vector: i for i in psi_positive}
    out = []
    for i in psi_positive:
        x = datum.root(i).x_vector
        if not any(tuple(a - b for a, b in zip(x, datum.root(j).x_vector)) in xs
                   for j in psi_positive if j != i):
            out.append(i)
    return tuple(out)


def _strip_descents(datum: RootDatum, w: WeylElement, psi_simples: Sequence[int]) -> WeylElement:
    """The unique element of W(Psi)*w sending Psi+ into the positive roots."""
    npos = datum.num_positive
    positions = [i - 1 for i in psi_simples]
    while True:
        p = next((p for p in positions if w.root_perm[p] >= npos), None)
        if p is None:
            return w
        w = multiply(w, _cached_reflection(datum, p + 1))


def stab_info(datum: RootDatum, sub: ReflectionSubgroup | None, s: TorusElement) -> StabInfo:
    """Stabilizer of s in W_M (M = sub, or the full group when sub is None):
    the reflection part W(Psi) on the integrally-pairing subsystem, and the
    coset generators Gamma coming from alcove symmetries fixing the reduced
    point."""
    ctx = subsystem_context(datum, sub)
    x = s.as_fractions()
    psi_positive = tuple(i for i in ctx.parent_positive
                         if pair_root(s, i) == Rat01(0))
    psi_simples = _psi_simples(datum, psi_positive)
    if psi_simples:
        sub_cartan = IntMatrix(tuple(
            tuple(sum(a * b for a, b in zip(datum.root(j).x_vector, datum.root(i).coroot))
                  for j in psi_simples) for i in psi_simples))
        psi_label = classify_cartan(sub_cartan)[0]
    else:
        psi_label = ""
    gamma: list[WeylElement] = []
    if ctx.omega_order > 1:
        z = ctx.project_local(x)
        y, _, _, steps = ctx.reduce_tracked(z)
        u = identity_weyl(datum)
        for parent_index in steps:
            u = multiply(_cached_reflection(datum, parent_index), u)
        u_inv = inverse(u)
        for om in ctx.omega_maps[1:]:
            if om.apply(y) == tuple(y):
                g = multiply(u_inv, multiply(om.linear, u))
                gamma.append(_strip_descents(datum, g, psi_simples))
    order = weyl_order(psi_label) * (len(gamma) + 1)
    return StabInfo(psi_positive, psi_simples, psi_label, tuple(gamma), order)


def is_quasi_isolated(h: RootDatum | ReflectionSubgroup, s: TorusElement) -> bool:
    """True iff the fixed space of stab_{W_H}(s) on Y ⊗ Q equals the fixed
    space of W_H itself, i.e. no proper Levi of H contains the centralizer."""
    if isinstance(h, RootDatum):
        datum, sub = h, None
    else:
        datum, sub = h.parent, h
    info = stab_info(datum, sub, s)
    rows = [datum.root(i).x_vector for i in info.psi_positive]
    for g in info.gamma:
        for i in range(datum.rank):
            rows.append(tuple(g.y_matrix.entries[i][j] - (i == j) for j in range(datum.rank)))
    n_m = datum.n if sub is None else len(sub.simple_indices)
    return int_rank(rows) == n_m


def quasi_isolated_representatives(g: RootDatum, order_bound: int) -> list[TorusElement]:
    """One representative per W-orbit of quasi-isolated elements of order at
    most order_bound, sorted by (element order, coordinates)."""
    if g.n != g.rank:
        raise ValueError("quasi-isolated classification requires a semisimple datum")
    if order_bound < 1:
        raise ValueError("order bound must be >= 1")
    ctx = subsystem_context(g, None)
    points: set[tuple[Fraction, ...]] = set()
    for n in range(1, order_bound + 1):
        for k in _alcove_pairings(ctx, n):
            sol = frac_solve([ctx.forms[i] for i in range(ctx.n_m)],
                             [Fraction(ki, n) for ki in k])
            assert sol is not None
            if all((n * f).denominator == 1 for f in sol):
                points.add(tuple(sol))
    canonical = {min(om.apply(p) for om in ctx.omega_maps) for p in points}
    reps = [TorusElement(tuple(Rat01(f) for f in p), g) for p in canonical]
    qi = [s for s in reps if is_quasi_isolated(g, s)]
    return sorted(qi, key=lambda s: (element_order(s), s.coords))


def _alcove_pairings(ctx: AlcoveContext, n: int):
    """Integer vectors k >= 0 (one entry per simple root) with, per component,
    sum marks_i * k_i <= n; these are the pairings n*<alpha_i, y> of alcove
    points y with n*y in the coroot span lattice."""
    per_component = []
    for comp, marks in zip(ctx.components, ctx.marks):
        out = []
        stack = [((), n)]
        while stack:
            prefix, budget = stack.pop()
            i = len(prefix)
            if i == len(comp):
                out.append(prefix)
                continue
            for k in range(budget // marks[i] + 1):
                stack.append((prefix + (k,), budget - marks[i] * k))
        per_component.append(out)
    # stitch per-component assignments back into simple-root order
    def stitch(parts):
        k = [0] * ctx.n_m
        for comp, assignment in zip(ctx.components, parts):
            for node, val in zip(comp, assignment):
                k[node] = val
        return tuple(k)

    idx = [0] * len(per_component)
    if not per_component:
        yield ()
        return
    while True:
        yield stitch([per_component[c][idx[c]] for c in range(len(per_component))])
        c = 0
        while c < len(per_component) and idx[c] == len(per_component[c]) - 1:
            idx[c] = 0
            c += 1
        if c == len(per_component):
            return
        idx[c] += 1


# ---------------------------------------------------------------------------
# centralizers


@dataclass(frozen=True)
class ExtendedCentralizer:
    """Centralizer of a semisimple element: connected part given by the
    subsystem of roots killing s, plus generators of the component group."""

    connected_part: ReflectionSubgroup
    component_gens: tuple[WeylElement, ...]
    component_order: int


def centralizer(g: RootDatum, s: TorusElement) -> ExtendedCentralizer:
    """Centralizer structure from the alcove stabilizer: the connected part is
    the reflection subgroup on Phi_s = {alpha : <alpha,s> ∈ Z}; component
    generators are the Gamma coset representatives (each fixes s and
    permutes Phi_s+)."""
    info = stab_info(g, None, s)
    connected = reflection_subgroup(g, info.psi_simples)
    return ExtendedCentralizer(connected, info.gamma, len(info.gamma) + 1)
