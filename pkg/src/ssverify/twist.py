"""Rational structures on subgroups generated by subsets of the roots:
normalizers of reflection subgroups, twisted forms (cosets W_M·wφ up to
φ-conjugacy), order polynomials of the twisted central torus, and Frobenius
fixed points.

A Frobenius endomorphism acts on the cocharacter lattice as q·wφ with φ a
finite-order lattice map permuting the roots (identity for split groups).
Rational forms of a subgroup M generated by a subset of the roots correspond
to cosets W_M·wφ with w in the stabilizer N of M's root set, taken up to
φ-conjugacy in N/W_M. The restriction of wφ to the cocharacter lattice of
the connected centre Z(M)° determines |Z(M)°^F| as a product of cyclotomic
polynomials in q.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .intlinalg import IntMatrix, Rat01
from .rootdata import (
    ReflectionSubgroup,
    RootDatum,
    WeylElement,
    from_perm,
    identity_weyl,
    inverse,
    multiply,
    reflection_element,
)
from .semisimple import TorusElement, algebraic_centre, element_order, subsystem_context
from .torus import (
    CycloFactorization,
    TwistedTorus,
    cyclo_factor,
    factorization_text,
    restrict_to_lattice,
)

DEFAULT_QUOTIENT_CAP = 10 ** 6


class QuotientTooLarge(Exception):
    """Raised when N_W(W_M)/W_M exceeds the coset enumeration cap."""


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation a∘b (b first), matching WeylElement multiplication."""
    return tuple(a[p] for p in b)


def _invert(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, q in enumerate(p):
        out[q] = i
    return tuple(out)


def _root_set_orbit(g: RootDatum, m: ReflectionSubgroup):
    """(orbit size of M's root set under W, Schreier generators of its
    set stabilizer N)."""
    base = tuple(sorted(i - 1 for i in m.sub_roots))
    transversal = {base: identity_weyl(g)}
    order = [base]
    frontier = [base]
    while frontier:
        fresh = []
        for st in frontier:
            for gen in g.weyl_gens:
                image = tuple(sorted(gen.root_perm[p] for p in st))
                if image not in transversal:
                    transversal[image] = multiply(gen, transversal[st])
                    order.append(image)
                    fresh.append(image)
        frontier = fresh
    gens = []
    seen = set()
    for st in order:
        u = transversal[st]
        for gen in g.weyl_gens:
            image = tuple(sorted(gen.root_perm[p] for p in st))
            candidate = multiply(inverse(transversal[image]), multiply(gen, u))
            if candidate.root_perm not in seen:
                seen.add(candidate.root_perm)
                if candidate != identity_weyl(g):
                    gens.append(candidate)
    return len(transversal), gens


def normalizer_gens(g: RootDatum, m: ReflectionSubgroup) -> list[WeylElement]:
    """Generators of the stabilizer in W of M's root set (for a subgroup
    generated by roots this is the normalizer N_W(W_M))."""
    _, gens = _root_set_orbit(g, m)
    return gens if gens else [identity_weyl(g)]


def _phi_perm(g: RootDatum, phi: IntMatrix) -> tuple[int, ...]:
    """Root permutation induced by a lattice map phi on Y; roots live in X
    and transform by the inverse transpose."""
    if phi == IntMatrix.identity(g.rank):
        return tuple(range(len(g.roots)))
    phi_x = phi.inverse_unimodular().transpose()
    return tuple(g.position_of_x(phi_x.apply(rt.x_vector)) for rt in g.roots)


def _coset_reducer(g: RootDatum, m: ReflectionSubgroup):
    """Map sending a Weyl permutation to the distinguished representative of
    its left coset p·W_M: the unique coset element mapping every positive
    root of M to a positive root. Obtained by stripping descents at the
    simple roots of M; each strip lowers the count of M-positive roots sent
    negative by one, so the loop is finite."""
    npos = g.num_positive
    mpos = tuple(i - 1 for i in m.simple_indices)
    refl = tuple(reflection_element(g, i).root_perm for i in m.simple_indices)

    def canon(p: tuple[int, ...]) -> tuple[int, ...]:
        while True:
            desc = next((k for k, pos in enumerate(mpos) if p[pos] >= npos), None)
            if desc is None:
                return p
            p = _compose(p, refl[desc])

    return canon


@dataclass(frozen=True)
class Twist:
    """One rational form of M: the coset W_M·wφ with the order polynomial of
    the twisted connected centre and the induced permutation of M's
    irreducible components. component_orbits lists each cycle as the tuple
    of component node-labels in cycle order, cycles sorted by smallest
    starting label."""

    levi: ReflectionSubgroup
    w: WeylElement
    phi: IntMatrix
    radical_poly: CycloFactorization
    component_orbits: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def poly_text(self) -> str:
        return factorization_text(self.radical_poly)


def _component_orbits(g: RootDatum, m: ReflectionSubgroup,
                      perm: tuple[int, ...]) -> tuple:
    """Cycles of the root permutation (an element of N·φ) on M's irreducible
    components, labelled by parent root indices of the component's simples."""
    if not m.simple_indices:
        return ()
    ctx = subsystem_context(g, m)
    npos = g.num_positive
    comp_by_pos = {}
    for pos, ci in enumerate(ctx.component_of_positive):
        # a chosen simple system may declare a parent-negative root positive
        parent = ctx.parent_positive[pos] - 1
        mate = parent + npos if parent < npos else parent - npos
        comp_by_pos[parent] = ci
        comp_by_pos[mate] = ci

    def image_component(ci: int) -> int:
        parent = ctx.simple_parent[ctx.components[ci][0]] - 1
        return comp_by_pos[perm[parent]]

    labels = [tuple(ctx.simple_parent[k] for k in comp) for comp in ctx.components]
    cycles = []
    visited = set()
    for start in sorted(range(len(labels)), key=lambda ci: labels[ci]):
        if start in visited:
            continue
        cycle = [start]
        visited.add(start)
        nxt = image_component(start)
        while nxt != start:
            cycle.append(nxt)
            visited.add(nxt)
            nxt = image_component(nxt)
        cycles.append(tuple(labels[ci] for ci in cycle))
    return tuple(cycles)


def display_name(twist: Twist) -> str:
    """Name in the style 'A1<2>x(A1xA1)<5,7>.(q-1)^2*(q+1)^2': components
    grouped by Frobenius orbit with their node labels, then the order
    polynomial of the twisted connected centre."""
    m = twist.levi
    if not m.simple_indices:
        return twist.poly_text
    ctx = subsystem_context(m.parent, m)
    types = m.type_label.split("x")
    label_to_type = {tuple(ctx.simple_parent[k] for k in comp): types[ci]
                     for ci, comp in enumerate(ctx.components)}
    chunks = []
    for cycle in twist.component_orbits:
        kinds = "x".join(label_to_type[label] for label in cycle)
        nodes = ",".join(str(n) for label in cycle for n in label)
        if len(cycle) == 1:
            chunks.append(f"{kinds}<{nodes}>")
        else:
            chunks.append(f"({kinds})<{nodes}>")
    return "x".join(chunks) + "." + twist.poly_text


def twistings(g: RootDatum, m: ReflectionSubgroup, phi: IntMatrix | None = None,
              cap: int = DEFAULT_QUOTIENT_CAP) -> list[Twist]:
    """Representatives of the φ-conjugacy classes of N/W_M, one Twist per
    rational form of M. Deterministic: each class is represented by its
    minimal distinguished coset permutation and the list is sorted by
    (order polynomial text, component orbits)."""
    phi_mat = IntMatrix.identity(g.rank) if phi is None else phi
    return list(_twistings_cached(g, m, phi_mat, cap))


@lru_cache(maxsize=None)
def _twistings_cached(g: RootDatum, m: ReflectionSubgroup, phi_mat: IntMatrix,
                      cap: int) -> tuple[Twist, ...]:
    orbit_size, ngens = _root_set_orbit(g, m)
    expected = g.weyl_size // (orbit_size * m.weyl_size)
    if expected > cap:
        raise QuotientTooLarge(f"{expected} cosets exceed the cap {cap}")
    p_phi = _phi_perm(g, phi_mat)
    root_set = {i - 1 for i in m.sub_roots}
    if {p_phi[p] for p in root_set} != root_set:
        raise ValueError("phi does not stabilize the root set of the subgroup")
    p_phi_inv = _invert(p_phi)
    canon = _coset_reducer(g, m)

    # the trivial coset's representative need not be the identity: a chosen
    # simple system containing parent-negative roots shifts it into W_M
    seed = canon(tuple(range(len(g.roots))))
    gen_perms = sorted({canon(w.root_perm) for w in ngens} - {seed})
    cosets = {seed}
    frontier = [seed]
    while frontier:
        fresh = []
        for c in frontier:
            for gp in gen_perms:
                q = canon(_compose(gp, c))
                if q not in cosets:
                    cosets.add(q)
                    fresh.append(q)
        if len(cosets) > cap:
            raise QuotientTooLarge(f"coset enumeration exceeded the cap {cap}")
        frontier = fresh
    assert len(cosets) == expected, (len(cosets), expected)

    # φ-conjugacy classes x ~ g·x·φ(g)⁻¹; W_M is normal in N so the products
    # are well defined on distinguished representatives
    conjugators = [(gp, _invert(_compose(_compose(p_phi, gp), p_phi_inv)))
                   for gp in gen_perms]
    classes = []
    visited = set()
    for x in sorted(cosets):
        if x in visited:
            continue
        cls = {x}
        frontier = [x]
        while frontier:
            fresh = []
            for y in frontier:
                for gp, gphi_inv in conjugators:
                    z = canon(_compose(_compose(gp, y), gphi_inv))
                    if z not in cls:
                        cls.add(z)
                        fresh.append(z)
            frontier = fresh
        visited |= cls
        classes.append(min(cls))

    z0, _ = algebraic_centre(m)
    out = []
    for perm in classes:
        w = from_perm(g, perm)
        mat = w.y_matrix @ phi_mat
        twisted = TwistedTorus(z0, restrict_to_lattice(mat, z0)) if z0.rank \
            else TwistedTorus(z0, IntMatrix(()))
        poly = cyclo_factor(twisted)
        orbits = _component_orbits(g, m, _compose(perm, p_phi))
        out.append(Twist(m, w, phi_mat, poly, orbits))
    out.sort(key=lambda t: (t.poly_text, t.component_orbits))
    return tuple(out)


def frobenius_fixed(twist: Twist, q: int, s: TorusElement) -> bool:
    """True iff s is fixed by F = q·wφ on the torus, i.e. q·(wφ)(s) = s in
    (Q/Z)^rank."""
    mat = twist.w.y_matrix @ twist.phi
    image = mat.apply(s.as_fractions())
    return all(Rat01(q * img) == c for img, c in zip(image, s.coords))


def fixed_order_profile(twist: Twist, q: int,
                        elements: Sequence[TorusElement]) -> list[int]:
    """Sorted distinct orders of the F-fixed elements among the given ones."""
    return sorted({element_order(s) for s in elements if frobenius_fixed(twist, q, s)})
