"""End-to-end verification runs.

Three batch computations, each returning a deterministic Report:

* run_calcul_case: for a group G with a standard Levi M and torsion order n,
  check that every M-quasi-isolated element s in each bounded-order
  quasi-isolated G-class admits central elements z of order dividing n in
  Z(M)° with s·z not G-conjugate to s. Conjugacy is decided by alcove
  canonical forms, so no orbit needs to be stored during counting.
* run_ordre8: rational forms of the (A1)^3 subgroup on nodes 2,5,7 of E7
  whose twisted centre has order Φ₁^a·Φ₂^b; each must contain an 8-torsion
  fixed point of Frobenius for q in {3,5}.
* run_dim2_survey: every finite-order 2x2 integer twist yields a fixed-point
  group on the list for rank two (the six classical structures, plus the
  cyclic group of order q²+1 arising from the order-4 twists, which the
  classical list omits; those entries are flagged).
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass
from math import gcd

from .intlinalg import IntMatrix
from .rootdata import build_datum, reflection_element, reflection_subgroup
from .semisimple import (
    TorusElement,
    algebraic_centre,
    canonical_form,
    element_order,
    is_quasi_isolated,
    orbit,
    quasi_isolated_representatives,
    torsion_subgroup,
)
from .torus import cyclo_factor, factorization_text, fixed_structure, full_torus
from .twist import display_name, frobenius_fixed, twistings


class CaseMismatch(Exception):
    """Raised when a case's Levi does not have the type its statement needs."""


@dataclass(frozen=True)
class CaseSpec:
    case_id: int
    group_type: str
    isogeny: str
    levi_indices: tuple[int, ...]
    n_values: tuple[int, ...]
    order_bound: int


CASES = {
    1: CaseSpec(1, "E6", "adjoint", (1, 3, 5, 6), (3,), 6),
    2: CaseSpec(2, "E7", "simply_connected", (1, 2, 3, 4, 5, 6), (4,), 4),
    3: CaseSpec(3, "E7", "adjoint", (2, 5, 7), (4, 6), 6),
    4: CaseSpec(4, "E8", "adjoint", (1, 2, 3, 4, 5, 6, 7), (3, 5), 6),
    5: CaseSpec(5, "E8", "adjoint", (1, 2, 3, 4, 5, 6), (2,), 6),
}

_EXPECTED_LEVI = {1: "A2xA2", 2: "E6", 3: "A1xA1xA1", 4: "E7", 5: "E6"}


@dataclass
class Report:
    command: str
    case_id: int | None
    metadata: dict
    records: list
    verdict: str
    seconds: float

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_dict(self) -> dict:
        """JSON payload; timing is excluded so reports are byte-identical."""
        out = {"command": self.command, "metadata": self.metadata,
               "records": self.records, "verdict": self.verdict}
        if self.case_id is not None:
            out["case_id"] = self.case_id
        return out


def reports_to_json(command: str, reports: list[Report]) -> str:
    payload = {"schema": 1, "command": command,
               "cases": [r.to_dict() for r in reports]}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def count_nonconjugate(g, reference, s: TorusElement, z_elements) -> int:
    """Number of z in the list with s·z not G-conjugate to the class of the
    given canonical form. Elements that stop being quasi-isolated land in a
    different class automatically, so one comparison covers both reasons."""
    return sum(1 for z in z_elements if canonical_form(g, s + z) != reference)


def _m_orbit_split(m_gens, elements):
    """Partition a sorted element list into orbits under the given
    generators; orbits come out sorted by their minimal element."""
    remaining = set(elements)
    classes = []
    for s in elements:
        if s not in remaining:
            continue
        o = orbit(m_gens, s)
        remaining.difference_update(o)
        classes.append(o)
    return classes


def run_calcul_case(spec: CaseSpec) -> Report:
    t0 = time.perf_counter()
    g = build_datum(spec.group_type, spec.isogeny)
    levi = reflection_subgroup(g, spec.levi_indices)
    expected = _EXPECTED_LEVI.get(spec.case_id)
    if expected is not None and levi.type_label != expected:
        raise CaseMismatch(f"case {spec.case_id} needs a Levi of type "
                           f"{expected}, got {levi.type_label}")
    m_gens = [reflection_element(g, i) for i in spec.levi_indices]
    z0, _ = algebraic_centre(levi)
    z_sets = {n: torsion_subgroup(g, z0, n) for n in spec.n_values}
    records = []
    all_positive = True
    for rep in quasi_isolated_representatives(g, spec.order_bound):
        reference = canonical_form(g, rep)
        full_orbit = orbit(g.weyl_gens, rep)
        m_classes = [o for o in _m_orbit_split(m_gens, full_orbit)
                     if is_quasi_isolated(levi, o[0])]
        class_records = []
        for o in m_classes:
            s = o[0]
            counts = {}
            for n in spec.n_values:
                c = count_nonconjugate(g, reference, s, z_sets[n])
                counts[str(n)] = c
                if c < 1:
                    all_positive = False
            class_records.append({"rep": str(s), "m_orbit_size": len(o),
                                  "counts": counts})
        records.append({
            "rep": str(rep),
            "order": element_order(rep),
            "orbit_size": len(full_orbit),
            "m_qi_count": sum(len(o) for o in m_classes),
            "m_classes": class_records,
            "count_multisets": {str(n): sorted(r["counts"][str(n)]
                                               for r in class_records)
                                for n in spec.n_values},
        })
    meta = {"group": spec.group_type, "isogeny": spec.isogeny,
            "levi": list(spec.levi_indices), "levi_type": levi.type_label,
            "n_values": list(spec.n_values), "order_bound": spec.order_bound}
    verdict = "holds" if all_positive else "fails"
    return Report("calcul", spec.case_id, meta, records, verdict,
                  time.perf_counter() - t0)


def run_ordre8(q: int) -> Report:
    if q not in (3, 5):
        raise ValueError("q must be 3 or 5")
    t0 = time.perf_counter()
    g = build_datum("E7", "adjoint")
    levi = reflection_subgroup(g, (2, 5, 7))
    z0, _ = algebraic_centre(levi)
    z8 = torsion_subgroup(g, z0, 8)
    tws = twistings(g, levi)

    def is_mixed(t):
        return {m for m, _ in t.radical_poly.factors} == {1, 2}

    selected = [t for t in tws if is_mixed(t)]
    selected += [t for t in tws if t.radical_poly.factors == ((2, 4),)]
    records = []
    ok = True
    for t in selected:
        fixed = [s for s in z8 if frobenius_fixed(t, q, s)]
        profile = sorted({element_order(s) for s in fixed})
        mixed = is_mixed(t)
        if mixed and 8 not in profile:
            ok = False
        records.append({"name": display_name(t), "poly": t.poly_text,
                        "mixed": mixed, "fixed_count": len(fixed),
                        "profile": profile})
    meta = {"q": q, "group": "E7", "isogeny": "adjoint", "levi": [2, 5, 7],
            "z8_size": len(z8), "twist_count": len(tws),
            "poly_multiset": sorted(t.poly_text for t in tws)}
    return Report("ordre8", None, meta, records,
                  "holds" if ok else "fails", time.perf_counter() - t0)


def _product_factors(*orders: int) -> tuple[int, ...]:
    """Invariant factors of a product of cyclic groups."""
    facs: list[int] = []
    for d in orders:
        for i, f in enumerate(facs):
            if d == 1:
                break
            g_ = gcd(d, f)
            merged = f * d // g_
            facs[i], d = g_, merged
        if d > 1:
            facs.append(d)
    return tuple(f for f in sorted(facs) if f > 1)


def _finite_order(mat: IntMatrix) -> bool:
    power = IntMatrix.identity(2)
    for _ in range(12):
        power = power @ mat
    return power == IntMatrix.identity(2)


def run_dim2_survey(q: int) -> Report:
    if q < 2:
        raise ValueError("q must be at least 2")
    t0 = time.perf_counter()
    listed = {_product_factors(q - 1, q - 1), _product_factors(q - 1, q + 1),
              _product_factors(q + 1, q + 1), _product_factors(q * q - 1),
              _product_factors(q * q + q + 1), _product_factors(q * q - q + 1)}
    completed = listed | {_product_factors(q * q + 1)}
    rows: dict[tuple[str, str], dict] = {}
    scanned = 0
    finite = 0
    ok = True
    for a, b, c, d in itertools.product(range(-2, 3), repeat=4):
        scanned += 1
        mat = IntMatrix(((a, b), (c, d)))
        if a * d - b * c not in (1, -1) or not _finite_order(mat):
            continue
        finite += 1
        torus = full_torus(mat)
        chi = factorization_text(cyclo_factor(torus))
        structure = fixed_structure(torus, q)
        facs = structure.invariant_factors
        if facs not in completed:
            ok = False
        key = (chi, str(structure))
        if key not in rows:
            rows[key] = {"chi": chi, "structure": str(structure), "count": 0,
                         "listed": facs in listed,
                         "phi4": cyclo_factor(torus).factors == ((4, 1),)}
        rows[key]["count"] += 1
    records = [rows[k] for k in sorted(rows)]
    meta = {"q": q, "matrices_scanned": scanned, "finite_order_count": finite,
            "flagged_phi4": sorted({r["structure"] for r in records if r["phi4"]})}
    return Report("dim2-survey", None, meta, records,
                  "holds" if ok else "fails", time.perf_counter() - t0)
