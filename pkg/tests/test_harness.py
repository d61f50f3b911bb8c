"""Harness checks: the case table, report shape, golden records under
tests/fixtures, and the conservation and stability laws the runs rely on."""

import dataclasses
import itertools
import json
from fractions import Fraction
from pathlib import Path

import pytest

from ssverify.harness import (
    CASES,
    CaseMismatch,
    Report,
    count_nonconjugate,
    reports_to_json,
    run_calcul_case,
    run_dim2_survey,
    run_ordre8,
)
from ssverify.rootdata import build_datum, reflection_subgroup
from ssverify.semisimple import (
    algebraic_centre,
    canonical_form,
    element,
    element_order,
    is_quasi_isolated,
    orbit,
    pair_root,
    quasi_isolated_representatives,
    torsion_subgroup,
)

FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name):
    return json.loads((FIXTURES / name).read_text())


@pytest.fixture(scope="module")
def case1():
    return run_calcul_case(CASES[1])


@pytest.fixture(scope="module")
def ordre8_q3():
    return run_ordre8(3)


class TestCase1:
    def test_verdict(self, case1):
        assert case1.holds
        assert case1.metadata["levi_type"] == "A2xA2"

    def test_orbit_sizes(self, case1):
        golden = fixture("calcul_case1.json")
        assert sorted(r["orbit_size"] for r in case1.records) == golden["orbit_sizes"]

    def test_m_qi_counts(self, case1):
        golden = fixture("calcul_case1.json")
        got = {str(r["orbit_size"]): r["m_qi_count"] for r in case1.records}
        assert got == golden["m_qi_counts"]

    def test_count_multisets(self, case1):
        golden = fixture("calcul_case1.json")
        got = {str(r["orbit_size"]): r["count_multisets"]["3"]
               for r in case1.records}
        assert got == golden["count_multisets"]

    def test_order2_m_qi_set(self, case1):
        golden = fixture("calcul_case1.json")
        rec = next(r for r in case1.records if r["orbit_size"] == 36)
        assert all(c["m_orbit_size"] == 1 for c in rec["m_classes"])
        got = sorted(c["rep"] for c in rec["m_classes"])
        assert got == golden["order2_m_qi_set"]

    def test_orbit_conservation(self, case1):
        """Union of the class orbits is exactly the set of bounded-order
        quasi-isolated elements, counted by an independent route: partition
        the full torsion grid by canonical form, then test quasi-isolation
        once per class."""
        g = build_datum("E6", "adjoint")
        total = sum(r["orbit_size"] for r in case1.records)
        assert total == 1287

        classes = {}
        seen = set()
        for d in (4, 5, 6):
            for coords in itertools.product(range(d), repeat=6):
                key = tuple(Fraction(c, d) for c in coords)
                if key in seen:
                    continue
                seen.add(key)
                s = element(g, key)
                form = canonical_form(g, s)
                if form in classes:
                    classes[form][1] += 1
                else:
                    classes[form] = [s, 1]
        assert len(seen) == 66312

        qi_total = sum(size for s, size in classes.values()
                       if is_quasi_isolated(g, s))
        assert qi_total == total

        reps = quasi_isolated_representatives(g, 6)
        assert ({form for form, (s, _) in classes.items()
                 if is_quasi_isolated(g, s)}
                == {canonical_form(g, s) for s in reps})


class TestCaseTable:
    def test_wrong_levi_raises(self):
        bad = dataclasses.replace(CASES[1], levi_indices=(1, 2))
        with pytest.raises(CaseMismatch):
            run_calcul_case(bad)

    def test_n1_fails(self):
        report = run_calcul_case(dataclasses.replace(CASES[1], n_values=(1,)))
        assert report.verdict == "fails"
        assert all(c == 0
                   for r in report.records
                   for c in r["count_multisets"]["1"])

    def test_case2_bound_stability(self):
        """Doubling the order bound adds only central translates of known
        classes and leaves the verdict intact. Raw class lists differ: the
        order-3 class with centralizer A5xA2 has an order-6 translate by
        the central involution, which shares its centralizer."""
        g = build_datum("E7", "simply_connected")
        r4 = quasi_isolated_representatives(g, 4)
        r8 = quasi_isolated_representatives(g, 8)
        assert len(r4) == 7 and len(r8) == 8

        z = next(s for s in r4 if element_order(s) == 2
                 and all(pair_root(s, i).numerator == 0
                         for i in range(1, g.n + 1)))
        forms4 = {canonical_form(g, s) for s in r4}
        for s in r8:
            assert (canonical_form(g, s) in forms4
                    or canonical_form(g, s + z) in forms4)

        report = run_calcul_case(dataclasses.replace(CASES[2], order_bound=8))
        assert report.holds
        assert len(report.records) == 8

    def test_count_is_torsion_monotone(self):
        """The per-z conjugacy test does not depend on n, so counting over
        the 4-torsion slice of the 12-torsion grid equals counting over the
        4-torsion grid directly."""
        g = build_datum("E7", "adjoint")
        levi = reflection_subgroup(g, (2, 5, 7))
        z0, _ = algebraic_centre(levi)
        z4 = torsion_subgroup(g, z0, 4)
        z12 = torsion_subgroup(g, z0, 12)
        slice4 = [z for z in z12 if element_order(z) in (1, 2, 4)]
        assert {str(z) for z in slice4} == {str(z) for z in z4}

        s = next(s for s in quasi_isolated_representatives(g, 6)
                 if element_order(s) == 2 and is_quasi_isolated(levi, s))
        reference = canonical_form(g, s)
        assert (count_nonconjugate(g, reference, s, z4)
                == count_nonconjugate(g, reference, s, slice4))


class TestReportShape:
    def test_to_dict_excludes_seconds(self, case1):
        payload = case1.to_dict()
        assert "seconds" not in payload
        assert payload["case_id"] == 1
        assert payload["verdict"] == "holds"

    def test_caseless_report_omits_case_id(self):
        report = Report("dim2-survey", None, {}, [], "holds", 0.0)
        assert "case_id" not in report.to_dict()

    def test_json_schema(self, case1):
        text = reports_to_json("calcul", [case1])
        assert text.endswith("\n")
        doc = json.loads(text)
        assert doc["schema"] == 1
        assert doc["command"] == "calcul"
        assert len(doc["cases"]) == 1

    def test_rerun_is_byte_identical(self, case1):
        again = run_calcul_case(CASES[1])
        assert (reports_to_json("calcul", [case1])
                == reports_to_json("calcul", [again]))


class TestOrdre8:
    def test_sizes_and_polys(self, ordre8_q3):
        golden = fixture("ordre8_q3.json")
        meta = ordre8_q3.metadata
        assert meta["z8_size"] == golden["z8_size"]
        assert meta["twist_count"] == golden["twist_count"]
        assert meta["poly_multiset"] == golden["poly_multiset"]

    def test_selected_records(self, ordre8_q3):
        golden = fixture("ordre8_q3.json")
        assert len(ordre8_q3.records) == golden["selected_count"]
        mixed = [r for r in ordre8_q3.records if r["mixed"]]
        assert sorted(r["poly"] for r in mixed) == golden["mixed_polys"]
        extra = [r for r in ordre8_q3.records if not r["mixed"]]
        assert [r["poly"] for r in extra] == [golden["extra_poly"]]
        assert extra[0]["profile"] == golden["extra_profile"]
        for r in mixed:
            assert r["profile"] == golden["mixed_profile"]

    def test_fixed_counts(self, ordre8_q3):
        golden = fixture("ordre8_q3.json")
        counts = [r["fixed_count"] for r in ordre8_q3.records
                  if r["poly"] == "(q-1)^3*(q+1)"]
        assert counts == [golden["fixed_count_qm1_cubed"]] * 2

    def test_verdict(self, ordre8_q3):
        assert ordre8_q3.holds

    def test_q5_holds(self):
        report = run_ordre8(5)
        assert report.holds
        for r in report.records:
            if r["mixed"]:
                assert 8 in r["profile"]

    def test_bad_q_rejected(self):
        with pytest.raises(ValueError):
            run_ordre8(4)


class TestDim2:
    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_holds(self, q):
        assert run_dim2_survey(q).holds

    def test_q3_structures(self):
        golden = fixture("dim2.json")
        report = run_dim2_survey(3)
        assert report.metadata["finite_order_count"] == golden["finite_order_count"]
        structures = {r["structure"] for r in report.records}
        assert structures == set(golden["q3_structures"]) | {"Z/10"}
        flagged = sorted((r["chi"], r["structure"])
                         for r in report.records if r["phi4"])
        assert flagged == [tuple(row) for row in golden["q3_flagged"]]
        assert all(not r["listed"] for r in report.records if r["phi4"])
        assert all(r["listed"] for r in report.records if not r["phi4"])

    def test_q2_and_q4_structures(self):
        golden = fixture("dim2.json")
        q2 = {r["structure"] for r in run_dim2_survey(2).records}
        assert golden["q2_includes"] in q2
        q4 = {r["structure"] for r in run_dim2_survey(4).records}
        assert set(golden["q4_includes"]) <= q4

    def test_small_q_rejected(self):
        with pytest.raises(ValueError):
            run_dim2_survey(1)
