"""Command line interface.

Subcommands:

* calcul       run the central-translation conjugacy checks (cases 1-5)
* ordre8       order-8 elements in twisted centres of the E7 Levi [2,5,7]
* dim2-survey  exhaustive rank-2 fixed-point structure check
* qi           quasi-isolated class representatives of a group
* twistings    rational forms of a standard Levi
* datum info   root datum summary (diagram, roots, Cartan matrix)
* torus        order polynomial and fixed-point structure of a twisted torus

Exit code 0 iff every verdict holds (and the computation succeeded).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    CASES,
    CaseMismatch,
    Report,
    reports_to_json,
    run_calcul_case,
    run_dim2_survey,
    run_ordre8,
)
from .intlinalg import DimensionMismatch, IntMatrix
from .rootdata import (
    BadIndex,
    InvalidCartan,
    build_datum,
    diagram_text,
    reflection_subgroup,
)
from .semisimple import (
    OrbitBound,
    centralizer,
    element_order,
    orbit,
    quasi_isolated_representatives,
)
from .torus import (
    NotFiniteOrder,
    UnsupportedCyclotomic,
    cyclo_factor,
    factorization_text,
    fixed_structure,
    full_torus,
    phi_order,
)
from .twist import QuotientTooLarge, display_name, twistings


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _runs(counts: list[int]) -> str:
    """Run-length display of a sorted multiset: '3x2, 7x2' for [3,3,7,7]."""
    if not counts:
        return "(none)"
    chunks = []
    i = 0
    while i < len(counts):
        j = i
        while j < len(counts) and counts[j] == counts[i]:
            j += 1
        chunks.append(f"{counts[i]}x{j - i}" if j - i > 1 else str(counts[i]))
        i = j
    return ", ".join(chunks)


def _print_calcul(report: Report) -> None:
    meta = report.metadata
    print(f"case {report.case_id}: {meta['group']} {meta['isogeny']}, "
          f"levi {meta['levi']} ({meta['levi_type']}), n {meta['n_values']}, "
          f"order bound {meta['order_bound']}")
    for rec in report.records:
        counts = "  ".join(f"n={n}: {_runs(m)}"
                           for n, m in rec["count_multisets"].items())
        print(f"  orbit {rec['orbit_size']:>6}  order {rec['order']}  "
              f"m-qi {rec['m_qi_count']:>4}  {counts}")
    print(f"  verdict: {report.verdict} ({report.seconds:.2f}s)")


def _cmd_calcul(args) -> int:
    ids = sorted(CASES) if args.case == "all" else [int(args.case)]
    reports = []
    for cid in ids:
        report = run_calcul_case(CASES[cid])
        _print_calcul(report)
        reports.append(report)
    if args.json:
        _write_output(reports_to_json("calcul", reports), args.json)
    return 0 if all(r.holds for r in reports) else 1


def _cmd_ordre8(args) -> int:
    report = run_ordre8(args.q)
    meta = report.metadata
    print(f"ordre8 q={meta['q']}: |Z8| = {meta['z8_size']}, "
          f"{meta['twist_count']} twisted forms")
    for rec in report.records:
        kind = "mixed" if rec["mixed"] else "extra"
        print(f"  {rec['name']:<45} {kind}  fixed {rec['fixed_count']:>4}  "
              f"orders {rec['profile']}")
    print(f"  verdict: {report.verdict} ({report.seconds:.2f}s)")
    if args.json:
        _write_output(reports_to_json("ordre8", [report]), args.json)
    return 0 if report.holds else 1


def _cmd_dim2(args) -> int:
    report = run_dim2_survey(args.q)
    meta = report.metadata
    print(f"dim2-survey q={meta['q']}: {meta['finite_order_count']} finite-order "
          f"twists out of {meta['matrices_scanned']} scanned")
    for rec in report.records:
        flag = "" if rec["listed"] else "  [outside the classical list]"
        print(f"  {rec['chi']:<15} -> {rec['structure']:<12} x{rec['count']}{flag}")
    print(f"  verdict: {report.verdict} ({report.seconds:.2f}s)")
    if args.json:
        _write_output(reports_to_json("dim2-survey", [report]), args.json)
    return 0 if report.holds else 1


def _cmd_qi(args) -> int:
    g = build_datum(args.type, args.isogeny)
    reps = quasi_isolated_representatives(g, args.bound)
    rows = []
    for s in reps:
        cz = centralizer(g, s)
        rows.append({
            "coords": str(s),
            "order": element_order(s),
            "orbit_size": len(orbit(g.weyl_gens, s)),
            "centralizer_type": cz.connected_part.type_label or "1",
            "component_order": cz.component_order,
        })
    print(f"{args.type} {args.isogeny}: {len(rows)} quasi-isolated classes "
          f"of order <= {args.bound}")
    for r in rows:
        print(f"  {r['coords']:<30} order {r['order']}  orbit {r['orbit_size']:>6}  "
              f"centralizer {r['centralizer_type']}"
              + (f" (component group {r['component_order']})"
                 if r['component_order'] > 1 else ""))
    if args.json:
        _write_output(json.dumps({"reps": rows}, sort_keys=True, indent=2) + "\n",
                      args.json)
    return 0


def _cmd_twistings(args) -> int:
    g = build_datum(args.type, args.isogeny)
    nodes = tuple(int(tok) for tok in args.levi.split(",") if tok)
    levi = reflection_subgroup(g, nodes)
    tws = twistings(g, levi)
    rows = [{
        "w_word": list(t.w.word),
        "radical_poly": t.poly_text,
        "component_orbits": [[list(label) for label in cycle]
                             for cycle in t.component_orbits],
    } for t in tws]
    print(f"{args.type} {args.isogeny}, levi {list(nodes)} ({levi.type_label}): "
          f"{len(tws)} twisted forms")
    for t in tws:
        print(f"  {display_name(t)}")
    if args.json:
        _write_output(json.dumps(rows, sort_keys=True, indent=2) + "\n", args.json)
    return 0


def _load_datum_file(path: str):
    doc = json.loads(Path(path).read_text())
    rank = doc.get("rank")
    r_rows = tuple(tuple(int(x) for x in row) for row in doc["simple_roots"])
    c_rows = tuple(tuple(int(x) for x in row) for row in doc["simple_coroots"])
    if rank is not None and any(len(row) != rank for row in r_rows + c_rows):
        raise InvalidCartan(f"rows do not match the declared rank {rank}")
    return build_datum(isogeny="explicit", simple_roots=r_rows,
                       simple_coroots=c_rows)


def _cmd_datum_info(args) -> int:
    if args.file:
        g = _load_datum_file(args.file)
    else:
        if not args.type:
            print("datum info needs --type or --file", file=sys.stderr)
            return 2
        g = build_datum(args.type, args.isogeny)
    print(f"type {g.type_label} ({g.isogeny}), rank {g.rank}, "
          f"semisimple rank {g.n}")
    print(f"roots: {len(g.roots)} ({g.num_positive} positive), |W| = {g.weyl_size}")
    print("diagram:")
    for line in diagram_text(g).splitlines():
        print(f"  {line}")
    print("Cartan matrix:")
    for row in g.cartan.entries:
        print("  " + " ".join(f"{x:>2}" for x in row))
    return 0


def _read_matrix_file(path: str) -> IntMatrix:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(tuple(int(tok) for tok in line.split()))
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix file must hold a square integer matrix, "
                         "one row per line")
    return IntMatrix(tuple(rows))


def _cmd_torus(args) -> int:
    phi = _read_matrix_file(args.phi)
    torus = full_torus(phi)
    fac = cyclo_factor(torus)
    print(f"phi: {phi.rows} x {phi.cols}, multiplicative order {phi_order(torus)}")
    print(f"order polynomial: {factorization_text(fac)}")
    structure = fixed_structure(torus, args.q)
    print(f"|S^F| at q={args.q}: {structure.order}")
    print(f"structure: {structure}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssverify",
        description="Exact computations with root data, Weyl groups and "
                    "semisimple elements over closures of finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calcul", help="central-translation conjugacy checks")
    p.add_argument("--case", choices=["1", "2", "3", "4", "5", "all"],
                   default="all")
    p.add_argument("--json", metavar="PATH", nargs="?", const="-")
    p.set_defaults(func=_cmd_calcul)

    p = sub.add_parser("ordre8", help="order-8 fixed points in twisted centres")
    p.add_argument("--q", type=int, choices=[3, 5], required=True)
    p.add_argument("--json", metavar="PATH", nargs="?", const="-")
    p.set_defaults(func=_cmd_ordre8)

    p = sub.add_parser("dim2-survey", help="rank-2 fixed-point structure survey")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--json", metavar="PATH", nargs="?", const="-")
    p.set_defaults(func=_cmd_dim2)

    p = sub.add_parser("qi", help="quasi-isolated class representatives")
    p.add_argument("--type", required=True)
    p.add_argument("--isogeny", choices=["adjoint", "simply_connected"],
                   default="adjoint")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--json", metavar="PATH", nargs="?", const="-")
    p.set_defaults(func=_cmd_qi)

    p = sub.add_parser("twistings", help="rational forms of a standard Levi")
    p.add_argument("--type", required=True)
    p.add_argument("--isogeny", choices=["adjoint", "simply_connected"],
                   default="adjoint")
    p.add_argument("--levi", required=True,
                   help="comma-separated simple root indices, e.g. 2,5,7")
    p.add_argument("--json", metavar="PATH", nargs="?", const="-")
    p.set_defaults(func=_cmd_twistings)

    p = sub.add_parser("datum", help="root datum utilities")
    dsub = p.add_subparsers(dest="datum_command", required=True)
    pi = dsub.add_parser("info", help="print diagram, roots and Cartan matrix")
    pi.add_argument("--type")
    pi.add_argument("--isogeny", choices=["adjoint", "simply_connected"],
                    default="adjoint")
    pi.add_argument("--file", metavar="PATH",
                    help="explicit datum JSON with simple_roots/simple_coroots")
    pi.set_defaults(func=_cmd_datum_info)

    p = sub.add_parser("torus", help="twisted torus order and structure")
    p.add_argument("--phi", metavar="PATH", required=True,
                   help="text file, one integer matrix row per line")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=_cmd_torus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BadIndex, CaseMismatch, DimensionMismatch, InvalidCartan,
            NotFiniteOrder, OrbitBound, UnsupportedCyclotomic,
            QuotientTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
