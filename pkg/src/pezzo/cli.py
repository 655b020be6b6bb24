"""Command-line interface.

Exit codes: 0 on success, 1 for domain errors (reported on stderr),
2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .cascade import (
    Classification,
    UnknownTable,
    classify,
    relatively_minimal_types,
    render_table,
    seed_catalog,
)
from .dynkin import NotADE, ParseError
from .exactnum import format_rational, rational
from .kodaira import (
    BadComponentIndex,
    InconsistentOrders,
    NonMinimal,
    local_contribution,
    parse_fiber,
)
from .mordell import (
    FiberConfiguration,
    MWStructure,
    NegativeRank,
    NoAssignment,
    shioda_tate_rank,
    solve_sections,
    trivial_lattice,
)
from .surface import NotMinusOne, UnknownCurve, graph_from_json
from .weierstrass import (
    DegreeMismatch,
    FormParseError,
    ZeroDiscriminant,
    fiber_configuration_of,
    fiber_multiset,
    j_invariant,
    parse_form,
)

DOMAIN_ERRORS = (
    NotADE,
    ParseError,
    BadComponentIndex,
    InconsistentOrders,
    NonMinimal,
    NegativeRank,
    NoAssignment,
    NotMinusOne,
    UnknownCurve,
    UnknownTable,
    DegreeMismatch,
    FormParseError,
    ZeroDiscriminant,
    ValueError,
    KeyError,
)


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_contrib(args) -> int:
    kind = parse_fiber(args.fiber)
    value = local_contribution(kind, args.i, args.j)
    _emit(
        {
            "fiber": str(kind),
            "i": args.i,
            "j": args.j,
            "contribution": format_rational(value),
        }
    )
    return 0


def _cmd_rank(args) -> int:
    config = FiberConfiguration.parse(args.config)
    lattice, rho_triv = trivial_lattice(config)
    _emit(
        {
            "configuration": str(config),
            "trivial_lattice": str(lattice),
            "trivial_rank": rho_triv,
            "mordell_weil_rank": shioda_tate_rank(config),
        }
    )
    return 0


def _load_mw(args, config: FiberConfiguration) -> MWStructure:
    torsion = tuple(int(t) for t in args.torsion.split(",")) if args.torsion else ()
    if args.height is not None:
        return MWStructure.rank_one(rational(args.height), torsion)
    return MWStructure.rank_zero(torsion)


def _seed_by_number(catalog_rank: int, number: int):
    for seed in seed_catalog(catalog_rank):
        if seed.number == number:
            return seed
    raise KeyError(f"no entry {number} in the rank-{catalog_rank} catalog")


def _cmd_sections(args) -> int:
    if args.catalog is not None:
        seed = _seed_by_number(args.catalog, args.number)
        config, mw = seed.config, seed.mw
    else:
        if args.config is None:
            raise ValueError("either --catalog/--number or --config is required")
        config = FiberConfiguration.parse(args.config)
        mw = _load_mw(args, config)
    if getattr(args, "verify", False):
        return _verify_sections(args, config, mw)
    result = solve_sections(
        config, mw, po_max=args.po_max, all_solutions=args.all_solutions
    )
    solutions = result if args.all_solutions else [result]
    payload = {
        "configuration": str(config),
        "solutions": [
            {
                "sections": [r.to_json(config) for r in sol.records],
                "intersections": {
                    f"({a} {b})": w for (a, b), w in sorted(sol.intersections.items())
                },
            }
            for sol in solutions
        ],
    }
    _emit(payload)
    return 0


def _verify_sections(args, config, mw) -> int:
    """Diff solver output against the shipped section tables."""
    import os

    from .cascade import _data_dir

    with open(os.path.join(_data_dir(), "section_tables.json")) as fh:
        tables = json.load(fh)
    entry = tables.get(str(args.number))
    if entry is None:
        raise KeyError(f"no shipped section table for catalog entry {args.number}")
    want = {k: sorted(tuple(a) for a in v) for k, v in entry["classes"].items()}
    matched = False
    for sol in solve_sections(config, mw, all_solutions=True):
        classes = {}
        for rec in sol.records:
            n = abs(rec.element.coords[0]) if rec.element.coords else 0
            classes.setdefault(str(n), []).append(rec.assignment)
        got = {k: sorted(v) for k, v in classes.items()}
        if got == want:
            matched = True
            break
    _emit({"number": args.number, "verified": matched})
    return 0 if matched else 1


def _cmd_blowdown(args) -> int:
    with open(args.graph) as fh:
        graph = graph_from_json(json.load(fh))
    graph = graph.blow_down(args.curve)
    _emit(graph.to_json())
    return 0


def _cmd_classify(args) -> int:
    classification = classify(
        seed_catalog(args.rank), include_quadric_cone=args.rank == 0
    )
    if args.rel_min:
        labels = sorted(relatively_minimal_types(classification, args.picard, args.k2))
    else:
        labels = sorted(classification.type_set(args.picard, args.k2))
    payload = {
        "rank": args.rank,
        "picard": args.picard,
        "k2": args.k2,
        "relatively_minimal": args.rel_min,
        "types": labels,
    }
    _emit(payload)
    return 0


def _cmd_tables(args) -> int:
    sys.stdout.write(render_table(args.name))
    sys.stdout.write("\n")
    return 0


def _cmd_weierstrass(args) -> int:
    g2 = parse_form(args.g2, 4)
    g3 = parse_form(args.g3, 6)
    points = fiber_configuration_of(g2, g3, scaled=args.scaled)
    payload = {
        "points": [
            {
                "at": p.label,
                "count": p.count,
                "fiber": str(p.kind) if p.kind else None,
                "orders": {"g2": p.orders[0], "g3": p.orders[1], "delta": p.orders[2]},
            }
            for p in points
        ],
        "fibers": fiber_multiset(points),
        "j_constant": j_invariant(g2, g3, scaled=args.scaled).is_constant,
    }
    _emit(payload)
    return 0


def _cmd_export_dot(args) -> int:
    with open(args.graph) as fh:
        graph = graph_from_json(json.load(fh))
    sys.stdout.write(graph.to_dot())
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pezzo",
        description="Mordell-Weil lattices of rational elliptic surfaces "
        "and blow-down classification of Gorenstein log del Pezzo surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("contrib", help="local height contribution of a fiber")
    p.add_argument("fiber", help="fiber symbol, e.g. I4 or I2* or IV*")
    p.add_argument("i", type=int, help="component met by the first section")
    p.add_argument("j", type=int, help="component met by the second section")
    p.set_defaults(func=_cmd_contrib)

    p = sub.add_parser("rank", help="Mordell-Weil rank of a fiber configuration")
    p.add_argument("config", help="comma-separated fibers, e.g. 'I9,3I1'")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("sections", help="solve for sections disjoint from O")
    p.add_argument("--catalog", type=int, choices=(0, 1), help="catalog rank")
    p.add_argument("--number", type=int, help="catalog entry number")
    p.add_argument("--config", help="fiber configuration")
    p.add_argument("--height", help="height of the free generator (rank one)")
    p.add_argument("--torsion", help="torsion invariants, e.g. '2,2'")
    p.add_argument("--po-max", type=int, default=0, help="allowed (P O)")
    p.add_argument("--all-solutions", action="store_true")
    p.add_argument(
        "--verify",
        action="store_true",
        help="diff solver output against the shipped section tables",
    )
    p.set_defaults(func=_cmd_sections)

    p = sub.add_parser("blowdown", help="contract a (-1)-curve in a graph file")
    p.add_argument("graph", help="JSON file produced by this tool")
    p.add_argument("curve", help="name of the (-1)-curve")
    p.set_defaults(func=_cmd_blowdown)

    p = sub.add_parser("classify", help="run the blow-down cascade")
    p.add_argument("--rank", type=int, choices=(0, 1), required=True)
    p.add_argument("--picard", type=int, default=1, help="Picard number (1 or 2)")
    p.add_argument("--k2", type=int, default=None)
    p.add_argument("--rel-min", action="store_true", help="relatively minimal only")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("tables", help="render a classification table")
    p.add_argument("name", help="table name, e.g. T1.1, T4.3, T5.5, A3")
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("weierstrass", help="singular fibers from (g2, g3)")
    p.add_argument("--g2", required=True, help="degree-4 form in X, Y (w allowed)")
    p.add_argument("--g3", required=True, help="degree-6 form in X, Y (w allowed)")
    p.add_argument(
        "--scaled",
        action="store_true",
        help="inputs use the convention Delta = g2^3 - g3^2",
    )
    p.set_defaults(func=_cmd_weierstrass)

    p = sub.add_parser("export-dot", help="Graphviz rendering of a graph file")
    p.add_argument("graph", help="JSON file produced by this tool")
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)}, sys.stderr, indent=2
        )
        sys.stderr.write("\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
