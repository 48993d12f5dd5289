"""Command-line front end.

Exit codes: 0 when every check passed, 1 when a check failed, 2 for usage
and parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .axioms import AXIOMS, lemma21_validate, run_axioms
from .field import FieldError
from .graph import (
    DEFAULT_INDEX_CAP,
    IndexTooLarge,
    build_index,
    degree_stats,
    distance_distribution,
    distance_report_json,
    to_dot,
    verify_distance_formula,
)
from .maps import MapError, antipodal_swap, alternate_shift, falsify_theorem, identity_map, load_map, map_verdict, permutation_map, save_map
from .matrix import Matrix, MatrixError
from .scenarios import run_scenario, scenario_names
from .spaces import DEFAULT_POINT_CAP, SpaceError, enumerate_space, parse_descriptor

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _space(args, text: str | None = None):
    desc = parse_descriptor(text or args.space)
    return enumerate_space(desc, cap=args.cap)


def _emit(args, payload: dict[str, Any]) -> None:
    if args.format == "table":
        text = _as_table(payload)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _as_table(payload: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_as_table(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines.append(_as_table(item, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{payload}")
    return "\n".join(lines) + "\n"


def cmd_space(args) -> int:
    space = _space(args)
    index = build_index(space, cap=args.index_cap)
    _emit(
        args,
        {
            "space": space.name,
            "points": space.size,
            "edges": space.edge_count,
            "degree": degree_stats(space),
            "connected": index.connected,
            "diameter": index.diameter,
            "distance_distribution": {str(k): v for k, v in distance_distribution(index).items()},
        },
    )
    return EXIT_OK


def cmd_axioms(args) -> int:
    space = _space(args)
    index = build_index(space, cap=args.index_cap)
    wanted = [a.strip().upper() for a in args.axioms.split(",")] if args.axioms else list(AXIOMS)
    unknown = [a for a in wanted if a not in AXIOMS]
    if unknown:
        raise UsageError(f"unknown axioms {unknown}")
    results = run_axioms(index, wanted)
    _emit(args, {"space": space.name, "diameter": index.diameter, "results": [r.to_dict(index) for r in results.values()]})
    return EXIT_OK if all(r.holds for r in results.values()) else EXIT_FAIL


def cmd_verify(args) -> int:
    space = _space(args)
    index = build_index(space, cap=args.index_cap)
    report = verify_distance_formula(space, index)
    _emit(args, report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lemma21(args) -> int:
    space = _space(args)
    index = build_index(space, cap=args.index_cap)
    report = lemma21_validate(index, jobs=args.jobs)
    _emit(args, report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_scenario(args) -> int:
    try:
        result = run_scenario(args.name, seed=args.seed)
    except KeyError:
        raise UsageError(f"unknown scenario {args.name!r}; choose from {scenario_names()}") from None
    _emit(args, result.to_dict())
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_map_test(args) -> int:
    src = _space(args)
    tgt = _space(args, args.target) if args.target else src
    phi = load_map(args.map, src, tgt)
    verdict = map_verdict(phi, build_index(src, cap=args.index_cap), build_index(tgt, cap=args.index_cap))
    _emit(args, verdict)
    return EXIT_OK if verdict["dm_treu"] and verdict["isomorphism"] else EXIT_FAIL


def cmd_falsify(args) -> int:
    space = _space(args)
    index = build_index(space, cap=args.index_cap)
    report = falsify_theorem(index, perturbed=args.perturbed, group=args.group, seed=args.seed)
    _emit(args, report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_make_map(args) -> int:
    space = _space(args)
    kind, _, arg = args.kind.partition(":")
    if kind == "identity":
        phi = identity_map(space)
    elif kind == "antipodal":
        phi = antipodal_swap(build_index(space, cap=args.index_cap), int(arg or 0))
    elif kind == "swap":
        u, v = (int(t) for t in arg.split(","))
        phi = permutation_map(space, (u, v))
    elif kind == "alt-shift":
        k = Matrix.parse(space.field, arg) if arg else None
        if k is None:
            n = space.descriptor.n
            k = Matrix.unit(space.field, n, n, 1, 2) + Matrix.unit(space.field, n, n, 2, 1)
        phi = alternate_shift(space, k)
    else:
        raise UsageError(f"unknown map kind {args.kind!r}")
    save_map(phi, args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    space = _space(args)
    if args.format == "dot":
        text = to_dot(space)
    else:
        text = distance_report_json(build_index(space, cap=args.index_cap))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_POINT_CAP, help="maximum number of points")
    common.add_argument("--index-cap", type=int, default=DEFAULT_INDEX_CAP, help="maximum vertices for all-pairs distances")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")

    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--format", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(prog="matgeom", description="Adjacency graphs of matrix geometries over small finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", parents=[common, report], help="point count, degrees, diameter, distance census")
    p.add_argument("--space", required=True)
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("axioms", parents=[common, report], help="check the axioms A1-A5")
    p.add_argument("--space", required=True)
    p.add_argument("--axioms", help="comma separated subset, e.g. A1,A4")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("verify", parents=[common, report], help="compare BFS distances with the closed formula")
    p.add_argument("--space", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lemma21", parents=[common, report], help="compare the distinguished-point criterion with the edge set")
    p.add_argument("--space", required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker threads for the pair scan")
    p.set_defaults(func=cmd_lemma21)

    p = sub.add_parser("scenario", parents=[common, report], help="run a named reproduction")
    p.add_argument("name", help=", ".join(scenario_names()))
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("map-test", parents=[common, report], help="test a map file for dm-treu and isomorphism")
    p.add_argument("--map", required=True)
    p.add_argument("--space", "--src", dest="space", required=True, help="source space")
    p.add_argument("--target", "--tgt", dest="target", help="target space (defaults to the source)")
    p.set_defaults(func=cmd_map_test)

    p = sub.add_parser("falsify", parents=[common, report], help="search sampled maps for a dm-treu non-isomorphism")
    p.add_argument("--space", required=True)
    p.add_argument("--perturbed", type=int, default=1000)
    p.add_argument("--group", type=int, default=100)
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("make-map", parents=[common], help="write a map file")
    p.add_argument("--space", required=True)
    p.add_argument("--kind", required=True, help="identity | antipodal:<v> | swap:<u>,<v> | alt-shift[:<K>]")
    p.set_defaults(func=cmd_make_map)

    p = sub.add_parser("export", parents=[common], help="DOT graph or JSON distance report")
    p.add_argument("--space", required=True)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "out", None) is None and args.command == "make-map":
        parser.error("make-map needs --out")
    try:
        return args.func(args)
    except (UsageError, SpaceError, FieldError, MapError, MatrixError, IndexTooLarge, ValueError) as exc:
        print(f"matgeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"matgeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
