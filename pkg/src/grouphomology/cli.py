"""Command line entry point.

    grouphomology homology C6 --degree 2 --ring Z
    grouphomology cohomology S3 --module negation --degree 0..3
    grouphomology verify default --format machine
    grouphomology enumerate lemma_1_1 --max-order 8 --seeds 3

Exit status: 0 when every scenario passes or is skipped for budget, 1 when
some scenario fails (or unexpectedly violates its hypotheses), 2 on input
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .gmodules import coinvariants, invariants
from .group_homology import h, hc
from .harness import (
    CLAIMS,
    SUITES,
    ScenarioError,
    enumerate_scenarios,
    parse_group_spec,
    parse_module_spec,
    parse_ring_spec,
    resolve_suite,
    run_many,
)
from .linalg import DEFAULT_BUDGET_CELLS, BudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_SHORT = [
    (r"C(\d+)", lambda m: {"cyclic": int(m[1])}),
    (r"C\d+(x\d+)+", None),
    (r"S(\d+)", lambda m: {"symmetric": int(m[1])}),
    (r"D(\d+)", lambda m: {"dihedral": int(m[1])}),
    (r"(SL|GL)(\d+)\((\d+)\)", lambda m: {"matrix_group": {"kind": m[1], "n": int(m[2]), "m": int(m[3])}}),
]


def group_arg(text: str) -> dict:
    """``C6``, ``C2x4``, ``S4``, ``D5``, ``SL2(3)``, ``GL2(3)`` or a JSON group spec."""
    t = text.strip()
    if t.startswith("{"):
        try:
            return json.loads(t)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"group:{exc.colno}", exc.msg) from None
    for pat, build in _SHORT:
        m = re.fullmatch(pat, t)
        if m:
            if build is None:
                return {"product": [int(x) for x in t[1:].split("x")]}
            return build(m)
    raise ScenarioError("group", f"cannot parse {text!r}")


def module_arg(text: str | None):
    if text is None or text in ("trivial", "negation"):
        return text
    if text == "random":
        return {"random": {"max_rank": 3}}
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"module:{exc.colno}", exc.msg) from None


def degrees_arg(text: str) -> list[int]:
    """``2``, ``0..3`` or ``0,2``."""
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ScenarioError("--degree", f"cannot parse {text!r}") from None


def _emit(args, records: list[dict], text_lines: list[str]):
    if args.format == "machine":
        for r in records:
            print(json.dumps(r, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _cmd_homology(args, cohomology: bool) -> int:
    G, _ = parse_group_spec(group_arg(args.group))
    R = parse_ring_spec(args.ring)
    M = parse_module_spec(G, R, module_arg(args.module), args.seed)
    fn = hc if cohomology else h
    name = "H^" if cohomology else "H_"
    records, lines = [], []
    for n in degrees_arg(args.degree):
        try:
            S = fn(G, M, n, budget=args.budget_cells).module
        except BudgetExceeded as exc:
            records.append({"degree": n, "status": "skipped_budget", "detail": str(exc)})
            lines.append(f"{name}{n}: skipped ({exc})")
            continue
        records.append({"degree": n, "invariant_factors": [int(x) for x in S.moduli],
                        "group": args.group, "ring": str(R),
                        "variance": "cohomology" if cohomology else "homology"})
        lines.append(f"{name}{n}(G, M) = {S.describe()}")
    _emit(args, records, lines)
    return EXIT_OK


def _cmd_fixed(args, which: str) -> int:
    G, _ = parse_group_spec(group_arg(args.group))
    R = parse_ring_spec(args.ring)
    M = parse_module_spec(G, R, module_arg(args.module), args.seed)
    mod = (invariants(M) if which == "invariants" else coinvariants(M))[0]
    label = "M^G" if which == "invariants" else "M_G"
    _emit(args, [{which: [int(x) for x in mod.moduli]}], [f"{label} = {mod.describe()}"])
    return EXIT_OK


def _cmd_verify(args) -> int:
    reports = run_many(resolve_suite(args.source), args.jobs)
    if args.output_dir:
        os.makedirs(args.output_dir, exist_ok=True)
        path = os.path.join(args.output_dir, "reports.jsonl")
        with open(path, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(json.dumps(r.record(args.timing), sort_keys=True) + "\n")
    lines = [r.text(args.timing) for r in reports]
    counts = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    lines.append("summary: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    _emit(args, [r.record(args.timing) for r in reports], lines)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _cmd_enumerate(args) -> int:
    sc = enumerate_scenarios(args.claim, args.max_order, args.seeds, args.seed, args.family)
    doc = {"scenarios": [s.to_json() for s in sc]}
    if args.format == "machine":
        print(json.dumps(doc, sort_keys=True))
    else:
        print("\n".join(s.id for s in sc))
        print(f"{len(sc)} scenarios")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--budget-cells", type=int, default=DEFAULT_BUDGET_CELLS,
                        help="largest differential (rows x cols) the bar complex may build")
    common.add_argument("--seed", type=int, default=0)

    coeff = argparse.ArgumentParser(add_help=False)
    coeff.add_argument("group", help="C6, C2x4, S4, D5, SL2(3), GL2(3) or a JSON group spec")
    coeff.add_argument("--module", default="trivial",
                       help="trivial, negation, random or a JSON module spec")
    coeff.add_argument("--ring", default="Z", help="Z or Z[1/l]")

    p = argparse.ArgumentParser(prog="grouphomology", description="Exact group (co)homology checks.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("homology", "cohomology"):
        s = sub.add_parser(name, parents=[common, coeff])
        s.add_argument("--degree", default="0..2", help="a degree, a range a..b or a list")
    for name in ("invariants", "coinvariants"):
        sub.add_parser(name, parents=[common, coeff])
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("source", help=f"a scenario file or a built-in suite ({', '.join(SUITES)})")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--timing", action="store_true", help="include wall times in the output")
    v.add_argument("--output-dir", help="also write machine records to DIR/reports.jsonl")
    e = sub.add_parser("enumerate", parents=[common])
    e.add_argument("claim", choices=CLAIMS)
    e.add_argument("--max-order", type=int, default=8)
    e.add_argument("--seeds", type=int, default=3)
    e.add_argument("--family", choices=("order", "l_torsion"), default="order")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("homology", "cohomology"):
            return _cmd_homology(args, args.command == "cohomology")
        if args.command in ("invariants", "coinvariants"):
            return _cmd_fixed(args, args.command)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_enumerate(args)
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
