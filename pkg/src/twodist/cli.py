"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage or I/O error, 3 budget
abort.  The environment variable TWO_DIST_BUDGET overrides node budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import gadgets, pipeline
from .coloring import chi2 as chi2_of
from .coloring import format_witness, solve
from .configs import PatternError, check_reducible, parse_pattern
from .graphs import GraphError
from .io import load_graph_file


def _env_budget(default: int) -> int:
    raw = os.environ.get("TWO_DIST_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise SystemExit(pipeline.EXIT_USAGE)
    return default


def _cmd_solve(args: argparse.Namespace) -> int:
    doc = load_graph_file(args.graph)
    budget = _env_budget(args.budget)
    res = solve(doc.graph, doc.lists, budget=budget)
    if res.is_sat:
        print("SAT")
        print(format_witness(res.witness))
        return pipeline.EXIT_PASS
    if res.is_unsat:
        print("UNSAT")
        return pipeline.EXIT_PASS
    print("ABORTED")
    return pipeline.EXIT_ABORT


def _cmd_chi2(args: argparse.Namespace) -> int:
    doc = load_graph_file(args.graph)
    print(chi2_of(doc.graph))
    return pipeline.EXIT_PASS


def _cmd_reduce(args: argparse.Namespace) -> int:
    pattern = parse_pattern(args.pattern)
    budget = _env_budget(args.budget)
    verdict = check_reducible(pattern, budget=budget)
    payload = {
        "pattern": pattern.dsl(),
        "verdict": verdict.status,
        "expansions": verdict.expansions,
        "assignments": verdict.assignments,
        "solver_calls": verdict.solver_calls,
    }
    if verdict.counterexample is not None:
        from .coloring import letters_from_mask

        payload["counterexample"] = {
            "expansion": verdict.counterexample.expansion.dsl(),
            "lists": {
                lab: letters_from_mask(m)
                for lab, m in zip(
                    verdict.counterexample.labels, verdict.counterexample.lists
                )
            },
        }
    print(json.dumps(payload, indent=1, sort_keys=True))
    if verdict.status == "reducible":
        return pipeline.EXIT_PASS
    if verdict.status == "aborted":
        return pipeline.EXIT_ABORT
    return pipeline.EXIT_FAIL


def _cmd_audit(args: argparse.Namespace) -> int:
    from .discharging import ForbiddenDB, UncertifiedError, audit_all, default_rules, parse_rules

    if args.rules:
        with open(args.rules, "r", encoding="utf-8") as fh:
            rules = parse_rules(fh.read())
    else:
        rules = default_rules()
    if args.mutate:
        rules = rules.mutate(args.mutate, args.mutate_quarters)
    certificates = pipeline.load_certification(args.db)
    db = ForbiddenDB.standard(certificates)
    try:
        report = audit_all(rules, db)
    except UncertifiedError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return pipeline.EXIT_FAIL
    print(json.dumps(report.to_json(), indent=1, sort_keys=True))
    return pipeline.EXIT_PASS if report.ok else pipeline.EXIT_FAIL


def _cmd_gadget(args: argparse.Namespace) -> int:
    if args.action == "build":
        builder = gadgets.BUILDERS.get(args.name)
        if builder is None:
            print(f"unknown gadget {args.name!r}", file=sys.stderr)
            return pipeline.EXIT_USAGE
        gadget = builder()
        fmt = args.format
        if fmt is None and args.out:
            fmt = {"json": "json", "dot": "dot"}.get(
                args.out.rsplit(".", 1)[-1], "text"
            )
        text = gadgets.export(gadget, fmt or "text")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            print(text, end="")
        return pipeline.EXIT_PASS
    # verify
    doc = load_graph_file(args.name)
    if doc.labels is None or "u" not in doc.labels or "v" not in doc.labels:
        print("gadget verification needs the JSON export with port labels", file=sys.stderr)
        return pipeline.EXIT_USAGE
    gadget = gadgets.Gadget(
        doc.graph,
        doc.labels.index("u"),
        doc.labels.index("v"),
        doc.labels,
        doc.rotation,
        None,
    )
    report = gadgets.verify_metrics(gadget)
    print(json.dumps(
        {k: (str(v) if v == float("inf") else v) for k, v in report.measured.items()},
        indent=1,
        sort_keys=True,
    ))
    return pipeline.EXIT_PASS


def _cmd_run(args: argparse.Namespace) -> int:
    manifest = pipeline.Manifest(
        outdir=args.out,
        jobs=args.jobs,
        budget=_env_budget(0),
        direct_budget=_env_budget(args.direct_budget),
        rules_path=args.rules,
        include_certification=not args.skip_certification,
        certification_path=args.certification,
        mutate_rule=args.mutate,
        mutate_quarters=args.mutate_quarters,
    )
    return pipeline.run_all(manifest)


def _cmd_report(args: argparse.Namespace) -> int:
    path = os.path.join(args.dir, "summary.json")
    with open(path, "r", encoding="utf-8") as fh:
        summary = json.load(fh)
    width = max(len(t["task"]) for t in summary["tasks"])
    for task in summary["tasks"]:
        note = f"  ({task['note']})" if task.get("note") else ""
        print(f"{task['task']:<{width}}  {task['status']}{note}")
    print(f"exit code: {summary['exit_code']}")
    return summary["exit_code"]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="twodist",
        description="Exact verification toolkit for 2-distance 4-coloring of "
        "planar subcubic graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance file (graph plus optional lists)")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, default=0)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("chi2", help="2-distance chromatic number of a graph file")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_chi2)

    p = sub.add_parser("reduce", help='check a configuration, e.g. "pair 4+ 3+ 0 - 0 2+ 4+"')
    p.add_argument("pattern")
    p.add_argument("--budget", type=int, default=0)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("audit", help="run the discharging audit against a certified catalog")
    p.add_argument("--rules", default=None)
    p.add_argument("--db", required=True, help="certification artifact (certified.json)")
    p.add_argument("--mutate", default=None, help='rule case to perturb, e.g. "R0(i)"')
    p.add_argument("--mutate-quarters", type=int, default=0)
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("gadget", help="build or verify gadget graphs")
    p.add_argument("action", choices=["build", "verify"])
    p.add_argument("name", help="gadget name for build, file path for verify")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["text", "json", "dot"], default=None)
    p.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("run", help="run the full verification pipeline")
    p.add_argument("--out", default="reports")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--rules", default=None)
    p.add_argument("--certification", default=None, help="reuse a certification artifact")
    p.add_argument("--skip-certification", action="store_true")
    p.add_argument("--direct-budget", type=int, default=40_000_000)
    p.add_argument("--mutate", default=None)
    p.add_argument("--mutate-quarters", type=int, default=0)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("report", help="print the pass/fail lines of a report bundle")
    p.add_argument("--dir", default="reports")
    p.set_defaults(func=_cmd_report)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, PatternError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return pipeline.EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return pipeline.EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
