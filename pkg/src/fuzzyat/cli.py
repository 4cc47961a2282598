"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 model error, 3 computational blowup,
4 demo self-check failure.  Stdout is deterministic for identical inputs;
wall-clock timing goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .attack_tree import DEFAULT_SUITE_CAP
from .demos import DEMO_NAMES, run_demo
from .dsl import ModelFile, parse_file
from .engines import (
    DEFAULT_ORACLE_CAP,
    AnalysisResult,
    run_analysis,
)
from .errors import BlowupError, FuzzyatError, ModelError
from .fuzzy import DEFAULT_ALPHA_LEVELS, DiscreteFuzzy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MODEL = 2
EXIT_BLOWUP = 3
EXIT_SELF_CHECK = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _use_color() -> bool:
    return sys.stderr.isatty() and not os.environ.get("FUZZYAT_NO_COLOR")


def _style(text: str, code: str) -> str:
    if _use_color():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fuzzyat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, attribution=True):
        p.add_argument("file", help="model file (.fat)")
        if attribution:
            p.add_argument("--attribution", help="attribution name (default: the only one)")
            p.add_argument(
                "--engine",
                default="auto",
                choices=["auto", "bottom-up", "oracle", "modular", "naive", "buggy-dag"],
            )
            p.add_argument("--alpha-levels", type=int, default=DEFAULT_ALPHA_LEVELS,
                           help="alpha grid size for approximate multiplication")
            p.add_argument("--suite-cap", type=int, default=DEFAULT_SUITE_CAP)
            p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)

    p_analyze = sub.add_parser("analyze", help="compute the metric of an attribution")
    add_common(p_analyze)
    p_analyze.add_argument("--format", default="json", choices=["json", "text"])

    p_check = sub.add_parser("check", help="validate a model file")
    add_common(p_check, attribution=False)

    p_modules = sub.add_parser("modules", help="list the modules of each tree")
    add_common(p_modules, attribution=False)

    p_plot = sub.add_parser("plot", help="emit the metric's membership curve as CSV")
    add_common(p_plot)
    p_plot.add_argument("--samples", type=int, default=200,
                        help="uniform sample count over the support (plus exact breakpoints)")

    p_demo = sub.add_parser("demo", help="run a built-in demonstration")
    p_demo.add_argument("which", choices=list(DEMO_NAMES))
    return parser


def _load(path: str) -> ModelFile:
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    try:
        return parse_file(path)
    except UnicodeDecodeError as exc:
        raise ModelError(f"{path} is not valid UTF-8: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _pick_attribution(model: ModelFile, requested):
    if requested is not None:
        if requested not in model.attributions:
            known = ", ".join(sorted(model.attributions)) or "(none)"
            raise UsageError(f"unknown attribution {requested!r}; available: {known}")
        return requested
    if len(model.attributions) == 1:
        return next(iter(model.attributions))
    known = ", ".join(sorted(model.attributions)) or "(none)"
    raise UsageError(f"--attribution is required; available: {known}")


def _analyze(args) -> AnalysisResult:
    model = _load(args.file)
    name = _pick_attribution(model, args.attribution)
    tree, domain, elements = model.materialize(name)
    result = run_analysis(
        tree,
        domain,
        elements,
        engine=args.engine,
        alpha_levels=args.alpha_levels,
        oracle_cap=args.oracle_cap,
        suite_cap=args.suite_cap,
    )
    if result.engine == "buggy-dag":
        print(
            _style("*** unsound-on-DAG demonstration: this engine double-counts "
                   "shared leaves; do not use its output ***", "1;33"),
            file=sys.stderr,
        )
    wall = result.stats.get("wall_time_s")
    if wall is not None:
        print(f"computed in {wall:.3f}s", file=sys.stderr)
    return result


def cmd_analyze(args) -> int:
    result = _analyze(args)
    if args.format == "json":
        print(json.dumps(result.to_json_dict(), sort_keys=True, indent=2))
    else:
        print(f"engine: {result.engine}")
        print(f"approximate: {'yes' if result.approximate else 'no'}")
        if isinstance(result.metric, DiscreteFuzzy):
            print("result (discrete):")
            print("  value degree")
            for v, d in result.metric.entries:
                print(f"  {v!r:>12} {d!r}")
        else:
            print("result (piecewise-linear):")
            print("  x mu")
            for x, mu in result.metric.breakpoints:
                print(f"  {x!r:>12} {mu!r}")
        stats = result.to_json_dict()["stats"]
        print("stats: " + " ".join(f"{k}={stats[k]}" for k in sorted(stats)))
    return EXIT_OK


def cmd_check(args) -> int:
    model = _load(args.file)
    for name in sorted(model.trees):
        tree = model.trees[name]
        tree.validate()
        edges = sum(len(n.children) for n in tree.nodes.values())
        print(f"tree {name}: {len(tree.nodes)} nodes, {edges} edges")
        print(f"  tree-shaped: {'yes' if tree.is_tree_shaped() else 'no'}")
        print(f"  modules: {len(tree.find_modules())}")
    print(f"attributions: {len(model.attributions)}")
    return EXIT_OK


def cmd_modules(args) -> int:
    model = _load(args.file)
    for name in sorted(model.trees):
        tree = model.trees[name]
        print(f"tree {name}:")
        for v in sorted(tree.find_modules()):
            if tree.nodes[v].type == "BAS":
                shape = "single leaf"
            elif _subtree_is_tree_shaped(tree, v):
                shape = "tree-shaped"
            else:
                shape = "shared structure"
            print(f"  {v} ({shape})")
    return EXIT_OK


def _subtree_is_tree_shaped(tree, v) -> bool:
    desc = tree.descendants(v)
    parent_count = {n: 0 for n in desc}
    for n in desc:
        for c in tree.nodes[n].children:
            parent_count[c] += 1
    return all(count <= 1 for n, count in parent_count.items() if n != v)


def cmd_plot(args) -> int:
    result = _analyze(args)
    print("x,mu")
    if isinstance(result.metric, DiscreteFuzzy):
        rows = list(result.metric.entries)
    else:
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        from .fuzzy import membership_at

        lo, hi = result.metric.support
        xs = {x for x, _ in result.metric.breakpoints}
        if hi > lo and args.samples > 1:
            step = (hi - lo) / (args.samples - 1)
            xs.update(lo + i * step for i in range(args.samples))
        rows = [(x, membership_at(result.metric, x)) for x in sorted(xs)]
    for x, mu in rows:
        print(f"{x:.12g},{mu:.12g}")
    return EXIT_OK


def cmd_demo(args) -> int:
    report = run_demo(args.which)
    print(f"demo: {report.name}")
    for line in report.narrative:
        print(f"  {line}")
    print()
    for label, value in report.sides:
        print(f"  {label} = {value!r}")
    verdict = "EQUAL" if report.computed_equal else "NOT EQUAL"
    print(f"  => {verdict}")
    if report.self_check_ok:
        print(_style("PASS: computed values match the expected outputs", "1;32"))
        return EXIT_OK
    print(_style("SELF-CHECK FAILED: computed values differ from the expected outputs",
                 "1;31"), file=sys.stderr)
    return EXIT_SELF_CHECK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "analyze": cmd_analyze,
            "check": cmd_check,
            "modules": cmd_modules,
            "plot": cmd_plot,
            "demo": cmd_demo,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BlowupError as exc:
        print(f"blowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except FuzzyatError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
