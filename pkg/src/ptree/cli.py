"""Command-line interface.

Each subcommand maps one-to-one onto a library operation. All numeric
output is exact-fraction formatted; only the sampler's optional frequency
report prints floats, and says so.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bernoulli import (
    DependentTrialTree,
    dominance_check,
    flip_success_convention,
    random_trial_tree,
)
from .errors import PTreeError
from .expectation import FrontVariable, expect, relative_expect
from .intervals import (
    cylinder_frequencies,
    node_interval,
    sample_branches,
)
from .measures import EdgeFamily, front_mass, induced_measure, node_mass
from .paths import format_path, parse_path
from .specio import parse_spec
from .trees import DEFAULT_DEPTH_BUDGET, classify, enumerate_front

ENV_BUDGET = "PTREE_DEPTH_BUDGET"


class _UsageError(Exception):
    """Flag combinations argparse cannot express; exits with code 2."""


def _default_budget() -> int:
    raw = os.environ.get(ENV_BUDGET)
    if raw is None:
        return DEFAULT_DEPTH_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise PTreeError(f"{ENV_BUDGET} must be an integer, got {raw!r}") from None
    if value < 0:
        raise PTreeError(f"{ENV_BUDGET} must be nonnegative, got {value}")
    return value


def _load_family(path: str) -> EdgeFamily:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise PTreeError(f"cannot read {path}: {exc}") from None
    return parse_spec(text, default_budget=_default_budget())


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact fraction: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptree",
        description="Exact-arithmetic probability trees: masses, fronts, embeddings, bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="induced mass of a node, as an exact fraction")
    p.add_argument("--tree", required=True, help="tree-spec document")
    p.add_argument("--node", required=True, help="dot-separated node path ('' is the root)")

    p = sub.add_parser("front", help="the level-n front, optionally with its total mass")
    p.add_argument("--tree", required=True)
    p.add_argument("--depth", "--front-level", dest="depth", type=int, required=True)
    p.add_argument("--check-mass", action="store_true")

    p = sub.add_parser("expect", help="expectation of a front variable, optionally relative to a node")
    p.add_argument("--tree", required=True)
    p.add_argument("--depth", "--front-level", dest="depth", type=int, required=True)
    p.add_argument("--values", required=True, help="JSON file mapping front paths to fraction strings")
    p.add_argument("--node", default=None, help="condition on this node")

    p = sub.add_parser("bound", help="dominance of the success count by a binomial CDF")
    p.add_argument("--p", type=_fraction, required=True, help="lower bound for success probabilities")
    p.add_argument("--n", type=int, default=None, help="number of trials (required with --random)")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--tree", default=None, help="tree-spec document for the trial tree")
    source.add_argument("--random", type=int, default=None, metavar="SEED", help="generate a random trial tree")
    p.add_argument("--min-p", type=_fraction, default=None, help="lower bound used by --random")
    p.add_argument("--flip-success", action="store_true", help="treat child 1 as success at ingestion")

    p = sub.add_parser("embed", help="unit-interval cell of a node")
    p.add_argument("--tree", required=True)
    p.add_argument("--node", required=True)

    p = sub.add_parser("sample", help="draw branches by inverse-transform sampling")
    p.add_argument("--tree", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--freq", action="store_true", help="also print empirical cylinder frequencies (floats)")

    p = sub.add_parser("encode", help="binary encoding of the tree's nodes")
    p.add_argument("--tree", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="check the preservation laws")

    p = sub.add_parser("classify", help="well-pruned / finitely-branching / perfect flags")
    p.add_argument("--tree", required=True)

    return parser


def _cmd_measure(args) -> int:
    family = _load_family(args.tree)
    print(node_mass(family, parse_path(args.node)))
    return 0


def _cmd_front(args) -> int:
    family = _load_family(args.tree)
    front = enumerate_front(family.tree, args.depth)
    for t in sorted(front.nodes):
        print(format_path(t) if t else "<root>")
    if args.check_mass:
        measure = induced_measure(family, args.depth)
        print(f"mass = {front_mass(measure, front)}")
    return 0


def _cmd_expect(args) -> int:
    family = _load_family(args.tree)
    front = enumerate_front(family.tree, args.depth)
    try:
        with open(args.values, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise PTreeError(f"cannot read {args.values}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise PTreeError(f"{args.values}: line {exc.lineno}: {exc.msg}") from None
    values = {parse_path(k): Fraction(v) for k, v in raw.items()}
    variable = FrontVariable(front, values)
    if args.node is None:
        measure = induced_measure(family, args.depth)
        print(expect(measure, variable))
    else:
        print(relative_expect(family, variable, parse_path(args.node)))
    return 0


def _cmd_bound(args) -> int:
    if args.tree is not None:
        family = _load_family(args.tree)
        if not family.is_explicit:
            raise PTreeError("the trial tree must be an explicit family")
        n = args.n if args.n is not None else family.tree.height
        trial_tree = DependentTrialTree(n, family)
    else:
        if args.n is None:
            raise _UsageError("bound --random needs --n")
        min_p = args.min_p if args.min_p is not None else args.p
        trial_tree = random_trial_tree(args.n, args.random, min_p)
    if args.flip_success:
        trial_tree = flip_success_convention(trial_tree)
    report = dominance_check(trial_tree, args.p)
    print(f"{'z':>4}  {'CDF(successes)':>20}  {'CDF(binomial)':>20}  {'margin':>16}")
    for row in report.rows:
        print(f"{row.z:>4}  {str(row.cdf_successes):>20}  {str(row.cdf_binomial):>20}  {str(row.margin):>16}")
    print(f"dominance holds: {report.holds}")
    return 0


def _cmd_embed(args) -> int:
    family = _load_family(args.tree)
    iv = node_interval(family, parse_path(args.node))
    print(f"[{iv.lower}, {iv.upper}]")
    return 0


def _cmd_sample(args) -> int:
    family = _load_family(args.tree)
    samples = sample_branches(family, args.seed, args.count, args.depth)
    for t in samples:
        print(format_path(t) if t else "<root>")
    if args.freq:
        print("empirical cylinder frequencies (floats):")
        for t, f in cylinder_frequencies(samples, args.depth).items():
            print(f"  {format_path(t) if t else '<root>'}: {f:.6f}")
    return 0


def _cmd_encode(args) -> int:
    family = _load_family(args.tree)
    from .encoding import binary_encode, verify_encoding

    enc = binary_encode(family.tree, args.depth)
    for t in sorted(enc.h):
        src = format_path(t) if t else "<root>"
        img = format_path(enc.h[t]) if enc.h[t] else "<root>"
        print(f"{src} -> {img}")
    if args.verify:
        report = verify_encoding(family, args.depth)
        print(f"verification: {'ok' if report.ok else 'FAILED'}")
        for failure in report.failures:
            print(f"  {failure}")
        if not report.ok:
            return 1
    return 0


def _cmd_classify(args) -> int:
    family = _load_family(args.tree)
    report = classify(family.tree)
    scope = "exact" if report.exact else f"up to depth {report.height_or_budget}"
    print(f"well_pruned: {report.well_pruned} ({scope})")
    print(f"finitely_branching: {report.finitely_branching} ({scope})")
    print(f"perfect: {report.perfect} ({scope})")
    label = "height" if family.tree.is_explicit else "depth budget"
    print(f"{label}: {report.height_or_budget}")
    return 0


_COMMANDS = {
    "measure": _cmd_measure,
    "front": _cmd_front,
    "expect": _cmd_expect,
    "bound": _cmd_bound,
    "embed": _cmd_embed,
    "sample": _cmd_sample,
    "encode": _cmd_encode,
    "classify": _cmd_classify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except PTreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
