"""The tree-spec document format: JSON in, edge families out, and back.

Explicit documents carry a node table keyed by dot-separated index paths
("" is the root, "0.1" is the second child of the first child), each row
giving the node's arity and, for interior nodes, the list of successor
probabilities as exact fraction strings. Generator documents name one of
the built-in families instead. Probabilities are strings throughout so no
decimal rounding can sneak in at the boundary.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .dists import FiniteDist
from .errors import SpecSyntaxError, SpecValidationError, UnknownGenerator
from .measures import EdgeFamily, dirac, geometric_omega, uniform_binary
from .paths import Path, format_path, parse_path
from .trees import DEFAULT_DEPTH_BUDGET, ExplicitTree

FORMAT_VERSION = 1

_GENERATORS = ("uniform_binary", "geometric_omega", "dirac(k)")
_DIRAC_RE = re.compile(r"^dirac\((\d+)\)$")


def _parse_fraction(text: Any, path: str) -> Fraction:
    if not isinstance(text, str):
        raise SpecValidationError(path, f"probabilities must be fraction strings, got {text!r}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SpecValidationError(path, f"not an exact fraction: {text!r}") from None
    return value


def _build_generator(name: str, depth_budget: int) -> EdgeFamily:
    if name == "uniform_binary":
        return uniform_binary(depth_budget)
    if name == "geometric_omega":
        return geometric_omega(depth_budget)
    match = _DIRAC_RE.match(name)
    if match:
        return dirac(int(match.group(1)), depth_budget)
    raise UnknownGenerator(f"unknown generator {name!r}; available: {', '.join(_GENERATORS)}")


def parse_spec(text: str, default_budget: int | None = None) -> EdgeFamily:
    """Parse a tree-spec document into a validated edge family."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SpecValidationError("", "the document must be a JSON object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise SpecValidationError("", f"unsupported version {version!r}")
    rep = doc.get("representation")
    budget = doc.get("depth_budget")
    if budget is None:
        budget = DEFAULT_DEPTH_BUDGET if default_budget is None else default_budget
    elif not isinstance(budget, int) or budget < 0:
        raise SpecValidationError("", f"depth_budget must be a nonnegative integer, got {budget!r}")

    if rep == "generator":
        name = doc.get("generator")
        if not isinstance(name, str):
            raise SpecValidationError("", "generator documents need a 'generator' name")
        return _build_generator(name, budget)
    if rep != "explicit":
        raise SpecValidationError("", f"representation must be 'explicit' or 'generator', got {rep!r}")

    nodes = doc.get("nodes")
    if not isinstance(nodes, dict):
        raise SpecValidationError("", "explicit documents need a 'nodes' table")
    rows: dict[Path, dict] = {}
    for key, row in nodes.items():
        try:
            path = parse_path(key)
        except ValueError as exc:
            raise SpecValidationError(key, str(exc)) from None
        if not isinstance(row, dict):
            raise SpecValidationError(key, "node rows must be objects")
        rows[path] = row
    if () not in rows:
        raise SpecValidationError("", "the root node is missing")

    children: dict[Path, tuple[int, ...]] = {}
    dists: dict[Path, FiniteDist] = {}
    for path, row in rows.items():
        key = format_path(path)
        arity = row.get("arity")
        if not isinstance(arity, int) or arity < 0:
            raise SpecValidationError(key, f"arity must be a nonnegative integer, got {arity!r}")
        children[path] = tuple(range(arity))
        probs = row.get("probs", [])
        if arity == 0:
            if probs:
                raise SpecValidationError(key, "a maximal node cannot carry probabilities")
            continue
        if not isinstance(probs, list) or len(probs) != arity:
            raise SpecValidationError(key, f"expected {arity} probabilities, got {len(probs) if isinstance(probs, list) else probs!r}")
        values = [_parse_fraction(p, key) for p in probs]
        for v in values:
            if not 0 <= v <= 1:
                raise SpecValidationError(key, f"probability {v} outside [0, 1]")
        if sum(values) != 1:
            raise SpecValidationError(key, f"probabilities sum to {sum(values)}, not 1")
        dists[path] = FiniteDist(values)

    for path in rows:
        if path != () and path[:-1] not in rows:
            raise SpecValidationError(format_path(path), "parent node is missing (keys must be prefix-closed)")
        if path != () and path[-1] >= len(children.get(path[:-1], ())):
            raise SpecValidationError(format_path(path), "child index exceeds the parent's arity")
    for path, idx in children.items():
        for k in idx:
            if path + (k,) not in rows:
                raise SpecValidationError(format_path(path + (k,)), "declared child is missing from the table")

    tree = ExplicitTree(children, doc.get("depth_budget"))
    return EdgeFamily(tree, dists)


def serialize_spec(family: EdgeFamily) -> str:
    """Serialize an edge family; explicit tables round-trip exactly."""
    if not family.is_explicit:
        if family.name is None:
            raise ValueError("only named generated families can be serialized")
        doc = {
            "version": FORMAT_VERSION,
            "representation": "generator",
            "generator": family.name,
            "depth_budget": family.tree.depth_budget,
        }
        return json.dumps(doc, indent=2) + "\n"

    nodes: dict[str, dict] = {}
    for t in sorted(family.tree.nodes()):
        idx = family.tree.child_indices(t)
        if idx != tuple(range(len(idx))):
            raise ValueError(f"node {t} has a sparse child set; the format stores canonical trees")
        row: dict[str, Any] = {"arity": len(idx)}
        if idx:
            row["probs"] = [str(p) for p in family.dist(t).masses]
        nodes[format_path(t)] = row
    doc = {"version": FORMAT_VERSION, "representation": "explicit", "nodes": nodes}
    if family.tree.depth_budget is not None:
        doc["depth_budget"] = family.tree.depth_budget
    return json.dumps(doc, indent=2) + "\n"
