"""Order-embedding of an arbitrary finitely-branching tree into the binary tree.

Each node maps to a binary path: arity-one steps collapse, the k-th of
finitely many children maps through a run of k ones followed by a zero,
and the last child keeps the all-ones run. The image tree consists of
splitting and maximal nodes only, and pushing node masses through the map
yields an inductive measure whose interval assignment coincides with the
source's.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .dists import FiniteDist, ZERO
from .errors import DepthBudgetExceeded, EncodingMismatch, InfiniteLevel, UnknownNode
from .intervals import node_interval
from .measures import (
    EdgeFamily,
    GeneralPair,
    InductiveMeasure,
    family_from_pair,
    node_mass,
    split_measure,
)
from .paths import OMEGA, Path, compatible, is_prefix
from .trees import ExplicitTree, TreeShape, walk_to_depth


@dataclass(frozen=True)
class BinaryEncoding:
    """The node map, its image tree, and the preimages of image nodes."""

    source: TreeShape
    depth: int
    h: Mapping[Path, Path]
    image: ExplicitTree
    preimages: Mapping[Path, tuple[Path, ...]]

    def map_node(self, t: Path) -> Path:
        t = tuple(t)
        if t in self.h:
            return self.h[t]
        if len(t) > self.depth:
            raise DepthBudgetExceeded(f"node {t} lies beyond the encoded depth {self.depth}")
        raise UnknownNode(f"node {t} was not encoded")


def binary_encode(tree: TreeShape, depth: int) -> BinaryEncoding:
    """Compute the embedding on all nodes up to `depth`."""
    if tree.depth_budget is not None and depth > tree.depth_budget:
        raise DepthBudgetExceeded(f"depth {depth} exceeds budget {tree.depth_budget}")
    h: dict[Path, Path] = {(): ()}
    for t in walk_to_depth(tree, depth):
        if len(t) >= depth or tree.is_maximal(t):
            continue
        arity = tree.arity(t)
        if arity is OMEGA:
            raise InfiniteLevel(f"node {t} has infinitely many successors")
        base = h[t]
        if arity == 1:
            h[t + (0,)] = base
            continue
        for k in range(arity):
            if k < arity - 1:
                h[t + (k,)] = base + (1,) * k + (0,)
            else:
                h[t + (k,)] = base + (1,) * k

    preimages: dict[Path, list[Path]] = {}
    for t, s in h.items():
        preimages.setdefault(s, []).append(t)
    children: dict[Path, set[int]] = {(): set()}
    for s in preimages:
        for i in range(len(s)):
            children.setdefault(s[:i], set()).add(s[i])
        children.setdefault(s, set())
    image = ExplicitTree({s: tuple(sorted(ks)) for s, ks in children.items()})
    frozen = {s: tuple(sorted(ts, key=len)) for s, ts in preimages.items()}
    return BinaryEncoding(tree, depth, dict(h), image, frozen)


def encoded_measure(family: EdgeFamily, enc: BinaryEncoding) -> InductiveMeasure:
    """Push node masses through the embedding onto the image tree.

    Image nodes that are not themselves images take the total mass of the
    source successors whose images extend them; the result satisfies the
    inductive law.
    """
    if enc.source is not family.tree and enc.source != family.tree:
        raise EncodingMismatch("the encoding was built from a different tree")
    masses: dict[Path, Fraction] = {}
    for s in enc.image.nodes():
        if s in enc.preimages:
            masses[s] = node_mass(family, enc.preimages[s][0])
            continue
        anchor = None
        for plen in range(len(s) - 1, -1, -1):
            if s[:plen] in enc.preimages:
                anchor = s[:plen]
                break
        # the longest preimage below s; unique because deeper preimages collapse chains
        t = enc.preimages[anchor][-1]
        total = ZERO
        for child in family.tree.children(t):
            if child in enc.h and is_prefix(s, enc.h[child]):
                total += node_mass(family, child)
        masses[s] = total
    return InductiveMeasure(enc.image, masses)


def embed_branch(enc: BinaryEncoding, x: Path) -> Path:
    """Image of a branch prefix: the binary prefix its extensions all share."""
    return enc.map_node(x)


def _uniform_fillers(measure: InductiveMeasure, null_nodes: frozenset[Path]) -> dict[Path, FiniteDist]:
    tree = measure.tree
    fillers: dict[Path, FiniteDist] = {}
    for t in null_nodes:
        idx = tree.child_indices(t)  # type: ignore[union-attr]
        if idx:
            share = Fraction(1, len(idx))
            fillers[t] = FiniteDist({k: share for k in idx})
    return fillers


@dataclass(frozen=True)
class EncodingReport:
    """What the encoding verification found, check by check."""

    inductive_ok: bool
    intervals_ok: bool
    order_ok: bool
    image_shape_ok: bool
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.inductive_ok and self.intervals_ok and self.order_ok and self.image_shape_ok


def verify_encoding(family: EdgeFamily, depth: int) -> EncodingReport:
    """Check the embedding's preservation laws on all nodes up to `depth`.

    Verifies that the pushed-forward masses satisfy the inductive law,
    that an image family realizing them assigns every image node the same
    interval as its source node, and that the map preserves extension and
    preserves/reflects incompatibility; the image must consist of
    splitting and maximal nodes with maximal nodes coming from the source.
    """
    failures: list[str] = []
    enc = binary_encode(family.tree, depth)

    inductive_ok = True
    try:
        measure = encoded_measure(family, enc)
    except ValueError as exc:
        inductive_ok = False
        failures.append(f"pushed measure violates the inductive law: {exc}")
        measure = None

    intervals_ok = True
    if measure is not None:
        image_tree = measure.tree
        positive, null = split_measure(measure)
        pair = GeneralPair(image_tree, positive, _uniform_fillers(measure, frozenset(
            t for t in null if not image_tree.is_maximal(t)
        )))
        image_family = family_from_pair(pair)
        for t in enc.h:
            src = node_interval(family, t)
            img = node_interval(image_family, enc.h[t])
            if src != img:
                intervals_ok = False
                failures.append(f"interval mismatch at {t}: {src} vs {img} at image {enc.h[t]}")
    else:
        intervals_ok = False

    order_ok = True
    nodes = sorted(enc.h)  # tuple order puts a prefix before its extensions
    for i, s in enumerate(nodes):
        hs = enc.h[s]
        for t in nodes[i + 1 :]:
            ht = enc.h[t]
            if is_prefix(s, t):
                if not is_prefix(hs, ht):
                    order_ok = False
                    failures.append(f"extension not preserved: {s} vs {t}")
            elif compatible(hs, ht):
                order_ok = False
                failures.append(f"incompatibility not preserved: {s} vs {t}")

    image_shape_ok = True
    for s in enc.image.nodes():
        a = len(enc.image.child_indices(s))
        if a == 1:
            image_shape_ok = False
            failures.append(f"image node {s} has a single child")
    for s in enc.image.max_nodes():
        if s not in enc.preimages:
            image_shape_ok = False
            failures.append(f"maximal image node {s} is not the image of a source node")

    return EncodingReport(inductive_ok, intervals_ok, order_ok, image_shape_ok, tuple(failures))
