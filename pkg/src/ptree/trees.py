"""Countable trees of sequences: shapes, levels, fronts, and classification.

Trees come in two representations. Explicit trees are finite and fully
materialized; generated trees are backed by an arity rule and carry a
mandatory depth budget. Operations that would have to enumerate an
infinite set fail with InfiniteLevel instead of truncating silently.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    CyclicInput,
    DepthBudgetExceeded,
    InfiniteLevel,
    InvalidAdjacency,
    MultipleRoots,
    UnknownNode,
)
from .paths import OMEGA, Path, is_prefix

Arity = Union[int, type(OMEGA)]

DEFAULT_DEPTH_BUDGET = 32


class ExplicitTree:
    """A finite prefix-closed tree, stored as a child-index map.

    Canonical trees have children 0..arity-1 at every node; restrictions
    (positive parts, encoded images) may keep sparse child-index sets.
    """

    __slots__ = ("_children", "depth_budget", "_height")

    def __init__(self, children: Mapping[Path, Sequence[int]], depth_budget: int | None = None):
        child_map: dict[Path, tuple[int, ...]] = {}
        for node, indices in children.items():
            idx = tuple(sorted(int(i) for i in indices))
            if any(i < 0 for i in idx):
                raise ValueError(f"negative child index at {node}")
            if len(set(idx)) != len(idx):
                raise ValueError(f"duplicate child index at {node}")
            child_map[tuple(node)] = idx
        if () not in child_map:
            raise ValueError("tree must contain the root")
        for node in child_map:
            if node != ():
                parent, k = node[:-1], node[-1]
                if parent not in child_map or k not in child_map[parent]:
                    raise ValueError(f"node {node} is not attached to its parent")
        for node, idx in child_map.items():
            for k in idx:
                if node + (k,) not in child_map:
                    raise ValueError(f"declared child {node + (k,)} is missing")
        self._children = child_map
        self.depth_budget = depth_budget
        self._height = max(len(t) for t in child_map)

    @classmethod
    def from_arities(cls, arities: Mapping[Path, int], depth_budget: int | None = None) -> "ExplicitTree":
        """Build a canonical tree from per-node child counts.

        Children implied by a count but absent from the mapping become
        leaves with arity zero.
        """
        children: dict[Path, tuple[int, ...]] = {}
        for node, arity in arities.items():
            children[tuple(node)] = tuple(range(int(arity)))
        for node, idx in list(children.items()):
            for k in idx:
                children.setdefault(node + (k,), ())
        children.setdefault((), ())
        return cls(children, depth_budget)

    @property
    def is_explicit(self) -> bool:
        return True

    @property
    def height(self) -> int:
        """Depth of the deepest node; the root-only tree has height 0."""
        return self._height

    def contains(self, t: Path) -> bool:
        return tuple(t) in self._children

    def require(self, t: Path) -> Path:
        t = tuple(t)
        if t not in self._children:
            raise UnknownNode(f"no node {t} in tree")
        return t

    def arity(self, t: Path) -> Arity:
        return len(self._children[self.require(t)])

    def _arity_unchecked(self, t: Path) -> Arity:
        return len(self._children[t])

    def child_indices(self, t: Path) -> tuple[int, ...]:
        return self._children[self.require(t)]

    def children(self, t: Path) -> tuple[Path, ...]:
        t = self.require(t)
        return tuple(t + (k,) for k in self._children[t])

    def is_maximal(self, t: Path) -> bool:
        return not self._children[self.require(t)]

    def nodes(self) -> Iterator[Path]:
        return iter(self._children)

    def node_count(self) -> int:
        return len(self._children)

    def max_nodes(self) -> tuple[Path, ...]:
        return tuple(t for t, idx in self._children.items() if not idx)

    def level_nodes(self, n: int) -> frozenset[Path]:
        return frozenset(t for t in self._children if len(t) == n)

    def child_map(self) -> Mapping[Path, tuple[int, ...]]:
        return dict(self._children)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExplicitTree) and self._children == other._children

    def __hash__(self) -> int:
        return hash(frozenset(self._children.items()))

    def __repr__(self) -> str:
        return f"ExplicitTree({self.node_count()} nodes, height {self.height})"


@dataclass(frozen=True)
class TreeProfile:
    """Shape facts a generated tree declares about its whole extent."""

    well_pruned: bool
    finitely_branching: bool
    perfect: bool


class GeneratedTree:
    """A tree backed by an arity rule, explored only up to a depth budget.

    Arity lookups are memoized behind a lock; the cache is observationally
    pure because the rule is required to be deterministic.
    """

    __slots__ = ("_arity_fn", "depth_budget", "name", "profile", "_cache", "_lock")

    def __init__(
        self,
        arity_fn: Callable[[Path], Arity],
        depth_budget: int,
        name: str | None = None,
        profile: TreeProfile | None = None,
    ):
        if depth_budget is None or depth_budget < 0:
            raise ValueError("generated trees need a nonnegative depth budget")
        self._arity_fn = arity_fn
        self.depth_budget = depth_budget
        self.name = name
        self.profile = profile
        self._cache: dict[Path, Arity] = {}
        self._lock = threading.Lock()

    @property
    def is_explicit(self) -> bool:
        return False

    def _arity_raw(self, t: Path) -> Arity:
        cached = self._cache.get(t)  # dict reads are atomic under the GIL
        if cached is not None:
            return cached
        value = self._arity_fn(t)
        if value is not OMEGA:
            value = int(value)
            if value < 0:
                raise ValueError(f"negative arity at {t}")
        with self._lock:
            self._cache[t] = value
        return value

    def contains(self, t: Path) -> bool:
        t = tuple(t)
        if len(t) > self.depth_budget:
            raise DepthBudgetExceeded(f"node {t} lies beyond the depth budget {self.depth_budget}")
        for i, k in enumerate(t):
            a = self._arity_raw(t[:i])
            if a is not OMEGA and k >= a:
                return False
        return True

    def require(self, t: Path) -> Path:
        t = tuple(t)
        if not self.contains(t):
            raise UnknownNode(f"no node {t} in tree")
        return t

    def arity(self, t: Path) -> Arity:
        return self._arity_raw(self.require(t))

    def _arity_unchecked(self, t: Path) -> Arity:
        return self._arity_raw(t)

    def child_indices(self, t: Path) -> tuple[int, ...]:
        a = self.arity(t)
        if a is OMEGA:
            raise InfiniteLevel(f"node {t} has infinitely many successors")
        return tuple(range(a))

    def children(self, t: Path) -> tuple[Path, ...]:
        t = tuple(t)
        return tuple(t + (k,) for k in self.child_indices(t))

    def is_maximal(self, t: Path) -> bool:
        return self.arity(t) == 0

    def __repr__(self) -> str:
        label = self.name or "custom"
        return f"GeneratedTree({label}, budget {self.depth_budget})"


TreeShape = Union[ExplicitTree, GeneratedTree]


def canonicalize(
    adjacency: Mapping[Hashable, Sequence[Hashable]],
) -> tuple[ExplicitTree, dict[Hashable, Path]]:
    """Turn a labeled parent/children description into index-path form.

    Children keep their declaration order; the label map sends each input
    label to its path in the canonical tree.
    """
    parents: dict[Hashable, Hashable] = {}
    labels: set[Hashable] = set(adjacency)
    for node, kids in adjacency.items():
        for child in kids:
            if child in parents:
                raise InvalidAdjacency(f"label {child!r} has two parents")
            parents[child] = node
            labels.add(child)
    roots = [lbl for lbl in labels if lbl not in parents]
    if not roots:
        raise CyclicInput("every label has a parent; the relation is cyclic")
    if len(roots) > 1:
        raise MultipleRoots(f"found {len(roots)} parentless labels: {sorted(map(repr, roots))}")
    root = roots[0]

    label_map: dict[Hashable, Path] = {root: ()}
    children: dict[Path, tuple[int, ...]] = {}
    queue = [root]
    while queue:
        label = queue.pop()
        path = label_map[label]
        kids = tuple(adjacency.get(label, ()))
        children[path] = tuple(range(len(kids)))
        for k, child in enumerate(kids):
            label_map[child] = path + (k,)
            queue.append(child)
    if len(label_map) != len(labels):
        raise CyclicInput("some labels are unreachable from the root; the relation is cyclic")
    return ExplicitTree(children), label_map


def _check_depth(tree: TreeShape, n: int) -> None:
    if n < 0:
        raise ValueError("level must be nonnegative")
    if tree.depth_budget is not None and n > tree.depth_budget:
        raise DepthBudgetExceeded(f"depth {n} exceeds budget {tree.depth_budget}")


def level(tree: TreeShape, n: int) -> frozenset[Path]:
    """All nodes at depth n; empty beyond the height of the tree."""
    _check_depth(tree, n)
    if isinstance(tree, ExplicitTree):
        return tree.level_nodes(n)
    current: list[Path] = [()]
    for _ in range(n):
        nxt: list[Path] = []
        for t in current:
            nxt.extend(tree.children(t))
        current = nxt
    return frozenset(current)


def walk_to_depth(tree: TreeShape, depth: int) -> Iterator[Path]:
    """Depth-first iteration over all nodes with length at most depth."""
    _check_depth(tree, depth)
    stack: list[Path] = [()]
    while stack:
        t = stack.pop()
        yield t
        if len(t) < depth:
            stack.extend(reversed(tree.children(t)))


@dataclass(frozen=True)
class Front:
    """A finite antichain met by every maximal branch of the tree."""

    tree: TreeShape
    nodes: frozenset[Path]

    def __iter__(self) -> Iterator[Path]:
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)


def enumerate_front(tree: TreeShape, n: int) -> Front:
    """The level-n nodes together with the maximal nodes shorter than n."""
    members = set(level(tree, n))
    for m in range(n):
        for t in level(tree, m):
            if tree.is_maximal(t):
                members.add(t)
    return Front(tree, frozenset(members))


def is_front(tree: TreeShape, nodes: Iterable[Path]) -> bool:
    """Pairwise incompatible, and every branch (up to the budget) meets the set."""
    members = frozenset(tuple(t) for t in nodes)
    for t in members:
        tree.require(t)
    ordered = sorted(members, key=len)
    for i, s in enumerate(ordered):
        for t in ordered[i + 1 :]:
            if is_prefix(s, t):
                return False
    if not members:
        return False
    max_len = max(len(t) for t in members)

    def covered(t: Path) -> bool:
        if t in members:
            return True
        if len(t) == max_len:
            return False
        arity = tree.arity(t)
        if arity == 0:
            return False
        if arity is OMEGA:
            # a finite set can meet only finitely many of the subtrees
            return False
        return all(covered(c) for c in tree.children(t))

    return covered(())


@dataclass(frozen=True)
class ClopenSelection:
    """A clopen set: a sub-selection of a front, possibly complemented."""

    front_level: int
    selected: frozenset[Path]
    complemented: bool = False


@dataclass(frozen=True)
class ClassifyReport:
    """Shape classification; exact=False means 'up to the reported depth'."""

    well_pruned: bool
    finitely_branching: bool
    perfect: bool
    height_or_budget: int
    exact: bool


def classify(tree: TreeShape, explore_depth: int | None = None) -> ClassifyReport:
    """Well-prunedness, branching, and perfectness of the tree.

    Explicit trees are classified exactly; a finite tree is never perfect
    because nothing splits above a maximal node. Generated trees use their
    declared profile when present; otherwise the answer is relative to an
    exploration depth and marked inexact.
    """
    if isinstance(tree, ExplicitTree):
        height = tree.height
        well_pruned = all(len(t) == height for t in tree.max_nodes())
        return ClassifyReport(
            well_pruned=well_pruned,
            finitely_branching=True,
            perfect=False,
            height_or_budget=height,
            exact=True,
        )

    if tree.profile is not None and explore_depth is None:
        p = tree.profile
        return ClassifyReport(
            well_pruned=p.well_pruned,
            finitely_branching=p.finitely_branching,
            perfect=p.perfect,
            height_or_budget=tree.depth_budget,
            exact=True,
        )

    depth = explore_depth if explore_depth is not None else min(tree.depth_budget, 8)
    finitely_branching = True
    max_depths: list[int] = []
    deepest = 0
    # OMEGA nodes are explored through two representative children only;
    # the report is honest about being an up-to-depth statement.
    stack: list[Path] = [()]
    while stack:
        t = stack.pop()
        deepest = max(deepest, len(t))
        a = tree.arity(t)
        if a is OMEGA:
            finitely_branching = False
            if len(t) < depth:
                stack.extend(t + (k,) for k in range(2))
            continue
        if a == 0:
            max_depths.append(len(t))
            continue
        if len(t) < depth:
            stack.extend(tree.children(t))
        else:
            deepest = depth
    well_pruned = all(d == deepest for d in max_depths)
    perfect = not max_depths
    return ClassifyReport(
        well_pruned=well_pruned,
        finitely_branching=finitely_branching,
        perfect=perfect,
        height_or_budget=depth,
        exact=False,
    )


def complete_binary_tree(height: int) -> ExplicitTree:
    """The explicit binary tree whose deepest nodes have length `height`."""
    children: dict[Path, tuple[int, ...]] = {}
    stack: list[Path] = [()]
    while stack:
        t = stack.pop()
        if len(t) < height:
            children[t] = (0, 1)
            stack.append(t + (0,))
            stack.append(t + (1,))
        else:
            children[t] = ()
    return ExplicitTree(children)
