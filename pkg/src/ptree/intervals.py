"""The unit-interval realization of a probability tree.

Every node gets a closed subinterval of [0, 1]: the root gets the whole
interval, and the children of a node subdivide its interval into
consecutive cells whose lengths are the edge probabilities scaled by the
parent's length. Cell widths therefore equal induced node masses, branch
windows shrink to the branch's image point, and descending through cells
inverts the embedding off the countable endpoint set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .dists import ONE, ZERO
from .errors import (
    DepthBudgetExceeded,
    MalformedClopen,
    NotASubtree,
    QPointError,
    RequiresExplicitFiniteTree,
    SamplerStuck,
)
from .measures import EdgeFamily, induced_measure, node_mass
from .paths import OMEGA, Path
from .trees import ClopenSelection, ExplicitTree


class Interval(NamedTuple):
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


def node_interval(family: EdgeFamily, t: Path) -> Interval:
    """Endpoints of the cell assigned to t; its width is the mass of t."""
    t = family.tree.require(tuple(t))
    lower = ZERO
    width = ONE
    for i, k in enumerate(t):
        d = family.dist(t[:i])
        lower += width * d.prefix_mass(k)
        width *= d.mass(k)
    return Interval(lower, lower + width)


@dataclass(frozen=True)
class BranchWindow:
    """The interval of a branch prefix; nested windows shrink to the image point."""

    prefix: Path
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


def branch_window(family: EdgeFamily, x: Path, n: int) -> BranchWindow:
    """Window of the branch given by x, truncated at depth n.

    A prefix shorter than n is accepted only when it is maximal, in which
    case the window stops shrinking.
    """
    x = family.tree.require(tuple(x))
    budget = family.tree.depth_budget
    if budget is not None and n > budget:
        raise DepthBudgetExceeded(f"depth {n} exceeds budget {budget}")
    if n < len(x):
        prefix = x[:n]
    elif family.tree.is_maximal(x) or n == len(x):
        prefix = x
    else:
        raise ValueError(f"branch prefix {x} is shorter than depth {n} and not maximal")
    iv = node_interval(family, prefix)
    return BranchWindow(prefix, iv.lower, iv.upper)


def _descend_finite(d, y: Fraction, lower: Fraction, width: Fraction):
    """Pick the child cell containing y; None means no positive cell holds it."""
    upper = lower + width
    prev_nondegenerate = False
    chosen = None
    for k, before, after in d.cells():
        if before == after:
            continue
        a = lower + width * before
        b = lower + width * after
        if a <= y < b or (y == b and b == upper):  # last cell is closed on the right
            chosen = (k, a, b)
            break
        prev_nondegenerate = True
    if chosen is None:
        return None
    k, a, b = chosen
    if y == a and prev_nondegenerate:
        raise QPointError(f"{y} is a shared cell endpoint")
    return k, a, b - a


def locate_branch(family: EdgeFamily, y: Fraction, depth: int) -> Path:
    """Descend through child cells to the branch whose window contains y.

    Cells are half-open on the right except the last one, degenerate cells
    are skipped, and hitting an endpoint shared by two positive cells
    fails: the inverse map is genuinely undefined on such points.
    """
    if not isinstance(y, Fraction):
        y = Fraction(y)
    if not 0 <= y <= 1:
        raise ValueError("the point must lie in [0, 1]")
    budget = family.tree.depth_budget
    if budget is not None and depth > budget:
        raise DepthBudgetExceeded(f"depth {depth} exceeds budget {budget}")
    t: Path = ()
    lower, width = ZERO, ONE
    for _ in range(depth):
        d = family._dist_unchecked(t)
        if d is None:
            break
        if d.support is OMEGA:
            if y == lower + width:
                raise QPointError(f"{y} is the limit endpoint of an infinite subdivision")
            k = 0
            while True:
                b = lower + width * d.prefix_mass(k + 1)
                if y < b:
                    break
                k += 1
            a = lower + width * d.prefix_mass(k)
            if y == a and d.prefix_mass(k) > 0:
                raise QPointError(f"{y} is a shared cell endpoint")
            lower, width = a, width * d.mass(k)
            t = t + (k,)
            continue
        step = _descend_finite(d, y, lower, width)
        if step is None:
            raise QPointError(f"{y} is not interior to any positive cell below {t}")
        k, lower, width = step
        t = t + (k,)
    return t


def clopen_mass(family: EdgeFamily, selection: ClopenSelection) -> Fraction:
    """Measure of a clopen set given by front members, or of its complement."""
    n = selection.front_level
    budget = family.tree.depth_budget
    if budget is not None and n > budget:
        raise DepthBudgetExceeded(f"front level {n} exceeds budget {budget}")
    for s in selection.selected:
        s = tuple(s)
        if not family.tree.contains(s):
            raise MalformedClopen(f"selected node {s} is not in the tree")
        if len(s) > n:
            raise MalformedClopen(f"selected node {s} lies beyond front level {n}")
        if len(s) < n and not family.tree.is_maximal(s):
            raise MalformedClopen(f"selected node {s} is neither at level {n} nor maximal")
    total = sum((node_mass(family, s) for s in selection.selected), ZERO)
    return 1 - total if selection.complemented else total


@dataclass(frozen=True)
class SubtreeMassReport:
    """Front masses of a subtree by level; their infimum is the body's measure."""

    values: tuple[Fraction, ...]
    nonincreasing: bool

    @property
    def value(self) -> Fraction:
        return self.values[-1]


def subtree_mass_bound(
    family: EdgeFamily, nodes: Iterable[Path], depth: int
) -> SubtreeMassReport:
    """Front mass of the subtree at each level up to depth.

    The node set must be prefix-closed inside the host tree, and a node
    with no listed children below the queried depth must be maximal in the
    host; otherwise the set does not describe a subtree with compatible
    leaves.
    """
    budget = family.tree.depth_budget
    if budget is not None and depth > budget:
        raise DepthBudgetExceeded(f"depth {depth} exceeds budget {budget}")
    members = frozenset(tuple(t) for t in nodes)
    if () not in members:
        raise NotASubtree("the subtree must contain the root")
    children: dict[Path, list[Path]] = {t: [] for t in members}
    for t in members:
        if t == ():
            continue
        parent = t[:-1]
        if parent not in members:
            raise NotASubtree(f"node {t} is present without its parent")
        if not family.tree.contains(t):
            raise NotASubtree(f"node {t} is not in the host tree")
        children[parent].append(t)
    leaves = {t for t in members if not children[t]}
    for t in leaves:
        if len(t) < depth and not family.tree.is_maximal(t):
            raise NotASubtree(
                f"subtree leaf {t} is not maximal in the host tree (depth {depth} queried)"
            )
    values: list[Fraction] = []
    for m in range(depth + 1):
        front = {t for t in members if len(t) == m}
        front |= {t for t in leaves if len(t) < m}
        values.append(sum((node_mass(family, s) for s in front), ZERO))
    nonincreasing = all(values[i + 1] <= values[i] for i in range(len(values) - 1))
    return SubtreeMassReport(tuple(values), nonincreasing)


def branch_mass_bound(family: EdgeFamily, x: Path, n: int) -> tuple[Fraction, bool]:
    """Mass of the depth-n prefix of a branch, and whether it is exactly zero.

    The prefix mass bounds the point mass of the branch from above; once a
    prefix has mass zero the limit is exactly zero.
    """
    window = branch_window(family, x, n)
    mass = window.width
    return mass, mass == 0


FREE_CERTIFIED = "free_certified"
ATOM_FOUND = "atom_found"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FreenessReport:
    """Outcome of the free-measure diagnostic; three-valued by necessity."""

    depth: int
    epsilon: Fraction
    verdict: str
    level_mass_bound: Fraction | None = None
    witness: Path | None = None


def freeness_report(family: EdgeFamily, depth: int, epsilon: Fraction) -> FreenessReport:
    """Certify freeness, exhibit an atom, or give up with a bound.

    An explicit finite tree always has an atom: its leaves carry all the
    mass. A generated family is free when its edge probabilities are
    uniformly below one on a tree with no maximal nodes, since every
    branch mass is then at most (sup edge probability)^depth; a declared
    forced child is a persistent atom.
    """
    epsilon = Fraction(epsilon)
    tree = family.tree
    if isinstance(tree, ExplicitTree):
        measure = induced_measure(family)
        best: Path | None = None
        for t in tree.max_nodes():
            if measure.mass(t) > 0 and (best is None or measure.mass(t) > measure.mass(best)):
                best = t
        # total leaf mass is one, so an explicit tree always has an atom
        d = min(depth, tree.height)
        front = set(tree.level_nodes(d)) | {t for t in tree.max_nodes() if len(t) < d}
        bound = max(measure.mass(t) for t in front)
        return FreenessReport(depth, epsilon, ATOM_FOUND, bound, best)

    if family.atom_child is not None:
        witness = (family.atom_child,) * min(depth, tree.depth_budget)
        return FreenessReport(depth, epsilon, ATOM_FOUND, ONE, witness)

    sup = family.edge_prob_sup
    profile = tree.profile
    if sup is not None and sup < 1 and profile is not None and profile.perfect:
        bound = sup**depth
        if bound <= epsilon:
            return FreenessReport(depth, epsilon, FREE_CERTIFIED, bound)
        return FreenessReport(depth, epsilon, INCONCLUSIVE, bound)
    return FreenessReport(depth, epsilon, INCONCLUSIVE, sup**depth if sup is not None else None)


def atom_gaps(family: EdgeFamily) -> tuple[Interval, ...]:
    """Open gaps left in [0, 1] by the atoms of an explicit finite tree.

    Each positive-mass leaf contributes the interior of its cell; the gaps
    are pairwise disjoint and their lengths sum to one.
    """
    if not isinstance(family.tree, ExplicitTree):
        raise RequiresExplicitFiniteTree("atom gaps are defined for explicit finite trees")
    measure = induced_measure(family)
    gaps = []
    for t in sorted(family.tree.max_nodes()):
        if measure.mass(t) > 0:
            gaps.append(node_interval(family, t))
    return tuple(gaps)


_SAMPLE_BITS = 128
_REDRAW_CAP = 100


def sample_branches(family: EdgeFamily, seed: int, count: int, depth: int) -> list[Path]:
    """Inverse-transform sampling: uniform dyadic points pushed through descent.

    Deterministic for a fixed seed. Points landing on shared cell
    endpoints are redrawn; that happens with probability at most
    |Q|·2^-128 per draw, so the redraw cap is unreachable for honest
    inputs.
    """
    rng = random.Random(seed)
    denominator = 1 << _SAMPLE_BITS
    out: list[Path] = []
    for _ in range(count):
        for _attempt in range(_REDRAW_CAP):
            y = Fraction(rng.getrandbits(_SAMPLE_BITS), denominator)
            try:
                out.append(locate_branch(family, y, depth))
                break
            except QPointError:
                continue
        else:
            raise SamplerStuck(f"exceeded {_REDRAW_CAP} redraws; the family is degenerate")
    return out


def cylinder_frequencies(samples: Iterable[Path], depth: int) -> dict[Path, float]:
    """Empirical relative frequency of each depth-`depth` prefix (floats, for reports)."""
    counts: dict[Path, int] = {}
    total = 0
    for s in samples:
        counts[s[:depth]] = counts.get(s[:depth], 0) + 1
        total += 1
    return {t: c / total for t, c in sorted(counts.items())}
