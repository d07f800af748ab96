"""Edge-probability families, induced node masses, and the pair bijection.

An edge family assigns a probability distribution over the successors of
every non-maximal node. The induced mass of a node is the product of the
edge probabilities along its path; materializing those masses gives an
inductive measure. Families with zero-mass regions split into a positive
part plus filler distributions, and that split is a bijection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence, Union

from .dists import Dist, FiniteDist, FractionLike, Geometric, PointMass, ONE, ZERO, as_fraction
from .errors import (
    DepthBudgetExceeded,
    InfiniteLevel,
    MalformedPair,
    NodeNotBelowFront,
    NotAFront,
    UnknownNode,
)
from .paths import OMEGA, Path, is_prefix
from .trees import (
    DEFAULT_DEPTH_BUDGET,
    ExplicitTree,
    Front,
    GeneratedTree,
    TreeProfile,
    TreeShape,
    is_front,
)


class EdgeFamily:
    """Per-node successor distributions over a tree.

    Explicit families carry a distribution table; generated families carry
    a rule. The optional metadata fields let named families answer global
    questions (edge-probability bound, forced atom) without enumeration.
    """

    __slots__ = ("tree", "_dists", "name", "edge_prob_sup", "atom_child", "everywhere_positive_rule")

    def __init__(
        self,
        tree: TreeShape,
        dists: Union[Mapping[Path, Dist], Callable[[Path], Dist]],
        *,
        name: str | None = None,
        edge_prob_sup: Fraction | None = None,
        atom_child: int | None = None,
        everywhere_positive_rule: bool | None = None,
    ):
        self.tree = tree
        self.name = name
        self.edge_prob_sup = edge_prob_sup
        self.atom_child = atom_child
        self.everywhere_positive_rule = everywhere_positive_rule
        if isinstance(dists, Mapping):
            table = {tuple(t): d for t, d in dists.items()}
            if not isinstance(tree, ExplicitTree):
                raise ValueError("distribution tables require an explicit tree")
            non_max = {t for t in tree.nodes() if not tree.is_maximal(t)}
            if set(table) != non_max:
                raise ValueError("distribution table must cover exactly the non-maximal nodes")
            for t, d in table.items():
                if isinstance(d, FiniteDist):
                    if d.indices != tree.child_indices(t):
                        raise ValueError(f"distribution at {t} does not match the child set")
                else:
                    raise ValueError("closed-form distributions require a generated tree")
            self._dists = table
        else:
            self._dists = dists

    @property
    def is_explicit(self) -> bool:
        return isinstance(self._dists, Mapping)

    def dist(self, t: Path) -> Dist:
        t = self.tree.require(tuple(t))
        if self.tree.is_maximal(t):
            raise UnknownNode(f"node {t} is maximal and has no successor distribution")
        if isinstance(self._dists, Mapping):
            return self._dists[t]
        return self._dists(t)

    def _dist_unchecked(self, t: Path) -> Dist | None:
        """Distribution at a node known to be valid; None when it is maximal."""
        if isinstance(self._dists, Mapping):
            return self._dists.get(t)
        if self.tree._arity_unchecked(t) == 0:
            return None
        return self._dists(t)

    def edge_prob(self, t: Path, k: int) -> Fraction:
        return self.dist(t).mass(k)

    def dist_table(self) -> Mapping[Path, Dist]:
        if not isinstance(self._dists, Mapping):
            raise ValueError("generated families have no finite distribution table")
        return dict(self._dists)

    @classmethod
    def from_table(
        cls,
        table: Mapping[Path, Sequence[FractionLike]],
        depth_budget: int | None = None,
    ) -> "EdgeFamily":
        """Build a canonical explicit family from non-maximal node rows."""
        dists = {tuple(t): FiniteDist([as_fraction(v) for v in row]) for t, row in table.items()}
        children: dict[Path, tuple[int, ...]] = {t: d.indices for t, d in dists.items()}
        for t, idx in list(children.items()):
            for k in idx:
                children.setdefault(t + (k,), ())
        children.setdefault((), ())
        tree = ExplicitTree(children, depth_budget)
        return cls(tree, dists)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeFamily):
            return NotImplemented
        if self.is_explicit and other.is_explicit:
            return self.tree == other.tree and self._dists == other._dists
        if self.is_explicit != other.is_explicit:
            return False
        if self.name is not None and other.name is not None:
            return self.name == other.name and self.tree.depth_budget == other.tree.depth_budget
        return self is other

    def __hash__(self) -> int:
        if self.is_explicit:
            return hash((self.tree, frozenset(self._dists.items())))
        return hash((self.name, self.tree.depth_budget))

    def __repr__(self) -> str:
        kind = "explicit" if self.is_explicit else (self.name or "generated")
        return f"EdgeFamily({kind}, {self.tree!r})"


def _budget(depth_budget: int | None) -> int:
    return DEFAULT_DEPTH_BUDGET if depth_budget is None else depth_budget


def uniform_binary(depth_budget: int | None = None) -> EdgeFamily:
    """Fair coin at every node of the infinite binary tree."""
    budget = _budget(depth_budget)
    tree = GeneratedTree(
        lambda t: 2,
        budget,
        name="uniform_binary",
        profile=TreeProfile(well_pruned=True, finitely_branching=True, perfect=True),
    )
    half = FiniteDist([Fraction(1, 2), Fraction(1, 2)])
    return EdgeFamily(
        tree,
        lambda t: half,
        name="uniform_binary",
        edge_prob_sup=Fraction(1, 2),
        everywhere_positive_rule=True,
    )


def geometric_omega(depth_budget: int | None = None, ratio: FractionLike = Fraction(1, 2)) -> EdgeFamily:
    """Child k of every node gets mass (1-r)·r^k on the full omega-branching tree."""
    budget = _budget(depth_budget)
    r = as_fraction(ratio)
    tree = GeneratedTree(
        lambda t: OMEGA,
        budget,
        name="geometric_omega",
        profile=TreeProfile(well_pruned=True, finitely_branching=False, perfect=True),
    )
    geo = Geometric(r)
    name = "geometric_omega" if r == Fraction(1, 2) else f"geometric_omega({r})"
    return EdgeFamily(
        tree,
        lambda t: geo,
        name=name,
        edge_prob_sup=max(1 - r, r),
        everywhere_positive_rule=True,
    )


def dirac(index: int = 5, depth_budget: int | None = None) -> EdgeFamily:
    """All mass on child `index` at every node of the omega-branching tree."""
    budget = _budget(depth_budget)
    tree = GeneratedTree(
        lambda t: OMEGA,
        budget,
        name="dirac",
        profile=TreeProfile(well_pruned=True, finitely_branching=False, perfect=True),
    )
    pm = PointMass(index)
    return EdgeFamily(
        tree,
        lambda t: pm,
        name=f"dirac({index})",
        edge_prob_sup=ONE,
        atom_child=index,
        everywhere_positive_rule=False,
    )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[tuple[Path, str], ...]
    checked_depth: int | None


def validate_edge_family(family: EdgeFamily, depth: int | None = None) -> ValidationReport:
    """Check that every per-node distribution is a probability distribution.

    Explicit families are checked node by node. Generated families are
    checked on all nodes up to a shallow depth (closed forms certify their
    own totals); the report records the depth that was covered.
    """
    violations: list[tuple[Path, str]] = []

    def check(t: Path, d: Dist) -> None:
        if isinstance(d, FiniteDist):
            for k, m in d.items():
                if not 0 <= m <= 1:
                    violations.append((t, f"child {k} has mass {m} outside [0, 1]"))
            if d.total != 1:
                violations.append((t, f"masses sum to {d.total}, not 1"))
        # closed forms have total 1 by construction

    if family.is_explicit:
        for t in family.tree.nodes():
            if not family.tree.is_maximal(t):
                check(t, family.dist(t))
        return ValidationReport(not violations, tuple(violations), None)

    budget = family.tree.depth_budget
    check_depth = min(budget, 4) if depth is None else min(budget, depth)
    stack: list[Path] = [()]
    while stack:
        t = stack.pop()
        if family.tree.is_maximal(t):
            continue
        d = family.dist(t)
        check(t, d)
        if len(t) < check_depth and d.support is not OMEGA:
            stack.extend(family.tree.children(t))
    return ValidationReport(not violations, tuple(violations), check_depth)


def node_mass(family: EdgeFamily, t: Path) -> Fraction:
    """Product of the edge probabilities along the path to t."""
    t = family.tree.require(tuple(t))
    mass = ONE
    for i, k in enumerate(t):
        mass *= family.dist(t[:i]).mass(k)
        if mass == 0:
            return ZERO
    return mass


class InductiveMeasure:
    """Node masses satisfying the inductive law, materialized to a depth.

    The root has mass one and every interior node's mass equals the total
    mass of its successors. `depth` limits what is materialized for
    measures over generated trees; None means the whole (finite) tree.
    """

    __slots__ = ("tree", "_masses", "depth")

    def __init__(
        self,
        tree: TreeShape,
        masses: Mapping[Path, FractionLike],
        depth: int | None = None,
    ):
        table = {tuple(t): as_fraction(m) for t, m in masses.items()}
        if depth is None and not isinstance(tree, ExplicitTree):
            raise ValueError("measures over generated trees need a materialization depth")
        self.tree = tree
        self._masses = table
        self.depth = depth
        self._validate()

    def _validate(self) -> None:
        if self._masses.get((), None) != 1:
            raise ValueError("root mass must be exactly 1")
        for t, m in self._masses.items():
            if not 0 <= m <= 1:
                raise ValueError(f"mass at {t} is {m}, outside [0, 1]")
            self.tree.require(t)
        for t, m in self._masses.items():
            if self.depth is not None and len(t) >= self.depth:
                continue
            if self.tree.is_maximal(t):
                continue
            kids = self.tree.children(t)
            missing = [c for c in kids if c not in self._masses]
            if missing:
                raise ValueError(f"successors of {t} are not all materialized: {missing[0]}")
            total = sum((self._masses[c] for c in kids), ZERO)
            if total != m:
                raise ValueError(f"inductive law fails at {t}: children sum to {total}, node has {m}")

    def mass(self, t: Path) -> Fraction:
        t = tuple(t)
        if t in self._masses:
            return self._masses[t]
        self.tree.require(t)
        raise DepthBudgetExceeded(f"node {t} lies beyond the materialized depth {self.depth}")

    def nodes(self) -> Iterator[Path]:
        return iter(self._masses)

    def items(self) -> Iterator[tuple[Path, Fraction]]:
        return iter(self._masses.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InductiveMeasure):
            return NotImplemented
        return self._masses == other._masses

    def __hash__(self) -> int:
        return hash(frozenset(self._masses.items()))

    def __repr__(self) -> str:
        return f"InductiveMeasure({len(self._masses)} nodes, depth={self.depth})"


def induced_measure(family: EdgeFamily, depth: int | None = None) -> InductiveMeasure:
    """Materialize the induced node masses on all nodes up to `depth`."""
    tree = family.tree
    if depth is None:
        if not isinstance(tree, ExplicitTree):
            raise ValueError("materializing a generated family needs an explicit depth")
        depth_limit = tree.height
        record_depth = None
    else:
        if tree.depth_budget is not None and depth > tree.depth_budget:
            raise DepthBudgetExceeded(f"depth {depth} exceeds budget {tree.depth_budget}")
        depth_limit = depth
        record_depth = None if isinstance(tree, ExplicitTree) and depth >= tree.height else depth

    masses: dict[Path, Fraction] = {}
    stack: list[tuple[Path, Fraction]] = [((), ONE)]
    while stack:
        t, m = stack.pop()
        masses[t] = m
        if len(t) < depth_limit and not tree.is_maximal(t):
            d = family.dist(t)
            if d.support is OMEGA:
                raise InfiniteLevel(f"node {t} has infinitely many successors")
            for k in d.indices:
                stack.append((t + (k,), m * d.mass(k)))
    return InductiveMeasure(tree, masses, record_depth)


def front_mass(measure: InductiveMeasure, front: Front) -> Fraction:
    """Total mass of a front; exactly one for any valid inductive measure."""
    if not is_front(measure.tree, front.nodes):
        raise NotAFront("the given node set is not a front of the measure's tree")
    return sum((measure.mass(s) for s in front.nodes), ZERO)


def below_mass(measure: InductiveMeasure, t: Path, front: Front) -> Fraction:
    """Mass of the front members extending t; equals the mass of t itself."""
    if not is_front(measure.tree, front.nodes):
        raise NotAFront("the given node set is not a front of the measure's tree")
    t = tuple(t)
    members = [s for s in front.nodes if is_prefix(t, s)]
    if not members:
        raise NodeNotBelowFront(f"node {t} has no extension in the front")
    return sum((measure.mass(s) for s in members), ZERO)


class NullNodeSet:
    """The set of zero-mass nodes of a family, as a membership test.

    For explicit families the set is finite and iterable; for generated
    families only membership is computable, and iteration fails rather
    than silently truncating.
    """

    __slots__ = ("_family", "_materialized")

    def __init__(self, family: EdgeFamily, materialized: frozenset[Path] | None = None):
        self._family = family
        self._materialized = materialized

    def __contains__(self, t: Path) -> bool:
        return node_mass(self._family, tuple(t)) == 0

    def __iter__(self) -> Iterator[Path]:
        if self._materialized is None:
            raise InfiniteLevel("null node set of a generated family is not enumerable")
        return iter(self._materialized)

    def __len__(self) -> int:
        if self._materialized is None:
            raise InfiniteLevel("null node set of a generated family is not enumerable")
        return len(self._materialized)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NullNodeSet):
            return self._materialized == other._materialized and self._family == other._family
        if isinstance(other, (set, frozenset)):
            if self._materialized is None:
                return NotImplemented
            return self._materialized == other
        return NotImplemented

    def __repr__(self) -> str:
        if self._materialized is not None:
            return f"NullNodeSet({set(self._materialized) or '{}'})"
        return "NullNodeSet(<generated>)"


def positive_part(family: EdgeFamily, depth: int | None = None) -> tuple[EdgeFamily, NullNodeSet]:
    """Restrict the family to nodes of positive induced mass.

    The restricted tree keeps the original child indices, so the positive
    part of a canonical family may be sparse. Generated families that are
    positive everywhere come back unchanged; ones whose positive support
    is finite at every node (point masses) are materialized up to `depth`.
    """
    tree = family.tree
    if family.is_explicit:
        measure = induced_measure(family)
        keep = {t for t, m in measure.items() if m > 0}
        null = frozenset(t for t in tree.nodes() if t not in keep)
        children = {
            t: tuple(k for k in tree.child_indices(t) if t + (k,) in keep) for t in keep
        }
        sub_tree = ExplicitTree(children, tree.depth_budget)
        dists = {
            t: family.dist(t).restrict(idx)
            for t, idx in children.items()
            if idx
        }
        return EdgeFamily(sub_tree, dists), NullNodeSet(family, null)

    if family.everywhere_positive_rule:
        return family, NullNodeSet(family, None)

    limit = tree.depth_budget if depth is None else depth
    if tree.depth_budget is not None and limit > tree.depth_budget:
        raise DepthBudgetExceeded(f"depth {limit} exceeds budget {tree.depth_budget}")
    children: dict[Path, tuple[int, ...]] = {}
    dists: dict[Path, FiniteDist] = {}
    stack: list[Path] = [()]
    while stack:
        t = stack.pop()
        if len(t) >= limit or tree.is_maximal(t):
            children[t] = ()
            continue
        d = family.dist(t)
        support = d.positive_support()
        if support is OMEGA:
            raise InfiniteLevel(f"node {t} has infinitely many positive successors")
        children[t] = tuple(support)
        dists[t] = FiniteDist({k: d.mass(k) for k in support})
        stack.extend(t + (k,) for k in support)
    sub_tree = ExplicitTree(children, tree.depth_budget)
    return EdgeFamily(sub_tree, dists), NullNodeSet(family, None)


class GeneralPair:
    """A positive inductive measure plus fillers for the null region.

    Together with the host tree this is exactly the data needed to rebuild
    an edge family: quotients of consecutive masses on the positive part,
    the fillers below zero-mass nodes.
    """

    __slots__ = ("host_tree", "positive", "fillers")

    def __init__(
        self,
        host_tree: TreeShape,
        positive: InductiveMeasure,
        fillers: Mapping[Path, Dist],
    ):
        if not isinstance(host_tree, ExplicitTree):
            raise MalformedPair("pairs are supported over explicit host trees only")
        self.host_tree = host_tree
        self.positive = positive
        self.fillers = {tuple(t): d for t, d in fillers.items()}
        self._validate()

    def _validate(self) -> None:
        host = self.host_tree
        pos_tree = self.positive.tree
        if not isinstance(pos_tree, ExplicitTree):
            raise MalformedPair("the positive part must live on an explicit tree")
        for t in pos_tree.nodes():
            if not host.contains(t):
                raise MalformedPair(f"positive node {t} is not in the host tree")
            if not set(pos_tree.child_indices(t)) <= set(host.child_indices(t)):
                raise MalformedPair(f"positive children of {t} are not host children")
            if self.positive.mass(t) <= 0:
                raise MalformedPair(f"positive part carries mass 0 at {t}")
        pos_nodes = set(pos_tree.nodes())
        null_interior = {
            t for t in host.nodes() if t not in pos_nodes and not host.is_maximal(t)
        }
        if set(self.fillers) != null_interior:
            raise MalformedPair("fillers must cover exactly the non-maximal null nodes")
        for t, d in self.fillers.items():
            if not isinstance(d, FiniteDist):
                raise MalformedPair(f"filler at {t} must be a finite distribution")
            if d.indices != host.child_indices(t):
                raise MalformedPair(f"filler at {t} does not match the host child set")
            if d.total != 1:
                raise MalformedPair(f"filler at {t} sums to {d.total}, not 1")

    def induced_mass(self, t: Path) -> Fraction:
        """Mass of t in the measure this pair represents (zero off the positive part)."""
        t = tuple(t)
        if self.positive.tree.contains(t):
            return self.positive.mass(t)
        self.host_tree.require(t)
        return ZERO

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneralPair):
            return NotImplemented
        return (
            self.host_tree == other.host_tree
            and self.positive == other.positive
            and self.fillers == other.fillers
        )

    def __repr__(self) -> str:
        return f"GeneralPair(positive={self.positive!r}, fillers={len(self.fillers)})"


def split_measure(measure: InductiveMeasure) -> tuple[InductiveMeasure, frozenset[Path]]:
    """Restrict a measure to its positive subtree; also return the null nodes."""
    tree = measure.tree
    if not isinstance(tree, ExplicitTree):
        raise InfiniteLevel("splitting a measure requires an explicit tree")
    keep = {t for t, m in measure.items() if m > 0}
    null = frozenset(t for t in tree.nodes() if t not in keep)
    children = {t: tuple(k for k in tree.child_indices(t) if t + (k,) in keep) for t in keep}
    sub_tree = ExplicitTree(children, tree.depth_budget)
    positive = InductiveMeasure(sub_tree, {t: measure.mass(t) for t in keep})
    return positive, null


def family_from_pair(pair: GeneralPair) -> EdgeFamily:
    """Rebuild the edge family: mass quotients on positive nodes, fillers elsewhere."""
    host = pair.host_tree
    pos_nodes = set(pair.positive.tree.nodes())
    dists: dict[Path, FiniteDist] = {}
    for t in host.nodes():
        if host.is_maximal(t):
            continue
        if t in pos_nodes:
            parent_mass = pair.positive.mass(t)
            dists[t] = FiniteDist(
                {k: pair.induced_mass(t + (k,)) / parent_mass for k in host.child_indices(t)}
            )
        else:
            dists[t] = pair.fillers[t]
    return EdgeFamily(host, dists)


def pair_from_family(family: EdgeFamily) -> GeneralPair:
    """Split a family into its positive measure and the original null fillers."""
    if not family.is_explicit:
        raise InfiniteLevel("splitting a generated family into a pair is not supported")
    measure = induced_measure(family)
    positive, null = split_measure(measure)
    fillers = {
        t: family.dist(t) for t in null if not family.tree.is_maximal(t)
    }
    return GeneralPair(family.tree, positive, fillers)


def positive_equivalent(a: EdgeFamily, b: EdgeFamily) -> bool:
    """True when the two families have identical positive parts."""
    pa, _ = positive_part(a)
    pb, _ = positive_part(b)
    return pa == pb


def positive_equivalent_measures(a: InductiveMeasure, b: InductiveMeasure) -> bool:
    """True when the two measures agree on their positive subtrees."""
    pos_a = {t: m for t, m in a.items() if m > 0}
    pos_b = {t: m for t, m in b.items() if m > 0}
    return pos_a == pos_b
