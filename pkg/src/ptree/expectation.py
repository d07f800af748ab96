"""Random variables on fronts and relative (conditional) expectations.

A front variable assigns an exact rational to every member of a front.
Its expectation relative to a node t re-weights the members extending t
by the edge probabilities accumulated from t down, which is exactly the
expectation in the subtree rooted at t under the inherited family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .dists import FractionLike, ONE, ZERO, as_fraction
from .errors import NodeNotBelowFront, NotAFront, PreconditionFrontMismatch
from .measures import EdgeFamily, InductiveMeasure
from .paths import Path, is_prefix
from .trees import Front, is_front, level


@dataclass(frozen=True)
class FrontVariable:
    """An exact rational value for every member of a front."""

    front: Front
    values: Mapping[Path, Fraction]

    def __post_init__(self) -> None:
        table = {tuple(t): as_fraction(v) for t, v in self.values.items()}
        object.__setattr__(self, "values", table)
        if set(table) != set(self.front.nodes):
            raise ValueError("variable values must cover exactly the front members")

    def __call__(self, t: Path) -> Fraction:
        return self.values[tuple(t)]

    def scale_add(self, a: FractionLike, other: "FrontVariable", b: FractionLike) -> "FrontVariable":
        """Pointwise a*self + b*other on a shared front."""
        if self.front.nodes != other.front.nodes:
            raise ValueError("variables live on different fronts")
        a, b = as_fraction(a), as_fraction(b)
        return FrontVariable(
            self.front, {t: a * v + b * other.values[t] for t, v in self.values.items()}
        )


def expect(measure: InductiveMeasure, variable: FrontVariable) -> Fraction:
    """Expectation of the variable under the front restriction of the measure."""
    if not is_front(measure.tree, variable.front.nodes):
        raise NotAFront("variable's front is not a front of the measure's tree")
    return sum((variable(s) * measure.mass(s) for s in variable.front.nodes), ZERO)


def _weight(family: EdgeFamily, start: Path, end: Path) -> Fraction:
    """Product of the edge probabilities from `start` down to `end`."""
    w = ONE
    for i in range(len(start), len(end)):
        w *= family.dist(end[:i]).mass(end[i])
        if w == 0:
            return ZERO
    return w


def relative_expect(family: EdgeFamily, variable: FrontVariable, t: Path) -> Fraction:
    """Expectation of the variable among the front members extending t.

    Requires that no maximal node shorter than the front level sits above
    t: every member extending t must lie at the full level, so the
    conditional weights form a probability distribution.
    """
    if not is_front(family.tree, variable.front.nodes):
        raise NotAFront("variable's front is not a front of the family's tree")
    t = family.tree.require(tuple(t))
    members = [s for s in variable.front.nodes if is_prefix(t, s)]
    if not members:
        raise NodeNotBelowFront(f"node {t} has no extension in the variable's front")
    n = max(len(s) for s in variable.front.nodes)
    if any(len(s) != n for s in members):
        raise PreconditionFrontMismatch(
            f"a maximal node shorter than level {n} lies above {t}"
        )
    return sum((variable(s) * _weight(family, t, s) for s in members), ZERO)


def relative_expect_front(family: EdgeFamily, variable: FrontVariable, t: Path) -> Fraction:
    """Front-general variant: condition on t over an arbitrary front."""
    if not is_front(family.tree, variable.front.nodes):
        raise NotAFront("variable's front is not a front of the family's tree")
    t = family.tree.require(tuple(t))
    members = [s for s in variable.front.nodes if is_prefix(t, s)]
    if not members:
        raise NodeNotBelowFront(f"node {t} has no extension in the variable's front")
    return sum((variable(s) * _weight(family, t, s) for s in members), ZERO)


@dataclass(frozen=True)
class TowerCase:
    node: Path
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class TowerReport:
    cases: tuple[TowerCase, ...]

    @property
    def equal(self) -> bool:
        return all(c.equal for c in self.cases)

    @property
    def lhs(self) -> Fraction:
        if len(self.cases) != 1:
            raise ValueError("lhs is only defined for single-node reports")
        return self.cases[0].lhs

    @property
    def rhs(self) -> Fraction:
        if len(self.cases) != 1:
            raise ValueError("rhs is only defined for single-node reports")
        return self.cases[0].rhs


def tower_check(
    family: EdgeFamily, variable: FrontVariable, m: int, n: int, k: int
) -> TowerReport:
    """Both sides of the iterated-conditioning identity, for every node at level m.

    The left side conditions the level-k variable on each level-m node
    directly; the right side first averages over level n. Equality is
    exact whenever no maximal node shorter than k sits above the node.
    """
    if not (0 <= m <= n <= k):
        raise ValueError("levels must satisfy m <= n <= k")
    if not is_front(family.tree, variable.front.nodes):
        raise NotAFront("variable's front is not a front of the family's tree")
    cases = []
    for t in sorted(level(family.tree, m)):
        members = [r for r in variable.front.nodes if is_prefix(t, r)]
        if any(len(r) != k for r in members):
            raise PreconditionFrontMismatch(
                f"a maximal node shorter than level {k} lies above {t}"
            )
        lhs = sum((variable(r) * _weight(family, t, r) for r in members), ZERO)
        rhs = ZERO
        for s in sorted(level(family.tree, n)):
            if not is_prefix(t, s):
                continue
            inner = sum(
                (variable(r) * _weight(family, s, r) for r in members if is_prefix(s, r)),
                ZERO,
            )
            rhs += _weight(family, t, s) * inner
        cases.append(TowerCase(t, lhs, rhs))
    return TowerReport(tuple(cases))


def tower_check_fronts(
    family: EdgeFamily, variable: FrontVariable, inner: Front, t: Path = ()
) -> TowerReport:
    """Front-general tower identity: average over an intermediate front.

    `inner` must be a front lying below the variable's front; the check
    conditions on the single node t.
    """
    if not is_front(family.tree, variable.front.nodes):
        raise NotAFront("variable's front is not a front of the family's tree")
    if not is_front(family.tree, inner.nodes):
        raise NotAFront("the intermediate node set is not a front")
    outer = variable.front.nodes
    for s in inner.nodes:
        if not any(is_prefix(s, r) for r in outer):
            raise NotAFront("the intermediate front is not below the variable's front")
    t = family.tree.require(tuple(t))
    if not any(is_prefix(t, s) for s in inner.nodes):
        raise NodeNotBelowFront(f"node {t} has no extension in the intermediate front")
    members = [r for r in outer if is_prefix(t, r)]
    if not members:
        raise NodeNotBelowFront(f"node {t} has no extension in the variable's front")
    lhs = sum((variable(r) * _weight(family, t, r) for r in members), ZERO)
    rhs = ZERO
    for s in inner.nodes:
        if not is_prefix(t, s):
            continue
        inner_val = sum(
            (variable(r) * _weight(family, s, r) for r in members if is_prefix(s, r)),
            ZERO,
        )
        rhs += _weight(family, t, s) * inner_val
    return TowerReport((TowerCase(t, lhs, rhs),))
