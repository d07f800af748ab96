"""Dependent Bernoulli trials on the binary tree and the binomial CDF bound.

A sequence of n dependent trials is a probability tree on the complete
binary tree of height n, child 0 meaning success. When every conditional
success probability is at least p, the number of successes dominates a
Binomial(n, p) count: its CDF is bounded by the binomial CDF at every
threshold. The check here is exact rational arithmetic throughout.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

from .dists import FiniteDist, FractionLike, ONE, ZERO, as_fraction
from .errors import HypothesisViolated, NotALeaf, TooDeep
from .measures import EdgeFamily, node_mass
from .paths import Path
from .trees import complete_binary_tree

MAX_TRIALS = 24


@dataclass(frozen=True)
class DependentTrialTree:
    """n dependent Bernoulli trials; child 0 of each node is a success."""

    trials: int
    family: EdgeFamily

    def __post_init__(self) -> None:
        if self.trials > MAX_TRIALS:
            raise TooDeep(f"{self.trials} trials would enumerate 2^{self.trials} leaves; the cap is {MAX_TRIALS}")
        tree = self.family.tree
        expected = complete_binary_tree(self.trials)
        if tree != expected:
            raise ValueError(f"the family must live on the complete binary tree of height {self.trials}")

    @classmethod
    def from_success_probs(
        cls,
        trials: int,
        probs: Union[Mapping[Path, FractionLike], Callable[[Path], FractionLike]],
    ) -> "DependentTrialTree":
        """Build from per-node success probabilities (for the 0-child)."""
        if trials > MAX_TRIALS:
            raise TooDeep(f"{trials} trials would enumerate 2^{trials} leaves; the cap is {MAX_TRIALS}")
        getter = probs.__getitem__ if isinstance(probs, Mapping) else probs
        tree = complete_binary_tree(trials)
        dists = {}
        for t in tree.nodes():
            if not tree.is_maximal(t):
                p = as_fraction(getter(t))
                if not 0 <= p <= 1:
                    raise ValueError(f"success probability at {t} is {p}, outside [0, 1]")
                dists[t] = FiniteDist([p, 1 - p])
        return cls(trials, EdgeFamily(tree, dists))

    def success_prob(self, t: Path) -> Fraction:
        return self.family.dist(t).mass(0)

    def interior_nodes(self):
        for t in self.family.tree.nodes():
            if not self.family.tree.is_maximal(t):
                yield t


def success_pmf(trial_tree: DependentTrialTree) -> tuple[Fraction, ...]:
    """Exact distribution of the success count over all 2^n leaf histories."""
    n = trial_tree.trials
    if n > MAX_TRIALS:
        raise TooDeep(f"{n} trials would enumerate 2^{n} leaves; the cap is {MAX_TRIALS}")
    pmf = [ZERO] * (n + 1)
    family = trial_tree.family
    stack: list[tuple[Path, Fraction, int]] = [((), ONE, 0)]
    while stack:
        t, mass, successes = stack.pop()
        if len(t) == n:
            pmf[successes] += mass
            continue
        d = family.dist(t)
        stack.append((t + (0,), mass * d.mass(0), successes + 1))
        stack.append((t + (1,), mass * d.mass(1), successes))
    return tuple(pmf)


def binomial_pmf(n: int, p: FractionLike) -> tuple[Fraction, ...]:
    p = as_fraction(p)
    q = 1 - p
    return tuple(math.comb(n, k) * p**k * q ** (n - k) for k in range(n + 1))


def binomial_cdf(n: int, p: FractionLike, z: int) -> Fraction:
    """Pr[B(n, p) <= z], exact; zero below the range and one above it."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("the success probability must lie in [0, 1]")
    if z < 0:
        return ZERO
    if z >= n:
        return ONE
    q = 1 - p
    return sum(
        (math.comb(n, k) * p**k * q ** (n - k) for k in range(z + 1)), ZERO
    )


@dataclass(frozen=True)
class DominanceRow:
    z: int
    cdf_successes: Fraction
    cdf_binomial: Fraction

    @property
    def margin(self) -> Fraction:
        return self.cdf_binomial - self.cdf_successes

    @property
    def holds(self) -> bool:
        return self.cdf_successes <= self.cdf_binomial


@dataclass(frozen=True)
class DominanceReport:
    holds: bool
    rows: tuple[DominanceRow, ...]
    violated_z: int | None


def dominance_check(trial_tree: DependentTrialTree, p: FractionLike) -> DominanceReport:
    """Compare the success-count CDF against Binomial(n, p) at every threshold.

    The bound presupposes that p is a lower bound for every conditional
    success probability; that hypothesis is verified first and its failure
    is an error, not a report row.
    """
    p = as_fraction(p)
    for t in sorted(trial_tree.interior_nodes()):
        if trial_tree.success_prob(t) < p:
            raise HypothesisViolated(
                t, f"success probability {trial_tree.success_prob(t)} at {t} is below {p}"
            )
    n = trial_tree.trials
    pmf = success_pmf(trial_tree)
    rows = []
    cumulative = ZERO
    violated = None
    for z in range(n + 1):
        cumulative += pmf[z]
        row = DominanceRow(z, cumulative, binomial_cdf(n, p, z))
        rows.append(row)
        if violated is None and not row.holds:
            violated = z
    return DominanceReport(violated is None, tuple(rows), violated)


def cell_volume(trial_tree: DependentTrialTree, leaf: Path) -> Fraction:
    """Volume of the leaf's cube cell: success edges contribute the success
    probability, failure edges the complement. Cross-checks the leaf mass."""
    leaf = tuple(leaf)
    n = trial_tree.trials
    if len(leaf) != n or not trial_tree.family.tree.contains(leaf):
        raise NotALeaf(f"{leaf} is not a depth-{n} leaf")
    volume = ONE
    for i, bit in enumerate(leaf):
        p = trial_tree.success_prob(leaf[:i])
        volume *= p if bit == 0 else 1 - p
    mass = node_mass(trial_tree.family, leaf)
    if volume != mass:
        raise AssertionError(f"cell volume {volume} disagrees with leaf mass {mass}")
    return volume


def random_trial_tree(
    trials: int,
    seed_or_rng: Union[int, random.Random],
    min_p: FractionLike = 0,
    denominator_bound: int = 32,
) -> DependentTrialTree:
    """A random trial tree with exact rational success probabilities >= min_p."""
    rng = seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)
    lo = as_fraction(min_p)
    span = 1 - lo

    def prob(_t: Path) -> Fraction:
        den = rng.randint(1, denominator_bound)
        return lo + span * Fraction(rng.randint(0, den), den)

    return DependentTrialTree.from_success_probs(trials, prob)


def flip_success_convention(trial_tree: DependentTrialTree) -> DependentTrialTree:
    """Reinterpret child 1 as success by mirroring every node of the tree."""
    n = trial_tree.trials

    def flipped(t: Path) -> Fraction:
        mirrored = tuple(1 - b for b in t)
        return trial_tree.family.dist(mirrored).mass(1)

    return DependentTrialTree.from_success_probs(n, flipped)
