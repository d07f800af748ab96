"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Every comparison is exact rational equality unless the criterion
itself states a tolerance.
"""

import random
import time
from fractions import Fraction as F

from ptree import (
    ATOM_FOUND,
    ClopenSelection,
    FREE_CERTIFIED,
    QPointError,
    binomial_pmf,
    cell_volume,
    clopen_mass,
    dirac,
    dominance_check,
    enumerate_front,
    family_from_pair,
    freeness_report,
    front_mass,
    induced_measure,
    level,
    locate_branch,
    node_interval,
    node_mass,
    pair_from_family,
    random_trial_tree,
    sample_branches,
    success_pmf,
    tower_check,
    uniform_binary,
    verify_encoding,
)
from ptree.bernoulli import DependentTrialTree

from corpus import random_family, random_tree, random_variable

CORPUS_SEED = 20260809
_corpus = None


def corpus():
    """200 explicit trees (depth <= 6, arity <= 4) with random rational families."""
    global _corpus
    if _corpus is None:
        rng = random.Random(CORPUS_SEED)
        families = []
        for i in range(200):
            tree = random_tree(rng, max_depth=6, max_arity=4, leaf_prob=0.3)
            families.append(random_family(rng, tree, allow_zero=(i % 2 == 0)))
        _corpus = families
    return _corpus


def report(number, name, started):
    print(f"criterion {number:02d} {name}: PASS ({time.monotonic() - started:.2f}s)")


def test_criterion_01_inductive_law():
    started = time.monotonic()
    for fam in corpus():
        for t in fam.tree.nodes():
            if not fam.tree.is_maximal(t):
                kids = fam.tree.children(t)
                assert sum(node_mass(fam, c) for c in kids) == node_mass(fam, t)
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"inductive-law sweep took {elapsed:.2f}s"
    report(1, "inductive law", started)


def test_criterion_02_front_mass():
    started = time.monotonic()
    non_well_pruned = 0
    for fam in corpus():
        measure = induced_measure(fam)
        if any(len(t) < fam.tree.height for t in fam.tree.max_nodes()):
            non_well_pruned += 1
        for n in range(7):
            front = enumerate_front(fam.tree, n)
            assert front_mass(measure, front) == 1
    assert non_well_pruned > 10, "corpus must exercise non-well-pruned trees"
    report(2, "front mass", started)


def test_criterion_03_round_trips():
    started = time.monotonic()
    with_zero_edges = 0
    for fam in corpus():
        pair = pair_from_family(fam)
        assert family_from_pair(pair) == fam
        rebuilt = induced_measure(family_from_pair(pair))
        for t in fam.tree.nodes():
            assert rebuilt.mass(t) == pair.induced_mass(t)
        if len(pair.fillers) > 0:
            with_zero_edges += 1
    assert with_zero_edges > 10, "corpus must include families with zero edges"
    report(3, "pair round trips", started)


def test_criterion_04_interval_law():
    started = time.monotonic()
    for fam in corpus():
        measure = induced_measure(fam)
        for t in fam.tree.nodes():
            iv = node_interval(fam, t)
            assert iv.width == measure.mass(t)
            kids = fam.tree.children(t)
            if kids:
                cells = [node_interval(fam, c) for c in kids]
                assert cells[0].lower == iv.lower
                assert cells[-1].upper == iv.upper
                for left, right in zip(cells, cells[1:]):
                    assert left.upper == right.lower
    report(4, "interval law", started)


def test_criterion_05_clopen_measure():
    started = time.monotonic()
    rng = random.Random(CORPUS_SEED + 5)
    for fam in corpus()[:100]:
        n = rng.randint(0, 6)
        front = sorted(enumerate_front(fam.tree, n).nodes)
        assert clopen_mass(fam, ClopenSelection(n, frozenset(front))) == 1
        single = front[rng.randrange(len(front))]
        assert clopen_mass(fam, ClopenSelection(n, frozenset({single}))) == node_mass(fam, single)
        rng.shuffle(front)
        cut = rng.randint(0, len(front))
        a, b = frozenset(front[:cut]), frozenset(front[cut:])
        mass_a = clopen_mass(fam, ClopenSelection(n, a))
        mass_b = clopen_mass(fam, ClopenSelection(n, b))
        assert mass_a + mass_b == clopen_mass(fam, ClopenSelection(n, a | b)) == 1
        assert clopen_mass(fam, ClopenSelection(n, a, complemented=True)) == mass_b
    report(5, "clopen measure", started)


def test_criterion_06_tower_property():
    started = time.monotonic()
    rng = random.Random(CORPUS_SEED + 6)
    for _ in range(100):
        tree = random_tree(rng, max_depth=5, max_arity=3, well_pruned=True)
        fam = random_family(rng, tree, allow_zero=True)
        k = rng.randint(0, tree.height)
        n = rng.randint(0, k)
        m = rng.randint(0, n)
        variable = random_variable(rng, enumerate_front(tree, k))
        result = tower_check(fam, variable, m, n, k)
        assert result.equal
    report(6, "tower property", started)


def test_criterion_07_dominance_bound():
    started = time.monotonic()
    rng = random.Random(CORPUS_SEED + 7)
    for i in range(500):
        n = rng.randint(1, 10)
        trial_tree = random_trial_tree(n, rng)
        p = min(trial_tree.success_prob(t) for t in trial_tree.interior_nodes())
        result = dominance_check(trial_tree, p)
        assert result.holds and result.violated_z is None
    # i.i.d. degeneration: the pmf is exactly binomial
    for n, p in [(1, F(2, 7)), (5, F(1, 3)), (10, F(4, 5)), (7, F(0)), (6, F(1))]:
        trial_tree = DependentTrialTree.from_success_probs(n, lambda t: p)
        assert success_pmf(trial_tree) == binomial_pmf(n, p)
        equal_report = dominance_check(trial_tree, p)
        assert equal_report.holds and all(r.margin == 0 for r in equal_report.rows)
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"dominance sweep took {elapsed:.2f}s"
    report(7, "dominance bound", started)


def test_criterion_08_cell_volume_identity():
    started = time.monotonic()
    rng = random.Random(CORPUS_SEED + 8)
    for n in [1, 2, 3, 10]:
        trial_tree = random_trial_tree(n, rng)
        for bits in range(2**n):
            leaf = tuple((bits >> (n - 1 - i)) & 1 for i in range(n))
            assert cell_volume(trial_tree, leaf) == node_mass(trial_tree.family, leaf)
    report(8, "cell-volume identity", started)


def test_criterion_09_sampling_consistency():
    started = time.monotonic()
    fam = uniform_binary(16)
    samples = sample_branches(fam, seed=42, count=80_000, depth=3)
    counts = {t: 0 for t in level(fam.tree, 3)}
    for t in samples:
        counts[t] += 1
    for t, c in counts.items():
        assert abs(c / 80_000 - 0.125) < 0.01, f"cylinder {t} frequency {c / 80_000}"
    assert samples[:500] == sample_branches(fam, seed=42, count=500, depth=3)
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"sampling took {elapsed:.2f}s"
    report(9, "sampling consistency", started)


def test_criterion_10_encoding_preservation():
    started = time.monotonic()
    rng = random.Random(CORPUS_SEED + 10)
    for _ in range(100):
        tree = random_tree(rng, max_depth=4, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        result = verify_encoding(fam, tree.height)
        assert result.ok, result.failures
    report(10, "encoding preservation", started)


def test_criterion_11_descent_interval_coherence():
    started = time.monotonic()
    fam = uniform_binary(16)
    rng = random.Random(CORPUS_SEED + 11)
    for _ in range(1000):
        num = rng.getrandbits(50)
        if num % 3 == 0:
            num += 1
        y = F(num, 3 * (1 << 50))  # denominator divisible by 3: never an endpoint
        t = locate_branch(fam, y, 10)
        iv = node_interval(fam, t)
        assert iv.lower <= y <= iv.upper
    half = node_interval(fam, (1,)).lower
    assert half == F(1, 2)
    try:
        locate_branch(fam, half, 10)
        raise AssertionError("descent at a shared endpoint must fail")
    except QPointError:
        pass
    report(11, "descent/interval coherence", started)


def test_criterion_12_freeness_diagnostics():
    started = time.monotonic()
    free = freeness_report(uniform_binary(32), depth=20, epsilon=F(1, 2**10))
    assert free.verdict == FREE_CERTIFIED
    assert free.level_mass_bound <= F(1, 2**10)
    atom = freeness_report(dirac(5, 32), depth=20, epsilon=F(1, 2**10))
    assert atom.verdict == ATOM_FOUND
    assert atom.witness == (5,) * 20
    report(12, "freeness diagnostics", started)
