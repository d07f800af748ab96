import random
from fractions import Fraction as F

import pytest

from ptree import (
    ATOM_FOUND,
    ClopenSelection,
    DepthBudgetExceeded,
    FREE_CERTIFIED,
    INCONCLUSIVE,
    GeneratedTree,
    EdgeFamily,
    FiniteDist,
    MalformedClopen,
    NotASubtree,
    QPointError,
    RequiresExplicitFiniteTree,
    SamplerStuck,
    atom_gaps,
    branch_mass_bound,
    branch_window,
    clopen_mass,
    dirac,
    enumerate_front,
    freeness_report,
    geometric_omega,
    induced_measure,
    level,
    locate_branch,
    node_interval,
    node_mass,
    sample_branches,
    subtree_mass_bound,
    uniform_binary,
)
from ptree.paths import lex_less, order_relations, OrderRelation

from corpus import random_family, random_tree


def test_interval_uniform_binary_example():
    fam = uniform_binary(8)
    iv = node_interval(fam, (1, 0, 1))
    assert (iv.lower, iv.upper) == (F(5, 8), F(3, 4))
    assert node_interval(fam, ()) == (0, 1)


def test_interval_binary_expansion_law():
    fam = uniform_binary(10)
    rng = random.Random(2)
    for _ in range(20):
        t = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 8)))
        iv = node_interval(fam, t)
        assert iv.lower == sum(F(b, 2 ** (i + 1)) for i, b in enumerate(t))
        assert iv.width == F(1, 2 ** len(t))


def test_interval_dirac():
    fam = dirac(5, 8)
    assert node_interval(fam, (5, 5)) == (0, 1)
    assert node_interval(fam, (3,)) == (0, 0)
    assert node_interval(fam, (7,)) == (1, 1)


def test_interval_width_is_mass_and_children_tile():
    rng = random.Random(61)
    for _ in range(30):
        tree = random_tree(rng, max_depth=4, max_arity=4)
        fam = random_family(rng, tree, allow_zero=True)
        m = induced_measure(fam)
        for t in tree.nodes():
            iv = node_interval(fam, t)
            assert iv.width == m.mass(t)
            kids = tree.children(t)
            if kids:
                cells = [node_interval(fam, c) for c in kids]
                assert cells[0].lower == iv.lower
                assert cells[-1].upper == iv.upper
                for a, b in zip(cells, cells[1:]):
                    assert a.upper == b.lower


def test_interval_disjointness_for_incompatible():
    rng = random.Random(67)
    for _ in range(15):
        tree = random_tree(rng, max_depth=4, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        nodes = sorted(tree.nodes())
        for i, s in enumerate(nodes):
            for t in nodes[i + 1 :]:
                if order_relations(s, t) in (OrderRelation.LEX_LESS, OrderRelation.LEX_GREATER):
                    a, b = node_interval(fam, s), node_interval(fam, t)
                    lo, hi = max(a.lower, b.lower), min(a.upper, b.upper)
                    assert lo >= hi or lo == hi  # overlap at most a point


def test_extreme_endpoint_characterization():
    rng = random.Random(71)
    for _ in range(20):
        tree = random_tree(rng, max_depth=3, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        nodes = sorted(tree.nodes())
        for t in nodes:
            iv = node_interval(fam, t)
            lex_smaller_all_null = all(
                node_mass(fam, s) == 0 for s in nodes if lex_less(s, t)
            )
            assert (iv.lower == 0) == lex_smaller_all_null
            lex_bigger_all_null = all(
                node_mass(fam, s) == 0 for s in nodes if lex_less(t, s)
            )
            assert (iv.upper == 1) == lex_bigger_all_null


def test_endpoint_set_identity():
    # Q = {lower endpoints} ∪ {1}
    rng = random.Random(73)
    for _ in range(20):
        tree = random_tree(rng, max_depth=3, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        lowers = {node_interval(fam, t).lower for t in tree.nodes()}
        uppers = {node_interval(fam, t).upper for t in tree.nodes()}
        assert lowers | uppers == lowers | {F(1)}


def test_branch_window():
    fam = uniform_binary(8)
    w = branch_window(fam, (0, 1, 0, 1), 4)
    assert w.width == F(1, 16)
    assert w.prefix == (0, 1, 0, 1)
    w2 = branch_window(fam, (0, 1, 0, 1), 2)
    assert w2.prefix == (0, 1)
    with pytest.raises(DepthBudgetExceeded):
        branch_window(fam, (0,), 9)

    d = dirac(5, 8)
    for n in range(5):
        w = branch_window(d, (5,) * 5, n)
        assert (w.lower, w.upper) == (0, 1)

    g = geometric_omega(8)
    assert branch_window(g, (0, 0, 0), 3).width == F(1, 8)


def test_branch_window_maximal_prefix():
    fam = EdgeFamily.from_table({(): ["1/2", "1/2"]})
    w = branch_window(fam, (0,), 3)
    assert w.prefix == (0,)
    with pytest.raises(ValueError):
        branch_window(uniform_binary(8), (0,), 3)


def test_locate_branch_examples():
    fam = uniform_binary(16)
    assert locate_branch(fam, F(5, 8) + F(1, 32), 3) == (1, 0, 1)
    assert locate_branch(fam, F(1, 3), 2) == (0, 1)
    with pytest.raises(QPointError):
        locate_branch(fam, F(1, 2), 3)
    # unique-descent edges proceed
    assert locate_branch(fam, F(0), 3) == (0, 0, 0)
    assert locate_branch(fam, F(1), 3) == (1, 1, 1)


def test_locate_branch_contains_point():
    fam = uniform_binary(16)
    rng = random.Random(79)
    for _ in range(200):
        num = rng.getrandbits(40)
        if num % 3 == 0:
            num += 1
        y = F(num, 3 * (1 << 40))  # never a dyadic rational
        t = locate_branch(fam, y, 10)
        iv = node_interval(fam, t)
        assert iv.lower <= y <= iv.upper


def test_locate_branch_skips_degenerate_cells():
    fam = EdgeFamily.from_table(
        {
            (): ["1/4", "0", "3/4"],
            (2,): ["1/3", "2/3"],
        }
    )
    assert locate_branch(fam, F(1, 3), 2) == (2, 0)
    # the shared boundary between cells 0 and 2 sits at 1/4
    with pytest.raises(QPointError):
        locate_branch(fam, F(1, 4), 2)
    # 1/2 separates the two positive cells below (2,)
    with pytest.raises(QPointError):
        locate_branch(fam, F(1, 2), 2)


def test_locate_branch_geometric_and_dirac():
    g = geometric_omega(16)
    assert locate_branch(g, F(2, 3), 2) == (1, 1)
    y = F(1, 5)
    t = locate_branch(g, y, 4)
    iv = node_interval(g, t)
    assert iv.lower <= y <= iv.upper
    with pytest.raises(QPointError):
        locate_branch(g, F(1), 1)  # the omega limit endpoint

    d = dirac(5, 16)
    assert locate_branch(d, F(1, 3), 3) == (5, 5, 5)
    assert locate_branch(d, F(0), 2) == (5, 5)


def test_clopen_mass():
    fam = uniform_binary(8)
    assert clopen_mass(fam, ClopenSelection(2, frozenset({(0, 1)}))) == F(1, 4)
    full = ClopenSelection(2, frozenset(level(fam.tree, 2)))
    assert clopen_mass(fam, full) == 1
    comp = ClopenSelection(1, frozenset({(0,)}), complemented=True)
    assert clopen_mass(fam, comp) == F(1, 2)
    with pytest.raises(MalformedClopen):
        clopen_mass(fam, ClopenSelection(1, frozenset({(0, 0)})))


def test_clopen_mass_additivity():
    rng = random.Random(83)
    for _ in range(20):
        tree = random_tree(rng, max_depth=4, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        n = rng.randint(0, tree.height)
        front = sorted(enumerate_front(tree, n).nodes)
        rng.shuffle(front)
        cut = rng.randint(0, len(front))
        a, b = frozenset(front[:cut]), frozenset(front[cut:])
        total = clopen_mass(fam, ClopenSelection(n, a)) + clopen_mass(fam, ClopenSelection(n, b))
        assert total == 1
        assert clopen_mass(fam, ClopenSelection(n, a, complemented=True)) == clopen_mass(
            fam, ClopenSelection(n, b)
        )


def test_clopen_mass_infinite_front_via_complement():
    g = geometric_omega(8)
    sel = ClopenSelection(1, frozenset({(0,), (1,)}), complemented=True)
    assert clopen_mass(g, sel) == 1 - F(1, 2) - F(1, 4)


def test_subtree_mass_bound_path():
    fam = uniform_binary(8)
    nodes = [(0,) * k for k in range(6)]
    report = subtree_mass_bound(fam, nodes, 5)
    assert report.values == (1, F(1, 2), F(1, 4), F(1, 8), F(1, 16), F(1, 32))
    assert report.nonincreasing
    assert report.value == F(1, 32)


def test_subtree_mass_bound_full_and_cone():
    fam = uniform_binary(6)
    full = [t for n in range(4) for t in level(fam.tree, n)]
    report = subtree_mass_bound(fam, full, 3)
    assert set(report.values) == {F(1)}

    cone = [()] + [(0,) + t for n in range(3) for t in level(fam.tree, n)]
    report = subtree_mass_bound(fam, cone, 3)
    assert report.values == (1, F(1, 2), F(1, 2), F(1, 2))


def test_subtree_mass_bound_rejects_bad_sets():
    fam = uniform_binary(8)
    with pytest.raises(NotASubtree):
        subtree_mass_bound(fam, [(0,)], 1)  # missing root
    with pytest.raises(NotASubtree):
        subtree_mass_bound(fam, [(), (0, 0)], 2)  # not prefix-closed
    with pytest.raises(NotASubtree):
        subtree_mass_bound(fam, [(), (0,)], 3)  # leaf not maximal in host


def test_branch_mass_bound():
    fam = uniform_binary(16)
    bound, zero = branch_mass_bound(fam, (0, 1) * 5, 10)
    assert bound == F(1, 1024) and not zero

    d = dirac(5, 16)
    bound, zero = branch_mass_bound(d, (5,) * 8, 8)
    assert bound == 1 and not zero

    fam2 = EdgeFamily.from_table({(): ["1", "0"], (0,): ["1/2", "1/2"], (1,): ["1/2", "1/2"]})
    bound, zero = branch_mass_bound(fam2, (1, 0), 2)
    assert bound == 0 and zero


def test_freeness_uniform_certified():
    report = freeness_report(uniform_binary(32), 20, F(1, 2**10))
    assert report.verdict == FREE_CERTIFIED
    assert report.level_mass_bound == F(1, 2**20)


def test_freeness_dirac_atom():
    report = freeness_report(dirac(5, 32), 20, F(1, 2**10))
    assert report.verdict == ATOM_FOUND
    assert report.witness == (5,) * 20


def test_freeness_explicit_always_atom():
    rng = random.Random(89)
    for _ in range(10):
        tree = random_tree(rng, max_depth=3, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        report = freeness_report(fam, 10, F(1, 4))
        assert report.verdict == ATOM_FOUND
        assert node_mass(fam, report.witness) > 0
        assert fam.tree.is_maximal(report.witness)


def test_freeness_inconclusive_with_prob_one_edge():
    tree = GeneratedTree(lambda t: 2, depth_budget=16)
    forced = FiniteDist([F(1), F(0)])
    fair = FiniteDist([F(1, 2), F(1, 2)])
    fam = EdgeFamily(tree, lambda t: forced if t == () else fair, edge_prob_sup=F(1))
    report = freeness_report(fam, 10, F(1, 4))
    assert report.verdict == INCONCLUSIVE


def test_atom_gaps():
    fam = EdgeFamily.from_table(
        {
            (): ["1/2", "1/2"],
            (0,): ["1/2", "1/2"],
            (1,): ["1/2", "1/2"],
        }
    )
    gaps = atom_gaps(fam)
    assert [g.width for g in gaps] == [F(1, 4)] * 4
    assert sum(g.width for g in gaps) == 1
    for a, b in zip(gaps, gaps[1:]):
        assert a.upper <= b.lower

    lopsided = EdgeFamily.from_table({(): ["1", "0"]})
    gaps = atom_gaps(lopsided)
    assert [(g.lower, g.upper) for g in gaps] == [(0, 1)]  # zero-mass leaf drops out

    root_only = EdgeFamily(random_tree(random.Random(0), max_depth=0), {})
    assert [(g.lower, g.upper) for g in atom_gaps(root_only)] == [(0, 1)]

    with pytest.raises(RequiresExplicitFiniteTree):
        atom_gaps(uniform_binary(8))


def test_sampler_deterministic_and_consistent():
    fam = uniform_binary(16)
    a = sample_branches(fam, seed=7, count=200, depth=3)
    b = sample_branches(fam, seed=7, count=200, depth=3)
    assert a == b
    c = sample_branches(fam, seed=8, count=200, depth=3)
    assert a != c
    assert all(len(t) == 3 for t in a)


def test_sampler_dirac_always_atom_path():
    d = dirac(5, 16)
    samples = sample_branches(d, seed=3, count=50, depth=4)
    assert samples == [(5, 5, 5, 5)] * 50


def test_sampler_stuck_cap(monkeypatch):
    import ptree.intervals as mod

    def always_qpoint(family, y, depth):
        raise QPointError("forced")

    monkeypatch.setattr(mod, "locate_branch", always_qpoint)
    with pytest.raises(SamplerStuck):
        mod.sample_branches(uniform_binary(8), seed=1, count=1, depth=2)


def test_sampler_skewed_family_frequency():
    fam = EdgeFamily.from_table({(): ["3/4", "1/4"]})
    samples = sample_branches(fam, seed=11, count=4000, depth=1)
    freq = sum(1 for t in samples if t == (0,)) / 4000
    assert abs(freq - 0.75) < 0.03


def test_clopen_mass_agrees_with_interval_lengths():
    # dual route: the clopen measure equals the total length of the
    # selected nodes' cells, computed from interval endpoints
    rng = random.Random(101)
    for _ in range(20):
        tree = random_tree(rng, max_depth=4, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        n = rng.randint(0, tree.height)
        front = sorted(enumerate_front(tree, n).nodes)
        cut = rng.randint(0, len(front))
        selected = frozenset(front[:cut])
        by_mass = clopen_mass(fam, ClopenSelection(n, selected))
        by_length = sum((node_interval(fam, s).width for s in selected), F(0))
        assert by_mass == by_length


def test_geometric_interval_structure():
    # child 0 takes the first half of the parent cell; child k+1 takes the
    # first half of what remains after child k
    g = geometric_omega(12)
    for t in [(), (1,), (0, 2)]:
        parent = node_interval(g, t)
        remainder_start = parent.lower
        for k in range(5):
            cell = node_interval(g, t + (k,))
            assert cell.lower == remainder_start
            assert cell.width == (parent.upper - remainder_start) / 2
            remainder_start = cell.upper
    # widths follow the closed form 2^-(|t| + sum(t))
    assert node_interval(g, (2, 1)).width == F(1, 2 ** (2 + 3))


def test_locate_branch_budget_guard():
    fam = uniform_binary(4)
    with pytest.raises(DepthBudgetExceeded):
        locate_branch(fam, F(1, 3), 5)


def test_branch_window_monotone_nesting():
    rng = random.Random(103)
    for fam in [uniform_binary(12), geometric_omega(12), dirac(5, 12)]:
        x = tuple(rng.randint(0, 1) for _ in range(10)) if fam.name == "uniform_binary" else (5,) * 10
        lowers, uppers = [], []
        for n in range(11):
            w = branch_window(fam, x, n)
            lowers.append(w.lower)
            uppers.append(w.upper)
        assert all(a <= b for a, b in zip(lowers, lowers[1:]))
        assert all(a >= b for a, b in zip(uppers, uppers[1:]))


def test_concurrent_reads_are_consistent():
    # generated trees memoize arity lookups; concurrent readers must agree
    import threading

    fam = uniform_binary(12)
    results = []
    errors = []

    def worker(seed):
        try:
            masses = [node_mass(fam, tuple((seed >> i) & 1 for i in range(10)))
                      for _ in range(50)]
            results.append(masses)
        except Exception as exc:  # noqa: BLE001 - collected for the assertion
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(s,)) for s in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert not errors
    for masses in results:
        assert all(m == F(1, 1024) for m in masses)


def test_round_trip_locate_after_interval():
    # a point inside a positive node's cell descends back to that node
    rng = random.Random(97)
    for _ in range(15):
        tree = random_tree(rng, max_depth=4, max_arity=3)
        fam = random_family(rng, tree, allow_zero=True)
        endpoints = {node_interval(fam, t).lower for t in tree.nodes()} | {F(1)}
        for t in tree.nodes():
            iv = node_interval(fam, t)
            if iv.width == 0:
                continue
            y = iv.lower + iv.width / 3
            j = 3
            while y in endpoints:
                j += 2
                y = iv.lower + iv.width / j
            assert locate_branch(fam, y, len(t)) == t
