from collections import Counter

import numpy as np
import pytest

from gwpeel import (
    CapExceeded,
    ConditionedSampler,
    RandomStream,
    UnattainableSize,
    from_degrees,
    nearest_attainable_size,
    parse_family,
    sample_conditioned,
    sample_kesten,
    sample_unconditioned,
)
# ----------------------------------------------------------------------
# random streams

def test_stream_reproducibility():
    a = RandomStream(42, 3).generator().random(8)
    b = RandomStream(42, 3).generator().random(8)
    c = RandomStream(42, 4).generator().random(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_stream_statefulness_and_substream():
    rs = RandomStream(42)
    first = rs.generator().random()
    second = rs.generator().random()
    assert first != second  # same stream consumed, not restarted
    assert rs.substream(5) == RandomStream(42, 5)


# ----------------------------------------------------------------------
# unconditioned sampling

def test_degenerate_always_single_node():
    from gwpeel import OffspringError
    with pytest.raises(OffspringError):
        parse_family("pmf:1.0")  # rejected without the flag
    d = parse_family("pmf:1.0", allow_subcritical=True)
    gen = RandomStream(1).generator()
    for _ in range(20):
        t = sample_unconditioned(d, gen, cap=10)
        assert list(t.degrees) == [0]


def test_unconditioned_size_frequencies_binary():
    # P{|T| = 1} = p_0 = 1/2 and P{|T| = 3} = p_2 p_0^2 = 1/8
    d = parse_family("binary")
    gen = RandomStream(77).generator()
    trials = 250_000
    sizes = Counter()
    for _ in range(trials):
        try:
            sizes[sample_unconditioned(d, gen, cap=64).n] += 1
        except CapExceeded:
            sizes["big"] += 1
    # 3.5 sigma tolerances at this trial count
    assert abs(sizes[1] / trials - 0.5) < 0.0035
    assert abs(sizes[3] / trials - 0.125) < 0.0024


def test_unconditioned_cap_raises_with_count():
    d = parse_family("binary")
    gen = RandomStream(5).generator()
    raised = 0
    for _ in range(200):
        try:
            sample_unconditioned(d, gen, cap=4)
        except CapExceeded as exc:
            raised += 1
            assert exc.count > 4
    assert raised > 0


# ----------------------------------------------------------------------
# exact-size sampling

def test_conditioned_n1():
    t = sample_conditioned(parse_family("cayley"), 1, RandomStream(0))
    assert list(t.degrees) == [0]


def test_conditioned_exact_size_and_validity():
    for fam, n in [("binary", 101), ("motzkin", 100), ("cayley", 77),
                   ("geometric", 64), ("catalan", 200), ("tary:3", 100),
                   ("binomial:10", 123)]:
        t = sample_conditioned(parse_family(fam), n, RandomStream(9, 1))
        assert t.n == n  # from_degrees already validated the encoding


def test_conditioned_binary_n5_uniform_over_shapes():
    # the two full binary trees on 5 nodes appear ~ half the time each
    d = parse_family("binary")
    gen = RandomStream(31337).generator()
    counts = Counter()
    for _ in range(100_000):
        t = sample_conditioned(d, 5, gen)
        counts[tuple(t.degrees)] += 1
    assert set(counts) == {(2, 2, 0, 0, 0), (2, 0, 2, 0, 0)}
    for freq in counts.values():
        assert abs(freq / 100_000 - 0.5) < 0.01


def test_conditioned_geometric_n4_uniform_over_plane_trees():
    # conditioned Geo(1/2) is uniform over all 5 plane trees of size 4
    d = parse_family("geometric")
    gen = RandomStream(24601).generator()
    counts = Counter()
    trials = 100_000
    for _ in range(trials):
        t = sample_conditioned(d, 4, gen)
        counts[tuple(t.degrees)] += 1
    assert len(counts) == 5
    tv = 0.5 * sum(abs(c / trials - 0.2) for c in counts.values())
    assert tv < 0.02


def test_unattainable_sizes():
    d = parse_family("binary")
    with pytest.raises(UnattainableSize):
        sample_conditioned(d, 4, RandomStream(1))
    assert nearest_attainable_size(d, 10000) == 10001
    assert nearest_attainable_size(d, 10001) == 10001
    t3 = parse_family("tary:3")
    assert nearest_attainable_size(t3, 10001) == 10003
    assert nearest_attainable_size(parse_family("cayley"), 500) == 500
    assert nearest_attainable_size(d, 1) == 1


def test_rejection_rate_decreases_with_n():
    # acceptance behaves like c / sqrt(n): attempt counts grow with n
    d = parse_family("cayley")
    mean_attempts = [_measure_attempts(d, n, reps=40) for n in (64, 1024, 16384)]
    assert mean_attempts[0] < mean_attempts[1] < mean_attempts[2]


def _measure_attempts(d, n, reps) -> float:
    gen = RandomStream(99).generator()
    vals, probs = d.support_table()
    probs = probs / probs.sum()
    total = 0
    for _ in range(reps):
        while True:
            total += 1
            counts = gen.multinomial(n, probs)
            if counts @ vals == n - 1:
                break
    return total / reps


def test_conditioned_determinism():
    d = parse_family("motzkin")
    a = sample_conditioned(d, 400, RandomStream(8, 2))
    b = sample_conditioned(d, 400, RandomStream(8, 2))
    assert np.array_equal(a.degrees, b.degrees)


def test_conditioned_sampler_with_pair_resampling():
    d = parse_family("motzkin")
    sampler = ConditionedSampler(d, 30, pair_resample=True)
    rs = RandomStream(55)
    trees = [sampler.sample(rs) for _ in range(50)]
    assert all(t.n == 30 for t in trees)
    # degree multisets stay on the conditioned manifold: sum = n - 1
    assert all(int(t.degrees.sum()) == 29 for t in trees)


# ----------------------------------------------------------------------
# Kesten truncation

def test_kesten_binary_spine_degrees():
    kt = sample_kesten(parse_family("binary"), 40, RandomStream(3), subtree_cap=500)
    assert kt.depth == 40
    assert len(kt.spine) == 41
    assert np.all(kt.tree.degrees[kt.spine] == 2)  # zeta = 2 a.s. for binary


def test_kesten_spine_is_root_descendant_chain():
    kt = sample_kesten(parse_family("geometric"), 25, RandomStream(4), subtree_cap=200)
    assert kt.spine[0] == 0
    spine_set = set(int(x) for x in kt.spine)
    for j in range(1, len(kt.spine)):
        p = int(kt.tree.parent[kt.spine[j]])
        assert p in spine_set


def test_kesten_depth0():
    kt = sample_kesten(parse_family("cayley"), 0, RandomStream(6), subtree_cap=100)
    assert list(kt.spine) == [0]
    assert kt.tree.degrees[0] >= 1  # size-biased law never draws 0


def test_kesten_poisson_spine_degree_mean():
    # E zeta = sigma^2 + 1 = 2; pool spine degrees across samples
    d = parse_family("cayley")
    degs = []
    for k in range(60):
        kt = sample_kesten(d, 500, RandomStream(70, k), subtree_cap=50)
        degs.extend(int(x) for x in kt.tree.degrees[kt.spine])
    degs = np.array(degs)
    assert degs.size >= 30_000
    assert abs(degs.mean() - 2.0) < 0.02
    assert degs.min() >= 1


def test_kesten_truncation_flagged_and_tree_valid():
    d = parse_family("geometric")
    hit = False
    for k in range(40):
        kt = sample_kesten(d, 8, RandomStream(90, k), subtree_cap=3)
        from_degrees(kt.tree.degrees)  # revalidates the encoding
        if kt.truncated:
            hit = True
            for pos in kt.truncated:
                assert 0 <= pos < kt.tree.n
    assert hit
