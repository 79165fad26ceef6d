"""Reproducible samplers: unconditioned trees, exact-size trees, Kesten spines.

Randomness comes from counter-based Philox streams keyed by a
(seed, stream_id) pair, so any draw is reproducible from those two
integers and distinct stream ids give statistically independent streams.
Monte Carlo code assigns stream_id = trial index, which makes every trial
independently reproducible and embarrassingly parallel.

Exact-size sampling uses the cycle lemma: condition an i.i.d. degree
vector on sum(xi_i) = n - 1, then rotate to the unique cyclic shift whose
proper prefix sums of (xi_i - 1) stay above -1.  The conditioning step is
realized as degree-count vectors (a multinomial conditioned on its
weighted sum) followed by a uniform shuffle, which factorizes the same
joint law while costing O(support) per rejection attempt instead of O(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .offspring import OffspringDistribution
from .tree import Tree, from_degrees

__all__ = [
    "RandomStream", "KestenTruncation", "SamplerError", "CapExceeded",
    "UnattainableSize", "sample_unconditioned", "sample_conditioned",
    "sample_kesten", "nearest_attainable_size", "ConditionedSampler",
]

DEFAULT_UNCONDITIONED_CAP = 10_000_000
DEFAULT_KESTEN_SUBTREE_CAP = 1_000_000
DEFAULT_MAX_ATTEMPTS = 1_000_000


class SamplerError(RuntimeError):
    pass


class CapExceeded(SamplerError):
    """Population hit the node cap before extinction."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"tree reached {count} nodes (cap {cap}) before dying out")
        self.count = count
        self.cap = cap


class UnattainableSize(SamplerError):
    """No degree sequence of the requested size exists (or none was found)."""


@dataclass
class RandomStream:
    """A named position in the Philox4x64 stream space.

    Identical (seed, stream_id) pairs reproduce identical draws; the
    generator is materialized lazily and then consumed statefully.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    def generator(self) -> np.random.Generator:
        if self._gen is None:
            key = np.array([self.seed % (1 << 64), self.stream_id % (1 << 64)],
                           dtype=np.uint64)
            self._gen = np.random.Generator(np.random.Philox(key=key))
        return self._gen

    def substream(self, k: int) -> "RandomStream":
        return RandomStream(self.seed, self.stream_id + k)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RandomStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RandomStream or numpy Generator, got {type(rng)!r}")


# ----------------------------------------------------------------------
# unconditioned trees

def _grow_level_degrees(d: OffspringDistribution, gen: np.random.Generator,
                        cap: int, clamp: bool) -> tuple[np.ndarray, bool]:
    """Breadth-first growth; returns level-order degrees and a clamp flag.

    With clamp=True an overfull next generation is not drawn: the frontier
    becomes leaves and the partial tree is returned (still a valid tree).
    Without clamping, CapExceeded is raised.
    """
    chunks: list[np.ndarray] = []
    frontier = 1
    total = 1
    root = d.sample(gen, 1)
    chunks.append(root)
    frontier = int(root[0])
    total += frontier
    while frontier > 0:
        if total > cap:
            if clamp:
                chunks.append(np.zeros(frontier, dtype=np.int64))
                return np.concatenate(chunks), True
            raise CapExceeded(total, cap)
        draws = d.sample(gen, frontier)
        chunks.append(draws)
        frontier = int(draws.sum())
        total += frontier
    return np.concatenate(chunks), False


def sample_unconditioned(d: OffspringDistribution, rng,
                         cap: int = DEFAULT_UNCONDITIONED_CAP) -> Tree:
    """One unconditioned tree; raises CapExceeded on runaway growth.

    Critical trees are finite almost surely but |T| has a 1/sqrt(n) tail,
    so a cap is mandatory in bulk experiments.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gen = _as_generator(rng)
    level, _ = _grow_level_degrees(d, gen, cap, clamp=False)
    pre, _ = _kernels.levelorder_to_preorder(level)
    return from_degrees(pre)


# ----------------------------------------------------------------------
# exact-size trees

def nearest_attainable_size(d: OffspringDistribution, n: int) -> int:
    """Smallest attainable size >= n (e.g. full binary trees need odd n)."""
    for cand in range(n, n + 2 * max(2, d.max_degree) + 2):
        if _size_attainable(d, cand):
            return cand
    raise UnattainableSize(f"no attainable size near {n} for {d.label}")


def _size_attainable(d: OffspringDistribution, n: int) -> bool:
    # Necessary lattice conditions on sum(xi) = n - 1 with xi in the support.
    if n < 1:
        return False
    vals, _ = d.support_table()
    v0, vk = int(vals[0]), int(vals[-1])
    target = n - 1 - n * v0
    if target < 0 or target > n * (vk - v0):
        return False
    if target == 0:
        return True  # all nodes take the minimum degree (n = 1 when v0 = 0)
    g = 0
    for v in vals:
        g = math.gcd(g, int(v) - v0)
    return g > 0 and target % g == 0


def sample_conditioned(d: OffspringDistribution, n: int, rng,
                       max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> Tree:
    """One tree of exactly n nodes, exactly distributed as the conditioned tree.

    Degree counts are drawn as multinomials (batched) and rejected until
    the weighted sum hits n - 1, then arranged uniformly and rotated per
    the cycle lemma.  Raises UnattainableSize when the support cannot
    produce the requested size, or after max_attempts rejections.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    if n == 1:
        return from_degrees(np.zeros(1, dtype=np.int64))
    if not _size_attainable(d, n):
        raise UnattainableSize(
            f"size {n} is not attainable for {d.label} (support parity mismatch)")
    counts = _draw_conditioned_counts(d, n, gen, max_attempts)
    vals, _ = d.support_table()
    seq = np.repeat(vals, counts)
    gen.shuffle(seq)
    return from_degrees(_rotate_to_tree(seq))


def _draw_conditioned_counts(d: OffspringDistribution, n: int,
                             gen: np.random.Generator, max_attempts: int) -> np.ndarray:
    vals, probs = d.support_table()
    probs = probs / probs.sum()
    # ~ sigma * sqrt(2 pi n) attempts are expected; batches of ~a third of
    # that minimize total rows drawn (large batches overshoot past the hit)
    batch = int(np.clip(0.35 * math.sqrt(d.variance * 2 * math.pi * n), 8, 512))
    attempts = 0
    target = n - 1
    while attempts < max_attempts:
        counts = gen.multinomial(n, probs, size=batch)
        sums = counts @ vals
        hit = np.nonzero(sums == target)[0]
        if hit.size:
            attempts += int(hit[0]) + 1
            return counts[hit[0]]
        attempts += batch
    raise UnattainableSize(
        f"no degree multiset of size {n} found for {d.label} "
        f"after {max_attempts} attempts")


def _rotate_to_tree(seq: np.ndarray) -> np.ndarray:
    # Cycle lemma: with total = -1, starting just past the first minimum of
    # the partial sums yields the unique rotation that encodes a tree.
    walk = np.cumsum(seq - 1)
    start = int(np.argmin(walk)) + 1
    if start == seq.size:
        return seq
    return np.roll(seq, -start)


class ConditionedSampler:
    """Repeated exact-size sampling from one (distribution, n) pair.

    With pair_resample=True, samples after the first refresh the accepted
    multiset by redrawing random position pairs from their conditional law
    given the pair sum (sum-preserving), instead of full rejection.  This
    is a mixing shortcut, off by default; plain rejection is exact and
    costs ~sqrt(n) attempts per tree.
    """

    def __init__(self, d: OffspringDistribution, n: int, *,
                 pair_resample: bool = False,
                 max_attempts: int = DEFAULT_MAX_ATTEMPTS):
        self.d = d
        self.n = n
        self.pair_resample = pair_resample
        self.max_attempts = max_attempts
        self._seq: np.ndarray | None = None
        vals, probs = d.support_table()
        self._vals, self._probs = vals, probs / probs.sum()
        self._index_of = {int(v): i for i, v in enumerate(vals)}

    def sample(self, rng) -> Tree:
        gen = _as_generator(rng)
        if self.n == 1:
            return from_degrees(np.zeros(1, dtype=np.int64))
        if self._seq is None or not self.pair_resample:
            counts = _draw_conditioned_counts(self.d, self.n, gen, self.max_attempts)
            self._seq = np.repeat(self._vals, counts).astype(np.int64)
        else:
            self._refresh_pairs(gen)
        seq = self._seq.copy()
        gen.shuffle(seq)
        return from_degrees(_rotate_to_tree(seq))

    def _refresh_pairs(self, gen: np.random.Generator) -> None:
        seq = self._seq
        n = seq.size
        pairs = gen.integers(0, n, size=(n, 2))
        for i, j in pairs:
            if i == j:
                continue
            s = int(seq[i] + seq[j])
            opts = [(int(a), s - int(a)) for a in self._vals
                    if 0 <= s - int(a) and (s - int(a)) in self._index_of]
            if not opts:
                continue
            w = np.array([self._probs[self._index_of[a]] * self._probs[self._index_of[b]]
                          for a, b in opts])
            pick = opts[int(gen.choice(len(opts), p=w / w.sum()))]
            seq[i], seq[j] = pick


# ----------------------------------------------------------------------
# Kesten's infinite tree, truncated

@dataclass(frozen=True, eq=False)
class KestenTruncation:
    """Spine of size-biased nodes down to a fixed depth, with unconditioned
    trees hanging off every non-spine child.  ``truncated`` lists preorder
    roots of hanging subtrees that hit the node cap and were clamped."""

    tree: Tree
    spine: np.ndarray
    depth: int
    truncated: tuple[int, ...] = ()


def sample_kesten(d: OffspringDistribution, depth: int, rng,
                  subtree_cap: int = DEFAULT_KESTEN_SUBTREE_CAP) -> KestenTruncation:
    """Spine nodes at depths 0..depth draw size-biased degrees; each node
    below `depth` marks one uniformly chosen child to continue the spine."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if not d.is_critical:
        raise ValueError("Kesten construction requires a critical law")
    gen = _as_generator(rng)
    zeta = d.size_biased()

    parts: list[np.ndarray] = []
    pos = 0
    spine_positions: list[int] = []
    truncated: list[int] = []
    pending: list[list[np.ndarray]] = []  # post-spine siblings, emitted on unwind

    def emit(arr: np.ndarray) -> None:
        nonlocal pos
        parts.append(arr)
        pos += arr.size

    def hang_subtree() -> None:
        level, clamped = _grow_level_degrees(d, gen, subtree_cap, clamp=True)
        pre, _ = _kernels.levelorder_to_preorder(level)
        if clamped:
            truncated.append(pos)
        emit(pre)

    for j in range(depth + 1):
        z = int(zeta.sample(gen))
        spine_positions.append(pos)
        emit(np.array([z], dtype=np.int64))
        if j == depth:
            for _ in range(z):
                hang_subtree()
        else:
            mark = int(gen.integers(z))
            for _ in range(mark):
                hang_subtree()
            pending.append([])
            for _ in range(mark + 1, z):
                level, clamped = _grow_level_degrees(d, gen, subtree_cap, clamp=True)
                pre, _ = _kernels.levelorder_to_preorder(level)
                pending[-1].append((pre, clamped))
    for group in reversed(pending):
        for pre, clamped in group:
            if clamped:
                truncated.append(pos)
            emit(pre)

    degrees = np.concatenate(parts)
    return KestenTruncation(
        from_degrees(degrees), np.array(spine_positions, dtype=np.int64),
        depth, tuple(truncated))
