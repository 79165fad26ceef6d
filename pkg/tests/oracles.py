"""Independent reference implementations used to validate the library.

Nothing here may call into gwpeel's production code paths: peeling is
simulated literally round by round, independent sets come from the
classical two-state DP, path covers from subset enumeration, and the
root-parameter laws from probability-weighted enumeration DPs over all
trees up to a size cap.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np


def parents_of(degrees) -> list[int]:
    parent = [-1] * len(degrees)
    stack: list[tuple[int, int]] = []
    if degrees[0] > 0:
        stack.append((0, degrees[0]))
    for i in range(1, len(degrees)):
        node, rem = stack[-1]
        parent[i] = node
        if rem == 1:
            stack.pop()
        else:
            stack[-1] = (node, rem - 1)
        if degrees[i] > 0:
            stack.append((i, degrees[i]))
    return parent


def simulate_peeling(degrees) -> tuple[list[int], int]:
    """Literal leaves-then-parents removal; returns (peel numbers, rounds)."""
    n = len(degrees)
    parent = parents_of(degrees)
    alive = [True] * n
    alive_children = list(degrees)
    peel = [-1] * n
    rounds = 0
    remaining = n
    while remaining:
        leaves = [i for i in range(n) if alive[i] and alive_children[i] == 0]
        parents = set()
        for i in leaves:
            p = parent[i]
            if p >= 0 and alive[p]:
                parents.add(p)
        for i in leaves:
            peel[i] = 2 * rounds
        for p in parents:
            peel[p] = 2 * rounds + 1
        removed = set(leaves) | parents
        for u in removed:
            alive[u] = False
        for u in removed:
            p = parent[u]
            if p >= 0 and alive[p]:
                alive_children[p] -= 1
        remaining -= len(removed)
        rounds += 1
    return peel, rounds


def mis_size_dp(degrees) -> int:
    """Maximum independent set on the tree, textbook in/out DP."""
    n = len(degrees)
    parent = parents_of(degrees)
    incl = [1] * n
    excl = [0] * n
    for i in range(n - 1, 0, -1):
        p = parent[i]
        incl[p] += excl[i]
        excl[p] += max(incl[i], excl[i])
    return max(incl[0], excl[0])


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}
_UNMARKED_CACHE: dict[int, np.ndarray] = {}


def _mask_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _POPCOUNT_CACHE:
        masks = np.arange(1 << n, dtype=np.uint32)
        unmarked = np.stack([(masks >> i) & 1 == 0 for i in range(n)])
        _UNMARKED_CACHE[n] = unmarked
        _POPCOUNT_CACHE[n] = (n - unmarked.sum(axis=0)).astype(np.int8)
    return _POPCOUNT_CACHE[n], _UNMARKED_CACHE[n]


def brute_min_spvc(degrees, s: int) -> int:
    """Minimum s-path vertex cover by enumerating all vertex subsets.

    A subset is a cover iff no downward run of s consecutive unmarked
    nodes exists.  Vectorized over all 2^n masks; keep n <= 16.
    """
    n = len(degrees)
    assert n <= 16
    parent = parents_of(degrees)
    popcounts, unmarked = _mask_tables(n)
    runs = np.zeros((n, 1 << n), dtype=np.int8)
    valid = np.ones(1 << n, dtype=bool)
    for i in range(n):
        base = runs[parent[i]] if parent[i] >= 0 else 0
        runs[i] = np.where(unmarked[i], base + 1, 0)
        valid &= runs[i] < s
    return int(popcounts[valid].min())


def enumerate_degree_sequences(max_nodes: int, max_degree: int):
    """All preorder degree sequences with <= max_nodes nodes and bounded degrees."""

    def rec(seq, open_slots):
        if open_slots == 0:
            yield tuple(seq)
            return
        if len(seq) == max_nodes:
            return
        room = max_nodes - len(seq)
        for d in range(0, max_degree + 1):
            # prune: every open slot still needs at least one node
            if open_slots - 1 + d <= room - 1:
                seq.append(d)
                yield from rec(seq, open_slots - 1 + d)
                seq.pop()

    yield from rec([], 1)


def tree_weight(degrees, probs) -> float:
    w = 1.0
    for d in degrees:
        if d >= len(probs) or probs[d] == 0.0:
            return 0.0
        w *= probs[d]
    return w


# ----------------------------------------------------------------------
# probability-weighted enumeration of root parameters over all trees of
# bounded size (convolution DP; equivalent to summing tree by tree)

def _children_states(S_by_size, budget, count, update, init):
    """Distribution over (used size, aggregate state) after `count` children."""
    layers = {(0, init): 1.0}
    for j in range(count):
        nxt: dict = defaultdict(float)
        remaining_children = count - j - 1
        for (used, st), w in layers.items():
            for sub_size in range(1, budget - used - remaining_children + 1):
                for val, wc in S_by_size[sub_size].items():
                    nxt[(used + sub_size, update(st, val))] += w * wc
        layers = nxt
    return layers


def root_peel_masses(probs, max_size: int):
    """(masses, residual): masses[i] = P{root peel = i, |T| <= max_size}."""

    def update(st, rho):
        kind, v = st
        if rho % 2 == 0:
            return ("e", rho if kind != "e" else min(v, rho))
        if kind == "e":
            return st
        return ("o", rho if kind == "none" else max(v, rho))

    S = [defaultdict(float) for _ in range(max_size + 1)]
    if probs[0] > 0:
        S[1][0] = probs[0]
    for m in range(2, max_size + 1):
        for c in range(1, len(probs)):
            if probs[c] == 0.0 or c > m - 1:
                continue
            for (used, st), w in _children_states(S, m - 1, c, update,
                                                  ("none", 0)).items():
                if used == m - 1:
                    S[m][st[1] + 1] += probs[c] * w
    masses = defaultdict(float)
    total = 0.0
    for m in range(1, max_size + 1):
        for rho, w in S[m].items():
            masses[rho] += w
            total += w
    return dict(masses), 1.0 - total


def root_leafheight_masses(probs, max_size: int):
    """(masses, residual): masses[i] = P{root leaf-height = i, |T| <= max_size}."""

    def update(st, lam):
        return min(st, lam)

    S = [defaultdict(float) for _ in range(max_size + 1)]
    if probs[0] > 0:
        S[1][0] = probs[0]
    for m in range(2, max_size + 1):
        for c in range(1, len(probs)):
            if probs[c] == 0.0 or c > m - 1:
                continue
            for (used, st), w in _children_states(S, m - 1, c, update,
                                                  10 ** 9).items():
                if used == m - 1:
                    S[m][st + 1] += probs[c] * w
    masses = defaultdict(float)
    total = 0.0
    for m in range(1, max_size + 1):
        for lam, w in S[m].items():
            masses[lam] += w
            total += w
    return dict(masses), 1.0 - total


def finite_difference(fn, s: float, h: float = 1e-6) -> float:
    return (fn(s + h) - fn(s - h)) / (2.0 * h)
