"""Compiled single-pass kernels over preorder degree sequences.

Every kernel walks the preorder array iteratively (an explicit stack or a
reverse scan), never by recursion: unary chains of length 10^5+ would blow
the interpreter stack.  In preorder, the descendants of node i occupy a
contiguous block starting at i+1, so a reverse scan visits children before
parents and supports bottom-up recurrences with O(1) per-node state.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_BIG = np.int64(1 << 60)


@njit(cache=True, nogil=True)
def build_parent(degrees):
    """Parent index per preorder node (root gets -1).

    Assumes the degree sequence passed tree validation.
    """
    n = degrees.size
    parent = np.empty(n, dtype=np.int64)
    parent[0] = -1
    stack_node = np.empty(n, dtype=np.int64)
    stack_rem = np.empty(n, dtype=np.int64)
    top = -1
    if degrees[0] > 0:
        top = 0
        stack_node[0] = 0
        stack_rem[0] = degrees[0]
    for i in range(1, n):
        parent[i] = stack_node[top]
        stack_rem[top] -= 1
        if stack_rem[top] == 0:
            top -= 1
        if degrees[i] > 0:
            top += 1
            stack_node[top] = i
            stack_rem[top] = degrees[i]
    return parent


@njit(cache=True, nogil=True)
def peel_kernel(degrees, parent):
    """Peel numbers by the bottom-up recurrence.

    rho(leaf) = 0; if some child has even rho, rho(u) = 1 + min even child
    rho (u is removed as the parent of that child-turned-leaf); otherwise
    rho(u) = 1 + max child rho (u survives until its last child goes).
    """
    n = degrees.size
    peel = np.zeros(n, dtype=np.int64)
    min_even = np.full(n, _BIG, dtype=np.int64)
    max_odd = np.full(n, np.int64(-1), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        if degrees[i] == 0:
            rho = np.int64(0)
        elif min_even[i] != _BIG:
            rho = min_even[i] + 1
        else:
            rho = max_odd[i] + 1
        peel[i] = rho
        p = parent[i]
        if p >= 0:
            if rho % 2 == 0:
                if rho < min_even[p]:
                    min_even[p] = rho
            else:
                if rho > max_odd[p]:
                    max_odd[p] = rho
    return peel


@njit(cache=True, nogil=True)
def leafheight_kernel(degrees, parent):
    """lambda(leaf) = 0; lambda(u) = 1 + min child lambda otherwise."""
    n = degrees.size
    lam = np.zeros(n, dtype=np.int64)
    min_child = np.full(n, _BIG, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        v = np.int64(0) if degrees[i] == 0 else min_child[i] + 1
        lam[i] = v
        p = parent[i]
        if p >= 0 and v < min_child[p]:
            min_child[p] = v
    return lam


@njit(cache=True, nogil=True)
def spvc_kernel(degrees, parent, s):
    """Mark a minimum s-path vertex cover in one bottom-up pass.

    h*(u) = height of the unmarked residue below u; marking fires the
    moment h*(u) hits s-1, which matches pruning height-(s-1) subtrees
    deepest-first.
    """
    n = degrees.size
    marked = np.zeros(n, dtype=np.bool_)
    agg = np.full(n, np.int64(-1), dtype=np.int64)  # max h* over unmarked children
    for i in range(n - 1, -1, -1):
        h = agg[i] + 1
        if h == s - 1:
            marked[i] = True
        else:
            p = parent[i]
            if p >= 0 and h > agg[p]:
                agg[p] = h
    return marked


@njit(cache=True, nogil=True)
def levelorder_to_preorder(level_degrees):
    """Reorder a breadth-first degree sequence into preorder."""
    n = level_degrees.size
    child_base = np.empty(n, dtype=np.int64)
    acc = np.int64(1)
    for i in range(n):
        child_base[i] = acc
        acc += level_degrees[i]
    pre = np.empty(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    stack[0] = 0
    pos = 0
    while top >= 0:
        u = stack[top]
        top -= 1
        pre[pos] = level_degrees[u]
        order[pos] = u
        pos += 1
        base = child_base[u]
        for c in range(level_degrees[u] - 1, -1, -1):
            top += 1
            stack[top] = base + c
    return pre, order


@njit(cache=True, nogil=True)
def max_run_below(degrees, parent, marked, cap):
    """Longest downward run of unmarked nodes (for cover validity checks)."""
    n = degrees.size
    run = np.empty(n, dtype=np.int64)
    best = np.int64(0)
    for i in range(n):
        if marked[i]:
            run[i] = 0
        else:
            p = parent[i]
            run[i] = 1 if p < 0 else run[p] + 1
            if run[i] > best:
                best = run[i]
        if best >= cap:
            return best
    return best
