"""Ordered rooted trees as preorder degree sequences, and their parameters.

A tree on n nodes is stored as the sequence (xi_1, ..., xi_n) of child
counts in preorder.  A nonnegative integer sequence encodes a tree iff

    sum_i (xi_i - 1) = -1   and   every proper prefix sum of (xi_i - 1) > -1.

All parameters are computed in O(n) by compiled single passes:

* peel numbers rho(u): the round-and-role index assigned by repeatedly
  deleting all leaves together with their parents (leaves of round k get
  peel 2k, their parents 2k+1).  Nodes of even peel form a maximum
  independent set, nodes of odd peel a minimum vertex cover.
* leaf-heights lambda(u) (a.k.a. protection numbers): distance from u to
  the nearest leaf inside u's own subtree.
* minimum s-path vertex covers: prune height-(s-1) subtrees, marking their
  roots; the marked set meets every downward path on s nodes and has
  minimum size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import _kernels

__all__ = [
    "Tree", "NodeAnnotations", "SpvcResult",
    "TreeError", "InvalidDegreeSum", "InvalidPrefix",
    "from_degrees", "peel_numbers", "leaf_heights", "max_peel",
    "max_leaf_height", "independence_number", "vertex_cover_number",
    "mark_spvc", "layer_counts", "annotate",
    "parse_degree_line", "format_degrees", "read_trees", "write_trees",
    "annotations_to_json",
]


class TreeError(ValueError):
    """Degree sequence does not encode a tree."""


class InvalidDegreeSum(TreeError):
    """sum(xi_i - 1) != -1."""


class InvalidPrefix(TreeError):
    """Some proper prefix already closes the tree."""


@dataclass(frozen=True, eq=False)
class Tree:
    """Immutable preorder tree; build through :func:`from_degrees`."""

    degrees: np.ndarray      # preorder child counts
    n: int
    child_start: np.ndarray  # index of first child, -1 for leaves
    parent: np.ndarray       # preorder parent index, -1 at the root

    def __len__(self) -> int:
        return self.n


def from_degrees(degrees: Sequence[int] | np.ndarray) -> Tree:
    """Validate a preorder degree sequence and derive its index arrays."""
    arr = np.asarray(degrees, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise TreeError("degree sequence must be a nonempty 1-d sequence")
    if np.any(arr < 0):
        raise TreeError("degrees must be nonnegative")
    walk = np.cumsum(arr - 1)
    if walk[-1] != -1:
        raise InvalidDegreeSum(
            f"sum(degrees) = {int(arr.sum())}, expected n - 1 = {arr.size - 1}")
    if arr.size > 1 and walk[:-1].min() <= -1:
        first = int(np.nonzero(walk[:-1] <= -1)[0][0])
        raise InvalidPrefix(
            f"prefix of length {first + 1} already completes the tree")
    parent = _kernels.build_parent(arr)
    child_start = np.where(arr > 0, np.arange(arr.size, dtype=np.int64) + 1, -1)
    for a in (arr, parent, child_start):
        a.setflags(write=False)
    return Tree(arr, int(arr.size), child_start, parent)


# ----------------------------------------------------------------------
# per-node parameters

@dataclass(frozen=True, eq=False)
class NodeAnnotations:
    """Per-node peel numbers and leaf-heights, aligned to preorder indices."""

    peel: np.ndarray
    leaf_height: np.ndarray


@dataclass(frozen=True, eq=False)
class SpvcResult:
    """Marked minimum s-path vertex cover."""

    marked: np.ndarray
    size: int


def peel_numbers(t: Tree) -> np.ndarray:
    return _kernels.peel_kernel(t.degrees, t.parent)


def leaf_heights(t: Tree) -> np.ndarray:
    return _kernels.leafheight_kernel(t.degrees, t.parent)


def annotate(t: Tree) -> NodeAnnotations:
    return NodeAnnotations(peel_numbers(t), leaf_heights(t))


def max_peel(t: Tree) -> int:
    return int(peel_numbers(t).max())


def max_leaf_height(t: Tree) -> int:
    return int(leaf_heights(t).max())


def independence_number(t: Tree) -> int:
    """Size of a maximum independent set: the nodes of even peel number."""
    return int(np.count_nonzero(peel_numbers(t) % 2 == 0))


def vertex_cover_number(t: Tree) -> int:
    """n = I(T) + V(T) on trees."""
    return t.n - independence_number(t)


def mark_spvc(t: Tree, s: int) -> SpvcResult:
    """Minimum s-path vertex cover (s >= 2); empty when height(T) < s - 1."""
    if s < 2:
        raise ValueError(f"s must be >= 2, got {s}")
    marked = _kernels.spvc_kernel(t.degrees, t.parent, s)
    marked.setflags(write=False)
    return SpvcResult(marked, int(np.count_nonzero(marked)))


def layer_counts(t: Tree) -> np.ndarray:
    """Histogram of peel numbers: entry i counts the nodes peeled in layer i."""
    return np.bincount(peel_numbers(t))


# ----------------------------------------------------------------------
# text and JSON interchange

def parse_degree_line(text: str) -> np.ndarray:
    """Parse one preorder degree sequence (comma- or whitespace-separated)."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise TreeError("empty degree sequence")
    try:
        return np.array([int(p) for p in parts], dtype=np.int64)
    except ValueError as exc:
        raise TreeError(f"non-integer degree in {text!r}") from exc


def format_degrees(degrees: np.ndarray | Sequence[int]) -> str:
    return ",".join(str(int(d)) for d in degrees)


def read_trees(fh: TextIO) -> Iterable[tuple[int, np.ndarray]]:
    """Yield (line_number, degrees) for each nonempty, non-comment line."""
    for lineno, line in enumerate(fh, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, parse_degree_line(stripped)


def write_trees(fh: TextIO, trees: Iterable[Tree | np.ndarray]) -> None:
    for t in trees:
        degrees = t.degrees if isinstance(t, Tree) else t
        fh.write(format_degrees(degrees) + "\n")


def annotations_to_json(ann: NodeAnnotations) -> str:
    """JSON object keyed by preorder index."""
    payload = {
        str(i): {"peel": int(ann.peel[i]), "leaf_height": int(ann.leaf_height[i])}
        for i in range(ann.peel.size)
    }
    return json.dumps(payload, sort_keys=False)
