"""Peel numbers, leaf-heights, independent sets, and s-path covers.

A tree is a preorder degree sequence.  Peeling removes all leaves and
their parents, round after round; the round-and-role index of each node is
its peel number.  Even peel numbers collect a maximum independent set.
"""

import numpy as np

from gwpeel import (
    annotate,
    from_degrees,
    independence_number,
    layer_counts,
    mark_spvc,
    max_leaf_height,
    max_peel,
    vertex_cover_number,
)

# a small unary-binary tree:
#        o            degrees (preorder): 2,1,2,0,0,1,0
#       / \
#      o   o
#      |   |
#      o   o
#     / \
#    o   o
t = from_degrees([2, 1, 2, 0, 0, 1, 0])
ann = annotate(t)
print("degrees    :", t.degrees.tolist())
print("parents    :", t.parent.tolist())
print("peel       :", ann.peel.tolist())
print("leaf-height:", ann.leaf_height.tolist())
print("pointwise leaf-height <= peel:", bool(np.all(ann.leaf_height <= ann.peel)))
print()
print(f"independence number I(T) = {independence_number(t)}  "
      f"(nodes of even peel)")
print(f"vertex cover number V(T) = {vertex_cover_number(t)}  (n = I + V)")
print(f"max peel m(T) = {max_peel(t)}, max leaf-height = {max_leaf_height(t)}")
print(f"layer sizes = {layer_counts(t).tolist()}")

# s-path vertex covers: every downward path on s nodes must be hit.
# The classic trap: peel numbers do NOT generalize.  In this tree no node
# has peel number 2, yet the minimal 3-path cover is just the root:
trap = from_degrees([2, 1, 0, 0])
print()
print("trap tree degrees:", trap.degrees.tolist())
print("peel numbers     :", annotate(trap).peel.tolist())
res = mark_spvc(trap, 3)
print(f"minimum 3-path cover size = {res.size}, marked = {np.nonzero(res.marked)[0].tolist()}")

for s in (2, 3, 4):
    print(f"s = {s}: cover size on the unary-binary tree = {mark_spvc(t, s).size}")
