"""Sampling: unconditioned trees, exact-size trees, and Kesten's spine.

Exact-size sampling rejects i.i.d. degree draws until they sum to n-1 and
then applies the cycle lemma: exactly one cyclic rotation of the degree
sequence is a valid preorder encoding, and rotating to just past the first
minimum of the partial sums finds it.
"""

from collections import Counter

import numpy as np

from gwpeel import (
    CapExceeded,
    RandomStream,
    parse_family,
    sample_conditioned,
    sample_kesten,
    sample_unconditioned,
)

d = parse_family("geometric")
rs = RandomStream(seed=42)

# unconditioned trees die out almost surely, but sizes are heavy-tailed
gen = rs.generator()
sizes = []
capped = 0
for _ in range(20_000):
    try:
        sizes.append(sample_unconditioned(d, gen, cap=10_000).n)
    except CapExceeded:
        capped += 1
sizes = np.array(sizes)
print(f"unconditioned: P(|T|=1) ~ {np.mean(sizes == 1):.4f} (exactly p_0 = 0.5), "
      f"median {np.median(sizes):.0f}, {capped} of 20000 hit the 10^4 cap")

# conditioning pins the size exactly; distinct seeds give distinct trees,
# equal seeds reproduce bit for bit
t1 = sample_conditioned(d, 2001, RandomStream(7, 0))
t2 = sample_conditioned(d, 2001, RandomStream(7, 0))
print(f"conditioned n=2001: reproducible = {np.array_equal(t1.degrees, t2.degrees)}")

# conditioned geometric trees are uniform over plane trees: all five
# shapes of size 4 appear equally often
counts = Counter()
gen = RandomStream(9).generator()
for _ in range(50_000):
    counts[tuple(sample_conditioned(d, 4, gen).degrees.tolist())] += 1
print("plane trees of size 4, empirical frequencies (uniform = 0.2):")
for shape, c in sorted(counts.items()):
    print(f"   {shape}: {c / 50_000:.4f}")

# Kesten's tree: an infinite spine of size-biased nodes with ordinary
# trees hanging off; the local limit of large conditioned trees
kt = sample_kesten(parse_family("cayley"), depth=12, rng=RandomStream(1),
                   subtree_cap=5_000)
spine_degrees = kt.tree.degrees[kt.spine].tolist()
print(f"Kesten spine to depth 12: {kt.tree.n} nodes total, spine degrees "
      f"{spine_degrees} (size-biased, mean sigma^2 + 1 = 2)")
