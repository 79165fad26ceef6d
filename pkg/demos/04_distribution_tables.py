"""Exact root-parameter distributions and their tail decay.

Three laws, all computed by exact recursions on the generating function:

* r_i     peel number of the root of an unconditioned tree,
* l_i     leaf-height of the root of an unconditioned tree,
* pmf of the limiting leaf-height of the root of the size-conditioned tree
          (differences of the product-form tail).
"""

import math

from gwpeel import (
    leafheight_distribution,
    parse_family,
    peel_decay_rate,
    peel_distribution,
    root_limit_law,
    solve_q,
)

d = parse_family("geometric")
q = solve_q(d).value

r = peel_distribution(d, 60)
l = leafheight_distribution(d, 60)
star = root_limit_law(d, 60)

print("first terms (geometric family):")
print("  i    r_i          l_i          conditioned-root law")
for i in range(6):
    print(f"  {i}  {r.values[i]:.9f}  {l.values[i]:.9f}  {star.values[i]:.9f}")
print(f"tails: {r.tail_mass:.2e}  {l.tail_mass:.2e}  {star.tail_mass:.2e}")

# the even peel masses add up to q, the odd ones to 1 - q
print(f"\nsum of even r_i = {r.values[0::2].sum():.9f}  (q = {q:.9f})")
print(f"sum of odd  r_i = {r.values[1::2].sum():.9f}  (1 - q = {1 - q:.9f})")

# both tails decay geometrically: r at rate f'(1-q), l at rate p_1
print(f"\nr_41/r_40 = {r.values[41] / r.values[40]:.6f}   "
      f"f'(1-q) = {peel_decay_rate(d):.6f}")
print(f"l_41/l_40 = {l.values[41] / l.values[40]:.6f}   p_1 = {d.p1:.6f}")

# with p_1 = 0 the leaf-height dies doubly exponentially: log l_i ~ kappa^i.
# Doubles underflow by i ~ 9; the table carries exact natural logs instead.
b = parse_family("binary")
lb = leafheight_distribution(b, 14)
print("\nfull binary (p_1 = 0, kappa = 2): log-mass doubling")
for i in range(7, 13):
    print(f"  log l_{i + 1} / log l_{i} = {lb.log_values[i + 1] / lb.log_values[i]:.4f}"
          f"   (l_{i + 1} ~ 1e{lb.log_values[i + 1] / math.log(10):+.0f})")

print("\nCSV serialization of any table:")
print("\n".join(peel_distribution(d, 3).to_csv().splitlines()[:5]))
