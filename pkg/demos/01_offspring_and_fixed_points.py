"""Offspring families and the independent-set constant q.

Every named family is a critical offspring law (mean 1).  Conditioning the
resulting random tree on its size n makes it uniform over a classical
combinatorial family, and the fraction of nodes in a maximum independent
set converges to the root q of q = f(1-q).
"""

import numpy as np

from gwpeel import RandomStream, parse_family, solve_q

FAMILIES = ["binary", "tary:3", "cayley", "geometric", "motzkin", "catalan",
            "binomial:10"]

print(f"{'family':<12} {'p0':>8} {'p1':>8} {'sigma^2':>8} {'q':>12}")
for label in FAMILIES:
    d = parse_family(label)
    q = solve_q(d)
    print(f"{label:<12} {d.p0:>8.4f} {d.p1:>8.4f} {d.variance:>8.4f} "
          f"{q.value:>12.8f}")

print()
print("q is where the curve f(1-q) crosses the diagonal; closed forms:")
print(f"  binary   2 - sqrt(2)   = {2 - np.sqrt(2):.8f}")
print(f"  motzkin  3 - sqrt(6)   = {3 - np.sqrt(6):.8f}")
print(f"  catalan  4 - 2 sqrt(3) = {4 - 2 * np.sqrt(3):.8f}")
print(f"  geometric 1/phi        = {2 / (1 + np.sqrt(5)):.8f}")

# the generating function machinery is exposed directly:
d = parse_family("geometric")
print()
print("geometric pgf f(s) = 1/(2-s):", [round(d.pgf(s), 4) for s in (0, 0.5, 1.0)])
print("derivative f'(s) = 1/(2-s)^2:", [round(d.pgf_prime(s), 4) for s in (0, 0.5, 1.0)])

# sampling is seeded and reproducible
draws = d.sample(RandomStream(2024).generator(), 100_000)
print(f"100k draws: mean {draws.mean():.4f} (criticality), "
      f"var {draws.var():.4f} (sigma^2 = 2)")
