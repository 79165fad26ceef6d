"""Monte Carlo verification of the limit laws, desk scale.

Linear limits (independent-set density, cover density, layer fractions)
already sit on their constants at n ~ 10^4.  Logarithmic limits (peeling
rounds, maximum leaf-height) carry 1/log n corrections, so the honest
desk-scale check is a monotone trend toward the constant, not a tight
match.
"""

from gwpeel import RandomStream
from gwpeel.experiments import (
    run_independence,
    run_layers,
    run_peel,
    run_root_leafheight,
    run_spvc,
    table1,
)

seed = RandomStream(20240809)

rep = run_independence("binary", [1001, 10001], 100, seed)
print(rep.to_text())

rep = run_spvc("binary", [2, 3], [5001], 100, seed)[1]
print(rep.to_text())

rep = run_peel("catalan", [1001, 10001, 100001], 100, seed)
print(rep.to_text())

lay = run_layers("binary", 10001, 100, 6, seed)
print(lay.to_text())

fit = run_root_leafheight("geometric", 1000, 20_000, seed)
print(fit.to_text())

# the summary table: analytic constants next to Monte Carlo estimates
print(table1(trials=40, n=2001, rng=seed).to_text())
