"""Monte Carlo verification of the limit laws, with structured reports.

Each experiment samples exact-size trees over a grid of n, computes one
statistic per tree, and compares the per-n means against the analytic
limit constant.  Verdicts are two-tier:

* linear limits (I_n/n, V_s(T_n)/n, layer fractions N_i/n) concentrate
  fast, so Consistent means |mean - target| <= max(3 SE, slack) at the
  largest n;
* log and loglog limits (max peel / log n, max leaf-height / log n or
  log log n) carry O(1/log n) corrections that no desk-scale run can
  push below a tight tolerance, so Consistent instead means the error
  |mean - target| shrinks monotonically along the n grid.

Reproducibility: trial k of a run draws from Philox stream
(seed, stream_id + k), so reports are bit-for-bit functions of
(seed, configuration) and trials parallelize without coordination.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, tree as tree_ops
from .analytic import leafheight_constant, max_peel_constant, solve_q, solve_qs
from .offspring import OffspringDistribution, parse_family
from .sampler import RandomStream, nearest_attainable_size, sample_conditioned

__all__ = [
    "Estimate", "ExperimentReport", "LayerFitReport", "RootLawFitReport",
    "Table1Report", "run_independence", "run_peel", "run_leafheight",
    "run_layers", "run_root_leafheight", "run_spvc", "table1",
    "TABLE1_FAMILIES", "DEFAULT_SLACK",
]

DEFAULT_SLACK = 0.01
TABLE1_FAMILIES = (
    "binary", "tary:3", "cayley", "geometric", "motzkin", "catalan", "binomial:10",
)


def _resolve(family) -> OffspringDistribution:
    return family if isinstance(family, OffspringDistribution) else parse_family(family)


def _resolve_stream(rng) -> RandomStream:
    if isinstance(rng, RandomStream):
        return rng
    return RandomStream(int(rng))


@dataclass(frozen=True)
class Estimate:
    n: int
    mean: float
    stderr: float
    trials: int


@dataclass
class ExperimentReport:
    name: str
    family: str
    normalization: str           # linear | log | loglog
    target: float
    n_values: list[int]
    trials_per_n: int
    estimates: list[Estimate]
    verdict: str                 # consistent | inconsistent
    verdict_rule: str
    seed: int
    stream_id: int
    slack: float
    trial_values: dict[int, list[float]] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "normalization": self.normalization,
            "target": self.target,
            "n_values": self.n_values,
            "trials_per_n": self.trials_per_n,
            "estimates": [
                {"n": e.n, "mean": e.mean, "stderr": e.stderr, "trials": e.trials}
                for e in self.estimates
            ],
            "verdict": self.verdict,
            "verdict_rule": self.verdict_rule,
            "seed": self.seed,
            "stream_id": self.stream_id,
            "slack": self.slack,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [
            f"experiment {self.name}  family={self.family}  "
            f"normalization={self.normalization}",
            f"target {self.target:.9f}   verdict {self.verdict.upper()}"
            f"   ({self.verdict_rule})",
            f"{'n':>10}  {'mean':>12}  {'stderr':>10}  {'|err|':>10}",
        ]
        for e in self.estimates:
            lines.append(
                f"{e.n:>10}  {e.mean:>12.6f}  {e.stderr:>10.6f}  "
                f"{abs(e.mean - self.target):>10.6f}")
        return "\n".join(lines) + "\n"

    def trials_csv(self) -> str:
        lines = ["name,family,n,trial,value"]
        for n in self.n_values:
            for k, v in enumerate(self.trial_values.get(n, [])):
                lines.append(f"{self.name},{self.family},{n},{k},{v!r}")
        return "\n".join(lines) + "\n"


def _mean_stderr(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, float("nan")
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


def _map_trials(fn, trials: int, stream: RandomStream, offset: int,
                threads: int) -> list[float]:
    ids = range(offset, offset + trials)
    if threads <= 1:
        return [fn(stream.substream(k)) for k in ids]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda k: fn(stream.substream(k)), ids))


def _verdict(normalization: str, target: float, estimates: list[Estimate],
             slack: float) -> tuple[str, str]:
    last = estimates[-1]
    gate = max(3.0 * (last.stderr if math.isfinite(last.stderr) else 0.0), slack)
    within = abs(last.mean - target) <= gate
    if normalization == "linear" or len(estimates) < 2:
        rule = f"|mean - target| <= max(3*SE, {slack}) at n={last.n}"
        return ("consistent" if within else "inconsistent"), rule
    errs = [abs(e.mean - target) for e in estimates]
    trend = all(b < a for a, b in zip(errs, errs[1:]))
    rule = "|mean - target| decreases monotonically along the n grid"
    return ("consistent" if trend else "inconsistent"), rule


def _run_scalar_experiment(name, d, n_values, trials, stream, statistic,
                           target, normalization, slack, threads) -> ExperimentReport:
    stream = _resolve_stream(stream)
    estimates = []
    trial_values: dict[int, list[float]] = {}
    counter = 0
    used_n = []
    for n in n_values:
        n_eff = nearest_attainable_size(d, n)
        used_n.append(n_eff)

        def one(rs, n_eff=n_eff):
            t = sample_conditioned(d, n_eff, rs)
            return statistic(t, n_eff, rs)

        values = _map_trials(one, trials, stream, counter, threads)
        counter += trials
        trial_values[n_eff] = values
        mean, se = _mean_stderr(values)
        estimates.append(Estimate(n_eff, mean, se, trials))
    verdict, rule = _verdict(normalization, target, estimates, slack)
    return ExperimentReport(
        name=name, family=d.label, normalization=normalization, target=target,
        n_values=used_n, trials_per_n=trials, estimates=estimates,
        verdict=verdict, verdict_rule=rule, seed=stream.seed,
        stream_id=stream.stream_id, slack=slack, trial_values=trial_values)


# ----------------------------------------------------------------------
# individual experiments

def run_independence(family, n_values, trials, rng, *, slack=DEFAULT_SLACK,
                     threads=1) -> ExperimentReport:
    """I_n / n against q (linear limit)."""
    d = _resolve(family)
    target = solve_q(d).value

    def stat(t, n, rs):
        return tree_ops.independence_number(t) / n

    return _run_scalar_experiment("independence", d, list(n_values), trials, rng,
                                  stat, target, "linear", slack, threads)


def run_peel(family, n_values, trials, rng, *, slack=DEFAULT_SLACK,
             threads=1) -> ExperimentReport:
    """max peel / log n against 1/log(1/f'(1-q)) (log limit, trend verdict)."""
    d = _resolve(family)
    target = max_peel_constant(d)

    def stat(t, n, rs):
        return tree_ops.max_peel(t) / math.log(n)

    return _run_scalar_experiment("peel", d, list(n_values), trials, rng,
                                  stat, target, "log", slack, threads)


def run_leafheight(family, n_values, trials, rng, *, slack=DEFAULT_SLACK,
                   threads=1) -> ExperimentReport:
    """max leaf-height, normalized by log n (p_1 > 0) or log log n (p_1 = 0)."""
    d = _resolve(family)
    norm, target = leafheight_constant(d)

    if norm == "log":
        def stat(t, n, rs):
            return tree_ops.max_leaf_height(t) / math.log(n)
    else:
        def stat(t, n, rs):
            return tree_ops.max_leaf_height(t) / math.log(math.log(n))

    return _run_scalar_experiment("leafheight", d, list(n_values), trials, rng,
                                  stat, target, norm, slack, threads)


def run_spvc(family, s_values, n_values, trials, rng, *, slack=DEFAULT_SLACK,
             threads=1) -> list[ExperimentReport]:
    """V_s(T_n) / n against q_s (linear limit), one report per s."""
    d = _resolve(family)
    stream = _resolve_stream(rng)
    reports = []
    for idx, s in enumerate(s_values):
        target = solve_qs(d, s).value

        def stat(t, n, rs, s=s):
            return tree_ops.mark_spvc(t, s).size / n

        reports.append(_run_scalar_experiment(
            f"spvc_s{s}", d, list(n_values), trials, stream.substream(idx * 10 ** 7),
            stat, target, "linear", slack, threads))
    return reports


# ----------------------------------------------------------------------
# distribution goodness-of-fit

@dataclass
class LayerFitReport:
    """Mean layer fractions N_i/n versus the root peel-number law r_i."""

    family: str
    n: int
    trials: int
    i_max: int
    empirical: list[float]
    expected: list[float]
    deviations: list[float]
    max_abs_deviation: float
    seed: int
    stream_id: int

    def to_dict(self) -> dict:
        return {
            "name": "layers", "family": self.family, "n": self.n,
            "trials": self.trials, "i_max": self.i_max,
            "empirical": self.empirical, "expected": self.expected,
            "deviations": self.deviations,
            "max_abs_deviation": self.max_abs_deviation,
            "seed": self.seed, "stream_id": self.stream_id,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"layer fractions  family={self.family}  n={self.n}  "
                 f"trials={self.trials}",
                 f"{'i':>4}  {'mean N_i/n':>12}  {'r_i':>12}  {'dev':>10}"]
        for i in range(self.i_max + 1):
            lines.append(f"{i:>4}  {self.empirical[i]:>12.6f}  "
                         f"{self.expected[i]:>12.6f}  {self.deviations[i]:>10.2e}")
        lines.append(f"max |dev| = {self.max_abs_deviation:.6f}")
        return "\n".join(lines) + "\n"


def run_layers(family, n, trials, i_max, rng, *, threads=1) -> LayerFitReport:
    d = _resolve(family)
    stream = _resolve_stream(rng)
    n_eff = nearest_attainable_size(d, n)
    table = analytic.peel_distribution(d, i_max + 1)

    def one(rs):
        t = sample_conditioned(d, n_eff, rs)
        counts = tree_ops.layer_counts(t)
        frac = np.zeros(i_max + 1)
        upto = min(i_max + 1, counts.size)
        frac[:upto] = counts[:upto] / n_eff
        return frac

    rows = _map_trials(one, trials, stream, 0, threads)
    emp = np.mean(np.stack(rows), axis=0)
    exp = np.asarray(table.values)
    dev = emp - exp
    return LayerFitReport(
        family=d.label, n=n_eff, trials=trials, i_max=i_max,
        empirical=[float(x) for x in emp], expected=[float(x) for x in exp],
        deviations=[float(x) for x in dev],
        max_abs_deviation=float(np.abs(dev).max()),
        seed=stream.seed, stream_id=stream.stream_id)


def _total_variation(hist: np.ndarray, table: analytic.DistributionTable) -> float:
    m = max(hist.size, len(table))
    emp = np.zeros(m)
    emp[:hist.size] = hist / hist.sum()
    tab = np.zeros(m)
    tab[:len(table)] = table.values
    return 0.5 * (np.abs(emp - tab).sum() + table.tail_mass)


@dataclass
class RootLawFitReport:
    """Histograms of the conditioned root leaf-height and of a uniform node's
    leaf-height, against their limit tables (total variation distances)."""

    family: str
    n: int
    trials: int
    tv_root: float
    tv_node: float
    root_hist: list[float]
    node_hist: list[float]
    root_table: list[float]
    node_table: list[float]
    seed: int
    stream_id: int

    def to_dict(self) -> dict:
        return {
            "name": "rootlaw", "family": self.family, "n": self.n,
            "trials": self.trials, "tv_root": self.tv_root, "tv_node": self.tv_node,
            "root_hist": self.root_hist, "node_hist": self.node_hist,
            "root_table": self.root_table, "node_table": self.node_table,
            "seed": self.seed, "stream_id": self.stream_id,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        return (f"root/uniform-node leaf-height fit  family={self.family}  "
                f"n={self.n}  trials={self.trials}\n"
                f"TV(root hist, limit law)   = {self.tv_root:.6f}\n"
                f"TV(node hist, root law)    = {self.tv_node:.6f}\n")


def run_root_leafheight(family, n, trials, rng, *, threads=1) -> RootLawFitReport:
    d = _resolve(family)
    stream = _resolve_stream(rng)
    n_eff = nearest_attainable_size(d, n)

    def one(rs):
        gen = rs.generator()
        t = sample_conditioned(d, n_eff, gen)
        lam = tree_ops.leaf_heights(t)
        u = int(gen.integers(n_eff))
        return int(lam[0]), int(lam[u])

    pairs = _map_trials(one, trials, stream, 0, threads)
    roots = np.array([p[0] for p in pairs])
    nodes = np.array([p[1] for p in pairs])
    kmax = int(max(roots.max(), nodes.max()))
    root_hist = np.bincount(roots, minlength=kmax + 1).astype(float)
    node_hist = np.bincount(nodes, minlength=kmax + 1).astype(float)
    root_table = analytic.root_limit_law(d, kmax + 1)
    node_table = analytic.leafheight_distribution(d, kmax + 1)
    return RootLawFitReport(
        family=d.label, n=n_eff, trials=trials,
        tv_root=float(_total_variation(root_hist, root_table)),
        tv_node=float(_total_variation(node_hist, node_table)),
        root_hist=[float(x) for x in root_hist / root_hist.sum()],
        node_hist=[float(x) for x in node_hist / node_hist.sum()],
        root_table=[float(x) for x in root_table.values],
        node_table=[float(x) for x in node_table.values],
        seed=stream.seed, stream_id=stream.stream_id)


# ----------------------------------------------------------------------
# the summary table over the named families

@dataclass
class Table1Report:
    n: int
    trials: int
    seed: int
    rows: list[dict]

    def to_dict(self) -> dict:
        return {"name": "table1", "n": self.n, "trials": self.trials,
                "seed": self.seed, "rows": self.rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        head = (f"{'family':<12} {'n':>7}  {'q':>9} {'I_n/n':>9}  "
                f"{'M const':>9} {'M_n/log n':>10}  {'L norm':>7} "
                f"{'L const':>9} {'L_n est':>9}")
        lines = [f"asymptotic constants vs Monte Carlo (trials={self.trials})",
                 head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r['family']:<12} {r['n']:>7}  {r['q']:>9.6f} "
                f"{r['independence_mc']:>9.6f}  {r['peel_constant']:>9.6f} "
                f"{r['peel_mc']:>10.6f}  {r['leafheight_norm']:>7} "
                f"{r['leafheight_constant']:>9.6f} {r['leafheight_mc']:>9.6f}")
        return "\n".join(lines) + "\n"


def table1(trials, n, rng, *, families=TABLE1_FAMILIES, threads=1) -> Table1Report:
    """Analytic constants next to Monte Carlo estimates for the named families."""
    stream = _resolve_stream(rng)
    rows = []
    for idx, label in enumerate(families):
        d = parse_family(label)
        sub = stream.substream(idx * 10 ** 7)
        n_eff = nearest_attainable_size(d, n)
        norm, l_const = leafheight_constant(d)
        log_n = math.log(n_eff)
        l_div = log_n if norm == "log" else math.log(log_n)

        def one(rs):
            t = sample_conditioned(d, n_eff, rs)
            ann = tree_ops.annotate(t)
            return (int(np.count_nonzero(ann.peel % 2 == 0)),
                    int(ann.peel.max()), int(ann.leaf_height.max()))

        triples = _map_trials(one, trials, sub, 0, threads)
        ind = [x[0] / n_eff for x in triples]
        mx = [x[1] / log_n for x in triples]
        lf = [x[2] / l_div for x in triples]
        rows.append({
            "family": d.label,
            "n": n_eff,
            "q": solve_q(d).value,
            "independence_mc": _mean_stderr(ind)[0],
            "independence_se": _mean_stderr(ind)[1],
            "peel_constant": max_peel_constant(d),
            "peel_mc": _mean_stderr(mx)[0],
            "peel_se": _mean_stderr(mx)[1],
            "leafheight_norm": norm,
            "leafheight_constant": l_const,
            "leafheight_mc": _mean_stderr(lf)[0],
            "leafheight_se": _mean_stderr(lf)[1],
        })
    return Table1Report(n=n, trials=trials, seed=stream.seed, rows=rows)
