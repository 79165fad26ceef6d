"""Fixed-point constants and exact root-parameter distributions.

Everything here is a deterministic function of the offspring generating
function f.  The key quantities:

* q, the unique root of q = f(1-q) in (1/2, 1): the limiting fraction of
  nodes in the layered independent set.
* q_s, the limiting density of the minimum s-path vertex cover: the root
  marking probability, the fixed point of e_{s-1}(q) where e_1 = 1 - f(q)
  and e_j = 1 - f(1 + q - e_{j-1}).
* (r_i): law of the root's peel number in an unconditioned tree,
      r_0 = p_0,
      r_{2i}   = f(ro_{2i-1}) - f(ro_{2i-3}),        ro_k = sum of odd r_j, j <= k,
      r_{2i-1} = f(1-q + re_{2i-2}) - f(1-q + re_{2i}), re_k = sum of even r_j, j >= k,
  with sum of even terms q and of odd terms 1-q.
* (l_i): law of the root's leaf-height.  With h_i = P{lambda(root) >= i},
      h_0 = 1,   h_{i+1} = f(h_i) - p_0,   l_i = h_i - h_{i+1}.
* (l**_i): limit law of the root's leaf-height in the size-conditioned tree.
  The products prod_{j<i} f'(h_j) telescope as the tail function
  P{limit >= i} (the i = 0 empty product is the total mass 1), so the pmf
  is the consecutive difference w_i - w_{i+1}; it matches the stationary
  law of the spinal chain H -> 1 + min(H, leaf-heights of zeta - 1
  unconditioned subtrees).

Numerics: both recursions subtract nearly equal values of f once the
probabilities are small, which loses all precision in naive form.  Each
difference is therefore evaluated in factored form (the known-small
increment times a positive series), which keeps full relative accuracy.
Leaf-height masses decay doubly exponentially when p_1 = 0 and underflow
doubles around i = 10, so that recursion runs on mpmath floats (arbitrary
exponent range) and tables carry natural-log values alongside.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .offspring import Family, OffspringDistribution

__all__ = [
    "TableKind", "DistributionTable", "FixedPointResult", "FixedPointError",
    "Tolerances", "DEFAULT_TOLERANCES",
    "solve_q", "solve_qs", "peel_distribution", "leafheight_distribution",
    "root_limit_law", "peel_decay_rate", "max_peel_constant",
    "leafheight_constant",
]

_MP_DPS = 40


class FixedPointError(RuntimeError):
    """No sign change found while bracketing a fixed point."""


@dataclass(frozen=True)
class Tolerances:
    """Central numeric knobs for the analytic layer."""

    fixed_point: float = 1e-13
    qs_fixed_point: float = 1e-12
    table_tail: float = 1e-12
    ratio_window: tuple[int, int] = (40, 60)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class FixedPointResult:
    value: float
    iterations: int
    residual: float


class TableKind(enum.Enum):
    PEEL_ROOT = "peel"
    LEAFHEIGHT_ROOT = "leafheight"
    ROOT_LIMIT_LAW = "rootlaw"


@dataclass(frozen=True, eq=False)
class DistributionTable:
    """Truncated probability sequence with explicit tail mass.

    ``log_values`` holds natural logs computed before any underflow
    (-inf where the mass is exactly zero); decay diagnostics use them.
    """

    values: np.ndarray
    tail_mass: float
    kind: TableKind
    log_values: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if np.any(vals < -1e-12) or np.any(vals > 1 + 1e-12):
            raise ValueError("table values must lie in [0, 1]")
        total = vals.sum() + self.tail_mass
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"values + tail_mass = {total!r}, expected 1")
        if self.kind is TableKind.LEAFHEIGHT_ROOT and vals.size > 2:
            diffs = np.diff(vals[1:])
            if np.any(diffs > 1e-12):
                raise ValueError("leaf-height masses must be nonincreasing from i = 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.log_values is not None:
            lv = np.asarray(self.log_values, dtype=float)
            lv.setflags(write=False)
            object.__setattr__(self, "log_values", lv)

    def __len__(self) -> int:
        return self.values.size

    def to_csv(self) -> str:
        lines = ["index,value"]
        lines += [f"{i},{float(v)!r}" for i, v in enumerate(self.values)]
        lines.append(f"tail,{float(self.tail_mass)!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind.value,
                "values": [float(v) for v in self.values],
                "tail_mass": float(self.tail_mass),
            },
            sort_keys=True,
        )


# ----------------------------------------------------------------------
# fixed points

def solve_q(d: OffspringDistribution, tol: float | None = None) -> FixedPointResult:
    """Unique root of q - f(1-q) in [0, 1]; lies in (1/2, 1) for critical laws.

    Bisection: f(1-q) - q is continuous, positive at 0 and negative at 1
    (p_0 < 1), so the bracket never fails and the accuracy is deterministic.
    """
    tol = DEFAULT_TOLERANCES.fixed_point if tol is None else tol
    lo, hi = 0.0, 1.0
    iterations = 0
    while hi - lo > tol:
        iterations += 1
        mid = 0.5 * (lo + hi)
        if d.pgf(1.0 - mid) - mid > 0.0:
            lo = mid
        else:
            hi = mid
        if iterations > 200:  # pragma: no cover
            break
    value = 0.5 * (lo + hi)
    return FixedPointResult(value, iterations, abs(value - d.pgf(1.0 - value)))


def _iterate_marking(d: OffspringDistribution, q: float, s: int) -> float:
    # e_j = P{some downward path of j unmarked edges leaves the root},
    # where each child is marked w.p. q.  A marked child always hides an
    # unmarked path of length s-1 >= j-1 below it, so the event "child is
    # unmarked AND carries a path of length j-1" has probability
    # e_{j-1} - q, giving e_j = 1 - f(1 + q - e_{j-1}).
    e = 1.0 - d.pgf(min(1.0, max(0.0, q)))
    for _ in range(s - 2):
        e = 1.0 - d.pgf(min(1.0, max(0.0, 1.0 + q - e)))
    return e


def solve_qs(d: OffspringDistribution, s: int, tol: float | None = None) -> FixedPointResult:
    """Density q_s of the minimum s-path vertex cover: the marking
    probability of the root of an unconditioned tree.

    q_s is the fixed point of e_{s-1}(q) with e_1 = 1 - f(q) and
    e_j = 1 - f(1 + q - e_{j-1}); for s = 2 this reduces to q_2 = 1 - q.
    Solved by bisection on [0, 1]; if the endpoints fail to bracket (not
    expected), a 10^4-point scan looks for a sign change and raises
    FixedPointError when none exists.
    """
    if s < 2:
        raise ValueError(f"s must be >= 2, got {s}")
    tol = DEFAULT_TOLERANCES.qs_fixed_point if tol is None else tol

    def h(x: float) -> float:
        return _iterate_marking(d, x, s) - x

    lo, hi = 0.0, 1.0
    if h(lo) <= 0.0 or h(hi) >= 0.0:
        grid = np.linspace(0.0, 1.0, 10_001)
        vals = np.array([h(x) for x in grid])
        sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
        if sign_flip.size == 0:
            raise FixedPointError(
                "no bracket for q_s on a 10^4-point grid; distribution looks broken")
        lo, hi = float(grid[sign_flip[0]]), float(grid[sign_flip[0] + 1])
    iterations = 0
    width_goal = min(tol, 1e-13)
    while hi - lo > width_goal and iterations < 200:
        iterations += 1
        mid = 0.5 * (lo + hi)
        if h(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    value = 0.5 * (lo + hi)
    return FixedPointResult(value, iterations, abs(h(value)))


# ----------------------------------------------------------------------
# stable evaluation helpers

def _pgf_diff(d: OffspringDistribution, lo: float, delta: float) -> float:
    """f(lo + delta) - f(lo) without cancellation (delta >= 0 and small).

    Factored closed forms for the infinite families; for finite supports,
    a^k - b^k = delta * S_k with S_1 = 1, S_{k+1} = a S_k + b^k, so the
    difference is delta times a positive series.
    """
    fam = d.family
    if fam is Family.POISSON1:
        return math.exp(lo - 1.0) * math.expm1(delta)
    if fam is Family.GEOMETRIC_HALF:
        return delta / ((2.0 - lo - delta) * (2.0 - lo))
    a = lo + delta
    probs = d.probs
    acc = 0.0
    s_k = 1.0
    b_pow = 1.0
    for k in range(1, probs.size):
        acc += probs[k] * s_k
        b_pow *= lo
        s_k = a * s_k + b_pow
    return delta * acc


def _survival_step_mp(d: OffspringDistribution):
    """Return h -> f(h) - p_0 as a positive-form mpmath map."""
    fam = d.family
    if fam is Family.POISSON1:
        e_inv = mp.exp(-1)
        return lambda h: e_inv * mp.expm1(h)
    if fam is Family.GEOMETRIC_HALF:
        return lambda h: h / (2 * (2 - h))
    coeffs = [mp.mpf(p) for p in d.probs[1:]]

    def step(h):
        acc = mp.mpf(0)
        for c in reversed(coeffs):
            acc = acc * h + c
        return acc * h

    return step


def _fprime_mp(d: OffspringDistribution):
    fam = d.family
    if fam is Family.POISSON1:
        return lambda h: mp.exp(h - 1)
    if fam is Family.GEOMETRIC_HALF:
        return lambda h: 1 / (2 - h) ** 2
    coeffs = [mp.mpf(k * p) for k, p in enumerate(d.probs)][1:]

    def deriv(h):
        acc = mp.mpf(0)
        for c in reversed(coeffs):
            acc = acc * h + c
        return acc

    return deriv


# ----------------------------------------------------------------------
# distribution tables

def peel_distribution(d: OffspringDistribution, n_terms: int) -> DistributionTable:
    """Root peel-number law (r_0 .. r_{n_terms-1}).

    Evaluation order is strictly causal: r_0, then for i = 1, 2, ...
    first r_{2i-1} (needs even terms through 2i-2 plus q, via the identity
    re_{2i} = q - sum of earlier even terms), then r_{2i} (needs odd terms
    through 2i-1).  Each new term is the increment of f between two points
    whose gap is the previous term, so the factored difference keeps full
    relative precision down to the smallest doubles.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if not d.is_critical:
        raise ValueError("peel distribution requires a critical law")
    q = solve_q(d, tol=1e-15).value
    r = np.zeros(n_terms)
    r[0] = d.p0
    odd_prefix = 0.0        # sum of odd terms through 2i-3
    even_prefix = r[0]      # sum of even terms through 2i-2
    last_even = r[0]
    for i in range(1, (n_terms + 2) // 2):
        even_tail = q - even_prefix          # re_{2i}, only feeds an argument
        r_odd = _pgf_diff(d, 1.0 - q + even_tail, last_even)
        if 2 * i - 1 < n_terms:
            r[2 * i - 1] = r_odd
        r_even = _pgf_diff(d, odd_prefix, r_odd)
        if 2 * i < n_terms:
            r[2 * i] = r_even
        odd_prefix += r_odd
        even_prefix += r_even
        last_even = r_even
        if 2 * i >= n_terms:
            break
    tail = max(0.0, 1.0 - r.sum())
    with np.errstate(divide="ignore"):
        logs = np.where(r > 0.0, np.log(np.maximum(r, 1e-320)), -np.inf)
    return DistributionTable(r, tail, TableKind.PEEL_ROOT, logs)


def _survival_sequence(d: OffspringDistribution, n: int) -> list:
    """h_0 .. h_n with h_i = P{leaf-height of the root >= i}, as mpmath floats."""
    step = _survival_step_mp(d)
    h = [mp.mpf(1)]
    for _ in range(n):
        h.append(step(h[-1]))
    return h


def leafheight_distribution(d: OffspringDistribution, n_terms: int) -> DistributionTable:
    """Root leaf-height law (l_0 .. l_{n_terms-1}); l_0 = p_0.

    Runs on mpmath floats: when p_1 = 0 the masses decay like
    c^(kappa^i) and leave double range almost immediately, but the
    survival recursion h_{i+1} = f(h_i) - p_0 is a positive series in h_i
    and stays fully accurate at any scale.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    with mp.workdps(_MP_DPS):
        h = _survival_sequence(d, n_terms)
        masses = [h[i] - h[i + 1] for i in range(n_terms)]
        values = np.array([float(m) for m in masses])
        logs = np.array([float(mp.log(m)) if m > 0 else -math.inf for m in masses])
        tail = float(h[n_terms])
    values = np.clip(values, 0.0, 1.0)
    return DistributionTable(values, tail, TableKind.LEAFHEIGHT_ROOT, logs)


def root_limit_law(d: OffspringDistribution, n_terms: int) -> DistributionTable:
    """Limit law of the root leaf-height of the size-conditioned tree.

    w_i = prod_{j<i} f'(h_j) is the tail P{>= i} (the recursion
    w_i = w_{i-1} f'(h_{i-1}) telescopes it from w_0 = 1), hence the pmf
    entries are w_i - w_{i+1} = w_i (1 - f'(h_i)).  Index 0 carries mass 0:
    the conditioned root is never a leaf in the limit.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if not d.is_critical:
        raise ValueError("the conditioned-root limit law requires a critical law")
    with mp.workdps(_MP_DPS):
        h = _survival_sequence(d, n_terms)
        fprime = _fprime_mp(d)
        w = mp.mpf(1)
        values = np.zeros(n_terms)
        logs = np.full(n_terms, -math.inf)
        for i in range(n_terms):
            # f'(h_0) = f'(1) = 1 exactly by criticality; evaluating the
            # series would leave pmf rounding dust at index 0
            factor = mp.mpf(1) if i == 0 else fprime(h[i])
            mass = w * (1 - factor)
            if mass > 0:
                values[i] = float(mass)
                logs[i] = float(mp.log(mass))
            w = w * factor
        tail = float(w)
    values = np.clip(values, 0.0, 1.0)
    return DistributionTable(values, tail, TableKind.ROOT_LIMIT_LAW, logs)


# ----------------------------------------------------------------------
# limit constants used by the experiments

def peel_decay_rate(d: OffspringDistribution) -> float:
    """f'(1-q): the geometric decay rate of both r_i and the layer sizes."""
    q = solve_q(d).value
    return d.pgf_prime(1.0 - q)


def max_peel_constant(d: OffspringDistribution) -> float:
    """Limit of (max peel number) / log n: 1 / log(1 / f'(1-q))."""
    return 1.0 / math.log(1.0 / peel_decay_rate(d))


def leafheight_constant(d: OffspringDistribution) -> tuple[str, float]:
    """Limit constant for the maximum leaf-height.

    Returns ("log", 1/log(1/p_1)) when p_1 > 0 (growth ~ log n) and
    ("loglog", 1/log kappa) when p_1 = 0 (growth ~ log log n).
    """
    if d.p1 > 0.0:
        return "log", 1.0 / math.log(1.0 / d.p1)
    return "loglog", 1.0 / math.log(d.kappa)
