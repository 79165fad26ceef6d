"""Offspring distributions for critical Galton-Watson trees.

An offspring law xi is a probability distribution on {0, 1, 2, ...} with
p_i = P{xi = i}.  Throughout the library we work with *critical* laws,
E{xi} = 1, of finite nonzero variance; a flag permits subcritical laws
(E{xi} < 1) where the theory still applies.  The probability generating
function is

    f(s) = E{s^xi} = sum_i p_i s^i,          0 <= s <= 1,

with f'(s) = E{xi s^(xi-1)}.  Criticality means f'(1) = 1.

Named families
--------------
binary       Uni{0,2}:       p_0 = p_2 = 1/2          (full binary trees)
tary:t       p_0 = 1-1/t, p_t = 1/t                   (Flajolet t-ary trees)
cayley       Poisson(1):     p_i = 1/(e i!)           (rooted labelled trees)
geometric    Geo(1/2):       p_i = 2^-(i+1)           (planted plane trees)
motzkin      Uni{0,1,2}:     p_0 = p_1 = p_2 = 1/3    (unary-binary trees)
catalan      Bin(2, 1/2)                              (plane trees, slot model)
binomial:d   Bin(d, 1/d):    p_i = C(d,i) d^-i (1-1/d)^(d-i)
pmf:a,b,...  explicit finite pmf

Conditioning the tree on its total size n makes each family the uniform
distribution over the corresponding combinatorial class.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Family",
    "OffspringDistribution",
    "OffspringError",
    "SizeBiasedSampler",
    "parse_family",
    "FAMILY_GRAMMAR",
]

# Criticality is enforced at construction: |mean - 1| below this is critical.
MEAN_TOL = 1e-9
# Infinite supports are truncated once the residual tail mass drops below this.
TAIL_TOL = 1e-15


class OffspringError(ValueError):
    """Invalid offspring distribution (bad pmf, wrong mean, zero variance)."""


class Family(enum.Enum):
    FINITE = "finite"
    POISSON1 = "poisson1"
    GEOMETRIC_HALF = "geometric_half"
    BINOMIAL = "binomial"
    TARY = "tary"
    UNIFORM_SET = "uniform_set"


def _poisson1_pmf(tail: float = TAIL_TOL) -> np.ndarray:
    probs = [math.exp(-1.0)]
    while sum(probs) < 1.0 - tail:
        probs.append(probs[-1] / len(probs))
    return np.array(probs)


def _geometric_half_pmf(tail: float = TAIL_TOL) -> np.ndarray:
    k = max(8, math.ceil(-math.log2(tail)))
    return 0.5 ** (np.arange(k, dtype=float) + 1.0)


class OffspringDistribution:
    """A critical (or flagged subcritical) offspring law.

    Instances are immutable after construction and safe to share across
    threads.  Use the factory classmethods or :func:`parse_family`.
    """

    def __init__(
        self,
        family: Family,
        probs: np.ndarray,
        *,
        param: int | None = None,
        allow_subcritical: bool = False,
        label: str | None = None,
    ):
        probs = np.asarray(probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise OffspringError("pmf must be a nonempty 1-d sequence")
        if np.any(probs < -1e-15) or np.any(probs > 1 + 1e-15):
            raise OffspringError("pmf values must lie in [0, 1]")
        probs = np.clip(probs, 0.0, 1.0)
        total = probs.sum()
        infinite = family in (Family.POISSON1, Family.GEOMETRIC_HALF)
        norm_tol = TAIL_TOL * 10 if infinite else 1e-12
        if abs(total - 1.0) > norm_tol:
            raise OffspringError(f"pmf sums to {total!r}, not 1")

        idx = np.arange(probs.size, dtype=float)
        mean = 1.0 if infinite else float(idx @ probs)
        second = 2.0 if family is Family.POISSON1 else (
            3.0 if family is Family.GEOMETRIC_HALF else float((idx * idx) @ probs))
        if abs(mean - 1.0) > MEAN_TOL:
            if not (allow_subcritical and mean < 1.0):
                raise OffspringError(
                    f"offspring mean is {mean:.12g}; critical laws need mean 1 "
                    "(pass allow_subcritical=True for mean < 1)")
        variance = second - mean * mean
        if probs[0] <= 0.0:
            raise OffspringError("p_0 must be positive, else the tree never dies out")
        if variance <= 0.0 and not allow_subcritical:
            raise OffspringError("offspring variance must be positive")

        self.family = family
        self.probs = probs
        self.probs.setflags(write=False)
        self.param = param
        self.mean = mean
        self.variance = variance
        self.p0 = float(probs[0])
        self.p1 = float(probs[1]) if probs.size > 1 else 0.0
        self.is_critical = abs(mean - 1.0) <= MEAN_TOL
        self.label = label or family.value
        self._kappa: int | None = None
        self._alias: tuple[np.ndarray, np.ndarray] | None = None
        self._cdf: np.ndarray | None = None

    # ------------------------------------------------------------------
    # factories

    @classmethod
    def uniform_set(cls, support: Iterable[int], **kw) -> "OffspringDistribution":
        sup = sorted(set(int(s) for s in support))
        if any(s < 0 for s in sup):
            raise OffspringError("support values must be nonnegative")
        probs = np.zeros(max(sup) + 1)
        probs[sup] = 1.0 / len(sup)
        label = kw.pop("label", "uniform{%s}" % ",".join(map(str, sup)))
        return cls(Family.UNIFORM_SET, probs, label=label, **kw)

    @classmethod
    def poisson1(cls) -> "OffspringDistribution":
        return cls(Family.POISSON1, _poisson1_pmf(), label="cayley")

    @classmethod
    def geometric_half(cls) -> "OffspringDistribution":
        return cls(Family.GEOMETRIC_HALF, _geometric_half_pmf(), label="geometric")

    @classmethod
    def binomial(cls, d: int) -> "OffspringDistribution":
        d = int(d)
        if d < 2:
            raise OffspringError("binomial family needs d >= 2")
        i = np.arange(d + 1)
        probs = np.array([math.comb(d, k) for k in i], dtype=float)
        probs *= (1.0 / d) ** i * (1.0 - 1.0 / d) ** (d - i)
        return cls(Family.BINOMIAL, probs, param=d, label=f"binomial:{d}")

    @classmethod
    def tary(cls, t: int) -> "OffspringDistribution":
        t = int(t)
        if t < 2:
            raise OffspringError("t-ary family needs t >= 2")
        probs = np.zeros(t + 1)
        probs[0] = 1.0 - 1.0 / t
        probs[t] = 1.0 / t
        return cls(Family.TARY, probs, param=t, label=f"tary:{t}")

    @classmethod
    def from_pmf(cls, probs: Sequence[float], *, allow_subcritical: bool = False,
                 label: str | None = None) -> "OffspringDistribution":
        return cls(Family.FINITE, np.asarray(probs, dtype=float),
                   allow_subcritical=allow_subcritical, label=label or "pmf")

    # ------------------------------------------------------------------
    # structure

    @property
    def kappa(self) -> int | None:
        """min{i > 1 : p_i > 0}, defined only when p_1 = 0 (lazy)."""
        if self.p1 != 0.0:
            return None
        if self._kappa is None:
            nz = np.nonzero(self.probs[2:])[0]
            if nz.size == 0:
                raise OffspringError("p_1 = 0 and no p_i > 0 for i > 1")
            self._kappa = int(nz[0]) + 2
        return self._kappa

    @property
    def max_degree(self) -> int:
        """Largest degree carried by the (possibly truncated) pmf table."""
        return int(np.nonzero(self.probs)[0][-1])

    def pmf(self, i: int) -> float:
        if i < 0:
            return 0.0
        if self.family is Family.POISSON1:
            return math.exp(-1.0) / math.factorial(i)
        if self.family is Family.GEOMETRIC_HALF:
            return 0.5 ** (i + 1)
        return float(self.probs[i]) if i < self.probs.size else 0.0

    def support_table(self, tail: float = TAIL_TOL) -> tuple[np.ndarray, np.ndarray]:
        """(values, probabilities) with nonzero entries; infinite tails cut at `tail`."""
        if self.family is Family.POISSON1:
            probs = _poisson1_pmf(tail)
        elif self.family is Family.GEOMETRIC_HALF:
            probs = _geometric_half_pmf(tail)
        else:
            probs = self.probs
        vals = np.nonzero(probs)[0]
        return vals.astype(np.int64), probs[vals]

    # ------------------------------------------------------------------
    # generating function

    def pgf(self, s: float) -> float:
        """f(s) = E{s^xi}.  Closed forms for the named families."""
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"pgf argument {s!r} outside [0, 1]")
        fam = self.family
        if fam is Family.POISSON1:
            return math.exp(s - 1.0)
        if fam is Family.GEOMETRIC_HALF:
            return 1.0 / (2.0 - s)
        if fam is Family.BINOMIAL:
            d = self.param
            return (1.0 + (s - 1.0) / d) ** d
        if fam is Family.TARY:
            t = self.param
            return 1.0 - 1.0 / t + s ** t / t
        return _horner(self.probs, s)

    def pgf_prime(self, s: float) -> float:
        """f'(s) = E{xi s^(xi-1)}."""
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"pgf_prime argument {s!r} outside [0, 1]")
        fam = self.family
        if fam is Family.POISSON1:
            return math.exp(s - 1.0)
        if fam is Family.GEOMETRIC_HALF:
            return 1.0 / (2.0 - s) ** 2
        if fam is Family.BINOMIAL:
            d = self.param
            return (1.0 + (s - 1.0) / d) ** (d - 1)
        if fam is Family.TARY:
            return s ** (self.param - 1)
        deriv = self.probs[1:] * np.arange(1, self.probs.size)
        return _horner(deriv, s)

    # ------------------------------------------------------------------
    # sampling

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Draw from the law.  Finite supports use a Walker alias table built
        once; the two closed-form infinite families use inversion."""
        fam = self.family
        if fam is Family.GEOMETRIC_HALF:
            u = 1.0 - rng.random(size)  # in (0, 1], keeps the log finite
            return np.floor(np.log(u) * (1.0 / math.log(0.5))).astype(np.int64)
        if fam is Family.POISSON1:
            if self._cdf is None:
                self._cdf = np.cumsum(_poisson1_pmf(1e-18))
            out = np.searchsorted(self._cdf, rng.random(size), side="right")
            return np.minimum(out, self._cdf.size - 1).astype(np.int64)
        if self._alias is None:
            self._alias = _build_alias(self.probs)
        return _alias_sample(self._alias, rng, size)

    def size_biased(self) -> "SizeBiasedSampler":
        """Sampler for zeta with P{zeta = i} = i p_i (needs E{xi} = 1)."""
        if not self.is_critical:
            raise OffspringError("size-biasing requires a critical law (mean 1)")
        return SizeBiasedSampler(self)

    def __repr__(self) -> str:  # pragma: no cover
        return f"OffspringDistribution({self.label})"


def _horner(coeffs: np.ndarray, s: float) -> float:
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * s + c
    return float(acc)


def _build_alias(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Walker's alias method; O(K) setup, O(1) per draw.
    k = probs.size
    scaled = probs * k
    accept = np.zeros(k)
    alias = np.zeros(k, dtype=np.int64)
    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s, g = small.pop(), large.pop()
        accept[s] = scaled[s]
        alias[s] = g
        scaled[g] = scaled[g] - (1.0 - scaled[s])
        (small if scaled[g] < 1.0 else large).append(g)
    for rest in small + large:
        accept[rest] = 1.0
        alias[rest] = rest
    return accept, alias


def _alias_sample(table, rng: np.random.Generator, size):
    accept, alias = table
    idx = rng.integers(0, accept.size, size=size)
    take_alias = rng.random(size) >= accept[idx]
    if size is None:
        return int(alias[idx]) if take_alias else int(idx)
    return np.where(take_alias, alias[idx], idx).astype(np.int64)


class SizeBiasedSampler:
    """The size-biased law zeta, P{zeta = i} = i p_i, with E{zeta} = sigma^2 + 1.

    Used for the degrees along the spine of Kesten's infinite tree.
    """

    def __init__(self, base: OffspringDistribution):
        vals, probs = base.support_table(1e-18)
        weighted = vals * probs
        self.values = vals[weighted > 0]
        self.probs = weighted[weighted > 0]
        self.probs = self.probs / self.probs.sum()  # mass is 1 up to the cut tail
        self.mean = base.variance + 1.0
        self.base = base
        self._cdf = np.cumsum(self.probs)
        self._cdf[-1] = 1.0

    def pmf(self, i: int) -> float:
        return i * self.base.pmf(i)

    def sample(self, rng: np.random.Generator, size: int | None = None):
        pos = np.searchsorted(self._cdf, rng.random(size), side="right")
        pos = np.minimum(pos, self.values.size - 1)
        out = self.values[pos]
        return out if size is not None else int(out)


FAMILY_GRAMMAR = (
    "binary | tary:<t> | cayley | geometric | motzkin | catalan | "
    "binomial:<d> | pmf:<p0,p1,...>"
)

_NAMED = {
    "binary": lambda: OffspringDistribution.uniform_set((0, 2), label="binary"),
    "cayley": OffspringDistribution.poisson1,
    "geometric": OffspringDistribution.geometric_half,
    "motzkin": lambda: OffspringDistribution.uniform_set((0, 1, 2), label="motzkin"),
    "catalan": lambda: OffspringDistribution.binomial(2),
}


def parse_family(spec: str, *, allow_subcritical: bool = False) -> OffspringDistribution:
    """Parse a family spec string (grammar: FAMILY_GRAMMAR)."""
    spec = spec.strip().lower()
    if spec in _NAMED:
        d = _NAMED[spec]()
        if spec == "catalan":
            d.label = "catalan"
        return d
    head, sep, arg = spec.partition(":")
    if not sep:
        raise OffspringError(f"unknown family {spec!r}; expected {FAMILY_GRAMMAR}")
    if head == "tary":
        return OffspringDistribution.tary(_parse_int(arg, "tary"))
    if head == "binomial":
        return OffspringDistribution.binomial(_parse_int(arg, "binomial"))
    if head == "pmf":
        try:
            probs = [float(x) for x in arg.split(",") if x.strip() != ""]
        except ValueError as exc:
            raise OffspringError(f"bad pmf list {arg!r}") from exc
        if not probs:
            raise OffspringError("pmf family needs at least one probability")
        return OffspringDistribution.from_pmf(
            probs, allow_subcritical=allow_subcritical, label=spec)
    raise OffspringError(f"unknown family {spec!r}; expected {FAMILY_GRAMMAR}")


def _parse_int(arg: str, name: str) -> int:
    try:
        return int(arg)
    except ValueError as exc:
        raise OffspringError(f"{name} parameter must be an integer, got {arg!r}") from exc
