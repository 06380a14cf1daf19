"""Differential-privacy primitives: seeded Laplace noise, the exponential
mechanism over hypothesis indices, and the privacy-budget split.

Everything here is a pure function of its inputs plus an explicitly passed
numpy generator, so runs are reproducible from their seeds and callers own
generator partitioning across threads.  Privacy accounting is also the
caller's job: each draw from an ``ExpMechDistribution`` costs its ``eps0``,
and ``PrivacyBudget`` records the exact split the selection loop spends
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .numeric import logsumexp


def laplace(rng: np.random.Generator, scale: float, size=None):
    """Zero-mean Laplace noise via inverse CDF on a uniform draw.

    Scalar when ``size`` is None, else an ndarray.  A uniform draw of exactly
    0 (probability 2^-53) would map to infinity and is redrawn, which keeps
    the output deterministic given the generator.
    """
    if scale <= 0:
        raise ValidationError("scale must be positive")
    if size is None:
        u = rng.random()
        while u == 0.0:
            u = rng.random()
        c = u - 0.5
        return -scale * math.copysign(1.0, c) * math.log1p(-2.0 * abs(c))
    u = rng.random(size)
    while True:
        bad = u == 0.0
        if not bad.any():
            break
        u[bad] = rng.random(int(bad.sum()))
    c = u - 0.5
    return -scale * np.sign(c) * np.log1p(-2.0 * np.abs(c))


@dataclass(frozen=True)
class PrivacyBudget:
    """Split of a total budget across T rounds of threshold search plus kT+1 selection draws.

    The split satisfies ``T * eps_svt + (k*T + 1) * eps_exp == eps_total``
    exactly (to 1e-12): T rounds each pay one threshold search and k draws,
    and the final output draw pays the remaining single ``eps_exp``.
    """

    eps_total: float
    k: int
    T: int
    eps_exp: float = field(init=False)
    eps_svt: float = field(init=False)

    def __post_init__(self):
        if self.eps_total <= 0:
            raise ValidationError("eps_total must be positive")
        if self.k < 1 or self.T < 1:
            raise ValidationError("k and T must be >= 1")
        eps_exp = self.eps_total / (2.0 * (self.k * self.T + 1))
        eps_svt = self.eps_total / (2.0 * self.T)
        object.__setattr__(self, "eps_exp", eps_exp)
        object.__setattr__(self, "eps_svt", eps_svt)
        ledger = self.T * eps_svt + (self.k * self.T + 1) * eps_exp
        if abs(ledger - self.eps_total) > 1e-12:
            raise ValidationError("budget split does not reproduce the total")

    def spent(self, rounds: int) -> float:
        """Total expenditure after ``rounds`` executed rounds plus the output draw."""
        if rounds < 0:
            raise ValidationError("rounds must be >= 0")
        return rounds * self.eps_svt + (self.k * rounds + 1) * self.eps_exp


@dataclass(frozen=True, eq=False)
class ExpMechDistribution:
    """Selection probabilities proportional to exp(-eps0 * value_j / (2 * sensitivity)).

    ``log_z`` is the log of the unshifted normalizer; tracking it lets callers
    follow how fast the distribution sharpens without ever forming the raw
    (possibly underflowing) normalizer itself.
    """

    weights: np.ndarray
    eps0: float
    sensitivity: float
    log_z: float

    def __post_init__(self):
        arr = np.array(self.weights, dtype=np.float64, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)

    @property
    def n(self) -> int:
        return int(self.weights.size)


def build_exp_mech(values, eps0: float, sensitivity: float) -> ExpMechDistribution:
    """Exponential mechanism favoring small values, with utility sensitivity as given.

    Exponents are shifted by their maximum before normalizing; the resulting
    distribution is unchanged (shift invariance) and immune to underflow of
    the common scale.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim != 1 or vals.size == 0:
        raise ValidationError("values must be a non-empty 1-D vector")
    if not np.all(np.isfinite(vals)):
        raise ValidationError("values must be finite")
    if eps0 <= 0:
        raise ValidationError("eps0 must be positive")
    if sensitivity <= 0:
        raise ValidationError("sensitivity must be positive")
    exponents = -eps0 * vals / (2.0 * sensitivity)
    shifted = np.exp(exponents - exponents.max())
    weights = shifted / shifted.sum()
    return ExpMechDistribution(weights, eps0, sensitivity, logsumexp(exponents))


def draw_k(dist: ExpMechDistribution, rng: np.random.Generator, k: int) -> np.ndarray:
    """k i.i.d. indices from the mechanism via CDF inversion; deterministic given the generator."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    cdf = np.cumsum(dist.weights)
    idx = np.searchsorted(cdf, rng.random(k), side="right")
    np.minimum(idx, dist.n - 1, out=idx)
    return idx.astype(np.int64)
