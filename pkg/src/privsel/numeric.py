"""Small numeric helpers used across modules."""

import math

import numpy as np


def tolerant_ceil(value: float) -> int:
    """Ceiling that forgives float noise just above an integer.

    Derived sample/round counts come out of products of logs; a value that is
    mathematically an integer can land a few ulps above it and must not be
    bumped to the next count.
    """
    slack = 1e-9 + abs(value) * 1e-12
    return int(math.ceil(value - slack))


def logsumexp(values: np.ndarray) -> float:
    """log(sum(exp(values))) with the usual max shift against overflow."""
    arr = np.asarray(values, dtype=np.float64)
    m = float(arr.max())
    return m + math.log(float(np.sum(np.exp(arr - m))))


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; (0, 1) when trials == 0."""
    if trials == 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))
