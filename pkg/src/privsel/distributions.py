"""Finite discrete distributions, exact total-variation distance, and Scheffe sets.

Hypotheses and the unknown target distribution are all plain probability mass
functions over a shared finite domain {0, ..., d-1}.  For a pair (i, j) the
Scheffe set collects the points where the lower-indexed hypothesis has
strictly smaller mass than the higher-indexed one, so querying the pair in
either order yields the same set and ties are excluded.  The gap between the
two hypotheses' masses on that set equals their total variation distance,
which is what makes the set the canonical witness for telling the pair apart.

Set masses are accumulated with compensated summation (``math.fsum``), so the
witness identity holds to full float precision even on large domains.  All
types are immutable after construction and safe to share across threads; the
per-class cache is guarded by a lock and only ever stores values equal to a
fresh recomputation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, ValidationError

PMF_SUM_TOL = 1e-9


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """A probability mass function over the domain {0, ..., d-1}."""

    pmf: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pmf, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("pmf must be a non-empty 1-D vector")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValidationError("pmf entries must be finite and non-negative")
        total = math.fsum(arr.tolist())
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise ValidationError(
                f"pmf sums to {total:.12g}; expected 1 within {PMF_SUM_TOL:g}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "pmf", arr)

    @property
    def domain_size(self) -> int:
        return int(self.pmf.size)

    def mass(self, members) -> float:
        """Exact probability mass of a set of domain points."""
        idx = np.asarray(members, dtype=np.int64)
        if idx.size == 0:
            return 0.0
        return math.fsum(self.pmf[idx].tolist())


def tv_distance(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """Total variation distance, computed exactly as half the L1 gap."""
    if p.domain_size != q.domain_size:
        raise DimensionError(
            f"domain sizes differ: {p.domain_size} vs {q.domain_size}"
        )
    return 0.5 * math.fsum(np.abs(p.pmf - q.pmf).tolist())


@dataclass(frozen=True, eq=False)
class ScheffeSet:
    """Domain points where the lower-indexed hypothesis sits strictly below the other.

    ``pair`` is always stored in canonical order (i <= j); the set for a pair
    queried the other way round is the same object's contents.
    """

    indices: np.ndarray
    pair: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "indices", _frozen_array(self.indices, np.int64))
        i, j = self.pair
        if i > j:
            raise ValidationError("pair must be in canonical order (i <= j)")

    def __len__(self) -> int:
        return int(self.indices.size)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.indices)


class HypothesisClass:
    """A list of n hypotheses over one domain, with cached Scheffe sets and masses.

    The cache is transparent: disabling it never changes any returned value,
    and a cached entry always equals what a fresh recomputation would produce
    (mass sums are exact, so summation order cannot introduce drift).
    """

    def __init__(self, hypotheses: Sequence[DiscreteDistribution], cache: bool = True):
        hyps = tuple(hypotheses)
        if not hyps:
            raise ValidationError("a hypothesis class needs at least one hypothesis")
        d = hyps[0].domain_size
        for h in hyps[1:]:
            if h.domain_size != d:
                raise DimensionError("all hypotheses must share one domain size")
        self._hypotheses = hyps
        self._pmf = _frozen_array(np.stack([h.pmf for h in hyps]), np.float64)
        self._cache_enabled = bool(cache)
        self._lock = threading.Lock()
        self._pairs: dict[tuple[int, int], tuple[ScheffeSet, float, float]] = {}
        self._row_masks: dict[int, np.ndarray] = {}
        self._row_masses: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._hypotheses)

    @property
    def n(self) -> int:
        return len(self._hypotheses)

    @property
    def domain_size(self) -> int:
        return int(self._pmf.shape[1])

    @property
    def hypotheses(self) -> tuple[DiscreteDistribution, ...]:
        return self._hypotheses

    @property
    def pmf_matrix(self) -> np.ndarray:
        """Read-only (n, d) matrix of all hypothesis pmfs."""
        return self._pmf

    def _check_index(self, i: int) -> int:
        i = int(i)
        if not 0 <= i < self.n:
            raise IndexError(f"hypothesis index {i} out of range [0, {self.n})")
        return i

    def _pair_entry(self, i: int, j: int) -> tuple[ScheffeSet, float, float]:
        lo, hi = (i, j) if i <= j else (j, i)
        key = (lo, hi)
        if self._cache_enabled:
            with self._lock:
                hit = self._pairs.get(key)
            if hit is not None:
                return hit
        mask = self._pmf[lo] < self._pmf[hi]
        sset = ScheffeSet(np.nonzero(mask)[0], (lo, hi))
        m_lo = self._hypotheses[lo].mass(sset.indices)
        m_hi = self._hypotheses[hi].mass(sset.indices)
        entry = (sset, m_lo, m_hi)
        if self._cache_enabled:
            with self._lock:
                entry = self._pairs.setdefault(key, entry)
        return entry

    def scheffe_set(self, i: int, j: int) -> ScheffeSet:
        """The Scheffe set of hypotheses i and j (order of arguments is irrelevant)."""
        i, j = self._check_index(i), self._check_index(j)
        return self._pair_entry(i, j)[0]

    def scheffe_masses(self, i: int, j: int) -> tuple[float, float]:
        """(mass of hypothesis i, mass of hypothesis j) on their Scheffe set.

        The absolute gap between the two returned masses equals
        ``tv_distance`` between the hypotheses.
        """
        i, j = self._check_index(i), self._check_index(j)
        _, m_lo, m_hi = self._pair_entry(i, j)
        return (m_lo, m_hi) if i <= j else (m_hi, m_lo)

    def row_masks(self, i: int) -> np.ndarray:
        """(n, d) boolean matrix whose row j is the Scheffe set of (i, j)."""
        i = self._check_index(i)
        if self._cache_enabled:
            with self._lock:
                hit = self._row_masks.get(i)
            if hit is not None:
                return hit
        pi = self._pmf[i][None, :]
        above = pi < self._pmf           # rows j with j >= i use {x : H_i(x) < H_j(x)}
        below = self._pmf < pi           # rows j with j < i use {x : H_j(x) < H_i(x)}
        sel = (np.arange(self.n) >= i)[:, None]
        masks = np.where(sel, above, below)
        masks.setflags(write=False)
        if self._cache_enabled:
            with self._lock:
                masks = self._row_masks.setdefault(i, masks)
        return masks

    def row_masses(self, i: int) -> np.ndarray:
        """Vector whose entry j is hypothesis j's exact mass on the Scheffe set of (i, j)."""
        i = self._check_index(i)
        if self._cache_enabled:
            with self._lock:
                hit = self._row_masses.get(i)
            if hit is not None:
                return hit
        masks = self.row_masks(i)
        out = np.empty(self.n, dtype=np.float64)
        for j in range(self.n):
            sel = self._pmf[j][masks[j]]
            out[j] = math.fsum(sel.tolist()) if sel.size else 0.0
        out.setflags(write=False)
        if self._cache_enabled:
            with self._lock:
                out = self._row_masses.setdefault(i, out)
        return out
