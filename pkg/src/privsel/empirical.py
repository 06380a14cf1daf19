"""The private sample set and empirical semi-distance queries.

A dataset is an ordered list of domain indices; "neighboring" datasets differ
by a substitution at exactly one position, so order is part of the identity.
The oracle answers empirical semi-distances

    w_hat_i(H_j) = | H_j(S_ij) - P_hat(S_ij) |

where S_ij is the Scheffe set of the pair and P_hat is the sample frequency.
Each answered value counts as one query (duplicates included); query counts
are the complexity metric used by the benchmarks, where a single uncached
query is the unit of sample-linear work.  Internally the oracle keeps a
histogram of the dataset and fills semi-distances lazily row by row, which
changes nothing observable: empirical masses are integer counts over the
sample size, so every cached value equals a from-scratch recomputation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .distributions import DiscreteDistribution, HypothesisClass, ScheffeSet
from .errors import DimensionError, ValidationError
from .numeric import tolerant_ceil


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ordered list of samples from the domain {0, ..., domain_size-1}."""

    samples: np.ndarray
    domain_size: int
    counts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.int64, copy=True)
        if arr.ndim != 1:
            raise ValidationError("samples must be a 1-D integer vector")
        d = int(self.domain_size)
        if d < 1:
            raise ValidationError("domain_size must be >= 1")
        if arr.size and (int(arr.min()) < 0 or int(arr.max()) >= d):
            raise ValidationError("sample values must lie in [0, domain_size)")
        arr.setflags(write=False)
        counts = np.bincount(arr, minlength=d).astype(np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "domain_size", d)
        object.__setattr__(self, "counts", counts)

    def __len__(self) -> int:
        return int(self.samples.size)

    def replace(self, position: int, value: int) -> "Dataset":
        """A copy with one entry substituted; the basis of dataset adjacency."""
        if not 0 <= position < len(self):
            raise IndexError(f"position {position} out of range")
        out = self.samples.copy()
        out[position] = value
        return Dataset(out, self.domain_size)

    def to_list(self) -> list[int]:
        """Plain integer list, for JSON-friendly reproducibility records."""
        return [int(x) for x in self.samples]


def sample(dist: DiscreteDistribution, rng: np.random.Generator, count: int) -> Dataset:
    """Draw ``count`` i.i.d. samples via inverse CDF; deterministic given the generator."""
    if count < 0:
        raise ValidationError("count must be >= 0")
    cdf = np.cumsum(dist.pmf)
    u = rng.random(count)
    idx = np.searchsorted(cdf, u, side="right")
    np.minimum(idx, dist.domain_size - 1, out=idx)
    return Dataset(idx, dist.domain_size)


def required_samples_for_accuracy(n: int, gamma: float, beta: float) -> int:
    """Samples that make every empirical semi-distance gamma-accurate w.p. >= 1 - beta.

    Hoeffding plus a union bound over the n^2 Scheffe sets (two tails each)
    gives log(2n/beta) / (2 gamma^2).
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if not 0.0 < gamma < 1.0:
        raise ValidationError("gamma must lie in (0, 1)")
    if not 0.0 < beta < 1.0:
        raise ValidationError("beta must lie in (0, 1)")
    return max(1, tolerant_ceil(math.log(2.0 * n / beta) / (2.0 * gamma * gamma)))


class SemiDistanceOracle:
    """Counted query surface for empirical semi-distances over one dataset.

    ``query_count`` increases by one per answered semi-distance value,
    duplicates included; ``peek_*`` accessors are for audits and tests only
    and are not counted.
    """

    def __init__(self, hclass: HypothesisClass, dataset: Dataset):
        if len(dataset) == 0:
            raise ValidationError("oracle needs a non-empty dataset")
        if dataset.domain_size != hclass.domain_size:
            raise DimensionError("dataset and hypothesis class domain sizes differ")
        self._class = hclass
        self._dataset = dataset
        self._counts = dataset.counts
        self._s = len(dataset)
        n = hclass.n
        self._matrix = np.full((n, n), np.nan, dtype=np.float64)
        self._row_done = np.zeros(n, dtype=bool)
        self._lock = threading.Lock()
        self._queries = 0

    @property
    def hypothesis_class(self) -> HypothesisClass:
        return self._class

    @property
    def dataset(self) -> Dataset:
        return self._dataset

    @property
    def sample_count(self) -> int:
        return self._s

    @property
    def query_count(self) -> int:
        return self._queries

    def reset_query_count(self) -> None:
        self._queries = 0

    def empirical_mass(self, members: Union[ScheffeSet, np.ndarray, list]) -> float:
        """Fraction of samples falling in the given set of domain points."""
        idx = members.indices if isinstance(members, ScheffeSet) else np.asarray(members, dtype=np.int64)
        if idx.size == 0:
            return 0.0
        return int(self._counts[idx].sum()) / self._s

    def _ensure_row(self, i: int) -> None:
        if self._row_done[i]:
            return
        with self._lock:
            if self._row_done[i]:
                return
            masks = self._class.row_masks(i)
            masses = self._class.row_masses(i)
            emp = (masks @ self._counts) / self._s
            self._matrix[i] = np.abs(masses - emp)
            self._row_done[i] = True

    def semidistance(self, i: int, j: int) -> float:
        """w_hat_i(H_j); one counted query."""
        i = self._class._check_index(i)
        j = self._class._check_index(j)
        self._ensure_row(i)
        self._queries += 1
        return float(self._matrix[i, j])

    def semidistance_many(self, i: int, js) -> np.ndarray:
        """w_hat_i(H_j) for each j in ``js`` (duplicates kept); len(js) counted queries."""
        i = self._class._check_index(i)
        js = np.asarray(js, dtype=np.int64)
        self._ensure_row(i)
        self._queries += int(js.size)
        return self._matrix[i, js].copy()

    def semidistance_row(self, i: int) -> np.ndarray:
        """w_hat_i(H_j) for every j; n counted queries."""
        i = self._class._check_index(i)
        self._ensure_row(i)
        self._queries += self._class.n
        return self._matrix[i].copy()

    def semidistance_col(self, j: int) -> np.ndarray:
        """w_hat_i(H_j) for every i; n counted queries."""
        j = self._class._check_index(j)
        for i in range(self._class.n):
            self._ensure_row(i)
        self._queries += self._class.n
        return self._matrix[:, j].copy()

    def peek_row(self, i: int) -> np.ndarray:
        """Uncounted row access for audits and tests."""
        i = self._class._check_index(i)
        self._ensure_row(i)
        return self._matrix[i].copy()

    def peek_matrix(self) -> np.ndarray:
        """Uncounted full matrix access for audits and tests."""
        for i in range(self._class.n):
            self._ensure_row(i)
        return self._matrix.copy()
