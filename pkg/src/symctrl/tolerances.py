"""Shared numerical tolerance policy for rank and zero decisions."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class TolerancePolicy:
    """Single source of truth for rank/zero decisions across the pipeline.

    A singular value sigma counts as nonzero iff
    ``sigma > rank_rel * max(shape) * sigma_max``.  Entrywise matrix
    comparisons use ``entry_abs``; projector and homomorphism consistency
    checks have their own slightly looser thresholds since they accumulate
    sums over the whole group.
    """

    rank_rel: float = 1e-10
    entry_abs: float = 1e-9
    idempotency: float = 1e-8
    homomorphism: float = 1e-8
    column_zero: float = 1e-9

    def rank_threshold(self, sigma_max: float, shape: tuple[int, int]) -> float:
        return self.rank_rel * max(shape) * sigma_max

    def matrix_rank(self, a: np.ndarray) -> int:
        a = np.atleast_2d(np.asarray(a))
        if a.size == 0:
            return 0
        s = np.linalg.svd(a, compute_uv=False)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.sum(s > self.rank_threshold(float(s[0]), a.shape)))

    def orth(self, a: np.ndarray) -> np.ndarray:
        """Orthonormal basis of the column space, rank decided by this policy."""
        a = np.atleast_2d(np.asarray(a))
        if a.shape[1] == 0:
            return np.zeros((a.shape[0], 0))
        u, s, _ = np.linalg.svd(a, full_matrices=False)
        if s.size == 0 or s[0] == 0.0:
            return np.zeros((a.shape[0], 0))
        r = int(np.sum(s > self.rank_threshold(float(s[0]), a.shape)))
        return u[:, :r]

    def with_overrides(self, **kwargs) -> TolerancePolicy:
        return replace(self, **kwargs)


DEFAULT_POLICY = TolerancePolicy()
