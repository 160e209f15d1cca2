"""Integer partitions, standard Young tableaux, and orthogonal irrep matrices
for symmetric groups.

The matrices built here (Young's orthogonal form) are real orthogonal, which
keeps every downstream projection orthogonal as well.
"""

from __future__ import annotations

from functools import lru_cache
from math import sqrt

import numpy as np


def partitions(n: int) -> list[tuple[int, ...]]:
    """All integer partitions of n in descending lexicographic order."""
    if n < 0:
        raise ValueError("n must be >= 0")

    def _gen(remaining: int, largest: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in _gen(remaining - first, first):
                yield (first,) + rest

    return list(_gen(n, n))


def _is_partition(shape: tuple[int, ...]) -> bool:
    return all(a >= b for a, b in zip(shape, shape[1:])) and all(p > 0 for p in shape)


class StandardTableau:
    """A standard filling of a Young diagram with 1..n.

    ``position[v]`` gives the (row, col) cell of value v.
    """

    def __init__(self, rows: list[list[int]]):
        self.rows = [list(r) for r in rows]
        self.shape = tuple(len(r) for r in self.rows)
        self.n = sum(self.shape)
        self.position: dict[int, tuple[int, int]] = {}
        for r, row in enumerate(self.rows):
            for c, value in enumerate(row):
                self.position[value] = (r, c)

    def content(self, value: int) -> int:
        r, c = self.position[value]
        return c - r

    def axial_distance(self, value: int) -> int:
        """content(value + 1) - content(value)."""
        return self.content(value + 1) - self.content(value)

    def swap(self, value: int) -> StandardTableau:
        """Exchange value and value + 1 (result may not be standard)."""
        rows = [list(r) for r in self.rows]
        (r1, c1), (r2, c2) = self.position[value], self.position[value + 1]
        rows[r1][c1], rows[r2][c2] = value + 1, value
        return StandardTableau(rows)

    def is_standard(self) -> bool:
        for row in self.rows:
            if any(a >= b for a, b in zip(row, row[1:])):
                return False
        for r in range(1, len(self.rows)):
            for c in range(len(self.rows[r])):
                if self.rows[r - 1][c] >= self.rows[r][c]:
                    return False
        return True

    def key(self) -> tuple[int, ...]:
        """Sort key: row indices of n, n-1, ..., 1."""
        return tuple(self.position[v][0] for v in range(self.n, 0, -1))

    def __eq__(self, other) -> bool:
        return isinstance(other, StandardTableau) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(tuple(tuple(r) for r in self.rows))

    def __repr__(self) -> str:
        return "StandardTableau(" + "/".join(
            " ".join(str(v) for v in row) for row in self.rows) + ")"


def standard_tableaux(shape: tuple[int, ...]) -> list[StandardTableau]:
    """All standard tableaux of the given shape, sorted by ``key()``.

    The sort puts tableaux whose large values sit in earlier rows first;
    any fixed order yields a valid orthogonal form, this one is simply the
    deterministic convention used throughout.
    """
    shape = tuple(int(p) for p in shape)
    if not _is_partition(shape):
        raise ValueError(f"not a partition: {shape}")
    n = sum(shape)

    results: list[StandardTableau] = []

    def grow(rows: list[list[int]], value: int):
        if value > n:
            results.append(StandardTableau(rows))
            return
        for r in range(len(shape)):
            filled = len(rows[r])
            if filled >= shape[r]:
                continue
            if r > 0 and len(rows[r - 1]) <= filled:
                continue
            rows[r].append(value)
            grow(rows, value + 1)
            rows[r].pop()

    grow([[] for _ in shape], 1)
    results.sort(key=lambda t: t.key())
    return results


@lru_cache(maxsize=None)
def _tableaux_cached(shape: tuple[int, ...]) -> tuple[StandardTableau, ...]:
    return tuple(standard_tableaux(shape))


def adjacent_transposition_matrix(shape: tuple[int, ...], i: int) -> np.ndarray:
    """Orthogonal-form matrix of the transposition (i, i+1), 1 <= i < n.

    In the standard-tableau basis the transposition acts on each tableau t
    with axial distance d = content(i+1) - content(i) as 1/d on the diagonal
    plus sqrt(1 - 1/d^2) coupling to the swapped tableau when it is standard.
    """
    tabs = _tableaux_cached(tuple(shape))
    n = tabs[0].n
    if not 1 <= i < n:
        raise ValueError(f"transposition index {i} out of range for n={n}")
    index = {t: k for k, t in enumerate(tabs)}
    dim = len(tabs)
    m = np.zeros((dim, dim))
    for k, t in enumerate(tabs):
        d = t.axial_distance(i)
        m[k, k] = 1.0 / d
        swapped = t.swap(i)
        if swapped.is_standard():
            m[index[swapped], k] = sqrt(1.0 - 1.0 / (d * d))
    return m


def orthogonal_generator_matrices(shape: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Matrices for the transposition (1 2) and the n-cycle (1 2 ... n).

    The n-cycle factors as (1 2)(2 3)...(n-1 n) composed right to left, so
    its matrix is the product of the adjacent transposition matrices in that
    order.
    """
    shape = tuple(int(p) for p in shape)
    n = sum(shape)
    if n < 2:
        raise ValueError("need n >= 2 for generator matrices")
    adjacent = [adjacent_transposition_matrix(shape, i) for i in range(1, n)]
    cycle = adjacent[0].copy()
    for m in adjacent[1:]:
        cycle = cycle @ m
    return adjacent[0], cycle


def hook_lengths(shape: tuple[int, ...]) -> list[list[int]]:
    shape = tuple(int(p) for p in shape)
    if not _is_partition(shape):
        raise ValueError(f"not a partition: {shape}")
    cols = [sum(1 for p in shape if p > c) for c in range(shape[0])]
    return [[(shape[r] - c) + (cols[c] - r) - 1 for c in range(shape[r])]
            for r in range(len(shape))]
