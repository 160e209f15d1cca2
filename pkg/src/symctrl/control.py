"""Controllability and observability tests, the symmetry lower bound on the
number of inputs, and projection-guided sparse input/output design.

State indices are 0-based inside the library; report objects carry 1-based
indices since they are user-facing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .isotypic import IsotypicDecomposition, decompose
from .network import EquivariantSystem
from .representations import IrrepInfo
from .tolerances import DEFAULT_POLICY, TolerancePolicy

RANK_METHODS = ("kalman", "subspace", "pbh")


class EnumerationCapError(RuntimeError):
    """A configuration sweep would exceed the configured cap."""


def controllability_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Horizontal stack of A^k B for k = 0..n-1."""
    a = np.asarray(a, dtype=float)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n:
        raise ValueError("incompatible shapes for controllability matrix")
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    return np.hstack(blocks)


def observability_matrix(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vertical stack of C A^k for k = 0..n-1."""
    return controllability_matrix(np.asarray(a, dtype=float).T,
                                  np.atleast_2d(np.asarray(c, dtype=float)).T).T


@dataclass
class RankReport:
    method: str
    rank: int
    n: int
    controllable: bool
    rank_rel: float
    pbh_ranks: list[tuple[complex, int]] | None = None

    def __str__(self) -> str:
        verdict = "controllable" if self.controllable else "NOT controllable"
        return f"{self.method}: rank {self.rank}/{self.n} ({verdict})"


def _subspace_rank(a: np.ndarray, b: np.ndarray, policy: TolerancePolicy) -> int:
    """Dimension of the reachable subspace by iterating V <- V + A V with
    re-orthonormalization; numerically preferred over raw Krylov stacking."""
    basis = policy.orth(b)
    while True:
        if basis.shape[1] in (0, a.shape[0]):
            return basis.shape[1]
        grown = policy.orth(np.hstack([basis, a @ basis]))
        if grown.shape[1] == basis.shape[1]:
            return basis.shape[1]
        basis = grown


def _eigenvalues(a: np.ndarray, dec: IsotypicDecomposition | None) -> np.ndarray:
    if dec is None:
        return np.linalg.eigvals(a)
    from .isotypic import block_diagonalize
    _, blocks, _ = block_diagonalize(a, dec)
    return np.concatenate([np.linalg.eigvals(blk) for blk in blocks])


def _cluster(values: np.ndarray, tol: float = 1e-8) -> list[complex]:
    """Collapse eigenvalues closer than tol so PBH tests each one once."""
    reps: list[complex] = []
    for v in values:
        if not any(abs(v - r) <= tol for r in reps):
            reps.append(complex(v))
    return reps


def pbh_rank(a: np.ndarray, b: np.ndarray, s: complex,
             policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Numerical rank of [sI - A, B] at one (complex) test point."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    b = np.asarray(b, dtype=complex).reshape(n, -1)
    return policy.matrix_rank(np.hstack([s * np.eye(n) - a, b]))


def is_controllable(a: np.ndarray, b: np.ndarray, method: str = "subspace",
                    policy: TolerancePolicy = DEFAULT_POLICY,
                    dec: IsotypicDecomposition | None = None) -> RankReport:
    """Controllability verdict by one of the three standard rank tests.

    kalman ranks the stacked Krylov matrix, subspace iterates the reachable
    subspace with re-orthonormalization (same verdict, better conditioning),
    and pbh takes the minimum rank of [lambda I - A, B] over the eigenvalues
    (from the block-diagonal form when a decomposition is supplied).
    """
    if method not in RANK_METHODS:
        raise ValueError(f"method must be one of {RANK_METHODS}, got {method!r}")
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    b = np.asarray(b, dtype=float).reshape(n, -1)
    pbh_detail = None
    if method == "kalman":
        stack = controllability_matrix(a, b)
        # powers of A spread the column scales; normalizing columns is
        # rank-invariant and keeps the singular values comparable
        norms = np.linalg.norm(stack, axis=0)
        keep = norms > 0.0
        rank = policy.matrix_rank(stack[:, keep] / norms[keep]) if keep.any() else 0
    elif method == "subspace":
        rank = _subspace_rank(a, b, policy)
    else:
        eigs = _cluster(_eigenvalues(a, dec))
        pbh_detail = [(lam, pbh_rank(a, b, lam, policy)) for lam in eigs]
        rank = min((r for _, r in pbh_detail), default=n)
    return RankReport(method, rank, n, rank == n, policy.rank_rel, pbh_detail)


def is_observable(a: np.ndarray, c: np.ndarray, method: str = "subspace",
                  policy: TolerancePolicy = DEFAULT_POLICY,
                  dec: IsotypicDecomposition | None = None) -> RankReport:
    """Observability via duality: (A, C) is observable iff (A^T, C^T) is
    controllable."""
    a = np.asarray(a, dtype=float)
    c = np.atleast_2d(np.asarray(c, dtype=float))
    return is_controllable(a.T, c.T, method, policy, dec)


def geometric_multiplicity(a: np.ndarray, lam: complex,
                           policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    """n - rank(lambda I - A)."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    return n - policy.matrix_rank(lam * np.eye(n) - a)


def n_gamma(dec: IsotypicDecomposition,
            irreps: Sequence[IrrepInfo] | None = None) -> int:
    """Lower bound on the number of input columns: the largest priced irrep
    dimension among components that actually occur.

    Real-type irreps are priced at their dimension.  Complex-type irreps are
    priced at half (their complex constituents have half the real dimension).
    Quaternionic types are also priced at half, an extrapolation that is
    surfaced as a warning.
    """
    prices = []
    for comp in dec.present_components():
        if comp.irrep.fs_type == "quaternionic":
            warnings.warn(
                f"{comp.label}: quaternionic-type pricing is an extrapolation")
        prices.append(comp.irrep.price)
    if not prices:
        raise ValueError("decomposition has no nonzero components")
    return max(prices)


@dataclass
class DesignStep:
    """One selection: the scanned transformation column and the chosen row
    (both 1-based), tagged with its component and diagonal index."""

    irrep_label: str
    mu: int
    column: int
    row: int
    added: bool

    def to_json(self) -> dict:
        return {"irrep": self.irrep_label, "mu": self.mu,
                "column": self.column, "row": self.row, "added": self.added}


@dataclass
class ControlDesign:
    """Sparse input (or sensor) selection.

    ``selected_states`` holds 1-based state indices in selection order; the
    matrix ``b`` has the corresponding canonical unit vectors as columns.
    """

    selected_states: tuple[int, ...]
    b: np.ndarray
    n_gamma: int
    controllable: bool
    rank: int
    method: str
    trace: list[DesignStep]
    mode: str = "input"

    @property
    def c(self) -> np.ndarray:
        """Output-matrix view of the selection (rows instead of columns)."""
        return self.b.T

    def to_json(self) -> dict:
        return {
            "n_gamma": self.n_gamma,
            "selected_state_indices": list(self.selected_states),
            "controllable": self.controllable,
            "rank": self.rank,
            "method": self.method,
            "mode": self.mode,
            "trace": [step.to_json() for step in self.trace],
        }


def _unit_columns(n: int, rows: Sequence[int]) -> np.ndarray:
    b = np.zeros((n, len(rows)))
    for col, row in enumerate(rows):
        b[row, col] = 1.0
    return b


def design_input_matrix(system: EquivariantSystem, dec: IsotypicDecomposition,
                        method: str = "subspace", rank_greedy: bool = False,
                        policy: TolerancePolicy | None = None,
                        mode: str = "input") -> ControlDesign:
    """Greedy sparse input selection guided by the transformation columns.

    Components are visited by price (largest first, declaration order on
    ties).  Within a component the scan starts at its first transformation
    column; each step takes the first row with an entry above tolerance that
    is not already selected, then jumps ahead by the component multiplicity.
    An absolutely irreducible component contributes as many selections as
    its dimension; other types contribute their priced count, which keeps
    the scan inside the component.  After each component the reachable
    subspace is measured and the algorithm stops once it fills the space.
    If every component has been visited without reaching full rank, the
    remaining unit vectors are tried in index order (only rank-increasing
    ones are kept); a design that still falls short is returned with
    ``controllable=False``.

    With ``rank_greedy`` a candidate unit vector that does not grow the
    reachable subspace is skipped instead of added.
    """
    policy = policy or system.policy
    a = system.a
    n = system.state_dim
    t = dec.basis_matrix
    selected: list[int] = []
    trace: list[DesignStep] = []

    def current_rank() -> int:
        if not selected:
            return 0
        return _subspace_rank(a, _unit_columns(n, selected), policy)

    ordered = sorted(dec.present_components(),
                     key=lambda c: (-c.irrep.price, c.index))
    bound = max((c.irrep.price for c in ordered), default=0)
    rank = 0
    for comp in ordered:
        if not comp.irrep.abs_irreducible:
            warnings.warn(f"{comp.label}: selection count for a non-absolutely "
                          f"irreducible component is an extrapolation")
        selections = comp.irrep.dim if comp.irrep.abs_irreducible else comp.irrep.price
        col = comp.col_start
        end = comp.col_start + comp.iso_dim
        added_for_comp = 0
        while added_for_comp < selections and col < end:
            column = t[:, col]
            mu = ((col - comp.col_start) // comp.multiplicity + 1
                  if comp.irrep.abs_irreducible else 1)
            row = _first_free_row(column, selected, policy.column_zero)
            if row is None:
                col += comp.multiplicity
                continue
            added = True
            if rank_greedy and selected:
                gained = _subspace_rank(
                    a, _unit_columns(n, selected + [row]), policy)
                if gained <= rank:
                    added = False
            if added:
                selected.append(row)
                rank = current_rank()
                added_for_comp += 1
            trace.append(DesignStep(comp.label, mu, col + 1, row + 1, added))
            col += comp.multiplicity
        if rank == n:
            break

    if rank < n:
        # Worst case: fall back to scanning the remaining unit vectors.
        for row in range(n):
            if rank == n:
                break
            if row in selected:
                continue
            gained = _subspace_rank(a, _unit_columns(n, selected + [row]), policy)
            if gained > rank:
                selected.append(row)
                trace.append(DesignStep("fallback", 0, 0, row + 1, True))
                rank = gained

    b = _unit_columns(n, selected)
    verdict = is_controllable(a, b, method, policy, dec)
    return ControlDesign(tuple(r + 1 for r in selected), b, bound,
                         verdict.controllable, verdict.rank, method, trace, mode)


def _first_free_row(column: np.ndarray, taken: Sequence[int],
                    tol: float) -> int | None:
    for row, value in enumerate(column):
        if abs(value) > tol and row not in taken:
            return row
    return None


def design_output_matrix(system: EquivariantSystem, irreps: Sequence[IrrepInfo],
                         method: str = "subspace", rank_greedy: bool = False,
                         policy: TolerancePolicy | None = None) -> ControlDesign:
    """Sensor selection via duality: run the input design on the transposed
    system (decomposed afresh, since its adapted subspaces are the
    transposes) and read the result as C = B^T."""
    policy = policy or system.policy
    transposed = system.transposed()
    dec = decompose(transposed, irreps, policy)
    return design_input_matrix(transposed, dec, method, rank_greedy, policy,
                               mode="output")


def check_em_condition(dec: IsotypicDecomposition, component_index: int,
                       mu: int, state: int, tol: float | None = None) -> bool:
    """Whether the unit vector at ``state`` (0-based) meets the component's
    diagonal projection: the projected vector is nonzero.  Cross-checked
    against the equivalent criterion that the state's transformation row has
    an entry above tolerance inside the block's columns."""
    comp = dec.components[component_index]
    if not comp.present:
        return False
    tol = dec.policy.column_zero if tol is None else tol
    projection = comp.sa_projections[mu - 1] if comp.irrep.abs_irreducible \
        else comp.projection
    direct = float(np.linalg.norm(projection[:, state])) > tol
    span = next(s for s in dec.spans
                if s.component == component_index and s.mu == mu)
    row = dec.basis_matrix[state, span.start:span.start + span.size]
    via_row = bool(np.any(np.abs(row) > tol))
    if direct != via_row:
        raise ValueError(
            f"{comp.label} mu={mu} state={state + 1}: projection test "
            f"({direct}) disagrees with transformation-row test ({via_row})")
    return direct


def enumerate_input_configs(system: EquivariantSystem, k: int,
                            method: str = "subspace",
                            cap: int = 1_000_000,
                            policy: TolerancePolicy | None = None
                            ) -> list[tuple[tuple[int, ...], bool]]:
    """Test every k-subset of state indices as an input configuration.

    Subsets are visited in lexicographic order and reported 1-based.  Raises
    EnumerationCapError when the subset count would exceed the cap.
    """
    policy = policy or system.policy
    n = system.state_dim
    if not 0 < k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    total = comb(n, k)
    if total > cap:
        raise EnumerationCapError(
            f"{total} configurations exceed the cap of {cap}")
    results = []
    for subset in combinations(range(n), k):
        report = is_controllable(system.a, _unit_columns(n, subset),
                                 method, policy)
        results.append((tuple(i + 1 for i in subset), report.controllable))
    return results
