"""Isotypic and symmetry-adapted decompositions of equivariant matrices.

For each irreducible representation the group-averaged projection carves out
the isotypic component; for absolutely irreducible representations the
diagonal-entry projections refine it further into isomorphic invariant
subspaces, giving the change of basis that block-diagonalizes the system
matrix with repeated blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .network import EquivariantSystem
from .permgroup import Permutation
from .representations import IrrepInfo
from .tolerances import DEFAULT_POLICY, TolerancePolicy


class DecompositionError(ValueError):
    """The decomposition is structurally inconsistent."""


class IncompleteIrrepsError(DecompositionError):
    """The supplied irreps do not account for the whole space."""

    def __init__(self, residual: int, total: int, n: int):
        self.residual = residual
        super().__init__(
            f"isotypic dimensions sum to {total} but the space has dimension "
            f"{n}; {residual} dimensions are unaccounted for (irrep list "
            f"incomplete or wrong group)")


def isotypic_projection(irrep: IrrepInfo,
                        action: Mapping[Permutation, np.ndarray]) -> np.ndarray:
    """Group-averaged projection onto the isotypic component of an irrep.

    The character-weighted average is scaled by dim/|G|; dividing further by
    the commutant dimension keeps the result idempotent for irreps that are
    not absolutely irreducible (their character is that of two complex
    constituents).
    """
    group = irrep.rep.group
    n = next(iter(action.values())).shape[0]
    acc = np.zeros((n, n))
    for el in group.elements:
        chi = irrep.character(el.perm)
        if chi != 0.0:
            acc += chi * action[el.perm]
    scale = irrep.dim / (irrep.commutant_dim * group.order)
    return scale * acc


def sa_projection(irrep: IrrepInfo, action: Mapping[Permutation, np.ndarray],
                  mu: int) -> np.ndarray:
    """Symmetry-adapted projection for diagonal index mu (1-based).

    Weights each group element by the (mu, mu) entry of the irrep matrix of
    its inverse.  Orthogonal whenever the irrep is unitary.
    """
    if not 1 <= mu <= irrep.dim:
        raise ValueError(f"mu must be in 1..{irrep.dim}, got {mu}")
    group = irrep.rep.group
    n = next(iter(action.values())).shape[0]
    acc = np.zeros((n, n))
    for el in group.elements:
        weight = irrep.rep(el.perm.inverse())[mu - 1, mu - 1]
        if weight != 0.0:
            acc += weight * action[el.perm]
    return (irrep.dim / group.order) * acc


def basis_of_image(p: np.ndarray, policy: TolerancePolicy = DEFAULT_POLICY,
                   tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of range(P) for an (approximately) idempotent P.

    Deterministic construction: P's columns are orthogonalized with pivoting
    on the largest residual norm, ties resolved by the lowest column index.
    The number of columns returned is the numerical rank of P.
    """
    p = np.asarray(p, dtype=float)
    tol = policy.idempotency if tol is None else tol
    defect = float(np.max(np.abs(p @ p - p))) if p.size else 0.0
    if defect > tol:
        raise DecompositionError(f"matrix is not idempotent within {tol:.1e} "
                                 f"(defect {defect:.3e})")
    n = p.shape[0]
    rank = policy.matrix_rank(p)
    if rank == 0:
        return np.zeros((n, 0))
    residual = p.copy()
    basis = np.zeros((n, rank))
    for col in range(rank):
        norms = np.linalg.norm(residual, axis=0)
        pivot = int(np.argmax(norms))
        q = residual[:, pivot] / norms[pivot]
        if col:
            q = q - basis[:, :col] @ (basis[:, :col].T @ q)
            q = q / np.linalg.norm(q)
        basis[:, col] = q
        residual -= np.outer(q, q @ residual)
    return basis


@dataclass
class Component:
    """Per-irrep slice of a decomposition.

    ``iso_dim`` is the dimension of the isotypic component and
    ``multiplicity`` how many copies of the irrep it stacks.  For absolutely
    irreducible irreps ``basis_blocks`` holds one n-by-multiplicity block per
    diagonal index; otherwise a single block spanning the whole component.
    ``col_start`` is the component's first column in the transformation
    (or -1 when the component is absent).
    """

    index: int
    irrep: IrrepInfo
    projection: np.ndarray
    iso_dim: int
    multiplicity: int
    sa_projections: list[np.ndarray]
    basis_blocks: list[np.ndarray]
    col_start: int

    @property
    def label(self) -> str:
        return self.irrep.label

    @property
    def present(self) -> bool:
        return self.iso_dim > 0


@dataclass(frozen=True)
class BlockSpan:
    """Half-open column/row range [start, start + size) of one diagonal block."""

    component: int
    mu: int
    start: int
    size: int


@dataclass
class IsotypicDecomposition:
    components: list[Component]
    basis_matrix: np.ndarray
    spans: list[BlockSpan]
    orthogonal: bool
    policy: TolerancePolicy

    @property
    def dim(self) -> int:
        return self.basis_matrix.shape[0]

    def component_by_label(self, label: str) -> Component:
        for comp in self.components:
            if comp.label == label:
                return comp
        raise KeyError(label)

    def present_components(self) -> list[Component]:
        return [c for c in self.components if c.present]

    def spans_of(self, component_index: int) -> list[BlockSpan]:
        return [s for s in self.spans if s.component == component_index]

    def embedding_matrix(self, component_index: int, mu: int) -> np.ndarray:
        """Basis block placed at its global column position, zero elsewhere
        (n x n); multiplying it by a coordinate vector picks out the block's
        contribution."""
        comp = self.components[component_index]
        span = next(s for s in self.spans
                    if s.component == component_index and s.mu == mu)
        out = np.zeros_like(self.basis_matrix)
        block = comp.basis_blocks[mu - 1] if comp.irrep.abs_irreducible \
            else comp.basis_blocks[0]
        out[:, span.start:span.start + span.size] = block
        return out


def decompose(system: EquivariantSystem, irreps: Sequence[IrrepInfo],
              policy: TolerancePolicy | None = None) -> IsotypicDecomposition:
    """Full decomposition of the system's state space.

    Irreps whose projection vanishes are recorded with iso_dim 0 and excluded
    from the transformation.  Raises IncompleteIrrepsError when the isotypic
    dimensions do not exhaust the space, and DecompositionError on any rank
    or consistency defect.
    """
    policy = policy or system.policy
    action = system.lifted_action
    n = system.state_dim
    labels = [info.label for info in irreps]
    if len(set(labels)) != len(labels):
        raise DecompositionError("irrep labels must be distinct")

    components: list[Component] = []
    spans: list[BlockSpan] = []
    columns: list[np.ndarray] = []
    offset = 0
    for idx, info in enumerate(irreps):
        info = info.on_group(system.group, policy)
        proj = isotypic_projection(info, action)
        trace = float(np.trace(proj))
        iso_dim = int(round(trace))
        if abs(trace - iso_dim) > 1e-6:
            raise DecompositionError(
                f"{info.label}: projection trace {trace:.6f} is not an integer")
        if iso_dim == 0:
            components.append(Component(idx, info, proj, 0, 0, [], [], -1))
            continue
        if iso_dim % info.dim:
            raise DecompositionError(
                f"{info.label}: isotypic dimension {iso_dim} is not a multiple "
                f"of the irrep dimension {info.dim}")
        mult = iso_dim // info.dim
        sa_projs = [sa_projection(info, action, mu) for mu in range(1, info.dim + 1)]
        col_start = offset
        blocks: list[np.ndarray] = []
        if info.abs_irreducible:
            for mu, sp in enumerate(sa_projs, start=1):
                block = basis_of_image(sp, policy)
                if block.shape[1] != mult:
                    raise DecompositionError(
                        f"{info.label}: diagonal projection {mu} has rank "
                        f"{block.shape[1]}, expected multiplicity {mult}")
                blocks.append(block)
                spans.append(BlockSpan(idx, mu, offset, mult))
                columns.append(block)
                offset += mult
        else:
            # No diagonal refinement without absolute irreducibility: the
            # whole component stays one invariant block.
            block = basis_of_image(proj, policy)
            if block.shape[1] != iso_dim:
                raise DecompositionError(
                    f"{info.label}: projection rank {block.shape[1]} != trace {iso_dim}")
            blocks.append(block)
            spans.append(BlockSpan(idx, 1, offset, iso_dim))
            columns.append(block)
            offset += iso_dim
        components.append(Component(idx, info, proj, iso_dim, mult,
                                    sa_projs, blocks, col_start))

    total = sum(c.iso_dim for c in components)
    if total != n:
        raise IncompleteIrrepsError(n - total, total, n)
    basis = np.hstack(columns) if columns else np.zeros((n, 0))
    gram_defect = float(np.max(np.abs(basis.T @ basis - np.eye(n))))
    orthogonal = gram_defect <= max(policy.entry_abs, 1e-9)
    all_unitary = all(c.irrep.rep.unitary_flag for c in components if c.present)
    if all_unitary and not orthogonal:
        raise DecompositionError(
            f"basis is not orthogonal (defect {gram_defect:.3e}) although all "
            f"representations are unitary")
    return IsotypicDecomposition(components, basis, spans, orthogonal, policy)


def with_imported_basis(dec: IsotypicDecomposition, t: np.ndarray,
                        tol: float | None = None) -> IsotypicDecomposition:
    """Rebuild the decomposition around an externally supplied orthonormal
    basis with the same block layout (golden bases printed in references, or
    exported from other tools).

    The matrix must be orthogonal and each block's columns must lie inside
    the matching isotypic component.  Diagonal projections of absolutely
    irreducible components are re-derived from the imported blocks (the
    orthogonal projectors onto their spans), which keeps every downstream
    consistency check coherent with the imported basis.
    """
    t = np.asarray(t, dtype=float)
    n = dec.dim
    tol = dec.policy.idempotency if tol is None else tol
    if t.shape != (n, n):
        raise DecompositionError(f"imported basis has shape {t.shape}, expected ({n}, {n})")
    gram_defect = float(np.max(np.abs(t.T @ t - np.eye(n))))
    if gram_defect > tol:
        raise DecompositionError(
            f"imported basis is not orthogonal (defect {gram_defect:.3e})")
    components = []
    for comp in dec.components:
        if not comp.present:
            components.append(Component(comp.index, comp.irrep, comp.projection,
                                        0, 0, [], [], -1))
            continue
        spans = [s for s in dec.spans if s.component == comp.index]
        blocks = []
        for span in spans:
            block = t[:, span.start:span.start + span.size]
            defect = float(np.max(np.abs(comp.projection @ block - block)))
            if defect > tol:
                raise DecompositionError(
                    f"{comp.label}: imported columns {span.start + 1}.."
                    f"{span.start + span.size} leave the isotypic component "
                    f"(defect {defect:.3e})")
            blocks.append(block)
        if comp.irrep.abs_irreducible:
            sa_projs = [b @ b.T for b in blocks]
        else:
            sa_projs = list(comp.sa_projections)
        components.append(Component(comp.index, comp.irrep, comp.projection,
                                    comp.iso_dim, comp.multiplicity, sa_projs,
                                    blocks, comp.col_start))
    return IsotypicDecomposition(components, t, list(dec.spans), True, dec.policy)


def block_diagonalize(a: np.ndarray, dec: IsotypicDecomposition,
                      tol: float | None = None
                      ) -> tuple[np.ndarray, list[np.ndarray], float]:
    """Change of basis to the decomposition's coordinates.

    Returns the transformed matrix, the list of diagonal blocks (one per
    span, in span order) and the largest entry outside the blocks.  A
    residual above the tolerance means the matrix and the decomposition are
    inconsistent (for example A is not equivariant) and raises.
    """
    a = np.asarray(a, dtype=float)
    tol = dec.policy.entry_abs if tol is None else tol
    t = dec.basis_matrix
    if dec.orthogonal:
        transformed = t.T @ a @ t
    else:
        transformed = np.linalg.solve(t, a @ t)
    mask = np.ones(transformed.shape, dtype=bool)
    for span in dec.spans:
        mask[span.start:span.start + span.size,
             span.start:span.start + span.size] = False
    off_residual = float(np.max(np.abs(transformed[mask]))) if mask.any() else 0.0
    if off_residual > tol:
        raise DecompositionError(
            f"off-block residual {off_residual:.3e} exceeds {tol:.1e}; "
            f"matrix and decomposition are inconsistent")
    blocks = [transformed[s.start:s.start + s.size,
                          s.start:s.start + s.size].copy() for s in dec.spans]
    return transformed, blocks, off_residual


@dataclass
class BlockIsomorphyReport:
    per_component: dict[str, float]
    max_discrepancy: float

    def passed(self, tol: float) -> bool:
        return self.max_discrepancy <= tol


def verify_block_isomorphy(dec: IsotypicDecomposition,
                           blocks: Sequence[np.ndarray]) -> BlockIsomorphyReport:
    """Compare characteristic polynomials of the repeated blocks of each
    absolutely irreducible component; reports the worst coefficient gap."""
    by_component: dict[int, list[np.ndarray]] = {}
    for span, block in zip(dec.spans, blocks):
        by_component.setdefault(span.component, []).append(block)
    per: dict[str, float] = {}
    worst = 0.0
    for idx, comp_blocks in by_component.items():
        comp = dec.components[idx]
        if len(comp_blocks) < 2:
            per[comp.label] = 0.0
            continue
        polys = [np.poly(b) for b in comp_blocks]
        gap = max(float(np.max(np.abs(p - polys[0]))) for p in polys[1:])
        per[comp.label] = gap
        worst = max(worst, gap)
    return BlockIsomorphyReport(per, worst)


def invariance_residual(dec: IsotypicDecomposition, a: np.ndarray) -> float:
    """Worst-case norm of (I - P) A B over all diagonal blocks, using the
    component's own (possibly oblique) projections."""
    a = np.asarray(a, dtype=float)
    eye = np.eye(a.shape[0])
    worst = 0.0
    for comp in dec.present_components():
        if comp.irrep.abs_irreducible:
            pairs = zip(comp.sa_projections, comp.basis_blocks)
        else:
            pairs = [(comp.projection, comp.basis_blocks[0])]
        for proj, block in pairs:
            residual = (eye - proj) @ a @ block
            if residual.size:
                worst = max(worst, float(np.max(np.abs(residual))))
    return worst


def decomposition_to_json(dec: IsotypicDecomposition,
                          a: np.ndarray | None = None) -> dict:
    """Machine-readable report; includes block matrices when A is supplied."""
    irreps = [{"label": c.label, "n_i": c.irrep.dim, "d_i": c.multiplicity,
               "m_i": c.iso_dim, "type": c.irrep.fs_type}
              for c in dec.components]
    out: dict = {
        "irreps": irreps,
        "T": dec.basis_matrix.tolist(),
        "blocks": [{"label": dec.components[s.component].label, "mu": s.mu,
                    "start": s.start + 1, "size": s.size} for s in dec.spans],
        "residuals": {
            "orthogonality": float(np.max(np.abs(
                dec.basis_matrix.T @ dec.basis_matrix - np.eye(dec.dim)))),
        },
    }
    if a is not None:
        transformed, blocks, off = block_diagonalize(a, dec)
        for entry, block in zip(out["blocks"], blocks):
            entry["matrix"] = block.tolist()
        out["residuals"]["off_block"] = off
    return out


def basis_matrix_from_json(source: str | Path | Mapping) -> np.ndarray:
    """Load a transformation matrix from a decomposition report (or any JSON
    object with a "T" key, or a bare nested list)."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            source = json.load(fh)
    data = source["T"] if isinstance(source, Mapping) else source
    t = np.asarray(data, dtype=float)
    if t.ndim != 2:
        raise DecompositionError("transformation must be a matrix")
    return t
