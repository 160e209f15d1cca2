"""Networked linear systems: assembly of the state matrix, lifting of node
permutations to state space, equivariance checks and example graphs.

Convention: block A[i][j] multiplies the state of node j in node i's
equation, so an edge (from, to, label) contributes its coupling block at
block row ``to``, block column ``from``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .permgroup import (Permutation, PermutationGroup, closure, compose,
                        perm_from_spec)
from .tolerances import DEFAULT_POLICY, TolerancePolicy


class NetworkError(ValueError):
    """Invalid network description."""


class EquivarianceError(ValueError):
    """The state matrix does not commute with the declared group action."""


@dataclass(eq=False)
class NetworkSpec:
    """Nodes with identical d-dimensional internal dynamics plus labeled
    coupling blocks on directed edges.  Edges are 0-based (from, to, label)."""

    node_count: int
    node_dim: int
    internal_block: np.ndarray
    coupling_labels: dict[str, np.ndarray]
    edges: list[tuple[int, int, str]]
    name: str = "network"

    def __post_init__(self):
        d = int(self.node_dim)
        if self.node_count < 1 or d < 1:
            raise NetworkError("node_count and node_dim must be positive")
        self.internal_block = _block("internal_block", self.internal_block, d)
        self.coupling_labels = {
            str(k): _block(k, v, d) for k, v in self.coupling_labels.items()}
        seen = set()
        edges = []
        for edge in self.edges:
            src, dst, label = int(edge[0]), int(edge[1]), str(edge[2])
            if not (0 <= src < self.node_count and 0 <= dst < self.node_count):
                raise NetworkError(f"edge ({src}, {dst}) out of range")
            if src == dst:
                raise NetworkError("self couplings belong in internal_block")
            if label not in self.coupling_labels:
                raise NetworkError(f"edge label {label!r} does not resolve")
            if (src, dst) in seen:
                raise NetworkError(f"duplicate edge ({src}, {dst})")
            seen.add((src, dst))
            edges.append((src, dst, label))
        self.edges = edges

    @property
    def state_dim(self) -> int:
        return self.node_count * self.node_dim


def _block(name: str, value, d: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (d, d):
        raise NetworkError(f"{name}: expected a {d}x{d} block, got shape {arr.shape}")
    return arr


def assemble(spec: NetworkSpec) -> np.ndarray:
    """State matrix with the internal block on the diagonal and each edge's
    coupling block at block position (to, from)."""
    d = spec.node_dim
    n = spec.state_dim
    a = np.zeros((n, n))
    for i in range(spec.node_count):
        a[i * d:(i + 1) * d, i * d:(i + 1) * d] = spec.internal_block
    for src, dst, label in spec.edges:
        a[dst * d:(dst + 1) * d, src * d:(src + 1) * d] = spec.coupling_labels[label]
    return a


def lift(perm: Permutation, node_dim: int) -> np.ndarray:
    """Node permutation lifted to state space: permutation matrix Kronecker
    the node-dimensional identity."""
    return np.kron(perm.matrix(), np.eye(node_dim))


@dataclass
class EquivarianceReport:
    max_violation: float
    tol: float
    passed: bool
    worst_label: str | None
    worst_entry: tuple[int, int] | None

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        where = ""
        if self.worst_label is not None and self.worst_entry is not None:
            where = (f" (worst: {self.worst_label} at entry "
                     f"({self.worst_entry[0] + 1}, {self.worst_entry[1] + 1}))")
        return f"equivariance {status}: max violation {self.max_violation:.3e}{where}"


def check_equivariance(a: np.ndarray,
                       action: Mapping[Permutation | str, np.ndarray],
                       tol: float = DEFAULT_POLICY.entry_abs) -> EquivarianceReport:
    """Max-norm commutation defect of A against the given action matrices.

    Checking the generators is enough: if A commutes with them it commutes
    with all their products.  Pass the full element map for a diagnostic
    whole-group sweep.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NetworkError("A must be square")
    worst = 0.0
    worst_label = None
    worst_entry = None
    for key, mat in action.items():
        mat = np.asarray(mat, dtype=float)
        if mat.shape != a.shape:
            raise NetworkError("action matrix size does not match A")
        defect = np.abs(mat @ a - a @ mat)
        value = float(defect.max()) if defect.size else 0.0
        if value > worst:
            worst = value
            worst_label = key.to_cycles() if isinstance(key, Permutation) else str(key)
            worst_entry = tuple(int(v) for v in np.unravel_index(defect.argmax(), defect.shape))
    return EquivarianceReport(worst, tol, worst <= tol, worst_label, worst_entry)


class EquivariantSystem:
    """A state matrix together with a node-permutation group lifted to state
    space.  Equivariance against the generators is enforced at construction
    unless explicitly disabled."""

    def __init__(self, a: np.ndarray, group: PermutationGroup, node_dim: int = 1,
                 policy: TolerancePolicy = DEFAULT_POLICY, check: bool = True,
                 spec: NetworkSpec | None = None):
        a = np.asarray(a, dtype=float)
        n = group.degree * node_dim
        if a.shape != (n, n):
            raise NetworkError(
                f"A has shape {a.shape} but the lifted action lives on R^{n}")
        self.a = a
        self.group = group
        self.node_dim = int(node_dim)
        self.policy = policy
        self.spec = spec
        self.lifted_action: dict[Permutation, np.ndarray] = {
            el.perm: lift(el.perm, node_dim) for el in group.elements}
        if check:
            report = self.equivariance_report(full=False)
            if not report.passed:
                raise EquivarianceError(str(report))

    @property
    def state_dim(self) -> int:
        return self.a.shape[0]

    @classmethod
    def from_spec(cls, spec: NetworkSpec, group: PermutationGroup,
                  policy: TolerancePolicy = DEFAULT_POLICY,
                  check: bool = True) -> EquivariantSystem:
        if group.degree != spec.node_count:
            raise NetworkError(
                f"group degree {group.degree} != node count {spec.node_count}")
        return cls(assemble(spec), group, spec.node_dim, policy, check, spec)

    def equivariance_report(self, full: bool = False,
                            tol: float | None = None) -> EquivarianceReport:
        tol = self.policy.entry_abs if tol is None else tol
        if full:
            action = self.lifted_action
        else:
            action = {g: lift(g, self.node_dim) for g in self.group.generators}
        return check_equivariance(self.a, action, tol)

    def transposed(self) -> EquivariantSystem:
        """System with A transposed; A^T commutes with the same lifted group
        because transposing gamma A = A gamma gives the condition for the
        inverse elements, which run over the same set."""
        return EquivariantSystem(self.a.T, self.group, self.node_dim,
                                 self.policy, check=False, spec=None)


# Petersen graph: vertex v carries a 2-subset of {1..5}; vertices are
# adjacent iff their subsets are disjoint.  The numbering below matches the
# usual drawing with the outer 5-cycle 1..5 and inner pentagram 6..10.
PETERSEN_SUBSETS: tuple[tuple[int, int], ...] = (
    (1, 2), (3, 4), (1, 5), (2, 3), (4, 5),
    (3, 5), (2, 5), (2, 4), (1, 4), (1, 3))


def induced_subset_permutation(perm: Permutation,
                               subsets: Sequence[frozenset[int]]) -> Permutation:
    """Vertex permutation induced by a symbol permutation acting elementwise
    on the vertices' assigned subsets (0-based symbols)."""
    lookup = {s: i for i, s in enumerate(subsets)}
    images = []
    for s in subsets:
        target = frozenset(perm(x) for x in s)
        if target not in lookup:
            raise NetworkError("symbol permutation does not preserve the subset family")
        images.append(lookup[target])
    return Permutation(tuple(images))


def petersen(b: float = 0.0, c: float = 1.0) -> tuple[NetworkSpec, PermutationGroup]:
    """Petersen graph network with internal scalar b and coupling scalar c,
    plus its automorphism group (order 120) acting on the 10 vertices.

    The group is generated by the vertex actions induced by the symbol
    transposition (1 2) and the symbol 5-cycle (1 2 3 4 5).
    """
    subsets = [frozenset(x - 1 for x in pair) for pair in PETERSEN_SUBSETS]
    edges = [(i, j, "c")
             for i in range(10) for j in range(10)
             if i != j and not (subsets[i] & subsets[j])]
    spec = NetworkSpec(10, 1, np.array([[float(b)]]),
                       {"c": np.array([[float(c)]])}, edges, name="petersen")
    swap = Permutation((1, 0, 2, 3, 4))
    cycle = Permutation((1, 2, 3, 4, 0))
    generators = [induced_subset_permutation(p, subsets) for p in (swap, cycle)]
    return spec, closure(generators)


def network_from_json(data: Mapping | str | Path
                      ) -> tuple[NetworkSpec, PermutationGroup, dict]:
    """Parse the network spec JSON schema.

    Returns the network, the node-permutation group (closure of the vertex
    action, or of the generators when no separate vertex action is given)
    and the raw ``group`` metadata dict, which may carry an ``irreps``
    family hint.  All indices and cycle strings in the file are 1-based.
    """
    if isinstance(data, (str, Path)):
        with open(data, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    if "builtin" in data:
        return _builtin_network(data)
    try:
        node_count = int(data["node_count"])
        node_dim = int(data["node_dim"])
        internal = data["internal_block"]
        couplings = data["coupling_labels"]
        edges_raw = data["edges"]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"network spec missing field: {exc}") from exc
    edges = []
    for pos, edge in enumerate(edges_raw):
        if len(edge) != 3:
            raise NetworkError(f"edge {pos}: expected [from, to, label]")
        edges.append((int(edge[0]) - 1, int(edge[1]) - 1, str(edge[2])))
    spec = NetworkSpec(node_count, node_dim, internal,
                       {str(k): v for k, v in couplings.items()}, edges,
                       name=str(data.get("name", "network")))
    group_data = dict(data.get("group", {}))
    gen_specs = group_data.get("vertex_action") or group_data.get("generators") or []
    generators = [perm_from_spec(g, node_count) for g in gen_specs]
    group = closure(generators) if generators else closure([], degree=node_count)
    return spec, group, group_data


def _builtin_network(data: Mapping) -> tuple[NetworkSpec, PermutationGroup, dict]:
    kind = str(data["builtin"])
    if kind == "petersen":
        spec, group = petersen(float(data.get("b", 0.0)), float(data.get("c", 1.0)))
        meta = dict(data.get("group", {}))
        meta.setdefault("irreps", {"family": "symmetric", "order": 5})
        return spec, group, meta
    raise NetworkError(f"unknown builtin network {kind!r}")


def network_to_json(spec: NetworkSpec, group: PermutationGroup | None = None,
                    group_meta: Mapping | None = None) -> dict:
    out = {
        "name": spec.name,
        "node_count": spec.node_count,
        "node_dim": spec.node_dim,
        "internal_block": spec.internal_block.tolist(),
        "coupling_labels": {k: v.tolist() for k, v in spec.coupling_labels.items()},
        "edges": [[src + 1, dst + 1, label] for src, dst, label in spec.edges],
    }
    if group_meta is not None:
        out["group"] = dict(group_meta)
    elif group is not None:
        out["group"] = {"generators": [g.to_cycles() for g in group.generators]}
    return out
