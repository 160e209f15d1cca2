"""Real matrix representations of finite permutation groups.

Built-in irreducible representations are provided for cyclic, dihedral and
symmetric groups; anything else can be imported from a JSON file carrying
one matrix per group generator.  Everything is kept over the reals: a
complex-type irrep is stored as its 2-dimensional real rotation form.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from math import cos, sin, pi
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .permgroup import (Permutation, PermutationGroup, compose, cyclic_group,
                        dihedral_group, extend_by_words, symmetric_group)
from .tableaux import orthogonal_generator_matrices, partitions, standard_tableaux
from .tolerances import DEFAULT_POLICY, TolerancePolicy

_COMMUTANT_DIM = {"real": 1, "complex": 2, "quaternionic": 4}


class RepresentationError(ValueError):
    """A representation failed a structural check."""


@dataclass
class MatrixRep:
    """A representation as a full element-to-matrix map.

    ``matrices`` is keyed by the group's element permutations; construction
    from generator images extends along element words and verifies the
    homomorphism property, reporting the first offending pair on failure.
    """

    group: PermutationGroup
    dim: int
    label: str
    matrices: dict[Permutation, np.ndarray]
    unitary_flag: bool

    @classmethod
    def from_generators(cls, group: PermutationGroup,
                        generator_matrices: Sequence[np.ndarray],
                        label: str,
                        policy: TolerancePolicy = DEFAULT_POLICY,
                        dim: int | None = None) -> MatrixRep:
        mats = [np.asarray(m, dtype=float) for m in generator_matrices]
        if len(mats) != len(group.generators):
            raise RepresentationError(
                f"{label}: got {len(mats)} generator matrices for "
                f"{len(group.generators)} generators")
        if mats:
            dim = mats[0].shape[0]
            for m in mats:
                if m.ndim != 2 or m.shape != (dim, dim):
                    raise RepresentationError(f"{label}: generator matrices must all be {dim}x{dim}")
            matrices = extend_by_words(group, mats)
        else:
            if dim is None:
                dim = 1
            matrices = {group.identity: np.eye(dim)}
        unitary = all(
            np.max(np.abs(m.T @ m - np.eye(dim))) <= policy.entry_abs for m in mats)
        rep = cls(group, dim, label, matrices, unitary)
        rep.verify_homomorphism(policy)
        return rep

    def __call__(self, perm: Permutation) -> np.ndarray:
        return self.matrices[perm]

    def generator_matrices(self) -> list[np.ndarray]:
        return [self.matrices[g] for g in self.group.generators]

    def verify_homomorphism(self, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
        """Check rho(g * gen) = rho(g) rho(gen) for every element/generator pair.

        Together with rho(identity) = I this implies the full homomorphism
        property by induction on word length.  Returns the worst mismatch.
        """
        ident = self.matrices[self.group.identity]
        err = float(np.max(np.abs(ident - np.eye(self.dim))))
        if err > policy.homomorphism:
            raise RepresentationError(f"{self.label}: identity maps to a non-identity matrix")
        worst = err
        for elem in self.group.elements:
            left = self.matrices[elem.perm]
            for gen in self.group.generators:
                product_perm = compose(elem.perm, gen)
                err = float(np.max(np.abs(
                    self.matrices[product_perm] - left @ self.matrices[gen])))
                if err > policy.homomorphism:
                    raise RepresentationError(
                        f"{self.label}: homomorphism violated at pair "
                        f"({elem.perm.to_cycles()}, {gen.to_cycles()}), max error {err:.3e}")
                worst = max(worst, err)
        return worst

    def on_group(self, target: PermutationGroup, label: str | None = None,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> MatrixRep:
        """Rebuild this representation on a group whose generators correspond
        one to one (for example a vertex action induced by the same abstract
        generators).  The homomorphism property is re-verified on the target."""
        if len(target.generators) != len(self.group.generators):
            raise RepresentationError(
                f"{self.label}: cannot transport, generator counts differ")
        return MatrixRep.from_generators(
            target, self.generator_matrices(), label or self.label, policy,
            dim=self.dim)


@dataclass
class Character:
    """Trace function of a representation, keyed by element permutation."""

    group: PermutationGroup
    values: dict[Permutation, float]

    def __call__(self, perm: Permutation) -> float:
        return self.values[perm]


def character_of(rep: MatrixRep) -> Character:
    return Character(rep.group,
                     {perm: float(np.trace(mat)) for perm, mat in rep.matrices.items()})


def commutant_dimension(rep: MatrixRep, policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Dimension of {X : X rho(g) = rho(g) X for all g}.

    Commuting with the generators is equivalent to commuting with every
    element, so the constraints are stacked over generators only and the
    null-space dimension is read off the singular values.
    """
    d = rep.dim
    gens = rep.generator_matrices()
    if not gens:
        return d * d
    eye = np.eye(d)
    blocks = [np.kron(m.T, eye) - np.kron(eye, m) for m in gens]
    stacked = np.vstack(blocks)
    return d * d - policy.matrix_rank(stacked)


def is_absolutely_irreducible(rep: MatrixRep,
                              policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    return commutant_dimension(rep, policy) == 1


def fs_indicator(char: Character, group: PermutationGroup,
                 tol: float = 1e-6) -> str:
    """Classify a real irreducible character as real/complex/quaternionic type.

    The average of chi(g^2) over the group is 1 for real type and 0 for
    complex type.  A quaternionic irrep stored in its real form carries a
    doubled complex character, so the average lands at -2 (it would be -1
    for the underlying complex character); both values map to quaternionic.
    """
    total = sum(char(compose(el.perm, el.perm)) for el in group.elements)
    s = total / group.order
    for target, name in ((1.0, "real"), (0.0, "complex"),
                         (-1.0, "quaternionic"), (-2.0, "quaternionic")):
        if abs(s - target) <= tol:
            return name
    raise RepresentationError(
        f"indicator {s:.6f} is not near 1, 0, -1 or -2; representation is likely reducible")


@dataclass
class IrrepInfo:
    """An irreducible representation with its classification data."""

    rep: MatrixRep
    character: Character
    abs_irreducible: bool
    fs_type: str

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def label(self) -> str:
        return self.rep.label

    @property
    def commutant_dim(self) -> int:
        return _COMMUTANT_DIM[self.fs_type]

    @property
    def price(self) -> int:
        """Contribution of this irrep to the actuator-count lower bound:
        the full dimension for real type, half of it otherwise."""
        if self.fs_type == "real":
            return self.dim
        if self.dim % 2:
            raise RepresentationError(
                f"{self.label}: non-real type with odd dimension {self.dim}")
        return self.dim // 2

    @classmethod
    def from_rep(cls, rep: MatrixRep, policy: TolerancePolicy = DEFAULT_POLICY,
                 strict: bool = True) -> IrrepInfo:
        char = character_of(rep)
        comm = commutant_dimension(rep, policy)
        abs_irr = comm == 1
        try:
            fs = fs_indicator(char, rep.group)
        except RepresentationError:
            if strict:
                raise
            warnings.warn(f"{rep.label}: indicator classification failed, "
                          f"representation is likely reducible")
            fs = {1: "real", 2: "complex", 4: "quaternionic"}.get(comm, "real")
        if abs_irr != (fs == "real"):
            message = (f"{rep.label}: commutant dimension {comm} conflicts with "
                       f"indicator type {fs}")
            if strict:
                raise RepresentationError(message)
            warnings.warn(message)
        return cls(rep, char, abs_irr, fs)

    def on_group(self, target: PermutationGroup,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> IrrepInfo:
        if target is self.rep.group:
            return self
        rep = self.rep.on_group(target, policy=policy)
        char = character_of(rep)
        return IrrepInfo(rep, char, self.abs_irreducible, self.fs_type)


def _rotation(theta: float) -> np.ndarray:
    return np.array([[cos(theta), -sin(theta)], [sin(theta), cos(theta)]])


def cyclic_irreps(k: int, policy: TolerancePolicy = DEFAULT_POLICY) -> list[IrrepInfo]:
    """Real irreps of the cyclic group of order k.

    Trivial, the sign representation when k is even, and floor((k-1)/2)
    planar rotation representations; the planar ones are not absolutely
    irreducible (complex type).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    group = cyclic_group(k)
    infos: list[IrrepInfo] = []
    if k == 1:
        rep = MatrixRep.from_generators(group, [], f"Z1:triv", policy, dim=1)
        infos.append(IrrepInfo.from_rep(rep, policy))
        return infos
    infos.append(IrrepInfo.from_rep(
        MatrixRep.from_generators(group, [np.eye(1)], f"Z{k}:triv", policy), policy))
    if k % 2 == 0:
        infos.append(IrrepInfo.from_rep(
            MatrixRep.from_generators(group, [-np.eye(1)], f"Z{k}:sign", policy), policy))
    for j in range(1, (k - 1) // 2 + 1):
        rep = MatrixRep.from_generators(
            group, [_rotation(2.0 * pi * j / k)], f"Z{k}:rot{j}", policy)
        infos.append(IrrepInfo.from_rep(rep, policy))
    return infos


def dihedral_irreps(k: int, policy: TolerancePolicy = DEFAULT_POLICY) -> list[IrrepInfo]:
    """Real irreps of the dihedral group of order 2k.

    One-dimensional representations are the sign patterns available on the
    rotation/reflection generators (four of them for even k, two for odd k);
    the ceil(k/2) - 1 planar representations send the rotation generator to
    a rotation by 2*pi*j/k and the reflection generator to diag(1, -1), and
    are absolutely irreducible.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    group = dihedral_group(k)
    one = np.eye(1)

    def info(mats, name):
        return IrrepInfo.from_rep(
            MatrixRep.from_generators(group, mats, name, policy), policy)

    infos = [info([one, one], f"D{k}:triv")]
    if k % 2 == 0:
        infos.append(info([-one, one], f"D{k}:rsign"))
    planar_count = (k - 1) // 2 if k % 2 else k // 2 - 1
    for j in range(1, planar_count + 1):
        infos.append(info([_rotation(2.0 * pi * j / k),
                           np.diag([1.0, -1.0])], f"D{k}:rot{j}"))
    infos.append(info([one, -one], f"D{k}:ssign"))
    if k % 2 == 0:
        infos.append(info([-one, -one], f"D{k}:rssign"))
    return infos


def symmetric_irreps(n: int, policy: TolerancePolicy = DEFAULT_POLICY) -> list[IrrepInfo]:
    """Orthogonal irreps of S_n, one per partition of n (2 <= n <= 6).

    Matrices come from the orthogonal form on standard tableaux, with
    generator matrices for the transposition (1 2) and the n-cycle.  All of
    them are absolutely irreducible and orthogonal.
    """
    if not 2 <= n <= 6:
        raise ValueError("n out of supported range 2..6")
    group = symmetric_group(n)
    infos = []
    for shape in partitions(n):
        label = f"S{n}:" + "+".join(str(p) for p in shape)
        swap, cycle = orthogonal_generator_matrices(shape)
        gens = [swap, cycle] if n > 2 else [swap]
        rep = MatrixRep.from_generators(group, gens, label, policy)
        infos.append(IrrepInfo.from_rep(rep, policy))
    return infos


def import_irreps(source: str | Path | Sequence[Mapping], group: PermutationGroup,
                  policy: TolerancePolicy = DEFAULT_POLICY) -> list[IrrepInfo]:
    """Load irreps from a JSON list of {label, dim, generator_matrices}.

    Each entry supplies one matrix per group generator, in generator order;
    matrices may be nested rows or flat row-major lists.  The homomorphism
    property is verified during extension and a violation is rejected with
    the offending pair reported.  Irreducibility is trusted but cross-checked
    through the commutant dimension, with a warning on failure.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            entries = json.load(fh)
    else:
        entries = list(source)
    if not isinstance(entries, list):
        raise RepresentationError("irrep import file must contain a JSON array")
    infos = []
    for pos, entry in enumerate(entries):
        try:
            label = str(entry["label"])
            dim = int(entry["dim"])
            raw = entry["generator_matrices"]
        except (KeyError, TypeError) as exc:
            raise RepresentationError(
                f"irrep entry {pos}: missing label/dim/generator_matrices") from exc
        mats = [_coerce_matrix(m, dim, label) for m in raw]
        rep = MatrixRep.from_generators(group, mats, label, policy, dim=dim)
        info = IrrepInfo.from_rep(rep, policy, strict=False)
        comm = commutant_dimension(rep, policy)
        if comm > 2 and rep.dim > 1:
            warnings.warn(f"{label}: commutant dimension {comm} suggests a "
                          f"reducible representation")
        infos.append(info)
    return infos


def _coerce_matrix(data, dim: int, label: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        if arr.size != dim * dim:
            raise RepresentationError(
                f"{label}: flat matrix of {arr.size} entries cannot be {dim}x{dim}")
        arr = arr.reshape(dim, dim)
    if arr.shape != (dim, dim):
        raise RepresentationError(f"{label}: matrix shape {arr.shape} is not ({dim}, {dim})")
    return arr


def unitarize(rep: MatrixRep, policy: TolerancePolicy = DEFAULT_POLICY) -> MatrixRep:
    """Equivalent orthogonal representation via Gram averaging.

    S = mean(rho(g)^T rho(g)) is symmetric positive definite and invariant,
    so conjugating by S^(1/2) produces an orthogonal representation with the
    same character.
    """
    if rep.unitary_flag:
        return rep
    gram = np.zeros((rep.dim, rep.dim))
    for mat in rep.matrices.values():
        gram += mat.T @ mat
    gram /= rep.group.order
    eigvals, eigvecs = np.linalg.eigh(gram)
    if np.any(eigvals <= 0):
        raise RepresentationError(f"{rep.label}: Gram average is not positive definite")
    root = eigvecs @ np.diag(np.sqrt(eigvals)) @ eigvecs.T
    root_inv = eigvecs @ np.diag(1.0 / np.sqrt(eigvals)) @ eigvecs.T
    gens = [root @ m @ root_inv for m in rep.generator_matrices()]
    out = MatrixRep.from_generators(rep.group, gens, rep.label, policy, dim=rep.dim)
    if not out.unitary_flag:
        raise RepresentationError(f"{rep.label}: unitarization failed")
    return out
