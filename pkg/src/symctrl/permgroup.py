"""Finite permutation groups: elements, BFS closure, and generator words.

Points are 0-based internally; cycle-notation strings and JSON payloads are
1-based.  Every enumerated element carries the generator word that produced
it, which is what lets generator-defined data (irrep matrices, induced
vertex actions) extend to the whole group.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

DEFAULT_CLOSURE_CAP = 100_000

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class DegreeMismatchError(ValueError):
    """Operands act on different point sets."""


class EnumerationOverflowError(RuntimeError):
    """Group closure exceeded the configured element cap."""


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0, ..., m-1} stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")

    @staticmethod
    def identity(degree: int) -> Permutation:
        return Permutation(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def is_identity(self) -> bool:
        return all(img == pt for pt, img in enumerate(self.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for src, dst in enumerate(self.images):
            inv[dst] = src
        return Permutation(tuple(inv))

    def matrix(self) -> np.ndarray:
        """Permutation matrix M with M[p(j), j] = 1, so that M_p M_q = M_{p o q}."""
        m = np.zeros((self.degree, self.degree))
        for j, i in enumerate(self.images):
            m[i, j] = 1.0
        return m

    def to_cycles(self) -> str:
        """1-based cycle notation; the identity renders as "()"."""
        seen = [False] * self.degree
        parts = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cycle = [start]
            seen[start] = True
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen[point] = True
                point = self.images[point]
            parts.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
        return "".join(parts) if parts else "()"

    def __repr__(self) -> str:
        return f"Permutation[{self.to_cycles()}, degree={self.degree}]"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Function composition: (a o b)(x) = a(b(x))."""
    if a.degree != b.degree:
        raise DegreeMismatchError(f"degrees differ: {a.degree} vs {b.degree}")
    return Permutation(tuple(a.images[b.images[x]] for x in range(a.degree)))


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation such as "(3 7)(4 10)(8 9)".

    Points may be separated by spaces or commas.  Cycles are composed right
    to left (rightmost cycle acts first); for the usual disjoint cycles the
    order is irrelevant.  "()" denotes the identity.
    """
    body = text.strip()
    if body in ("", "()", "e", "id"):
        return Permutation.identity(degree)
    body = body.replace(",", " ")
    chunks = _CYCLE_RE.findall(body)
    leftover = _CYCLE_RE.sub("", body).strip()
    if leftover or not chunks:
        raise ValueError(f"unparsable cycle notation: {text!r}")
    result = Permutation.identity(degree)
    for chunk in reversed(chunks):
        points = [int(tok) for tok in chunk.split()]
        if not points:
            continue
        if any(p < 1 or p > degree for p in points):
            raise ValueError(f"cycle point out of range 1..{degree} in {text!r}")
        if len(set(points)) != len(points):
            raise ValueError(f"repeated point inside one cycle in {text!r}")
        images = list(range(degree))
        for cur, nxt in zip(points, points[1:] + points[:1]):
            images[cur - 1] = nxt - 1
        result = compose(Permutation(tuple(images)), result)
    return result


def perm_from_spec(value: str | Sequence[int], degree: int) -> Permutation:
    """Accept either a 1-based cycle string or a 1-based image array."""
    if isinstance(value, str):
        return parse_cycles(value, degree)
    images = [int(v) for v in value]
    if len(images) != degree:
        raise ValueError(f"image array of length {len(images)} for degree {degree}")
    return Permutation(tuple(v - 1 for v in images))


@dataclass(frozen=True)
class GroupElement:
    """A group element together with a generator word producing it.

    Word entries are generator indices; a negative entry ``-(i + 1)`` stands
    for the inverse of generator ``i``.  BFS closure only emits nonnegative
    entries, but evaluation supports both.
    """

    perm: Permutation
    word: tuple[int, ...]


class PermutationGroup:
    """A finite permutation group enumerated in deterministic BFS order."""

    def __init__(self, degree: int, generators: Sequence[Permutation],
                 elements: Sequence[GroupElement]):
        self.degree = int(degree)
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self._index: dict[Permutation, int] = {
            el.perm: k for k, el in enumerate(self.elements)
        }
        if len(self._index) != len(self.elements):
            raise ValueError("duplicate elements in group")
        if Permutation.identity(self.degree) not in self._index:
            raise ValueError("identity missing from group")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def perms(self) -> list[Permutation]:
        return [el.perm for el in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, perm: Permutation) -> bool:
        return perm in self._index

    def index(self, perm: Permutation) -> int:
        return self._index[perm]

    def __repr__(self) -> str:
        gens = ", ".join(g.to_cycles() for g in self.generators) or "-"
        return f"PermutationGroup(degree={self.degree}, order={self.order}, generators=[{gens}])"


def closure(generators: Iterable[Permutation], cap: int = DEFAULT_CLOSURE_CAP,
            degree: int | None = None) -> PermutationGroup:
    """Breadth-first product closure of the generators.

    Elements are enumerated in BFS order with generators applied in their
    declared order, so the element list (and every downstream basis built
    from it) is reproducible run to run.  Each element carries a
    shortest-found generator word.
    """
    gens = list(generators)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not gens:
        if degree is None:
            raise ValueError("degree is required for an empty generator list")
        ident = Permutation.identity(degree)
        return PermutationGroup(degree, (), (GroupElement(ident, ()),))
    deg = gens[0].degree
    for g in gens[1:]:
        if g.degree != deg:
            raise DegreeMismatchError("generators act on different point sets")
    if degree is not None and degree != deg:
        raise DegreeMismatchError(f"declared degree {degree} != generator degree {deg}")
    ident = Permutation.identity(deg)
    seen: dict[Permutation, GroupElement] = {ident: GroupElement(ident, ())}
    ordered: list[GroupElement] = [seen[ident]]
    queue: deque[GroupElement] = deque(ordered)
    while queue:
        elem = queue.popleft()
        for idx, gen in enumerate(gens):
            new_perm = compose(elem.perm, gen)
            if new_perm in seen:
                continue
            if len(seen) >= cap:
                raise EnumerationOverflowError(
                    f"group closure exceeded the cap of {cap} elements")
            entry = GroupElement(new_perm, elem.word + (idx,))
            seen[new_perm] = entry
            ordered.append(entry)
            queue.append(entry)
    return PermutationGroup(deg, gens, ordered)


def _infer_algebra(sample: Any):
    """Product/identity/inverse handlers for the supported value kinds."""
    if isinstance(sample, Permutation):
        return (compose,
                Permutation.identity(sample.degree),
                lambda p: p.inverse())
    arr = np.asarray(sample)
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        dim = arr.shape[0]

        def invert(m):
            m = np.asarray(m, dtype=float)
            try:
                inv = np.linalg.inv(m)
            except np.linalg.LinAlgError as exc:
                raise ValueError(f"generator image is not invertible: {exc}") from exc
            if not np.all(np.isfinite(inv)) or \
                    np.max(np.abs(m @ inv - np.eye(dim))) > 1e-6:
                raise ValueError("generator image is numerically singular")
            return inv

        return (lambda x, y: np.asarray(x, dtype=float) @ np.asarray(y, dtype=float),
                np.eye(dim),
                invert)
    raise TypeError(f"unsupported value type for word extension: {type(sample)!r}")


def evaluate_word(word: Sequence[int], images: Sequence[Any],
                  product: Callable[[Any, Any], Any],
                  identity_value: Any,
                  invert: Callable[[Any], Any]) -> Any:
    """Left-to-right product of generator images along a word."""
    value = identity_value
    for entry in word:
        factor = images[entry] if entry >= 0 else invert(images[-entry - 1])
        value = product(value, factor)
    return value


def word_permutation(word: Sequence[int], generators: Sequence[Permutation]) -> Permutation:
    """Evaluate a word at the permutation level (useful for verification)."""
    if not generators:
        raise ValueError("no generators to evaluate against")
    ident = Permutation.identity(generators[0].degree)
    return evaluate_word(word, list(generators), compose, ident, lambda p: p.inverse())


def extend_by_words(group: PermutationGroup, generator_images: Sequence[Any],
                    product: Callable[[Any, Any], Any] | None = None,
                    identity_value: Any | None = None,
                    invert: Callable[[Any], Any] | None = None,
                    ) -> dict[Permutation, Any]:
    """Extend per-generator values to the whole group along element words.

    Works for any monoid-with-inverse value kind; square matrices and
    permutations are recognized automatically.  The identity element maps to
    the identity value and each element's value is the product of generator
    images along its word, so the result is a homomorphism whenever the
    images satisfy the generators' relations.
    """
    images = list(generator_images)
    if len(images) != len(group.generators):
        raise ValueError(
            f"got {len(images)} images for {len(group.generators)} generators")
    if product is None or identity_value is None or invert is None:
        if not images:
            raise ValueError("cannot infer value algebra without images; "
                             "pass product/identity_value/invert explicitly")
        inferred = _infer_algebra(images[0])
        product = product or inferred[0]
        identity_value = inferred[1] if identity_value is None else identity_value
        invert = invert or inferred[2]
    inverses = [invert(img) for img in images]  # also validates invertibility

    values: dict[Permutation, Any] = {}
    for elem in group.elements:
        if not elem.word:
            values[elem.perm] = identity_value
            continue
        last = elem.word[-1]
        step = group.generators[last] if last >= 0 else group.generators[-last - 1].inverse()
        parent = compose(elem.perm, step.inverse())
        if parent in values:
            factor = images[last] if last >= 0 else inverses[-last - 1]
            values[elem.perm] = product(values[parent], factor)
        else:
            # Non-BFS word tables fall back to full evaluation.
            values[elem.perm] = evaluate_word(elem.word, images, product,
                                              identity_value, invert)
    return values


def cyclic_group(k: int) -> PermutationGroup:
    """Rotations of a k-ring; generator matches the ring shift whose
    permutation matrix has ones on the superdiagonal."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return closure([], degree=1)
    shift = Permutation(tuple((i - 1) % k for i in range(k)))
    return closure([shift])


def dihedral_group(k: int) -> PermutationGroup:
    """Rotations and reflections of a k-ring (order 2k).

    For k = 2 the ring action is not faithful, so the Klein four-group is
    realized on 4 points instead.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 2:
        rot = Permutation((1, 0, 3, 2))
        refl = Permutation((1, 0, 2, 3))
    else:
        rot = Permutation(tuple((i - 1) % k for i in range(k)))
        refl = Permutation(tuple((2 - i) % k for i in range(k)))
    return closure([rot, refl])


def symmetric_group(n: int) -> PermutationGroup:
    """S_n generated by the transposition (1 2) and the n-cycle (1 2 ... n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return closure([], degree=1)
    swap = Permutation((1, 0) + tuple(range(2, n)))
    if n == 2:
        return closure([swap])
    cycle = Permutation(tuple((i + 1) % n for i in range(n)))
    return closure([swap, cycle])
