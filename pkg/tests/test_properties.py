"""Randomized invariants over the built-in group families.

Each seed draws one group configuration, builds an equivariant matrix by
group averaging, and checks the full stack of decomposition and rank-test
invariants on it.
"""

import warnings
from functools import lru_cache

import numpy as np
import pytest

import symctrl as sc

GROUP_CONFIGS = (
    [("dihedral", k) for k in range(3, 7)]
    + [("cyclic", k) for k in range(3, 9)]
    + [("symmetric", n) for n in range(3, 6)]
)

SEEDS = range(100)


@lru_cache(maxsize=None)
def config_pieces(family: str, order: int, node_dim: int):
    builders = {"cyclic": (sc.cyclic_group, sc.cyclic_irreps),
                "dihedral": (sc.dihedral_group, sc.dihedral_irreps),
                "symmetric": (sc.symmetric_group, sc.symmetric_irreps)}
    group_builder, irrep_builder = builders[family]
    group = group_builder(order)
    irreps = irrep_builder(order)
    n = group.degree * node_dim
    # decomposition depends on the action only, so it is shared per config
    base = sc.EquivariantSystem(np.zeros((n, n)), group, node_dim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dec = sc.decompose(base, irreps)

    # config-level invariants: projections resolve the identity and are
    # orthogonal idempotents
    present = dec.present_components()
    total = sum(c.projection for c in dec.components)
    np.testing.assert_allclose(total, np.eye(n), atol=1e-9)
    for c in dec.components:
        np.testing.assert_allclose(c.projection @ c.projection, c.projection,
                                   atol=1e-9)
    for i, ci in enumerate(dec.components):
        for cj in dec.components[i + 1:]:
            np.testing.assert_allclose(ci.projection @ cj.projection,
                                       np.zeros((n, n)), atol=1e-9)
    gram = dec.basis_matrix.T @ dec.basis_matrix
    np.testing.assert_allclose(gram, np.eye(n), atol=1e-9)
    assert sum(c.iso_dim for c in present) == n
    return group, irreps, dec


def seeded_instance(seed: int):
    family, order = GROUP_CONFIGS[seed % len(GROUP_CONFIGS)]
    node_dim = 1 if seed % 2 == 0 else 2
    group, irreps, dec = config_pieces(family, order, node_dim)
    n = group.degree * node_dim
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((n, n))
    averaged = np.zeros((n, n))
    for el in group.elements:
        m = sc.lift(el.perm, node_dim)
        averaged += m @ raw @ m.T
    averaged /= group.order
    system = sc.EquivariantSystem(averaged, group, node_dim)
    return system, irreps, dec, rng


@pytest.mark.parametrize("seed", SEEDS)
def test_randomized_invariants(seed):
    system, irreps, dec, rng = seeded_instance(seed)
    a = system.a
    n = system.state_dim

    # isotypic components are invariant subspaces
    for comp in dec.components:
        np.testing.assert_allclose(a @ comp.projection, comp.projection @ a,
                                   atol=1e-9)

    # change of basis is orthogonal and block-diagonalizes A
    transformed, blocks, off = sc.block_diagonalize(a, dec)
    assert off < 1e-9

    # spectrum preservation: product of block characteristic polynomials
    # equals the characteristic polynomial of A
    poly_blocks = np.array([1.0])
    for block in blocks:
        poly_blocks = np.polymul(poly_blocks, np.poly(block))
    poly_full = np.poly(a)
    scale = np.maximum(np.abs(poly_full), 1.0)
    np.testing.assert_allclose(poly_blocks / scale, poly_full / scale,
                               atol=1e-6)

    # repeated blocks of absolutely irreducible components are isomorphic
    report = sc.verify_block_isomorphy(dec, blocks)
    assert report.max_discrepancy < 1e-6

    # rank-method verdict agreement on a random input matrix
    p = int(rng.integers(1, n + 1))
    b = rng.standard_normal((n, p))
    verdicts = {method: sc.is_controllable(a, b, method).controllable
                for method in sc.RANK_METHODS}
    assert len(set(verdicts.values())) == 1, verdicts

    # eigenvalue geometric multiplicity is capped by the input count on
    # controllable instances
    if verdicts["subspace"]:
        rank_b = sc.DEFAULT_POLICY.matrix_rank(b)
        for lam in set(np.round(np.linalg.eigvals(a), 8)):
            assert sc.geometric_multiplicity(a, lam) <= rank_b

    # observability duality on a random output matrix
    q = int(rng.integers(1, n + 1))
    c = rng.standard_normal((q, n))
    assert sc.is_observable(a, c).controllable == \
        sc.is_controllable(a.T, c.T).controllable


@pytest.mark.parametrize("family,order", GROUP_CONFIGS,
                         ids=[f"{f}{k}" for f, k in GROUP_CONFIGS])
def test_adapted_subspaces_invariant(family, order):
    group, irreps, dec = config_pieces(family, order, 1)
    n = group.degree
    rng = np.random.default_rng(order)
    raw = rng.standard_normal((n, n))
    averaged = sum(sc.lift(el.perm, 1) @ raw @ sc.lift(el.perm, 1).T
                   for el in group.elements) / group.order
    assert sc.invariance_residual(dec, averaged) < 1e-9


def test_design_bound_holds_across_families():
    # every produced controllable design selects at least the priced bound
    for family, order in GROUP_CONFIGS:
        group, irreps, dec = config_pieces(family, order, 1)
        n = group.degree
        rng = np.random.default_rng(1000 + order)
        raw = rng.standard_normal((n, n))
        averaged = sum(sc.lift(el.perm, 1) @ raw @ sc.lift(el.perm, 1).T
                       for el in group.elements) / group.order
        system = sc.EquivariantSystem(averaged, group, 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            design = sc.design_input_matrix(system, dec)
        if design.controllable:
            assert len(design.selected_states) >= sc.n_gamma(dec)
