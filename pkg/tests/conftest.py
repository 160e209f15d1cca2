"""Shared fixtures: the two worked ring examples and the Petersen graph."""

import json
import warnings
from pathlib import Path

import numpy as np
import pytest

import symctrl as sc

DATA_DIR = Path(__file__).parent / "data"
SPEC_DIR = Path(sc.__file__).parent / "specs"


@pytest.fixture(scope="session")
def d4_loaded():
    spec, group, meta = sc.network_from_json(SPEC_DIR / "d4_ring.json")
    return spec, group, meta


@pytest.fixture(scope="session")
def d4_system(d4_loaded):
    spec, group, _ = d4_loaded
    return sc.EquivariantSystem.from_spec(spec, group)


@pytest.fixture(scope="session")
def d4_irreps():
    return sc.dihedral_irreps(4)


@pytest.fixture(scope="session")
def d4_dec(d4_system, d4_irreps):
    return sc.decompose(d4_system, d4_irreps)


@pytest.fixture(scope="session")
def z4_system():
    spec, group, _ = sc.network_from_json(SPEC_DIR / "z4_ring.json")
    return sc.EquivariantSystem.from_spec(spec, group)


@pytest.fixture(scope="session")
def z4_dec(z4_system):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return sc.decompose(z4_system, sc.cyclic_irreps(4))


@pytest.fixture(scope="session")
def petersen_system():
    spec, group = sc.petersen(0.0, 1.0)
    return sc.EquivariantSystem.from_spec(spec, group)


@pytest.fixture(scope="session")
def s5_irreps():
    return sc.symmetric_irreps(5)


@pytest.fixture(scope="session")
def petersen_dec(petersen_system, s5_irreps):
    return sc.decompose(petersen_system, s5_irreps)


@pytest.fixture(scope="session")
def petersen_import_entries():
    with open(SPEC_DIR / "petersen_irreps.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def d4_golden_basis():
    return sc.basis_matrix_from_json(DATA_DIR / "d4_basis_golden.json")


@pytest.fixture(scope="session")
def petersen_golden_basis():
    return sc.basis_matrix_from_json(SPEC_DIR / "petersen_basis.json")


def unit_columns(n, indices_1based):
    b = np.zeros((n, len(indices_1based)))
    for col, idx in enumerate(indices_1based):
        b[idx - 1, col] = 1.0
    return b
