import numpy as np
import pytest

from scfbexport.export import compute_system, reference_energies
from scfbexport.molecule import MoleculeSpec


@pytest.fixture(scope="session")
def h2_system():
    spec = MoleculeSpec("H 0 0 0; H 0 0 0.74", "sto-3g", label="h2")
    return spec, compute_system(spec)


@pytest.fixture(scope="session")
def oh_system():
    spec = MoleculeSpec("O 0 0 0; H 0 0 3.0", "6-31g", charge=-1, label="oh_minus")
    return spec, compute_system(spec)


@pytest.fixture(scope="session")
def oh_references(oh_system):
    spec, ints = oh_system
    return reference_energies(spec, ints)


@pytest.fixture
def rng():
    return np.random.default_rng(7)
