import itertools
from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).parent / "data"


def random_eri(rng, m):
    """Exactly 8-fold-symmetric random tensor, built from its packed form."""
    from detforge.integral_io import packed8_size, packed8_to_eri

    return packed8_to_eri(rng.standard_normal(packed8_size(m)), m)


def random_symmetric(rng, m):
    a = rng.standard_normal((m, m))
    return 0.5 * (a + a.T)


def random_overlap(rng, m):
    a = rng.standard_normal((m, m))
    return a @ a.T + m * np.eye(m)


def random_bundle(rng, m, n_alpha=1, n_beta=1):
    from detforge.integral_io import IntegralBundle

    return IntegralBundle(
        m_spatial=m,
        n_alpha=n_alpha,
        n_beta=n_beta,
        e_nuc=float(rng.standard_normal()),
        overlap=random_overlap(rng, m),
        hcore=random_symmetric(rng, m),
        eri=random_eri(rng, m),
    ).validate()


def random_mo_data(rng, m, e_core=0.0):
    """MO-level data with a physically shaped (positive-semidefinitish) ERI."""
    from detforge.integral_io import MoHamiltonianData

    return MoHamiltonianData(
        m_spatial=m,
        h_mo=random_symmetric(rng, m),
        e_core=e_core,
        eri_mo=random_eri(rng, m),
    )


def random_quso(rng, n, density=0.8):
    from detforge.models import QusoModel

    model = QusoModel(n, offset=float(rng.standard_normal()), linear=rng.standard_normal(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                model.quadratic[(i, j)] = float(rng.standard_normal())
    return model


def all_bits(n):
    """All occupation vectors of n bits, lexicographic."""
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def fixture_path(name):
    path = DATA_DIR / name
    if not path.exists():
        pytest.skip(f"committed fixture {name} not present")
    return path
