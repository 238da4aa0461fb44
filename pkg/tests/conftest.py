import pytest

from sftgibbs import build_gibbs_measure
from sftgibbs.models import (
    first_coordinate_potential,
    full_shift,
    golden_mean,
    golden_mean_weighted,
    pair_product_potential,
    parry_potential,
)


@pytest.fixture(scope="session")
def fs2():
    return full_shift(2)


@pytest.fixture(scope="session")
def gmm():
    return golden_mean()


@pytest.fixture(scope="session")
def fs_uniform(fs2):
    return build_gibbs_measure(fs2, parry_potential(fs2))


@pytest.fixture(scope="session")
def gm_parry(gmm):
    return build_gibbs_measure(gmm, parry_potential(gmm))


@pytest.fixture(scope="session")
def fs_ising(fs2):
    return build_gibbs_measure(fs2, pair_product_potential(fs2))


@pytest.fixture(scope="session")
def fs_bernoulli(fs2):
    return build_gibbs_measure(fs2, first_coordinate_potential(fs2, 0.7))


@pytest.fixture(scope="session")
def gm_weighted():
    model, phi = golden_mean_weighted()
    return build_gibbs_measure(model, phi)


@pytest.fixture(scope="session")
def shipped_measures(fs_uniform, gm_parry, fs_ising, fs_bernoulli, gm_weighted):
    """Every model/potential pair the package ships, with its measure."""
    return [
        ("full_shift_uniform", fs_uniform),
        ("golden_mean_parry", gm_parry),
        ("full_shift_ising", fs_ising),
        ("full_shift_bernoulli", fs_bernoulli),
        ("golden_mean_weighted", gm_weighted),
    ]
