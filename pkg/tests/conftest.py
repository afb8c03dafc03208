import numpy as np
import pytest

from fidsus.models import random_pair


def seeded_families(master_seed, count, dim_lo, dim_hi, beta_lo, beta_hi):
    """A reproducible stream of random families for property loops."""
    rng = np.random.default_rng(master_seed)
    fams = []
    for _ in range(count):
        dim = int(rng.integers(dim_lo, dim_hi + 1))
        beta = float(np.exp(rng.uniform(np.log(beta_lo), np.log(beta_hi))))
        seed = int(rng.integers(0, 2**31 - 1))
        fams.append(random_pair(dim, seed, 1.0, 1.0, beta))
    return fams


@pytest.fixture(scope="session")
def thousand_families():
    """The 1000-instance random suite, dims 2-12, beta in [0.1, 10]."""
    return seeded_families(20260822, 1000, 2, 12, 0.1, 10.0)


def random_hermitian(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (g + g.conj().T)
