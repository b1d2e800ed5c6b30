import numpy as np
import pytest

from closedfit.dataio import read_dataset, roraima_farming_path


@pytest.fixture(scope="session")
def roraima():
    """The bundled 15-municipality farming-proportion sample."""
    return read_dataset(roraima_farming_path()).sample


def random_unit_samples(seed, count, n_range=(5, 50), params_pool=((0.5, 0.5), (1, 1), (2, 2), (2, 5), (0.7, 3))):
    """Seeded stream of beta-distributed test samples of varying size."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        a, b = params_pool[rng.integers(len(params_pool))]
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g1 = rng.standard_gamma(a, n)
        g2 = rng.standard_gamma(b, n)
        x = g1 / (g1 + g2)
        x = np.clip(x, 1e-12, 1.0 - 1e-12)
        yield x
