import math

import numpy as np
import pytest

from fracomplex import StableNoiseConfig, analytic_cell_cf, empirical_cf, sample_sas, write_noise_csv
from fracomplex.errors import ConfigDomain, EmptyInput

N = 10**6


def test_gaussian_cells_have_variance_two():
    s = sample_sas(StableNoiseConfig(2.0, N, 1.0, seed=1))
    assert np.var(s) == pytest.approx(2.0, abs=0.02)


def test_cauchy_cf():
    s = sample_sas(StableNoiseConfig(1.0, N, 1.0, seed=2))
    assert abs(empirical_cf(s, 1.0) - math.exp(-1)) < 0.01


def test_cf_with_cell_width():
    s = sample_sas(StableNoiseConfig(1.5, N, 0.5, seed=3))
    assert abs(empirical_cf(s, 2.0) - math.exp(-0.5 * 2**1.5)) < 0.01
    assert analytic_cell_cf(1.5, 0.5, 2.0) == pytest.approx(math.exp(-0.5 * 2**1.5), rel=1e-15)


def test_cf_within_monte_carlo_error():
    dx = 0.7
    s = sample_sas(StableNoiseConfig(1.2, N, dx, seed=4))
    phi = math.exp(-dx)
    sigma = math.sqrt((1 + math.exp(-dx * 2**1.2)) / 2 - phi**2) / math.sqrt(N)
    z = empirical_cf(s, 1.0)
    assert abs(z.real - phi) < 3 * sigma
    assert abs(z.imag) < 5 * sigma


def test_determinism_and_streams():
    cfg = StableNoiseConfig(1.3, 1000, 0.1, seed=7)
    assert np.array_equal(sample_sas(cfg), sample_sas(cfg))
    assert not np.array_equal(sample_sas(cfg), sample_sas(StableNoiseConfig(1.3, 1000, 0.1, seed=8)))
    assert not np.array_equal(sample_sas(cfg), sample_sas(StableNoiseConfig(1.3, 1000, 0.1, seed=7, stream=1)))
    assert sample_sas(cfg, shape=(10, 20)).shape == (10, 20)


def test_empirical_cf_trivia():
    assert empirical_cf(np.zeros(5), 3.7) == 1
    t = 0.8
    assert empirical_cf([math.pi / t, -math.pi / t], t) == pytest.approx(-1, abs=1e-15)
    with pytest.raises(EmptyInput):
        empirical_cf([], 1.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(alpha=0.0, n=10, dx=1.0),
        dict(alpha=2.1, n=10, dx=1.0),
        dict(alpha=1.0, n=0, dx=1.0),
        dict(alpha=1.0, n=10, dx=-1.0),
        dict(alpha=1.0, n=10, dx=1.0, seed=-1),
        dict(alpha=1.0, n=10, dx=1.0, seed=2**64),
    ],
)
def test_config_domain(kwargs):
    with pytest.raises(ConfigDomain):
        StableNoiseConfig(**kwargs)


def test_noise_csv(tmp_path):
    cfg = StableNoiseConfig(0.9, 50, 0.25, seed=11, stream=3)
    s = sample_sas(cfg)
    path = tmp_path / "noise.csv"
    write_noise_csv(path, cfg, s)
    text = path.read_text()
    assert "# seed = 11" in text and "# stream = 3" in text
    lines = text.splitlines()
    back = np.loadtxt(path, delimiter=",", skiprows=lines.index("index,value") + 1, usecols=1)
    assert np.array_equal(back, s)
