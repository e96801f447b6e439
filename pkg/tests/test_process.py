from pathlib import Path

import numpy as np
import pytest

from fracomplex import (
    ProcessSpec,
    Signal,
    SimulationConfig,
    UniformGrid,
    analytic_cf,
    gaussian,
    hurst_of,
    is_whitenable,
    k_of,
    mc_cf,
    mc_cf_stderr,
    preset,
    read_field_csv,
    region_map,
    simulate_1d,
    simulate_2d_separable,
    simulate_ensemble,
    write_realization_csv,
)
from fracomplex.csvio import read_table
from fracomplex.errors import DomainError, EmptyEnsemble, ForbiddenBoundary, ParamDomain
from fracomplex.kernels import apply_noise_rows
from fracomplex.process import noise_grid, worker_count

DATA = Path(__file__).parent / "data"
FIG2 = ProcessSpec(alpha=2.0, gamma=1.3 - 0.7j, a=1.0, b=-1.0)


def test_k_of():
    assert k_of(2, 1.3 - 0.7j) == 1
    assert k_of(1, 0.7 + 1j) == 1
    assert k_of(0.5, 0.3) == 2
    with pytest.raises(ForbiddenBoundary):
        k_of(2, 1.5)
    with pytest.raises(ForbiddenBoundary):
        ProcessSpec(2.0, 1.5)
    assert ProcessSpec(2.0, 1.5, k_override=2).k == 2


def test_is_whitenable():
    assert is_whitenable(2, 1.3 - 0.7j)
    assert not is_whitenable(0.5, 1.5 + 1j)
    assert not is_whitenable(1.0, 2)
    assert is_whitenable(1.01, 2)
    with pytest.raises(ParamDomain):
        is_whitenable(1.0, -0.5)


def test_hurst_of():
    assert hurst_of(FIG2) == pytest.approx(0.8 - 0.7j, abs=1e-15)
    assert hurst_of(ProcessSpec(2.0, 1.0)) == pytest.approx(0.5)
    assert hurst_of(ProcessSpec(1.0, 0.7 + 1j)) == pytest.approx(0.7 + 1j)


def test_spec_validation():
    with pytest.raises(ParamDomain):
        ProcessSpec(2.5, 1.3)
    with pytest.raises(ParamDomain):
        ProcessSpec(2.0, -0.3)
    with pytest.raises(ParamDomain):
        ProcessSpec(2.0, 1.3, a=0)
    with pytest.raises(DomainError):
        SimulationConfig(refine=0)


def test_zero_noise_gives_zero():
    grid = UniformGrid.centered(64, 0.25)
    fine = noise_grid(grid, SimulationConfig())
    real = simulate_1d(FIG2, grid, 1, noise=np.zeros(fine.n))
    assert np.array_equal(real.values, np.zeros(grid.n))
    with pytest.raises(DomainError):
        simulate_1d(FIG2, grid, 1, noise=np.zeros(fine.n + 1))


def test_golden_realization():
    grid = UniformGrid.centered(64, 0.25)
    real = simulate_1d(FIG2, grid, 20240607)
    assert real.hurst == pytest.approx(0.8 - 0.7j)
    assert real.k_used == 1
    _, header, columns, data = read_table(DATA / "golden_realization.csv")
    assert header["seed"] == 20240607 and header["k"] == 1
    assert columns == ["x", "re", "im"]
    assert np.array_equal(data[:, 1] + 1j * data[:, 2], real.values)


def test_realization_csv_header(tmp_path):
    grid = UniformGrid.centered(16, 0.5)
    real = simulate_1d(FIG2, grid, 3)
    path = tmp_path / "r.csv"
    write_realization_csv(path, FIG2, real, header={"note": "x"})
    kind, header, _, data = read_table(path)
    assert kind == "realization"
    for key in ("alpha", "gamma", "a", "b", "k", "seed", "H", "note"):
        assert key in header
    assert header["gamma"] == FIG2.gamma
    assert data.shape == (16, 3)


def test_ensemble_is_reproducible_and_worker_independent():
    grid = UniformGrid.centered(32, 0.5)
    one = simulate_ensemble(FIG2, grid, 9, 5, batch=2, workers=1)
    many = simulate_ensemble(FIG2, grid, 9, 5, batch=2, workers=3)
    for r1, r2 in zip(one, many):
        assert np.array_equal(r1.values, r2.values)
    # batching changes only the floating-point summation order
    single = simulate_1d(FIG2, grid, 9, stream=3).values
    assert np.max(np.abs(one[3].values - single)) <= 1e-12 * np.max(np.abs(single))
    assert not np.array_equal(one[0].values, one[1].values)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("FRACOMPLEX_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("FRACOMPLEX_THREADS", "zero")
    with pytest.raises(DomainError):
        worker_count()


def test_brownian_increment_variance_ratio():
    p = preset("simplified_kernel", 1.0)
    spec = ProcessSpec(2.0, 1.0, p.a, p.b)
    grid = UniformGrid.centered(512, 1.0)
    values = np.array([r.values for r in simulate_ensemble(spec, grid, 5, 200)])
    for lag in (4, 8, 16):
        short = np.mean(np.abs(values[:, 128 + lag:384 + lag] - values[:, 128:384]) ** 2)
        long = np.mean(np.abs(values[:, 128 + 2 * lag:384 + 2 * lag] - values[:, 128:384]) ** 2)
        assert long / short == pytest.approx(2.0, abs=0.1)


def test_separable_filtering_commutes():
    params = FIG2.params
    g = UniformGrid.centered(64, 0.25)
    cells = np.zeros((64, 64))
    cells[20, 40] = 1.0
    rows_first = apply_noise_rows(params, 1, apply_noise_rows(params, 1, cells, g, g).T, g, g).T
    cols_first = apply_noise_rows(params, 1, apply_noise_rows(params, 1, cells.T, g, g).T, g, g)
    assert np.max(np.abs(rows_first - cols_first)) <= 1e-6 * np.max(np.abs(rows_first))


def test_two_dimensional_fields(tmp_path):
    g = UniformGrid.centered(32, 0.25)
    for spec in (FIG2, ProcessSpec(1.0, 0.7 + 1j, 1, 1)):
        real = simulate_2d_separable(spec, (g, g), 4)
        assert real.values.shape == (32, 32)
        assert np.all(np.isfinite(real.values))
        assert real.meta["order"] == "rows-then-columns"
    path = tmp_path / "field.csv"
    write_realization_csv(path, spec, real)
    field, header = read_field_csv(path)
    assert np.array_equal(field, real.values)
    fine = noise_grid(g, SimulationConfig(far_ratio=1.0))
    zero = simulate_2d_separable(FIG2, (g, g), 4, noise=np.zeros((fine.n, fine.n)))
    assert not np.any(zero.values)


def test_cf_normalization():
    grid = UniformGrid(1024, 0.05, -25.575)
    zero = Signal(grid, np.zeros(grid.n))
    assert analytic_cf(FIG2, zero) == 1
    value = analytic_cf(FIG2, gaussian(grid, 0.3, 1.0))
    assert 0 < value < 1 - 1e-12
    with pytest.raises(DomainError):
        analytic_cf(FIG2, gaussian(grid, 20.0, 3.0))


def test_mc_cf_bounds():
    grid = UniformGrid.centered(64, 0.25)
    ens = simulate_ensemble(FIG2, grid, 2, 100)
    assert mc_cf(ens, Signal(grid, np.zeros(grid.n))) == 1
    z = mc_cf(ens, gaussian(grid, 0.0, 1.0))
    assert abs(z) <= 1
    assert mc_cf_stderr(ens, gaussian(grid, 0.0, 1.0)) >= 0
    with pytest.raises(EmptyEnsemble):
        mc_cf([], gaussian(grid))


def test_region_map_examples():
    rows = {(r["alpha"], r["re_gamma"]): r for r in region_map([2.0, 0.5], [1.3, 1.5])}
    assert rows[(2.0, 1.3)]["k"] == 1 and rows[(2.0, 1.3)]["whitenable"]
    assert rows[(2.0, 1.5)]["forbidden"]
    assert not rows[(0.5, 1.5)]["whitenable"]
    for r in rows.values():
        if not r["forbidden"]:
            assert r["whitenable"] == r["k_member"]
