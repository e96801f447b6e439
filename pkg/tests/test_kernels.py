import math

import numpy as np
import pytest

from fracomplex import (
    KernelSpec,
    NoiseCells,
    OperatorParams,
    Signal,
    UniformGrid,
    apply_adjoint_integration,
    apply_derivative,
    apply_integration,
    apply_via_kernel,
    complex_gamma,
    gaussian,
    kernel_table,
    kernel_value,
    lemma5_check,
    preset,
    simplified_kernel_value,
    write_kernel_csv,
)
from fracomplex.errors import DomainError, NonIntegrableKernel, ParamDomain, SingularPoint
from helpers import kernel_quadrature_oracle

KINDS = ("derivative", "integration", "adjoint_integration")


def test_kernels_match_quadrature_oracle():
    rng = np.random.default_rng(11)
    worst = 0.0
    for i in range(20):
        g = complex(rng.uniform(0.1, 1.9), rng.uniform(-1, 1))
        if abs(g.real - 1) < 0.1:
            g += 0.2
        a = complex(*rng.uniform(-1, 1, 2))
        b = complex(*rng.uniform(-1, 1, 2))
        kind = KINDS[i % 3]
        k = 0 if kind == "derivative" else max(1, math.floor(g.real)) + int(rng.integers(0, 2))
        tau, x = rng.uniform(-2, 2, 2)
        p = OperatorParams(a, b, g)
        value = kernel_value(KernelSpec(p, kind, k), tau, x)
        oracle = kernel_quadrature_oracle(p, kind, k, tau, x)
        worst = max(worst, abs(value - oracle) / (1 + abs(value)))
    assert worst <= 1e-6


def test_kernel_at_reference_point():
    p = OperatorParams(1, -1, 1.3 - 0.7j)
    for kind, k in (("derivative", 0), ("integration", 2), ("adjoint_integration", 2)):
        value = kernel_value(KernelSpec(p, kind, k), 1.0, 2.5)
        assert abs(value - kernel_quadrature_oracle(p, kind, k, 1.0, 2.5)) <= 1e-6 * (1 + abs(value))


@pytest.mark.parametrize("g", [0.6 + 0.3j, 1.4 - 0.5j, 0.3])
def test_causal_pair_matches_real_power_forms(g):
    causal = preset("riemann_liouville", g)
    points = [(-0.7, 1.2), (0.5, 1.4), (1.3, 0.4), (-1.1, -0.3), (0.8, -0.6)]
    for kind, k in (("derivative", 0), ("integration", max(1, math.floor(g.real))),
                    ("adjoint_integration", max(1, math.floor(g.real)))):
        sign = -1 if kind == "derivative" else 1
        spec = KernelSpec(causal, kind, k)
        for tau, x in points:
            value = kernel_value(spec, tau, x)
            simple = sign * simplified_kernel_value(kind, g, k, tau, x)
            assert abs(value - simple) <= 1e-10 * max(abs(value), 1.0)


def test_simplified_preset_is_symmetric():
    g = 0.6 + 0.3j
    p = preset("simplified_kernel", g)
    assert p.a == pytest.approx(p.b, rel=1e-14)
    spec = KernelSpec(p, "derivative", 0)
    assert kernel_value(spec, 0.0, 1.0) == pytest.approx(kernel_value(spec, 0.0, -1.0), rel=1e-12)
    # the real-power form is one-sided, so it cannot equal a symmetric kernel
    assert simplified_kernel_value("derivative", g, 0, 0.0, -1.0) == 0


def test_binomial_collapse_for_single_correction():
    g = 0.4 + 0.2j
    tau, x = -0.6, 1.5
    c = complex_gamma(1 - g) * np.sin(np.pi * g) / np.pi
    expect = c * ((x - tau) ** (g - 1) - (-tau) ** (g - 1))
    assert simplified_kernel_value("integration", g, 1, tau, x) == pytest.approx(expect, rel=1e-13)


def test_lemma5_check_examples():
    out = lemma5_check(0.6, 1, 1.0, 2.0)
    assert abs(out["lhs"] - out["rhs"]) <= 1e-7 * abs(out["rhs"])
    out = lemma5_check(1.3 - 0.7j, 2, -0.5, 1.5)
    assert abs(out["lhs"] - out["rhs"]) <= 1e-6 * abs(out["rhs"])
    out = lemma5_check(0.6 + 0.2j, 1, 0.0, 1.5)
    assert abs(out["rhs"]) < 1e-14 and abs(out["lhs"]) < 1e-8


def test_lemma5_check_errors():
    with pytest.raises(SingularPoint):
        lemma5_check(0.6, 1, 1.0, 0.0)
    with pytest.raises(SingularPoint):
        lemma5_check(0.6, 1, -2.0, 2.0)
    with pytest.raises(ParamDomain):
        lemma5_check(2.0, 1, 1.0, 2.0)


@pytest.mark.parametrize("kind", KINDS)
def test_kernel_homogeneity(kind):
    p = OperatorParams(1.3 + 0.2j, 0.7 - 0.4j, 1.3 - 0.7j)
    k = 0 if kind == "derivative" else 2
    degree = -p.gamma - 1 if kind == "derivative" else p.gamma - 1
    spec = KernelSpec(p, kind, k)
    for tau, x in ((-0.7, 1.2), (0.5, 1.4), (1.3, -0.4)):
        lhs = kernel_value(spec, 2 * tau, 2 * x)
        assert lhs == pytest.approx(2**degree * kernel_value(spec, tau, x), rel=1e-12)


def test_kernel_errors():
    p = OperatorParams(1, -1, 0.6 + 0.3j)
    with pytest.raises(ParamDomain):
        KernelSpec(OperatorParams(1, 1, 1.0), "integration", 1)
    with pytest.raises(ParamDomain):
        KernelSpec(OperatorParams(1, 1, 2.5), "integration", 1)
    with pytest.raises(DomainError):
        KernelSpec(p, "curl", 0)
    with pytest.raises(SingularPoint):
        kernel_value(KernelSpec(p, "derivative"), 1.0, 1.0)
    with pytest.raises(SingularPoint):
        kernel_value(KernelSpec(p, "integration", 1), 0.0, 1.0)
    with pytest.raises(SingularPoint):
        kernel_value(KernelSpec(p, "adjoint_integration", 1), 1.0, 0.0)


OPERATORS = {
    "integration": lambda p, k, s: apply_integration(p, k, s),
    "adjoint_integration": lambda p, k, s: apply_adjoint_integration(p, k, s),
    "derivative": lambda p, k, s: apply_derivative(p, s),
}


@pytest.mark.parametrize(
    "kind,g,k",
    [
        ("integration", 0.6 + 0.3j, 1),
        ("integration", 1.3 - 0.7j, 1),
        ("integration", 0.6, 0),
        ("adjoint_integration", 1.3 - 0.7j, 1),
        ("adjoint_integration", 0.6 + 0.3j, 0),
        ("derivative", -0.4 + 0.3j, 0),
    ],
)
def test_kernel_application_matches_spectral(kind, g, k):
    grid = UniformGrid(8192, 0.005, -20.4775)
    phi = gaussian(grid, 0.2, 1.0)
    p = OperatorParams(1.3 + 0.2j, 0.7 - 0.4j, g)
    via = apply_via_kernel(KernelSpec(p, kind, k), phi).values
    ref = OPERATORS[kind](p, k, phi).values
    c = slice(2000, 6000)
    assert np.max(np.abs(via - ref)[c]) <= 1e-3 * np.max(np.abs(ref[c]))


def test_noise_kernel_rejects_nonintegrable_input():
    grid = UniformGrid.centered(256, 0.05)
    spec = KernelSpec(OperatorParams(1, 1, 0.6 + 0.2j), "integration", 2)
    with pytest.raises(NonIntegrableKernel):
        apply_via_kernel(spec, gaussian(grid))


def test_unit_impulse_reproduces_kernel():
    grid = UniformGrid.centered(2048, 0.01)
    spec = KernelSpec(OperatorParams(1.3 + 0.2j, 0.7 - 0.4j, 0.6 + 0.3j), "integration", 1)
    j0 = 700
    tau0 = grid.x[j0]
    cells = np.zeros(grid.n)
    cells[j0] = 1.0
    out = apply_via_kernel(spec, NoiseCells(grid, cells)).values
    far = np.abs(grid.x - tau0) > 0.5
    far &= np.abs(grid.x) > 0.05
    ref = np.array([kernel_value(spec, tau0, x) for x in grid.x[far]])
    assert np.max(np.abs(out[far] - ref) / np.abs(ref)) < 1e-4
    # a discrete delta of height 1/dtau as sampled input gives the same response
    out = apply_via_kernel(spec, Signal(grid, cells / grid.dx)).values
    assert np.max(np.abs(out[far] - ref) / np.abs(ref)) < 1e-4


def test_kernel_table_and_csv(tmp_path):
    spec = KernelSpec(OperatorParams(1, -1, 1.3 - 0.7j), "integration", 1)
    taus = [-1.0, 0.0, 0.5]
    xs = [0.5, 1.0]
    table = kernel_table(spec, taus, xs)
    assert table.shape == (3, 4)  # tau = 0 and the diagonal are skipped
    path = tmp_path / "kernel.csv"
    write_kernel_csv(path, spec, taus, xs)
    lines = path.read_text().splitlines()
    assert lines[0] == "# fracomplex kernel v1"
    back = np.loadtxt(path, delimiter=",", comments="#", skiprows=lines.index("tau,x,re,im") + 1)
    assert np.array_equal(back, table)
