import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracomplex import OperatorParams, eval_h, preset, principal_complex_power
from fracomplex.errors import DomainError, UnknownPreset

complexes = st.tuples(st.floats(-3, 3), st.floats(-3, 3)).map(lambda p: complex(*p))
nonzero = complexes.filter(lambda z: abs(z) > 1e-3)


def test_examples():
    assert eval_h(OperatorParams(1, 1, 0), 3.0) == 1
    assert eval_h(OperatorParams(1, 2, 1 + 1j), -1.0) == 2
    expected = 2**1.3 * cmath.exp(-0.7j * math.log(2))
    assert eval_h(OperatorParams(1, 1, 1.3 - 0.7j), 2.0) == pytest.approx(expected, rel=1e-15)


def test_zero_at_origin():
    for g in (0.5, -0.5 + 1j, 2.0):
        assert eval_h(OperatorParams(1, 1j, g), 0.0) == 0


def test_rejects_zero_weights():
    with pytest.raises(DomainError):
        OperatorParams(0, 1, 0.5)
    with pytest.raises(DomainError):
        OperatorParams(1, 1, float("nan"))


def test_presets():
    assert preset("fractional_laplacian", 0.5) == OperatorParams(1, 1, 0.5)
    rl = preset("riemann_liouville", 2)
    assert rl.a == pytest.approx(-1) and rl.b == pytest.approx(-1)
    g = 1.3 - 0.7j
    sk = preset("simplified_kernel", g)
    assert sk.a == pytest.approx(principal_complex_power(1.0, 1, g - 1))
    assert sk.b == pytest.approx(principal_complex_power(1.0, -1, 1 - g))
    with pytest.raises(UnknownPreset):
        preset("caputo", 0.5)


def test_riemann_liouville_integer_orders():
    rng = np.random.default_rng(1)
    w = rng.uniform(-20, 20, 100)
    for n in (1, 2, 3):
        assert np.allclose(eval_h(preset("riemann_liouville", n), w), (1j * w) ** n, rtol=1e-13)


@settings(max_examples=200, deadline=None)
@given(nonzero, nonzero, complexes, st.floats(0.01, 100), st.floats(-50, 50).filter(lambda w: abs(w) > 1e-6))
def test_homogeneity(a, b, g, t, w):
    p = OperatorParams(a, b, g)
    lhs = eval_h(p, t * w)
    rhs = t**g * eval_h(p, w)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs) + 1e-300
