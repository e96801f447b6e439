"""Homogeneous Fourier multiplier h(omega) = a*omega_+^gamma + b*omega_-^gamma."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParamDomain, UnknownPreset
from .special_functions import principal_complex_power

PRESETS = ("fractional_laplacian", "riemann_liouville", "simplified_kernel")


@dataclass(frozen=True)
class OperatorParams:
    """Parameters (a, b, gamma) shared by every operator and kernel."""

    a: complex
    b: complex
    gamma: complex

    def __post_init__(self):
        for name in ("a", "b", "gamma"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.a == 0 or self.b == 0:
            raise ParamDomain("a and b must be nonzero")

    def with_gamma(self, gamma: complex) -> "OperatorParams":
        return OperatorParams(self.a, self.b, gamma)

    def reflected(self) -> "OperatorParams":
        """Parameters of omega -> h(-omega)."""
        return OperatorParams(self.b, self.a, self.gamma)


def abs_power(omega, exponent: complex):
    """|omega|**exponent with the real logarithm; zero entries map to 0."""
    w = np.asarray(omega, dtype=float)
    out = np.zeros(w.shape, dtype=complex)
    nz = w != 0
    out[nz] = np.exp(complex(exponent) * np.log(np.abs(w[nz])))
    return out


def eval_h(params: OperatorParams, omega):
    """Evaluate h_{a,b}^gamma at scalar or array omega; exactly 0 at omega = 0."""
    w = np.asarray(omega, dtype=float)
    mag = abs_power(w, params.gamma)
    out = np.where(w > 0, params.a * mag, np.where(w < 0, params.b * mag, 0.0 + 0.0j))
    if out.ndim == 0:
        return complex(out)
    return out


def preset(name: str, gamma: complex) -> OperatorParams:
    """Named (a, b) pairs: fractional Laplacian, Riemann-Liouville derivative,
    and the simplified-kernel pair a = i^(gamma-1), b = (-i)^(1-gamma)."""
    g = complex(gamma)
    if name == "fractional_laplacian":
        return OperatorParams(1.0, 1.0, g)
    if name == "riemann_liouville":
        return OperatorParams(
            principal_complex_power(1.0, 1, g), principal_complex_power(1.0, -1, g), g
        )
    if name == "simplified_kernel":
        return OperatorParams(
            principal_complex_power(1.0, 1, g - 1.0),
            principal_complex_power(1.0, -1, 1.0 - g),
            g,
        )
    raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
