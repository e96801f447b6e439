"""Complex gamma, upper incomplete gamma, exponential integral and the
truncated-power inverse Fourier transform used by the closed-form kernels.

Branch convention: principal logarithm throughout, so that
``(+-i x)**w = exp(w * (log|x| +- i*pi/2*sign(x)))``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import special as _sp

from .errors import BranchError, DomainError, PoleError

EULER_GAMMA = 0.577215664901532860606512090082
POLE_TOL = 1e-12

_EPS = 1e-16
_MAX_TERMS = 4000


def _finite_complex(value, name: str) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return z


def _near_nonpositive_integer(z: complex, tol: float = POLE_TOL) -> bool:
    n = round(z.real)
    return n <= 0 and abs(z - n) <= tol


def complex_gamma(z) -> complex:
    """Gamma function for complex argument.

    Raises PoleError within ``POLE_TOL`` of 0, -1, -2, ...
    """
    z = _finite_complex(z, "z")
    if _near_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    return complex(_sp.gamma(z))


def _on_cut(z: complex) -> bool:
    return z.imag == 0.0 and z.real < 0.0


def _lower_series(s: complex, z: complex) -> complex:
    """Lower incomplete gamma (analytically continued in s) by power series."""
    log_z = cmath.log(z)
    if z.real >= 0.0:
        # e^{-z} z^s sum z^n / (s (s+1) ... (s+n)): positive terms for z > 0
        term = 1.0 / s
        total = term
        for n in range(1, _MAX_TERMS):
            term *= z / (s + n)
            total += term
            if abs(term) <= _EPS * abs(total) and n > abs(z):
                break
        return cmath.exp(s * log_z - z) * total
    # z^s sum (-z)^n / (n! (s+n)): positive terms for z < 0
    fac = 1.0 + 0.0j
    total = 1.0 / s
    for n in range(1, _MAX_TERMS):
        fac *= -z / n
        term = fac / (s + n)
        total += term
        if abs(term) <= _EPS * abs(total) and n > abs(z):
            break
    return cmath.exp(s * log_z) * total


def _upper_cf(s: complex, z: complex) -> complex | None:
    """Legendre continued fraction, modified Lentz. None if not converged."""
    tiny = 1e-300
    b = z + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    f = d
    for n in range(1, _MAX_TERMS):
        an = -n * (n - s)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return cmath.exp(s * cmath.log(z) - z) * f
    return None


def _use_cf(s: complex, z: complex) -> bool:
    if abs(z) < 1.5:
        return False
    if abs(math.atan2(z.imag, z.real)) > 0.75 * math.pi:  # cmath.phase overflows on subnormal parts
        return False
    return abs(z) > max(1.5, s.real + 1.0) or z.real > 0.0 and abs(z) > 0.5 * abs(s)


def _e1_series(z: complex) -> complex:
    total = 0.0 + 0.0j
    fac = 1.0 + 0.0j
    for m in range(1, _MAX_TERMS):
        fac *= -z / m
        term = fac / m
        total += term
        if abs(term) <= _EPS * max(abs(total), 1.0) and m > abs(z):
            break
    return -EULER_GAMMA - cmath.log(z) - total


def exp_integral_e1(z) -> complex:
    """Exponential integral E1 on the principal branch, cut along (-inf, 0]."""
    z = _finite_complex(z, "z")
    if z == 0 or _on_cut(z):
        raise BranchError(f"E1 is evaluated on its branch cut at {z}")
    if _use_cf(0j, z):
        value = _upper_cf(0j, z)
        if value is not None:
            return value
    return _e1_series(z)


def upper_incomplete_gamma(s, z) -> complex:
    """Upper incomplete gamma Gamma(s, z) = int_z^inf t^(s-1) e^(-t) dt.

    Series for small |z| (or near the cut), continued fraction otherwise.
    """
    s = _finite_complex(s, "s")
    z = _finite_complex(z, "z")
    if z == 0:
        if s.real > 0:
            return complex_gamma(s)
        raise DomainError(f"Gamma(s, 0) diverges for Re(s) <= 0, s={s}")
    if _on_cut(z):
        raise BranchError(f"Gamma(s, z) is evaluated on its branch cut at z={z}")
    if _use_cf(s, z):
        value = _upper_cf(s, z)
        if value is not None:
            return value
    n = round(s.real)
    if n <= 0 and s == n:
        # exact non-positive integer: step down from E1, stable for small |z|
        value = exp_integral_e1(z)
        log_z = cmath.log(z)
        for m in range(1, -n + 1):
            sm = -m
            value = (value - cmath.exp(sm * log_z - z)) / sm
        return value
    return complex_gamma(s) - _lower_series(s, z)


def principal_complex_power(x, sign: int, exponent):
    """(sign * i * x) ** exponent on the principal branch.

    ``x`` may be a scalar or an array of nonzero reals; ``sign`` is +1 or -1.
    """
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    w = complex(exponent)
    arr = np.asarray(x, dtype=float)
    if np.any(arr == 0.0):
        raise DomainError("principal_complex_power is undefined at x = 0")
    log_val = np.log(np.abs(arr)) + 1j * sign * (math.pi / 2) * np.sign(arr)
    out = np.exp(w * log_val)
    if out.ndim == 0:
        return complex(out)
    return out


def inv_fourier_truncated_power(beta, x: float, side: int = 1) -> complex:
    """Inverse Fourier transform of omega**beta on omega > 1 (side=+1), or of
    |omega|**beta on omega < -1 (side=-1, mirror identity), at the point x.

    Equals Gamma(beta+1, -i x) / (2 pi (-i x)**(beta+1)); the beta = -1 case is
    E1(-i x) / (2 pi).
    """
    beta = _finite_complex(beta, "beta")
    x = float(x)
    if x == 0.0:
        raise DomainError("inverse Fourier of a truncated power is singular at x = 0")
    if side not in (1, -1):
        raise DomainError(f"side must be +1 or -1, got {side!r}")
    if beta.imag == 0.0 and beta.real == round(beta.real) and beta.real <= -2:
        raise DomainError(f"beta must not be a negative integer <= -2, got {beta}")
    x = side * x
    z = complex(0.0, -x)
    if beta == -1:
        return exp_integral_e1(z) / (2 * math.pi)
    num = upper_incomplete_gamma(beta + 1.0, z)
    return num / (2 * math.pi * principal_complex_power(x, -1, beta + 1.0))
