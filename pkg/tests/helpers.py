"""Shared oracles for the test suite."""

import math
import warnings

import mpmath as mp
import numpy as np
from scipy import integrate

from fracomplex import (
    OperatorParams,
    Signal,
    UniformGrid,
    adjoint_singular_terms,
    apply_adjoint_integration,
    apply_integration,
    pairing,
)


def gaussian_bump(grid, center, width, poly=(1.0,)):
    u = (grid.x - center) / width
    return Signal(grid, np.polyval(poly[::-1], u) * np.exp(-0.5 * u**2))


def _singular_pairing(terms, fn):
    """int fn(x) P(x) dx for P = sum c_r (-ix)^e + c_l (ix)^e, by mpmath."""
    total = mp.mpc(0)
    cuts = [0, 0.25, 1, 2, 4, 8, mp.inf]
    # the endpoint singularity x^e needs headroom beyond double precision
    with mp.workdps(40):
        for cr, cl, e in terms:
            e = mp.mpc(e)
            right = mp.quad(lambda x: fn(x) * x**e, cuts)
            left = mp.quad(lambda x: fn(-x) * x**e, cuts)
            ph = mp.exp(-1j * mp.pi * e / 2)
            total += cr * (right * ph + left / ph) + cl * (right / ph + left * ph)
    return complex(total)


def adjoint_pairing_residual(params: OperatorParams, k: int, phi_fn, psi_fn, n=8192, dx=0.01):
    """Relative gap between <I phi, psi> and <phi, I* psi>.

    I* psi has a cusp or integrable singularity at 0 whose closed form P is
    known; <phi, I* psi - P> uses the trapezoidal rule on a grid that avoids
    0 and <phi, P> is integrated with mpmath.  ``phi_fn`` and ``psi_fn`` take
    numpy or mpmath scalars.
    """
    g = UniformGrid.centered(n, dx)
    lhs = pairing(apply_integration(params, k, Signal(g, phi_fn(g.x))), Signal(g, psi_fn(g.x)))
    gs = UniformGrid(n, dx, g.x0 + 0.5 * dx)
    psi = Signal(gs, psi_fn(gs.x))
    adj = apply_adjoint_integration(params, k, psi).values
    terms = adjoint_singular_terms(params, k, psi) if k else []
    p = np.zeros(gs.n, dtype=complex)
    for cr, cl, e in terms:
        p += cr * np.exp(e * np.log(-1j * gs.x + 0j)) + cl * np.exp(e * np.log(1j * gs.x + 0j))
    rhs = pairing(Signal(gs, phi_fn(gs.x)), Signal(gs, adj - p)) + _singular_pairing(terms, phi_fn)
    return abs(lhs - rhs) / abs(lhs)


def fourier_oracle(symbol, x, cutoff=40.0):
    """(1/2pi) int symbol(w) e^{iwx} dw for a symbol decaying like a Gaussian."""
    with mp.workdps(25):
        f = lambda w: symbol(w) * mp.exp(1j * w * x)  # noqa: E731
        pts = [-cutoff, -10, -3, -1, 0, 1, 3, 10, cutoff]
        return complex(mp.quad(f, pts)) / (2 * math.pi)


# ---------------------------------------------------------------------------
# impulse responses by damped oscillatory quadrature


def _damped_tail(e, y, mu):
    """int_1^inf w^e e^{-mu w} e^{iyw} dw by QUADPACK's Fourier-integral rule."""
    s = 1.0 if y > 0 else -1.0
    freq = abs(y)

    def g(u, part):
        v = (1 + u) ** e * math.exp(-mu * (1 + u))
        return v.real if part == 0 else v.imag

    out = 0j
    for part, unit in ((0, 1.0), (1, 1j)):
        c = integrate.quad(g, 0, np.inf, args=(part,), weight="cos", wvar=freq, limlst=200)[0]
        sn = integrate.quad(g, 0, np.inf, args=(part,), weight="sin", wvar=freq, limlst=200)[0]
        out += unit * (c + 1j * s * sn)
    return complex(math.cos(freq), s * math.sin(freq)) * out


def _damped_half_line(terms, mu):
    """int_0^inf sum_m c_m w^{e_m} e^{i y_m w} e^{-mu w} dw for a sum regular at 0."""
    def head(w):
        return sum(c * w**e * np.exp((1j * y - mu) * w) for c, e, y in terms) if w > 0 else 0.0

    with warnings.catch_warnings():
        # the head has a removable cancellation at w = 0
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda w: head(w).real, 0, 1, limit=200, epsabs=1e-15, epsrel=1e-13)[0]
        im = integrate.quad(lambda w: head(w).imag, 0, 1, limit=200, epsabs=1e-15, epsrel=1e-13)[0]
        tail = sum(c * _damped_tail(e, y, mu) for c, e, y in terms)
    return complex(re, im) + tail


def _extrapolate_to_zero(xs, ys):
    ys = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            ys[i] = (xs[i + m] * ys[i] - xs[i] * ys[i + 1]) / (xs[i + m] - xs[i])
    return ys[0]


def kernel_quadrature_oracle(params: OperatorParams, kind: str, k: int, tau: float, x: float) -> complex:
    """Impulse response at (tau, x) straight from the frequency-domain definition.

    Each half line of (1/2pi) int multiplier(w) e^{iw(x - tau)} dw (with the
    Taylor corrections of the integrators) is damped by e^{-mu |w|}, integrated
    with QUADPACK, and the damped values are extrapolated polynomially to
    mu = 0.  They are analytic in mu for |mu| < min |phase rate|, so the mu
    samples are scaled to stay well inside that disc.
    """
    g, a, b = params.gamma, params.a, params.b

    def side(sgn):
        if kind == "derivative":
            return [(a if sgn > 0 else b, g, sgn * (x - tau))]
        if kind == "integration":
            c = a if sgn > 0 else b
            out = [(1 / c, -g, sgn * (x - tau))]
            for j in range(k):
                out.append((-((1j * sgn * x) ** j) / math.factorial(j) / c, j - g, -sgn * tau))
            return out
        c = b if sgn > 0 else a
        out = [(1 / c, -g, sgn * (x - tau))]
        for j in range(k):
            out.append((-((-1j * sgn * tau) ** j) / math.factorial(j) / c, j - g, sgn * x))
        return out

    rate = min(abs(t[2]) for t in side(1))
    mus = [0.02 * rate * m for m in range(1, 9)]
    vals = [(_damped_half_line(side(1), mu) + _damped_half_line(side(-1), mu)) / (2 * math.pi) for mu in mus]
    return complex(_extrapolate_to_zero(mus, vals))
