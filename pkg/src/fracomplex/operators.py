"""Spectral application of the derivative D, the integrator I and its adjoint I*
to sampled test functions.

The Fourier integrals are discretised on a zero-padded FFT grid.  Every
integrand is singular at omega = 0 (a factor |omega|^s with complex s), so the
low-frequency jet of phi-hat is first removed: a model

    R(omega) = exp(-eps |omega|) P_+-(omega),

with one-sided polynomials P_+- chosen to match the first K Taylor
coefficients of phi-hat (taken from exact moment sums), is subtracted.  The
remainder vanishes like |omega|^K at the origin and the trapezoidal sum over it
is accurate to O(domega^(K - Re(gamma) + 1)).  The transform of R itself is
evaluated in closed form through

    int_0^inf w^(beta-1) e^(-eps w) e^(i w x) dw = Gamma(beta) / (eps - i x)^beta,

which also carries the slowly decaying tails of D(phi) and I*(phi) exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import (
    DomainError,
    EmptyWindow,
    GridTooCoarse,
    KDomain,
    OriginSingularity,
    ParamDomain,
    PoleError,
)
from .multiplier import OperatorParams, eval_h
from .special_functions import complex_gamma, principal_complex_power

MAX_K = 8
_PAD = 4
_EXTRA_JET = 6
_EDGE_DECADES = 70.0
_SPREAD_FACTOR = 0.5
_TAPER_DECAY = 36.0
_TAPER_ORDER = 32
_CIRCLE_RADIUS = 0.05
_CIRCLE_NODES = 16


@dataclass(frozen=True)
class UniformGrid:
    """Uniform grid x_j = x0 + j*dx, j = 0..n-1."""

    n: int
    dx: float
    x0: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"grid needs n >= 2 samples, got {self.n}")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise DomainError(f"grid spacing must be positive, got {self.dx}")
        if not math.isfinite(self.x0):
            raise DomainError("grid origin must be finite")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "x0", float(self.x0))

    @classmethod
    def centered(cls, n: int, dx: float) -> "UniformGrid":
        """Grid whose sample n//2 sits exactly at x = 0."""
        return cls(n, dx, -(n // 2) * dx)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x_max(self) -> float:
        return max(abs(self.x0), abs(self.x0 + (self.n - 1) * self.dx))

    def freqs(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(self.n, self.dx))


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex samples on a uniform grid."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise DomainError(f"expected {self.grid.n} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("signal values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @classmethod
    def from_function(cls, grid: UniformGrid, fn) -> "Signal":
        return cls(grid, fn(grid.x))


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """phi-hat on the grid's frequency band and its first k derivatives at 0."""

    freqs: np.ndarray
    values: np.ndarray
    derivs_at_zero: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))


def gaussian(grid: UniformGrid, center: float = 0.0, width: float = 1.0) -> Signal:
    """exp(-(x-center)^2 / (2 width^2)) sampled on ``grid``."""
    return Signal(grid, np.exp(-0.5 * ((grid.x - center) / width) ** 2))


def _trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def _moments(signal: Signal, count: int) -> np.ndarray:
    """phi-hat^(j)(0) = int (-i x)^j phi(x) dx for j < count (trapezoidal)."""
    x = signal.grid.x
    weighted = _trapezoid_weights(signal.grid.n) * signal.values * signal.grid.dx
    out = np.empty(count, dtype=complex)
    acc = weighted.copy()
    for j in range(count):
        out[j] = acc.sum()
        acc = acc * (-1j * x)
    return out


def _spectrum(signal: Signal, pad: int):
    """FFT-ordered frequencies and trapezoidal phi-hat on a grid padded to pad*n."""
    grid = signal.grid
    size = pad * grid.n
    buf = np.zeros(size, dtype=complex)
    buf[: grid.n] = _trapezoid_weights(grid.n) * signal.values
    omega = 2 * np.pi * np.fft.fftfreq(size, grid.dx)
    phi_hat = grid.dx * np.exp(-1j * omega * grid.x0) * np.fft.fft(buf)
    return omega, phi_hat


def _inverse(values: np.ndarray, omega: np.ndarray, grid: UniformGrid) -> np.ndarray:
    """(1/2pi) sum_m values_m e^{i omega_m x_j} domega at the grid's own samples."""
    out = np.fft.ifft(values * np.exp(1j * omega * grid.x0)) / grid.dx
    return out[: grid.n]


def spectral_profile(signal: Signal, k: int = 0, reference=None) -> SpectralProfile:
    """Trapezoidal phi-hat on the grid's band plus phi-hat^(j)(0), j < k.

    ``reference``, when given, is a callable omega -> analytic phi-hat; the grid
    is rejected (GridTooCoarse) if more than 1e-6 of its energy lies outside
    the Nyquist band.
    """
    if int(k) != k or k < 0 or k > MAX_K:
        raise KDomain(f"k must be an integer in [0, {MAX_K}], got {k}")
    if reference is not None:
        nyq = np.pi / signal.grid.dx
        energy = lambda w: abs(reference(w)) ** 2  # noqa: E731
        inside = integrate.quad(energy, -nyq, nyq, limit=400)[0]
        outside = (
            integrate.quad(energy, nyq, np.inf, limit=400)[0]
            + integrate.quad(energy, -np.inf, -nyq, limit=400)[0]
        )
        total = inside + outside
        if total > 0 and outside / total > 1e-6:
            raise GridTooCoarse(
                f"{outside / total:.3g} of the reference energy lies above the Nyquist band"
            )
    omega, phi_hat = _spectrum(signal, 1)
    order = np.argsort(omega)
    return SpectralProfile(omega[order], phi_hat[order], _moments(signal, int(k)))


# ---------------------------------------------------------------------------
# low-frequency jet model


@dataclass(frozen=True, eq=False)
class _Jet:
    eps: float
    pos: np.ndarray
    neg: np.ndarray
    taylor: np.ndarray

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        out = np.empty(omega.shape, dtype=complex)
        right = omega >= 0
        wr, wl = omega[right], omega[~right]
        out[right] = np.exp(-self.eps * wr) * np.polynomial.polynomial.polyval(wr, self.pos)
        out[~right] = np.exp(self.eps * wl) * np.polynomial.polynomial.polyval(wl, self.neg)
        return out


def _jet(signal: Signal, order: int) -> _Jet:
    # eps must dominate the spatial extent of phi, or the truncated polynomial
    # overshoots phi-hat, and eps*Nyquist must push the model below rounding at
    # the band edge
    moments = _moments(signal, order)
    mag = np.abs(signal.values)
    total = mag.sum()
    spread = 0.0
    if total > 0 and order > 1:
        spread = (np.sum(np.abs(signal.grid.x) ** (order - 1) * mag) / total) ** (1.0 / (order - 1))
    eps = max(_EDGE_DECADES * signal.grid.dx / np.pi, _SPREAD_FACTOR * order * spread)
    fact = np.array([math.factorial(q) for q in range(order)], dtype=float)
    taylor = moments / fact
    pos = np.zeros(order, dtype=complex)
    neg = np.zeros(order, dtype=complex)
    for p in range(order):
        for q in range(p + 1):
            c = taylor[q] / math.factorial(p - q)
            pos[p] += c * eps ** (p - q)
            neg[p] += c * (-eps) ** (p - q)
    return _Jet(eps, pos, neg, taylor)


def _near_positive_integer(gamma: complex) -> bool:
    n = round(gamma.real)
    return n >= 1 and abs(gamma - n) < 1e-3


def _analytic_in_gamma(fn, gamma: complex):
    """fn(gamma), or its mean over a small circle when gamma sits on a removable
    singularity of the individual Gamma-function terms (integer gamma)."""
    if not _near_positive_integer(gamma):
        try:
            return fn(gamma)
        except PoleError:
            pass
    nodes = gamma + _CIRCLE_RADIUS * np.exp(2j * np.pi * (np.arange(_CIRCLE_NODES) + 0.5) / _CIRCLE_NODES)
    return sum(fn(complex(g)) for g in nodes) / _CIRCLE_NODES


def _damped_transform(jet: _Jet, amp_pos, amp_neg, mu, x, k: int) -> np.ndarray:
    """(1/2pi) int R(w) m(w) E_k(w x) dw with m = amp_pos w^mu (w>0), amp_neg |w|^mu (w<0),
    E_k(u) = e^{iu} - sum_{l<k} (iu)^l / l!."""
    x = np.asarray(x, dtype=float)
    log_p = np.log(jet.eps - 1j * x)
    log_m = np.log(jet.eps + 1j * x)
    log_e = math.log(jet.eps)
    out = np.zeros(x.shape, dtype=complex)
    for p in range(len(jet.pos)):
        beta = p + mu + 1.0
        g = complex_gamma(beta)
        right = g * np.exp(-beta * log_p)
        left = g * np.exp(-beta * log_m)
        for l in range(k):
            c = complex_gamma(beta + l) * cmath.exp(-(beta + l) * log_e) / math.factorial(l)
            right = right - c * (1j * x) ** l
            left = left - c * (-1j * x) ** l
        out += amp_pos * jet.pos[p] * right + amp_neg * jet.neg[p] * (-1) ** p * left
    return out / (2 * np.pi)


# ---------------------------------------------------------------------------
# parameter checks


def _check_integration(params: OperatorParams, k: int) -> None:
    g = params.gamma
    if int(k) != k or k < 0:
        raise KDomain(f"k must be a non-negative integer, got {k}")
    if k > MAX_K:
        raise KDomain(f"k must be at most {MAX_K}, got {k}")
    if g.real <= 0:
        raise ParamDomain(f"integration needs Re(gamma) > 0, got {g}")
    if k == 0:
        if g.real >= 1:
            raise KDomain(f"k = 0 needs Re(gamma) < 1, got {g}")
    elif k < math.floor(g.real):
        raise KDomain(f"k must be >= floor(Re gamma) = {math.floor(g.real)}, got {k}")


# ---------------------------------------------------------------------------
# operators


def apply_derivative(params: OperatorParams, signal: Signal, *, detrend: int | None = None) -> Signal:
    """D phi = F^{-1}{phi-hat h}, with the omega = 0 node weighted by h(0) = 0.

    For inputs that do not decay (for instance I phi), pass ``detrend=d`` with
    d < Re(gamma): a least-squares polynomial of degree d, which D annihilates,
    is removed and the transform is taken periodically on the grid itself,
    with a smooth roll-off over the top half of the band.  Values are then
    reliable away from the grid ends only, since D is nonlocal and the input
    is unknown outside the grid.
    """
    g = params.gamma
    if g.real <= -1:
        raise ParamDomain(f"derivative needs Re(gamma) > -1, got {g}")
    grid = signal.grid
    if detrend is not None:
        if int(detrend) != detrend or detrend < 0 or detrend >= max(g.real, 0.0) + (g.real <= 0):
            raise ParamDomain(f"D only annihilates polynomials of degree < Re(gamma); got {detrend}")
        x = grid.x
        t = (x - x.mean()) / (0.5 * (x[-1] - x[0]))
        coef = np.polynomial.polynomial.polyfit(t, signal.values, int(detrend))
        resid = signal.values - np.polynomial.polynomial.polyval(t, coef)
        omega = 2 * np.pi * np.fft.fftfreq(grid.n, grid.dx)
        # a smooth roll-off at the band edge keeps the jump of h there from
        # spreading the wrap-around discontinuity across the whole grid
        taper = np.exp(-_TAPER_DECAY * (np.abs(omega) * grid.dx / np.pi) ** _TAPER_ORDER)
        spec = np.fft.fft(resid) * eval_h(params, omega) * taper
        return Signal(grid, np.fft.ifft(spec))
    jet = _jet(signal, _EXTRA_JET + 2)
    omega, phi_hat = _spectrum(signal, _PAD)
    smooth = (phi_hat - jet(omega)) * eval_h(params, omega)
    values = _inverse(smooth, omega, grid)
    values += _damped_transform(jet, params.a, params.b, g, grid.x, 0)
    return Signal(grid, values)


def apply_integration(params: OperatorParams, k: int, signal: Signal) -> Signal:
    """I^{gamma;k} phi(x) = (1/2pi) int phi-hat (e^{iwx} - sum_{j<k} (iwx)^j/j!) / h(w) dw."""
    _check_integration(params, k)
    g = params.gamma
    grid = signal.grid
    jet = _jet(signal, k + _EXTRA_JET)
    omega, phi_hat = _spectrum(signal, _PAD)
    h = eval_h(params, omega)
    nz = omega != 0
    ratio = np.zeros_like(phi_hat)
    ratio[nz] = (phi_hat[nz] - jet(omega[nz])) / h[nz]
    x = grid.x
    values = _inverse(ratio, omega, grid)
    # Taylor-correction coefficients of the jet-free part: (1/2pi) int ratio w^j dw
    dw = abs(omega[1] - omega[0])
    for j in range(k):
        c_j = (ratio * omega**j).sum() * dw / (2 * np.pi)
        values -= c_j * (1j * x) ** j / math.factorial(j)
    a, b = params.a, params.b
    values += _analytic_in_gamma(
        lambda gg: _damped_transform(jet, 1 / a, 1 / b, -gg, x, k), g
    )
    return Signal(grid, values)


def _adjoint_power_terms(taylor: np.ndarray, params: OperatorParams, gamma: complex, x: np.ndarray):
    """-(1/2pi) F^{-1}{ sum_{j<k} t_j w^j / h(-w) } for x != 0."""
    out = np.zeros(x.shape, dtype=complex)
    for j, t_j in enumerate(taylor):
        beta = j - gamma + 1.0
        gj = complex_gamma(beta)
        right = principal_complex_power(x, -1, -beta) / params.b
        left = (-1) ** j * principal_complex_power(x, 1, -beta) / params.a
        out -= t_j * gj * (right + left)
    return out / (2 * np.pi)


def adjoint_singular_terms(params: OperatorParams, k: int, signal: Signal):
    """Non-smooth part of I*phi as a list of (c_right, c_left, e) with

        P(x) = sum c_right (-i x)^e + c_left (i x)^e,

    so that I*phi - P is smooth across x = 0.  Useful for quadrature of
    products with I*phi; undefined for integer gamma (logarithmic terms).
    """
    _check_integration(params, k)
    g = params.gamma
    if _near_positive_integer(g):
        raise ParamDomain("singular terms carry logarithms for integer gamma")
    taylor = _moments(signal, k) / np.array([math.factorial(j) for j in range(k)], dtype=float)
    terms = []
    for j, t_j in enumerate(taylor):
        beta = j - g + 1.0
        c = -t_j * complex_gamma(beta) / (2 * np.pi)
        terms.append((c / params.b, c * (-1) ** j / params.a, -beta))
    return terms


def apply_adjoint_integration(params: OperatorParams, k: int, signal: Signal) -> Signal:
    """I*^{gamma;k} phi = F^{-1}{(phi-hat - sum_{j<k} phi-hat^(j)(0) w^j/j!) / h(-w)}."""
    _check_integration(params, k)
    g = params.gamma
    grid = signal.grid
    x = grid.x
    at_origin = x == 0.0
    if np.any(at_origin) and k >= g.real:
        raise OriginSingularity(
            f"I* phi is unbounded at x = 0 for k = {k} > floor(Re gamma); shift the grid"
        )
    jet = _jet(signal, k + _EXTRA_JET)
    omega, phi_hat = _spectrum(signal, _PAD)
    h = eval_h(params, -omega)
    nz = omega != 0
    ratio = np.zeros_like(phi_hat)
    ratio[nz] = (phi_hat[nz] - jet(omega[nz])) / h[nz]
    values = _inverse(ratio, omega, grid)
    values += _adjoint_closed_form(params, k, jet, x)
    return Signal(grid, values)


def _adjoint_closed_form(params: OperatorParams, k: int, jet: _Jet, x: np.ndarray) -> np.ndarray:
    """F^{-1}{(R - T_k) / h(-w)} at x: the part of I*phi carrying its power-law tails."""
    a, b = params.a, params.b
    taylor = jet.taylor[:k]
    off = x != 0.0

    def closed(gg):
        part = _damped_transform(jet, 1 / b, 1 / a, -gg, x, 0)
        if k:
            part[off] += _adjoint_power_terms(taylor, params, gg, x[off])
        return part

    return _analytic_in_gamma(closed, params.gamma)


def _adjoint_asymptotic(params: OperatorParams, k: int, jet: _Jet, x: np.ndarray, terms: int = 60) -> np.ndarray:
    """Convergent inverse-power series of the closed-form part for |x| > eps.

    Expands R(w) = exp(-eps|w|) P(w) in powers of w on each side; the first k
    coefficients cancel against the Taylor jet exactly and are skipped, which
    avoids the cancellation of the direct formula at large |x|.
    """
    g = params.gamma
    order = len(jet.pos)
    rho_pos = np.zeros(terms, dtype=complex)
    rho_neg = np.zeros(terms, dtype=complex)
    for q in range(terms):
        for p in range(min(q, order - 1) + 1):
            f = jet.eps ** (q - p) / math.factorial(q - p)
            rho_pos[q] += jet.pos[p] * (-1) ** (q - p) * f
            rho_neg[q] += jet.neg[p] * f
    out = np.zeros(x.shape, dtype=complex)
    for q in range(k, terms):
        beta = q - g + 1.0
        gq = complex_gamma(beta)
        out += gq * (
            rho_pos[q] / params.b * principal_complex_power(x, -1, -beta)
            + rho_neg[q] * (-1) ** q / params.a * principal_complex_power(x, 1, -beta)
        )
    return out / (2 * np.pi)


def adjoint_far_field(params: OperatorParams, k: int, signal: Signal, x) -> np.ndarray:
    """I*phi at points outside the grid of ``signal``.

    Away from the support of phi only the closed-form part of I*phi survives
    (the FFT remainder decays like |x|^-(k + 7 - Re gamma)), so this evaluates
    that part at arbitrary nonzero x, switching to its inverse-power series
    for |x| > 8 eps.  ``far_field_start`` gives the distance beyond which the
    remainder may be neglected.
    """
    _check_integration(params, k)
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise OriginSingularity("far-field evaluation needs x != 0")
    jet = _jet(signal, k + _EXTRA_JET)
    out = np.empty(x.shape, dtype=complex)
    far = np.abs(x) > 8 * jet.eps
    if _near_positive_integer(params.gamma):
        out[far] = _analytic_in_gamma(lambda gg: _adjoint_asymptotic(params.with_gamma(gg), k, jet, x[far]), params.gamma)
    else:
        out[far] = _adjoint_asymptotic(params, k, jet, x[far])
    out[~far] = _adjoint_closed_form(params, k, jet, x[~far])
    return out


def far_field_start(signal: Signal, k: int) -> float:
    """Distance from the origin beyond which I*phi equals its closed-form part
    to high relative accuracy (a multiple of the jet damping length)."""
    return 16.0 * _jet(signal, k + _EXTRA_JET).eps + np.abs(signal.grid.x[np.abs(signal.values) > 0]).max(initial=0.0)


def pairing(f: Signal, g: Signal) -> complex:
    """Bilinear pairing <f, g> = int f g dx (no conjugation), trapezoidal."""
    if f.grid != g.grid:
        raise DomainError("pairing needs signals on the same grid")
    w = _trapezoid_weights(f.grid.n) * f.grid.dx
    return complex(np.sum(w * f.values * g.values))


def measure_tail_exponent(signal: Signal, window=None, side: int = 1) -> dict:
    """Least-squares slope of log|s| against log|x| over ``window`` on one side.

    Default window is [10, 0.4 * x_max]; returns {"slope", "r2"}.
    """
    grid = signal.grid
    if window is None:
        window = (10.0, 0.4 * grid.x_max)
    lo, hi = float(window[0]), float(window[1])
    x = side * grid.x
    mag = np.abs(signal.values)
    sel = (x >= lo) & (x <= hi) & (mag > 0)
    if lo <= 0 or hi <= lo or sel.sum() < 3:
        raise EmptyWindow(f"window [{lo}, {hi}] holds {int(sel.sum())} usable samples")
    lx, ly = np.log(x[sel]), np.log(mag[sel])
    slope, intercept = np.polyfit(lx, ly, 1)
    fit = slope * lx + intercept
    ss_res = float(np.sum((ly - fit) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "r2": r2}
