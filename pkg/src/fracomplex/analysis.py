"""Statistical checks on simulated ensembles: Hurst exponents, increment
stationarity and L2-Sobolev regularity.

An ensemble is a list of :class:`~fracomplex.process.Realization` or a 2D array
with one realization per row.  Standard errors are leave-one-out jackknife
estimates over realizations.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AlphaDomain,
    DomainError,
    EmptyEnsemble,
    EstimatorFailure,
    GridDomain,
    MomentDomain,
    OrderDomain,
)

DEFAULT_SCALES = (4, 8, 16, 32, 64)


@dataclass(frozen=True)
class AnalysisReport:
    estimator: str
    point_estimate: complex | float
    std_error: float
    window: tuple
    n_realizations: int

    def __post_init__(self):
        if not self.std_error >= 0:
            raise DomainError(f"std_error must be non-negative, got {self.std_error}")
        if len(self.window) == 0:
            raise DomainError("window must be nonempty")

    def to_text(self) -> str:
        return "".join(f"{key} = {value!r}\n" for key, value in asdict(self).items())

    def write_text(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())


def write_reports_csv(path, reports: Sequence[AnalysisReport]) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["estimator", "point_estimate", "std_error", "window", "n_realizations"])
        for r in reports:
            out.writerow([r.estimator, repr(r.point_estimate), repr(r.std_error),
                          " ".join(repr(w) for w in r.window), r.n_realizations])


# ---------------------------------------------------------------------------
# ensemble plumbing


def _matrix(ensemble) -> np.ndarray:
    if isinstance(ensemble, np.ndarray):
        values = np.atleast_2d(ensemble)
    else:
        ensemble = list(ensemble)
        if not ensemble:
            raise EmptyEnsemble("ensemble is empty")
        values = np.array([np.asarray(r.values) for r in ensemble])
    if values.size == 0 or values.shape[0] == 0:
        raise EmptyEnsemble("ensemble is empty")
    if values.ndim != 2:
        raise DomainError("ensemble members must be 1D signals")
    return values.astype(complex)


def _spec(ensemble):
    if isinstance(ensemble, np.ndarray):
        return None
    return getattr(next(iter(ensemble), None), "spec", None)


def _jackknife_slope(per_real: np.ndarray, logt: np.ndarray, transform: Callable) -> tuple[float, float]:
    """Regression slope of transform(mean over realizations) on logt, and its
    jackknife standard error.  ``per_real`` is (N, n_scales)."""
    n = per_real.shape[0]
    xc = logt - logt.mean()
    denom = float(np.sum(xc**2))
    total = per_real.sum(axis=0)
    slope = float(np.sum(xc * transform(total / n)) / denom)
    if n < 2:
        return slope, 0.0
    loo = transform((total[None, :] - per_real) / (n - 1))
    slopes = (loo @ xc) / denom
    se = math.sqrt((n - 1) / n * float(np.sum((slopes - slopes.mean()) ** 2)))
    return slope, se


def _increments(values: np.ndarray, lag: int, anchor: int | None) -> np.ndarray:
    if lag < 1 or lag >= values.shape[1]:
        raise DomainError(f"scale {lag} does not fit the grid")
    if anchor is None:
        return values[:, lag:] - values[:, :-lag]
    if anchor + lag >= values.shape[1]:
        raise DomainError(f"scale {lag} does not fit after the anchor")
    return (values[:, anchor + lag] - values[:, anchor])[:, None]


def _scales(scales) -> np.ndarray:
    s = np.asarray(DEFAULT_SCALES if scales is None else scales, dtype=int)
    if s.size < 3:
        raise DomainError("at least 3 scales are needed")
    if np.any(s < 1) or np.unique(s).size != s.size:
        raise DomainError("scales must be distinct positive lags (in grid steps)")
    return np.sort(s)


# ---------------------------------------------------------------------------
# estimators


def default_q(alpha: float) -> float:
    return 1.0 if alpha > 1 else alpha / 2.0


def estimate_re_hurst(ensemble, q: float | None = None, scales=None, *,
                      alpha: float | None = None, anchor: int | None = None) -> AnalysisReport:
    """Re(H) from the slope of log E|S(x+T) - S(x)|^q against log T, over q.

    ``scales`` are lags in grid steps.  Increments are pooled over all
    positions x, or taken from the single index ``anchor``.
    """
    spec = _spec(ensemble)
    if alpha is None:
        alpha = spec.alpha if spec is not None else 2.0
    if q is None:
        q = default_q(alpha)
    if q >= alpha:
        raise MomentDomain(f"q = {q} must be below alpha = {alpha}")
    if q <= 0:
        raise MomentDomain(f"q must be positive, got {q}")
    values = _matrix(ensemble)
    lags = _scales(scales)
    per_real = np.stack(
        [np.mean(np.abs(_increments(values, int(t), anchor)) ** q, axis=1) for t in lags], axis=1
    )
    if np.any(per_real.sum(axis=0) == 0):
        raise EstimatorFailure("zero increments: the ensemble is constant")
    slope, se = _jackknife_slope(per_real, np.log(lags.astype(float)), np.log)
    return AnalysisReport("re_hurst", slope / q, se / q, tuple(int(t) for t in lags), values.shape[0])


def estimate_im_hurst_gaussian(ensemble, scales=None, *, alpha: float | None = None,
                               anchor: int | None = None) -> AnalysisReport:
    """Im(H) from the rotation of the pseudo-moment E[(S(x+T) - S(x))^2]
    (experimental, Gaussian case only).

    Its phase grows like 2 Im(H) log T.  The phase is continued along the
    sorted scales by the nearest branch, so a rotation of more than pi between
    neighbouring scales aliases; with octave spacing that bounds the
    recoverable |Im(H)| by pi / (2 log 2).  A vanishing pseudo-moment raises
    :class:`EstimatorFailure`.
    """
    spec = _spec(ensemble)
    if alpha is None:
        alpha = spec.alpha if spec is not None else 2.0
    if alpha != 2:
        raise AlphaDomain(f"the pseudo-moment estimator needs alpha = 2, got {alpha}")
    values = _matrix(ensemble)
    lags = _scales(scales)
    per_real = np.stack(
        [np.mean(_increments(values, int(t), anchor) ** 2, axis=1) for t in lags], axis=1
    )
    logt = np.log(lags.astype(float))

    def phase(m):
        raw = np.angle(m)
        step = np.diff(raw, axis=-1)
        step = (step + np.pi) % (2 * np.pi) - np.pi
        return np.concatenate([raw[..., :1], raw[..., :1] + np.cumsum(step, axis=-1)], axis=-1)

    mean = per_real.mean(axis=0)
    if np.any(np.abs(mean) == 0):
        raise EstimatorFailure("pseudo-moment vanishes: phase undefined")
    slope, se = _jackknife_slope(per_real, logt, phase)
    return AnalysisReport("im_hurst_gaussian", slope / 2.0, se / 2.0,
                          tuple(int(t) for t in lags), values.shape[0])


def _difference(values: np.ndarray, order: int, h: int) -> np.ndarray:
    out = values
    for _ in range(order):
        out = out[:, h:] - out[:, :-h]
    return out


def stationarity_test(ensemble, order: int, probe: Callable | None = None, shift: float | None = None,
                      *, step: int = 1, x=None, gamma: complex | None = None, sigmas: float = 3.0) -> dict:
    """Translation-invariance check of the increments of a given order.

    Compares the empirical CFs of Re<(Delta_h)^order S, conj(phi)> and
    Re<(Delta_h)^order S, conj(phi(. - shift))> at 5 frequencies spread over
    the scale of the pairings.  Passes iff every difference is below
    ``sigmas`` paired Monte Carlo standard errors.  The default probe is a
    Gaussian at the first quarter of the grid and the default shift a quarter
    of the grid span, which moves it to the centre.  (A half-span shift would
    map it onto its mirror image about the centre, where a process pinned at
    the origin looks statistically the same.)
    """
    if int(order) != order or order < 0:
        raise DomainError(f"order must be a non-negative integer, got {order}")
    spec = _spec(ensemble)
    if gamma is None and spec is not None:
        gamma = spec.gamma
    if gamma is not None and order < math.floor(complex(gamma).real):
        warnings.warn(
            OrderDomain(f"order {order} < floor(Re gamma) = {math.floor(complex(gamma).real)}; "
                        "increments of this order are not expected to be stationary"),
            stacklevel=2,
        )
    values = _matrix(ensemble)
    if values.shape[0] < 2:
        raise EmptyEnsemble("stationarity_test needs at least two realizations")
    if x is None:
        x = spec_grid_x(ensemble, values.shape[1])
    x = np.asarray(x, dtype=float)
    diff = _difference(values, int(order), int(step))
    xs = x[: diff.shape[1]]
    span = xs[-1] - xs[0]
    if probe is None:
        centre, width = xs[0] + 0.25 * span, span / 32.0
        probe = lambda u: np.exp(-0.5 * ((u - centre) / width) ** 2)  # noqa: E731
    if shift is None:
        shift = 0.25 * span
    dx = xs[1] - xs[0]
    p0 = np.conj(np.asarray(probe(xs), dtype=complex)) * dx
    p1 = np.conj(np.asarray(probe(xs - shift), dtype=complex)) * dx
    y0 = np.real(diff @ p0)
    y1 = np.real(diff @ p1)
    scale = float(np.median(np.abs(np.concatenate([y0, y1]))))
    if scale == 0:
        return {"statistic": 0.0, "pass": True, "frequencies": [], "order": int(order)}
    freqs = np.array([0.25, 0.5, 1.0, 1.5, 2.0]) / scale
    z = np.exp(1j * freqs[None, :] * y0[:, None]) - np.exp(1j * freqs[None, :] * y1[:, None])
    n = values.shape[0]
    gap = np.abs(z.mean(axis=0))
    se = np.sqrt(np.var(z.real, axis=0) + np.var(z.imag, axis=0)) / math.sqrt(n)
    ratio = np.where(se > 0, gap / np.where(se > 0, se, 1.0), np.where(gap > 0, np.inf, 0.0))
    stat = float(ratio.max())
    return {"statistic": stat, "pass": bool(stat < sigmas), "frequencies": freqs.tolist(),
            "order": int(order)}


def spec_grid_x(ensemble, n: int) -> np.ndarray:
    if isinstance(ensemble, np.ndarray):
        return np.arange(n, dtype=float)
    return next(iter(ensemble)).grid.x


def estimate_regularity_p2(ensemble, window: tuple[int, int] | None = None) -> AnalysisReport:
    """Critical L2-Sobolev exponent from dyadic band energies.

    Each Hann-tapered realization's periodogram is averaged over the dyadic
    bands 2^j <= |index| < 2^(j+1); the mean over realizations of
    log2 E_j decays like -j (2 tau + 1).  Log-energies are averaged so that
    heavy-tailed (alpha < 2) ensembles have a finite estimator.  ``window``
    is the inclusive band range (default: 3 .. log2(n) - 2).
    """
    values = _matrix(ensemble)
    n = values.shape[1]
    levels = int(round(math.log2(n))) if n > 0 else 0
    if n < 16 or 2**levels != n:
        raise GridDomain(f"regularity estimation needs a dyadic length >= 16, got {n}")
    lo, hi = window if window is not None else (3, levels - 2)
    if not (1 <= lo < hi <= levels - 1) or hi - lo < 2:
        raise GridDomain(f"band window {lo}..{hi} is outside 1..{levels - 1} or too short")
    taper = np.hanning(n)
    spec = np.abs(np.fft.fft((values - values.mean(axis=1, keepdims=True)) * taper, axis=1)) ** 2
    idx = np.abs(np.fft.fftfreq(n) * n)
    js = np.arange(lo, hi + 1)
    energy = np.stack([spec[:, (idx >= 2.0**j) & (idx < 2.0 ** (j + 1))].mean(axis=1) for j in js], axis=1)
    if np.any(energy <= 0):
        raise EstimatorFailure("empty spectral band")
    log_e = np.log2(energy)
    slope, se = _jackknife_slope(log_e, js.astype(float), lambda m: m)
    return AnalysisReport("regularity_p2", -(slope + 1.0) / 2.0, se / 2.0, (int(lo), int(hi)),
                          values.shape[0])
