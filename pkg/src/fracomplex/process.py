"""Fractional stable processes S = I^{gamma;k} W_alpha: admissibility, simulation
and characteristic functionals."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .errors import (
    DomainError,
    EmptyEnsemble,
    ForbiddenBoundary,
    NonIntegrableKernel,
    ParamDomain,
)
from .kernels import apply_noise_rows, integration_cell_weights
from .multiplier import OperatorParams
from .noise import generator, standard_sas
from .special_functions import principal_complex_power
from .operators import (
    Signal,
    UniformGrid,
    _trapezoid_weights,
    adjoint_far_field,
    adjoint_singular_terms,
    far_field_start,
    apply_adjoint_integration,
)

BOUNDARY_TOL = 1e-9


def k_of(alpha: float, gamma: complex) -> int:
    """floor(1/alpha + Re gamma); the boundary 1/alpha + Re gamma in N is forbidden."""
    v = 1.0 / alpha + complex(gamma).real
    if abs(v - round(v)) < BOUNDARY_TOL:
        raise ForbiddenBoundary(f"1/alpha + Re(gamma) = {v} is an integer")
    return math.floor(v)


def is_whitenable(alpha: float, gamma: complex) -> bool:
    """alpha > 1/(2 - frac(Re gamma)), or alpha > 1 when Re gamma is an integer."""
    r = complex(gamma).real
    if r <= 0:
        raise ParamDomain(f"Re(gamma) must be positive, got {r}")
    frac = r - math.floor(r)
    if abs(frac) < 1e-12 or abs(frac - 1) < 1e-12:
        return alpha > 1.0
    return alpha > 1.0 / (2.0 - frac)


@dataclass(frozen=True)
class ProcessSpec:
    alpha: float
    gamma: complex
    a: complex = 1.0
    b: complex = 1.0
    k_override: int | None = None

    def __post_init__(self):
        if not (0 < self.alpha <= 2):
            raise ParamDomain(f"alpha must lie in (0, 2], got {self.alpha}")
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.gamma.real <= 0:
            raise ParamDomain(f"Re(gamma) must be positive, got {self.gamma}")
        if self.a == 0 or self.b == 0:
            raise ParamDomain("a and b must be nonzero")
        if self.k_override is None:
            k_of(self.alpha, self.gamma)
        elif int(self.k_override) != self.k_override or self.k_override < 0:
            raise ParamDomain(f"k_override must be a non-negative integer, got {self.k_override}")

    @property
    def params(self) -> OperatorParams:
        return OperatorParams(self.a, self.b, self.gamma)

    @property
    def k(self) -> int:
        return int(self.k_override) if self.k_override is not None else k_of(self.alpha, self.gamma)


def hurst_of(spec: ProcessSpec) -> complex:
    return spec.gamma + 1.0 / spec.alpha - 1.0


@dataclass(frozen=True, eq=False)
class Realization:
    grid: UniformGrid
    values: np.ndarray
    seed: int
    k_used: int
    hurst: complex
    stream: int = 0
    grid_y: UniformGrid | None = None
    meta: dict = field(default_factory=dict)
    spec: ProcessSpec | None = None


@dataclass(frozen=True)
class SimulationConfig:
    """Discretisation of the stochastic integral.

    refine: noise cells per output cell; pad: fraction of the output window
    added on each side with fine cells; far_ratio: the far field beyond the
    padded window is covered by geometrically growing cells (ratio
    ``far_growth``) out to ``far_ratio`` times the padded half-width.
    """

    refine: int = 4
    pad: float = 0.5
    far_ratio: float = 1e4
    far_growth: float = 1.05

    def __post_init__(self):
        if int(self.refine) != self.refine or self.refine < 1:
            raise DomainError(f"refine must be a positive integer, got {self.refine}")
        if self.pad < 0:
            raise DomainError(f"pad must be non-negative, got {self.pad}")
        if self.far_ratio < 1 or self.far_growth <= 1:
            raise DomainError("far_ratio must be >= 1 and far_growth > 1")


def noise_grid(grid: UniformGrid, config: SimulationConfig) -> UniformGrid:
    """Fine cell-centre grid whose every ``refine``-th node is an output node."""
    r = int(config.refine)
    pad_cells = int(math.ceil(config.pad * grid.n)) * r
    d = grid.dx / r
    return UniformGrid((grid.n - 1) * r + 1 + 2 * pad_cells, d, grid.x0 - pad_cells * d)


def _far_edges(tau_grid: UniformGrid, config: SimulationConfig):
    """Geometric far-field cell edges on the right and left of the fine grid."""
    h = 0.5 * tau_grid.dx
    right0 = tau_grid.x0 + (tau_grid.n - 1) * tau_grid.dx + h
    left0 = tau_grid.x0 - h
    if config.far_ratio <= 1:
        return np.array([]), np.array([])
    half = 0.5 * (right0 - left0)
    centre = 0.5 * (right0 + left0)
    stop = centre + half * config.far_ratio
    count = max(1, int(math.ceil(math.log(config.far_ratio) / math.log(config.far_growth))))
    right = centre + half * config.far_growth ** np.arange(count + 1)
    right[0] = right0
    right[-1] = max(right[-1], stop)
    left = centre - half * config.far_growth ** np.arange(count + 1)
    left[0] = left0
    left = left[::-1]
    return right, left


def _draw(alpha, tau_grid, n_far, seed, streams):
    """Fine-cell and far-cell noise for each stream (one row per realization)."""
    fine = np.empty((len(streams), tau_grid.n))
    far = np.empty((len(streams), n_far))
    scale = tau_grid.dx ** (1.0 / alpha)
    for row, stream in enumerate(streams):
        rng = generator(seed, stream)
        fine[row] = standard_sas(alpha, tau_grid.n, rng) * scale
        far[row] = standard_sas(alpha, n_far, rng)
    return fine, far


def _simulate_rows(spec: ProcessSpec, grid: UniformGrid, seed: int, streams, config: SimulationConfig, noise=None):
    params, k = spec.params, spec.k
    tau_grid = noise_grid(grid, config)
    right, left = _far_edges(tau_grid, config)
    edges_far = [e for e in (left, right) if e.size > 1]
    widths = np.concatenate([np.diff(e) for e in edges_far]) if edges_far else np.zeros(0)
    if noise is None:
        fine, far = _draw(spec.alpha, tau_grid, widths.size, seed, streams)
        far = far * widths ** (1.0 / spec.alpha)
    else:
        fine = np.atleast_2d(np.asarray(noise, dtype=float))
        if fine.shape[-1] != tau_grid.n:
            raise DomainError(f"injected noise needs {tau_grid.n} cells per row")
        far = np.zeros((fine.shape[0], widths.size))
    values = apply_noise_rows(params, k, fine, tau_grid, grid)
    if widths.size:
        weights = np.concatenate(
            [integration_cell_weights(params, k, e, grid) for e in edges_far], axis=1
        ) / widths[None, :]
        values = values + far @ weights.T
    return values, tau_grid


def simulate_1d(spec: ProcessSpec, grid: UniformGrid, seed: int, stream: int = 0,
                config: SimulationConfig | None = None, noise=None) -> Realization:
    """One realization of S = I^{gamma;k} W_alpha on ``grid``.

    The noise lives on a grid ``refine`` times finer, padded on both sides, plus
    geometrically growing far-field cells; each cell's noise multiplies the
    exact cell integral of the integration kernel.  ``noise`` may inject the
    fine-cell values directly (the far field is then zero).
    """
    config = config or SimulationConfig()
    values, tau_grid = _simulate_rows(spec, grid, seed, [stream], config, noise)
    return Realization(
        grid, values[0], int(seed), spec.k, hurst_of(spec), int(stream),
        meta={"refine": config.refine, "pad": config.pad, "far_ratio": config.far_ratio,
              "noise_cells": tau_grid.n},
        spec=spec,
    )


def worker_count() -> int:
    """Worker threads for ensemble simulation: FRACOMPLEX_THREADS if set, else
    the CPU count."""
    env = os.environ.get("FRACOMPLEX_THREADS")
    if env is None or env.strip() == "":
        return os.cpu_count() or 1
    try:
        count = int(env)
    except ValueError:
        raise DomainError(f"FRACOMPLEX_THREADS must be a positive integer, got {env!r}") from None
    if count < 1:
        raise DomainError(f"FRACOMPLEX_THREADS must be a positive integer, got {env!r}")
    return count


def simulate_ensemble(spec: ProcessSpec, grid: UniformGrid, seed: int, count: int,
                      config: SimulationConfig | None = None, batch: int = 32,
                      workers: int | None = None) -> list[Realization]:
    """``count`` independent realizations; realization j uses RNG stream j.

    Batches run on up to ``workers`` threads (default :func:`worker_count`);
    the result does not depend on the number of workers.
    """
    config = config or SimulationConfig()
    workers = worker_count() if workers is None else int(workers)
    batches = [list(range(start, min(count, start + batch))) for start in range(0, count, batch)]

    def run(streams):
        return _simulate_rows(spec, grid, seed, streams, config)[0]

    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, batches))
    else:
        results = [run(b) for b in batches]
    out = []
    for streams, values in zip(batches, results):
        for row, stream in enumerate(streams):
            out.append(Realization(grid, values[row], int(seed), spec.k, hurst_of(spec), stream, spec=spec))
    return out


def simulate_2d_separable(spec: ProcessSpec, grids, seed: int,
                          config: SimulationConfig | None = None, noise=None) -> Realization:
    """2D field: i.i.d. SaS cell noise filtered by the 1D integration kernel along
    rows (x), then along columns (y).  No far field in 2D."""
    config = config or SimulationConfig(far_ratio=1.0)
    gx, gy = grids
    params, k = spec.params, spec.k
    tx, ty = noise_grid(gx, config), noise_grid(gy, config)
    if noise is None:
        rng = generator(seed, 0)
        cells = standard_sas(spec.alpha, (ty.n, tx.n), rng) * (tx.dx * ty.dx) ** (1.0 / spec.alpha)
    else:
        cells = np.asarray(noise, dtype=complex)
        if cells.shape != (ty.n, tx.n):
            raise DomainError(f"injected noise needs shape {(ty.n, tx.n)}")
    rows = apply_noise_rows(params, k, cells, tx, gx)  # (ty.n, gx.n)
    field_ = apply_noise_rows(params, k, rows.T, ty, gy).T  # (gy.n, gx.n)
    return Realization(gx, field_, int(seed), k, hurst_of(spec), 0, grid_y=gy,
                       meta={"order": "rows-then-columns", "refine": config.refine, "pad": config.pad},
                       spec=spec)


# ---------------------------------------------------------------------------
# characteristic functionals


def _tail_mass(params, k, phi: Signal, alpha: float, start: float, side: int, decades: float = 12.0) -> float:
    """int_{|x| > start} |Re I*phi(x)|^alpha dx on one side, in log coordinates."""
    g = params.gamma
    rate = alpha * (k + 1 - g.real) - 1.0  # decay rate of the integrand in log-space
    if rate <= 0:
        raise ParamDomain("I*phi is not alpha-integrable: the process is not whitenable")
    span = max(decades * math.log(10) / rate, 5.0)
    u = np.linspace(math.log(start), math.log(start) + span, 4097)
    x = side * np.exp(u)
    vals = np.abs(np.real(adjoint_far_field(params, k, phi, x))) ** alpha * np.exp(u)
    mass = integrate.simpson(vals, x=u)
    # beyond the last node the integrand decays like exp(-rate u)
    return float(mass + vals[-1] / rate)


def _widened(phi: Signal, half_width: float) -> Signal:
    """phi zero-extended (same spacing) so that the grid covers [-half_width, half_width]."""
    g = phi.grid
    left = max(0, int(math.ceil((g.x0 + half_width) / g.dx)))
    right_end = g.x0 + (g.n - 1) * g.dx
    right = max(0, int(math.ceil((half_width - right_end) / g.dx)))
    if left == 0 and right == 0:
        return phi
    grid = UniformGrid(g.n + left + right, g.dx, g.x0 - left * g.dx)
    vals = np.zeros(grid.n, dtype=complex)
    vals[left:left + g.n] = phi.values
    return Signal(grid, vals)


_GAUSS_NODES = 10
_LOG_DECAY = 36.0
_LOG_STEP = 0.125
_ROOT_ITERATIONS = 60


def _gauss_unit():
    t, wt = np.polynomial.legendre.leggauss(_GAUSS_NODES)
    return 0.5 * (t + 1.0), 0.5 * wt


def _segments_mass(f, lo, hi, alpha):
    """sum of int_lo^hi |f|^alpha over segments, splitting each at a sign change of f."""
    t, wt = _gauss_unit()
    flo, fhi = f(lo), f(hi)
    split = np.sign(flo) * np.sign(fhi) < 0
    mid = 0.5 * (lo + hi)
    if np.any(split):
        a, b, fa = lo[split], hi[split], flo[split]
        for _ in range(_ROOT_ITERATIONS):  # vectorised bisection
            m = 0.5 * (a + b)
            same = np.sign(f(m)) == np.sign(fa)
            a = np.where(same, m, a)
            b = np.where(same, b, m)
        mid[split] = 0.5 * (a + b)
    total = 0.0
    for a, b in ((lo[split], mid[split]), (mid[split], hi[split]), (lo[~split], hi[~split])):
        width = b - a
        xq = a[:, None] + width[:, None] * t[None, :]
        total += float(np.sum(width[:, None] * wt[None, :] * np.abs(f(xq)) ** alpha))
    return total


def _grid_mass(params, k, phi: Signal, ip: np.ndarray, alpha: float) -> float:
    """int |Re I*phi|^alpha over the grid.

    I*phi has an algebraic cusp (or integrable singularity) at x = 0, and
    |.|^alpha has kinks where Re I*phi changes sign; both spoil the
    trapezoidal rule.  The non-smooth part P at 0 is known in closed form, so
    the smooth remainder is splined and |Re(spline + P)|^alpha is integrated
    cell by cell with Gauss rules split at sign changes, and in logarithmic
    coordinates on the two half cells touching 0.
    """
    g = phi.grid
    x = g.x
    try:
        terms = adjoint_singular_terms(params, k, phi) if k else []
    except ParamDomain:
        terms = []  # integer gamma: logarithmic terms, plain trapezoid
    if not terms or not (x[0] < 0 < x[-1]):
        w = _trapezoid_weights(g.n) * g.dx
        return float(np.sum(w * np.abs(ip.real) ** alpha))

    def singular(xs):
        out = np.zeros(xs.shape, dtype=complex)
        nz = xs != 0
        for cr, cl, e in terms:
            out[nz] += cr * principal_complex_power(xs[nz], -1, e) + cl * principal_complex_power(xs[nz], 1, e)
        return out

    spline = CubicSpline(x, (ip - singular(x)).real)

    def f(xs):
        return spline(xs) + singular(xs).real

    s_exp = alpha * min(complex(e).real for _, _, e in terms)
    if s_exp <= -1.0:
        raise NonIntegrableKernel(f"|I* phi|^alpha ~ |x|^{s_exp:.3g} near 0 is not integrable")
    knots = np.union1d(x, [0.0])
    j0 = int(np.searchsorted(knots, 0.0))
    lo, hi = knots[:-1], knots[1:]
    regular = (lo != 0.0) & (hi != 0.0)
    total = _segments_mass(f, lo[regular], hi[regular], alpha)
    # half cells at 0: x = end * exp(-v), integrand ~ exp(-v (1 + s))
    v_max = _LOG_DECAY / min(1.0 + s_exp, 1.0)
    v_edges = np.arange(0.0, v_max + _LOG_STEP, _LOG_STEP)
    for end in (knots[j0 - 1], knots[j0 + 1]):
        total += _segments_mass(
            lambda v: f(end * np.exp(-v)) * (abs(end) * np.exp(-v)) ** (1.0 / alpha),
            v_edges[:-1], v_edges[1:], alpha,
        )
    return total


def cf_exponent(spec: ProcessSpec, phi: Signal) -> float:
    """||Re I*phi||_alpha^alpha, including the power-law tails of I*phi.

    I*phi is computed on a zero-extended grid out to the distance where its
    FFT remainder is negligible; beyond that the closed-form far field is
    integrated in logarithmic coordinates.
    """
    params, k, alpha = spec.params, spec.k, spec.alpha
    if not np.any(phi.values):
        return 0.0
    rel = max(abs(phi.values[0]), abs(phi.values[-1])) / np.abs(phi.values).max()
    if rel > 1e-10:
        raise DomainError("probe must decay below 1e-10 of its peak at the grid ends")
    grid = phi.grid
    if grid.x0 >= 0 or grid.x0 + (grid.n - 1) * grid.dx <= 0:
        raise DomainError("probe grid must straddle x = 0")
    start = max(far_field_start(phi, k), grid.x_max)
    wide = _widened(phi, start)
    ip = apply_adjoint_integration(params, k, wide).values
    wg = wide.grid
    inside = _grid_mass(params, k, wide, ip, alpha)
    right_end = wg.x0 + (wg.n - 1) * wg.dx
    return (inside + _tail_mass(params, k, phi, alpha, right_end, 1)
            + _tail_mass(params, k, phi, alpha, -wg.x0, -1))


def analytic_cf(spec: ProcessSpec, phi: Signal) -> float:
    """exp(-||Re I*phi||_alpha^alpha)."""
    return math.exp(-cf_exponent(spec, phi))


def _pairings(realizations, phi: Signal) -> np.ndarray:
    if len(realizations) == 0:
        raise EmptyEnsemble("mc_cf needs at least one realization")
    w = _trapezoid_weights(phi.grid.n) * phi.grid.dx * np.conj(phi.values)
    out = []
    for r in realizations:
        if r.grid != phi.grid:
            raise DomainError("probe and realizations must share a grid")
        out.append(np.real(np.sum(r.values * w)))
    return np.array(out)


def mc_cf(realizations, phi: Signal) -> complex:
    """(1/N) sum_j exp(i Re<S_j, conj(phi)>)."""
    return complex(np.mean(np.exp(1j * _pairings(realizations, phi))))


def mc_cf_stderr(realizations, phi: Signal) -> float:
    """Monte Carlo standard error of ``mc_cf``."""
    z = np.exp(1j * _pairings(realizations, phi))
    return float(np.std(z) / math.sqrt(len(z)))


def write_realization_csv(path, spec: ProcessSpec, real: Realization, header: dict | None = None) -> None:
    """Header carries alpha, gamma, a, b, k, seed, H (plus ``header`` entries);
    one row per sample."""
    with open(path, "w") as fh:
        fh.write("# fracomplex realization v1\n")
        for key, val in (("alpha", spec.alpha), ("gamma", spec.gamma), ("a", spec.a), ("b", spec.b),
                         ("k", real.k_used), ("seed", real.seed), ("stream", real.stream), ("H", real.hurst),
                         ("n", real.grid.n), ("dx", real.grid.dx), ("x0", real.grid.x0)):
            fh.write(f"# {key} = {val!r}\n")
        for key, val in sorted({**real.meta, **(header or {})}.items()):
            fh.write(f"# {key} = {val!r}\n")
        if real.grid_y is None:
            fh.write("x,re,im\n")
            for x, v in zip(real.grid.x, real.values):
                fh.write(f"{x:.17g},{v.real:.17g},{v.imag:.17g}\n")
        else:
            fh.write(f"# ny = {real.grid_y.n}\n# dy = {real.grid_y.dx!r}\n# y0 = {real.grid_y.x0!r}\n")
            fh.write("x,y,re,im\n")
            for iy, y in enumerate(real.grid_y.x):
                for ix, x in enumerate(real.grid.x):
                    v = real.values[iy, ix]
                    fh.write(f"{x:.17g},{y:.17g},{v.real:.17g},{v.imag:.17g}\n")


def region_map(alphas, re_gammas) -> list[dict]:
    """Admissibility of every (alpha, Re gamma) pair: k, whitenability, and
    whether k lies in {floor(Re gamma), ceil(Re gamma)}."""
    rows = []
    for alpha in alphas:
        for g in re_gammas:
            row = {"alpha": float(alpha), "re_gamma": float(g), "k": None,
                   "whitenable": False, "forbidden": False, "k_member": False}
            try:
                k = k_of(alpha, g)
            except ForbiddenBoundary:
                row["forbidden"] = True
            else:
                row["k"] = k
                row["whitenable"] = is_whitenable(alpha, g)
                near = round(g)
                members = (near,) if abs(g - near) < 1e-12 else (math.floor(g), math.ceil(g))
                row["k_member"] = k in members
            rows.append(row)
    return rows
