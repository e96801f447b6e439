"""Complex-order scale-invariant operators and the self-similar stable
processes they generate."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .special_functions import (
    complex_gamma,
    exp_integral_e1,
    inv_fourier_truncated_power,
    principal_complex_power,
    upper_incomplete_gamma,
)
from .multiplier import PRESETS, OperatorParams, eval_h, preset
from .operators import (
    Signal,
    SpectralProfile,
    UniformGrid,
    adjoint_far_field,
    adjoint_singular_terms,
    apply_adjoint_integration,
    apply_derivative,
    apply_integration,
    gaussian,
    measure_tail_exponent,
    pairing,
    spectral_profile,
)
from .kernels import (
    KernelSpec,
    NoiseCells,
    apply_via_kernel,
    kernel_table,
    kernel_value,
    lemma5_check,
    simplified_kernel_value,
    write_kernel_csv,
)
from .noise import StableNoiseConfig, empirical_cf, analytic_cell_cf, sample_sas, write_noise_csv
from .process import (
    ProcessSpec,
    Realization,
    SimulationConfig,
    analytic_cf,
    cf_exponent,
    hurst_of,
    is_whitenable,
    k_of,
    mc_cf,
    mc_cf_stderr,
    region_map,
    simulate_1d,
    simulate_2d_separable,
    simulate_ensemble,
    write_realization_csv,
)
from .analysis import (
    AnalysisReport,
    estimate_im_hurst_gaussian,
    estimate_re_hurst,
    estimate_regularity_p2,
    stationarity_test,
    write_reports_csv,
)
from .csvio import read_field_csv, read_signal_csv, write_signal_csv
from .render import complex_to_rgb, render_complex_png
