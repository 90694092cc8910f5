"""Spectral factors and Wold models for vector stationary processes whose
density has positive, slowly varying eigenvalues.

Typical use::

    from woldfactor import FrequencyGrid, MASpec, density_from_ma, factorize

    f = density_from_ma(MASpec([[[1.0]], [[0.5]]]), FrequencyGrid(4096))
    result = factorize(f)
    result.model.b[:2], result.model.sigma
"""
__version__ = "0.1.0"

from .eigenfield import (
    EigenField,
    align_phases,
    detect_rank,
    hinfty_check,
    log_integrability_check,
    pointwise_eig,
)
from .errors import *  # noqa: F401,F403
from .factor import (
    MPInverseField,
    SpectralFactorField,
    assemble_factor,
    assemble_inverse,
    normalize_phase,
    verify_factorization,
)
from .fourier import dft_coefficients, dft_synthesize, grid_nodes
from .linalg import eig_hermitian, moore_penrose_pinv, svd
from .pipeline import Factorization, RunConfig, factorize
from .scalar import analytic_half, cepstrum, factor_eigenvalues, scalar_factor
from .simulate import (
    SamplePath,
    SimulationConfig,
    draw_noise,
    ma_sample_path,
    random_miniphase_spec,
    round_trip,
)
from .spectra import (
    CovarianceSequence,
    FrequencyGrid,
    MASpec,
    SpectralDensityField,
    covariance_from_density,
    density_from_covariance,
    density_from_ma,
    sup_norm_bound,
)
from .wold import (
    WoldModel,
    innovation_covariance_closed,
    innovations_from_prediction,
    ks_determinant_check,
    predict,
    recover_noise,
    rolling_predictions,
)
