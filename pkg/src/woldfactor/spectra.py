"""Spectral densities on the frequency grid and their conversions.

A density is stored as ``N`` Hermitian PSD matrices ``f(w_m)`` with the
normalisation ``C(h) = int exp(1j*h*w) f(w) dw``, so a moving average
``X_t = sum_j b(j) xi_{t-j}`` with orthonormal noise has
``f = phi phi* / (2 pi)``, ``phi(w) = sum_j b(j) exp(-1j*j*w)``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, DefinitenessError, DimensionError
from .fourier import dft_coefficients, dft_synthesize, grid_nodes
from .linalg import adjoint, hermitian_part

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid ``w_m = -pi + 2*pi*m/N`` with ``N`` a power of two, ``N >= 8``."""

    size: int

    def __post_init__(self):
        n = self.size
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {n!r}")

    @property
    def nodes(self):
        return grid_nodes(self.size)

    @property
    def spacing(self):
        return TWO_PI / self.size


@dataclass(frozen=True)
class MASpec:
    """Finite moving average ``X_t = sum_{j=0}^q b(j) xi_{t-j}``.

    ``coefficients`` has shape ``(q + 1, d, r)``.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        b = np.array(self.coefficients, dtype=complex)
        if b.ndim == 1:
            b = b[:, None, None]
        if b.ndim != 3:
            raise DimensionError(f"MA coefficients must have shape (q+1, d, r), got {b.shape}")
        if b.shape[2] > b.shape[1]:
            raise DimensionError("rank r must not exceed dimension d")
        if not np.all(np.isfinite(b)):
            raise ValueError("MA coefficients must be finite")
        if not np.any(b[0]):
            raise ValueError("b(0) must be nonzero")
        b.setflags(write=False)
        object.__setattr__(self, "coefficients", b)

    @property
    def order(self):
        return self.coefficients.shape[0] - 1

    @property
    def dimension(self):
        return self.coefficients.shape[1]

    @property
    def rank(self):
        return self.coefficients.shape[2]

    def autocovariance(self, h):
        """Closed form ``C(h) = sum_j b(j+h) b(j)*`` (``C(-h) = C(h)*``)."""
        b = self.coefficients
        lag = abs(h)
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for j in range(self.order + 1 - lag):
            out += b[j + lag] @ b[j].conj().T
        return out if h >= 0 else out.conj().T


@dataclass(frozen=True)
class CovarianceSequence:
    """Autocovariances ``C(0..H)``; negative lags follow from ``C(-h) = C(h)*``."""

    lags: np.ndarray

    def __post_init__(self):
        c = np.array(self.lags, dtype=complex)
        if c.ndim == 1:
            c = c[:, None, None]
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise DimensionError(f"covariances must have shape (H+1, d, d), got {c.shape}")
        if np.linalg.norm(c[0] - c[0].conj().T, 2) > 1e-12 * (1.0 + np.linalg.norm(c[0], 2)):
            raise DefinitenessError("C(0) must be Hermitian")
        c.setflags(write=False)
        object.__setattr__(self, "lags", c)

    @property
    def max_lag(self):
        return self.lags.shape[0] - 1

    @property
    def dimension(self):
        return self.lags.shape[1]

    def at(self, h):
        return self.lags[h] if h >= 0 else self.lags[-h].conj().T


@dataclass(frozen=True)
class SpectralDensityField:
    """Hermitian PSD matrices ``f(w_m)`` sampled on a :class:`FrequencyGrid`.

    Parameters
    ----------
    grid : FrequencyGrid
    values : (N, d, d) array_like
    psd_tol : float
        Smallest eigenvalue may go down to ``-psd_tol * max_m ||f(w_m)||``.
    psd_adjustment : float
        Integrated eigenvalue mass removed by PSD repair (0 when none).
    """

    grid: FrequencyGrid
    values: np.ndarray
    psd_tol: float = 1e-10
    psd_adjustment: float = 0.0
    hermitian_tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        f = np.array(self.values, dtype=complex)
        if f.ndim == 1:
            f = f[:, None, None]
        if f.ndim != 3 or f.shape[1] != f.shape[2]:
            raise DimensionError(f"density values must have shape (N, d, d), got {f.shape}")
        if f.shape[0] != self.grid.size:
            raise DimensionError(f"{f.shape[0]} values for a grid of size {self.grid.size}")
        if not np.all(np.isfinite(f)):
            raise ValueError("density values must be finite")
        norms = np.linalg.norm(f, 2, axis=(1, 2))
        asym = np.linalg.norm(f - adjoint(f), 2, axis=(1, 2))
        if np.any(asym > self.hermitian_tol * (1.0 + norms)):
            raise DefinitenessError(f"density is not Hermitian (max asymmetry {asym.max():.3e})")
        f = hermitian_part(f)
        lo = np.linalg.eigvalsh(f)[:, 0]
        bound = self.psd_tol * norms.max()
        if np.any(lo < -bound):
            node = int(np.argmin(lo))
            raise DefinitenessError(
                f"density is indefinite at node {node} (w = {self.grid.nodes[node]:.6f}, "
                f"smallest eigenvalue {lo[node]:.3e})"
            )
        f.setflags(write=False)
        object.__setattr__(self, "values", f)

    @property
    def dimension(self):
        return self.values.shape[1]

    @property
    def total_power(self):
        """``int tr f(w) dw`` by the rectangle rule; equals ``tr C(0)``."""
        return float(np.trace(self.values, axis1=1, axis2=2).real.sum() * self.grid.spacing)

    def scaled(self, c):
        return SpectralDensityField(self.grid, c * self.values, self.psd_tol)


def ma_transfer(spec, grid):
    """Grid values of ``phi(w) = sum_j b(j) exp(-1j*j*w)``, shape ``(N, d, r)``."""
    if spec.order >= grid.size / 2:
        raise AliasingError(f"MA order {spec.order} aliases on a grid of size {grid.size}")
    return dft_synthesize(spec.coefficients, np.arange(spec.order + 1), grid.size)


def density_from_ma(spec, grid):
    """Spectral density ``phi phi* / (2 pi)`` of a finite moving average."""
    phi = ma_transfer(spec, grid)
    f = hermitian_part(phi @ adjoint(phi)) / TWO_PI
    return SpectralDensityField(grid, f)


def covariance_from_density(f, max_lag):
    """Autocovariances ``C(h) = (2 pi / N) sum_m exp(1j*h*w_m) f(w_m)``, ``h = 0..H``."""
    if max_lag >= f.grid.size / 2:
        raise AliasingError(f"max lag {max_lag} aliases on a grid of size {f.grid.size}")
    c = TWO_PI * dft_coefficients(f.values, np.arange(max_lag + 1))
    c[0] = hermitian_part(c[0])
    return CovarianceSequence(c)


def density_from_covariance(cov, grid, psd_fix=False, tol=1e-6):
    """Truncated inversion ``f(w) = 1/(2 pi) sum_{|h|<=H} C(h) exp(-1j*h*w)``.

    Parameters
    ----------
    psd_fix : bool
        Clip negative eigenvalues to zero at every node. The removed mass
        ``(2 pi/N) sum_m sum |negative eigenvalues|`` is stored in
        ``psd_adjustment``.
    tol : float
        Without ``psd_fix``, indefiniteness below ``-tol * max ||f||`` raises.
    """
    h = cov.max_lag
    if h >= grid.size / 2:
        raise AliasingError(f"max lag {h} aliases on a grid of size {grid.size}")
    idx = np.arange(-h, h + 1)
    blocks = np.stack([cov.at(k) for k in idx]) / TWO_PI
    f = hermitian_part(dft_synthesize(blocks, idx, grid.size))
    lam, vec = np.linalg.eigh(f)
    scale = np.abs(lam).max()
    if not psd_fix:
        if lam.min() < -tol * scale:
            node = int(np.argmin(lam.min(axis=1)))
            raise DefinitenessError(
                f"covariance sequence gives an indefinite density at node {node} "
                f"(w = {grid.nodes[node]:.6f}, eigenvalue {lam.min():.3e}); use psd_fix"
            )
        return SpectralDensityField(grid, f, psd_tol=tol)
    neg = np.clip(lam, None, 0.0)
    adjustment = float(-neg.sum() * grid.spacing)
    lam = np.clip(lam, 0.0, None)
    f = hermitian_part((vec * lam[:, None, :]) @ adjoint(vec))
    return SpectralDensityField(grid, f, psd_adjustment=adjustment)


def sup_norm_bound(f):
    """``max_m ||f(w_m)||`` in spectral norm."""
    return float(np.linalg.norm(f.values, 2, axis=(1, 2)).max())
