"""Wold-model outputs: innovation covariance, noise recovery, prediction."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InsufficientHistoryError
from .linalg import hermitian_part

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class WoldModel:
    """Truncated Wold representation ``X_t = sum_j b(j) xi_{t-j}``.

    Attributes
    ----------
    b : (J+1, d, r) complex ndarray
    c_psi : (K+1, r, d) complex ndarray
        Causal inverse filter, ``xi_t = sum_k c_psi(k) X_{t-k}``.
    sigma : (d, d) complex ndarray
        Innovation covariance ``b(0) b(0)*``.
    """

    b: np.ndarray = field(repr=False)
    c_psi: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    grid_size: int
    gauge: str = "causal"
    b_tail_energy: float = 0.0
    c_psi_tail_energy: float = 0.0

    def __post_init__(self):
        b, c = np.asarray(self.b, complex), np.asarray(self.c_psi, complex)
        if b.ndim != 3 or c.ndim != 3 or c.shape[1:] != (b.shape[2], b.shape[1]):
            raise DimensionError(f"incompatible b {b.shape} and c_psi {c.shape}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c_psi", c)
        object.__setattr__(self, "sigma", np.asarray(self.sigma, complex))

    @classmethod
    def from_factors(cls, phi, psi):
        b0 = phi.coefficients[0]
        return cls(
            b=phi.coefficients,
            c_psi=psi.coefficients,
            sigma=hermitian_part(b0 @ b0.conj().T),
            grid_size=phi.grid.size,
            gauge=phi.gauge,
            b_tail_energy=phi.tail_energy,
            c_psi_tail_energy=psi.tail_energy,
        )

    @property
    def dimension(self):
        return self.b.shape[1]

    @property
    def rank(self):
        return self.b.shape[2]

    @property
    def trunc(self):
        return self.b.shape[0] - 1

    @property
    def inverse_trunc(self):
        return self.c_psi.shape[0] - 1

    def error_covariances(self, h):
        """``E_s = sum_{j<s} b(j) b(j)*`` for ``s = 1..h``; saturates beyond ``J``."""
        terms = self.b @ np.conj(np.swapaxes(self.b, 1, 2))
        cum = np.cumsum(terms, axis=0)
        s = np.minimum(np.arange(1, h + 1), self.trunc + 1) - 1
        return hermitian_part(cum[s])


@dataclass(frozen=True)
class KSReport:
    lhs: float
    rhs: float
    rhs_literal: float
    abs_gap: float
    rel_gap: float
    surrogate: bool
    rtol: float
    passed: bool

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rhs_literal": self.rhs_literal,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
            "label": "surrogate det(b(0)* b(0))" if self.surrogate else "det(Sigma)",
            "rtol": self.rtol,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class InnovationSeries:
    """Recovered noise on the window ``t`` (1-based time indices of the path)."""

    t: np.ndarray
    values: np.ndarray
    truncation_bound: float = 0.0


@dataclass(frozen=True)
class PredictionResult:
    """Predictions ``X_hat_{t0+s}`` and error covariances ``E_s``, ``s = 1..h``."""

    origin: int
    values: np.ndarray
    error_covariances: np.ndarray

    @property
    def horizon(self):
        return self.values.shape[0]


def innovation_covariance_closed(field, factors):
    """``Sigma = 2 pi U0 diag(exp beta_{j,0}) U0*`` with ``U0`` the grid mean of ``U``.

    ``beta_{j,0}`` is the mean of ``log lambda_j`` over the grid. Depends on
    the gauge of ``field``; use the aligned field.
    """
    u0 = field.vectors.mean(axis=0)
    scale = np.exp(factors.beta0)
    return hermitian_part(TWO_PI * (u0 * scale) @ u0.conj().T)


def ks_determinant_check(field, sigma, rtol=1e-6):
    """Compare ``det Sigma`` with ``(2 pi)^r exp(mean_m log det Lambda_r)``.

    For ``r < d`` the left side is the product of the ``r`` nonzero
    eigenvalues of ``Sigma`` (``= det(b(0)* b(0))``), labelled a surrogate;
    ``rhs_literal`` reports the same right side with ``(2 pi)^d``.
    """
    d, r = field.dimension, field.rank
    with np.errstate(divide="ignore"):
        mean_log = float(np.log(field.lambdas).sum(axis=1).mean())
    if r == d:
        lhs = float(np.linalg.det(sigma).real)
    else:
        lhs = float(np.prod(np.linalg.eigvalsh(sigma)[::-1][:r]))
    rhs = float(TWO_PI ** r * np.exp(mean_log))
    literal = float(TWO_PI ** d * np.exp(mean_log))
    gap = abs(lhs - rhs)
    rel = gap / abs(rhs) if rhs != 0 else float("inf")
    return KSReport(lhs, rhs, literal, gap, rel, r < d, rtol, bool(rel <= rtol))


def _as_path(values, d):
    x = np.asarray(values, dtype=complex)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[1] != d:
        raise DimensionError(f"path must have shape (T, {d}), got {x.shape}")
    return x


def _causal_filter(coeffs, x):
    # y_t = sum_k coeffs[k] @ x[t-k], valid for t >= len(coeffs) - 1
    # direct lag sum: an FFT would leak round-off from later samples
    k, t = coeffs.shape[0] - 1, x.shape[0]
    y = np.zeros((t - k, coeffs.shape[1]), dtype=complex)
    for j, c in enumerate(coeffs):
        y += x[k - j: t - j] @ c.T
    return y


def recover_noise(model, path):
    """Fundamental noise ``xi_t = sum_{k=0}^K c_psi(k) X_{t-k}`` for ``t = K+1..T``.

    Only ``X_s``, ``s <= t``, enter ``xi_t``. ``truncation_bound`` is
    ``sqrt(tail energy of c_psi) * max_t ||X_t||``.

    Raises
    ------
    InsufficientHistoryError
        If the path is not longer than ``K``.
    """
    x = _as_path(getattr(path, "values", path), model.dimension)
    k = model.inverse_trunc
    if x.shape[0] <= k:
        raise InsufficientHistoryError(f"path length {x.shape[0]} must exceed filter order {k}")
    xi = _causal_filter(model.c_psi, x)
    bound = float(np.sqrt(model.c_psi_tail_energy) * np.linalg.norm(x, axis=1).max())
    return InnovationSeries(np.arange(k + 1, x.shape[0] + 1), xi, bound)


def predict(model, noise, h):
    """Best linear ``h``-step prediction from the end of the noise window.

    ``X_hat_{t0+s} = sum_{k>=0} b(s+k) xi_{t0-k}``, ``s = 1..h``, where ``t0``
    is the last time in ``noise`` and the sum stops at the window start.
    """
    if h < 1:
        raise ValueError("horizon must be at least 1")
    xi = np.asarray(noise.values)
    if xi.shape[0] == 0:
        raise InsufficientHistoryError("noise window is empty")
    jmax = model.trunc
    out = np.zeros((h, model.dimension), dtype=complex)
    recent = xi[::-1]  # recent[k] = xi_{t0-k}
    for s in range(1, min(h, jmax) + 1):
        count = min(jmax - s + 1, recent.shape[0])
        out[s - 1] = np.einsum("kdr,kr->d", model.b[s:s + count], recent[:count])
    return PredictionResult(int(noise.t[-1]), out, model.error_covariances(h))


def rolling_predictions(model, noise, h=1):
    """``h``-step predictions issued at every time of the noise window.

    Row ``i`` predicts ``X_{t_i + h}`` from ``xi`` up to ``t_i``. Returns the
    target times and predictions.
    """
    if h < 1:
        raise ValueError("horizon must be at least 1")
    xi = np.asarray(noise.values)
    taps = model.b[h:]
    if taps.shape[0] == 0:
        pred = np.zeros((xi.shape[0], model.dimension), dtype=complex)
    else:
        lead = np.zeros((taps.shape[0] - 1, xi.shape[1]), dtype=complex)
        pred = _causal_filter(taps, np.concatenate([lead, xi]))
    return noise.t + h, pred


def innovations_from_prediction(model, path):
    """One-step innovations ``eta_t = b(0) xi_t`` on the recovery window."""
    xi = recover_noise(model, path)
    eta = xi.values @ model.b[0].T
    return InnovationSeries(xi.t, eta, xi.truncation_bound * float(np.linalg.norm(model.b[0], 2)))
