"""Matrix spectral factor ``phi = sqrt(2 pi) U Gamma`` and its pseudo-inverse.

The Fourier coefficients of ``phi`` are the Wold coefficients ``b(j)``; those
of ``psi = Gamma^{-1} U* / sqrt(2 pi)`` form the causal filter ``c_psi(k)``
that maps the observed process back to its fundamental noise.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .eigenfield import hinfty_check
from .errors import DimensionError, GaugeError, NonCausalGaugeError
from .fourier import fourier_window, negative_energy_ratio
from .linalg import adjoint

SQRT_2PI = np.sqrt(2.0 * np.pi)
CAUSAL = "causal"
NONCAUSAL = "non-causal"


@dataclass(frozen=True)
class SpectralFactorField:
    """Grid values ``phi(w_m)`` (``N x d x r``) and truncated coefficients ``b(0..J)``."""

    grid: object
    values: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    tail_energy: float
    negative_energy_ratio: float
    factor_error: float
    gauge: str = CAUSAL


@dataclass(frozen=True)
class MPInverseField:
    """Grid values ``psi(w_m)`` (``N x r x d``) and truncated coefficients ``c_psi(0..K)``."""

    grid: object
    values: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    tail_energy: float
    negative_energy_ratio: float
    inverse_error: float
    gauge: str = CAUSAL


@dataclass(frozen=True)
class FactorizationReport:
    factor_deviation: float
    inverse_deviation: float
    projection_deviation: float
    phi_negative_ratio: float
    psi_negative_ratio: float
    tol: float
    causal_tol: float

    @property
    def checks(self):
        return {
            "factor": self.factor_deviation <= self.tol,
            "inverse": self.inverse_deviation <= self.tol,
            "projection": self.projection_deviation <= self.tol,
            "phi_causal": self.phi_negative_ratio <= self.causal_tol,
            "psi_causal": self.psi_negative_ratio <= self.causal_tol,
        }

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "factor_deviation": self.factor_deviation,
            "inverse_deviation": self.inverse_deviation,
            "projection_deviation": self.projection_deviation,
            "phi_negative_ratio": self.phi_negative_ratio,
            "psi_negative_ratio": self.psi_negative_ratio,
            "tol": self.tol,
            "causal_tol": self.causal_tol,
            "checks": self.checks,
            "passed": self.passed,
        }


def _truncate(values, count):
    idx, coeffs = fourier_window(values)
    start = int(np.flatnonzero(idx == 0)[0])
    kept = coeffs[start:start + count + 1]
    total = float(np.sum(np.abs(coeffs) ** 2))
    tail = max(total - float(np.sum(np.abs(kept) ** 2)), 0.0)
    return kept, tail, negative_energy_ratio(idx, coeffs)


def _gauge(field, causal_tol, causality, force):
    if causality is None:
        causality = hinfty_check(field, causal_tol)
    if causality.passed:
        return CAUSAL
    if not force:
        raise NonCausalGaugeError(
            "eigenvector field failed the Hardy-space check "
            f"(negative energy ratio {causality.negative_energy_ratio:.3e}, "
            f"wraparound gap {causality.wraparound_gap:.3e}); pass force=True to proceed"
        )
    return NONCAUSAL


def _check_shapes(field, factors):
    if len(factors) != field.rank:
        raise DimensionError(f"{len(factors)} scalar factors for an eigen field of rank {field.rank}")
    if factors.values.shape[0] != field.grid.size:
        raise DimensionError("scalar factors and eigen field live on different grids")


def _default_trunc(grid, trunc):
    return grid.size // 4 if trunc is None else int(trunc)


def assemble_factor(field, factors, trunc=None, causal_tol=1e-8, causality=None, force=False):
    """Build ``phi(w) = sqrt(2 pi) U(w) diag(gamma_1..gamma_r)(w)``.

    Parameters
    ----------
    field : EigenField
        Aligned eigen field.
    factors : ScalarFactorSet
        Cepstral factors of ``field.lambdas``.
    trunc : int, optional
        Keep ``b(0..trunc)``; default ``N/4``.
    causality : CausalityReport, optional
        Precomputed :func:`~woldfactor.eigenfield.hinfty_check` result.
    force : bool
        Proceed although the Hardy-space check failed; the output is tagged
        ``"non-causal"``.
    """
    _check_shapes(field, factors)
    gauge = _gauge(field, causal_tol, causality, force)
    j = _default_trunc(field.grid, trunc)
    phi = SQRT_2PI * field.vectors * factors.values[:, None, :]
    b, tail, ratio = _truncate(phi, j)
    target = field.gram()
    err = np.linalg.norm(phi @ adjoint(phi) / (2 * np.pi) - target, 2, axis=(1, 2))
    err = err / (1.0 + np.linalg.norm(target, 2, axis=(1, 2)))
    return SpectralFactorField(field.grid, phi, b, tail, ratio, float(err.max()), gauge)


def assemble_inverse(field, factors, trunc=None, causal_tol=1e-8, causality=None, force=False):
    """Build ``psi(w) = diag(1/gamma_j)(w) U*(w) / sqrt(2 pi)`` and ``c_psi(0..K)``."""
    _check_shapes(field, factors)
    gauge = _gauge(field, causal_tol, causality, force)
    k = _default_trunc(field.grid, trunc)
    psi = factors.inverse_values[:, :, None] * adjoint(field.vectors) / SQRT_2PI
    phi = SQRT_2PI * field.vectors * factors.values[:, None, :]
    c, tail, ratio = _truncate(psi, k)
    err = np.abs(psi @ phi - np.eye(field.rank)).max()
    return MPInverseField(field.grid, psi, c, tail, ratio, float(err), gauge)


def verify_factorization(f, phi, psi, tol=1e-8, causal_tol=1e-8):
    """Check ``f = phi phi*/(2 pi)``, ``psi phi = I`` and ``(phi psi - I) f (..)* = 0``.

    ``factor_deviation`` is ``max_m ||phi phi*/(2 pi) - f|| / (1 + ||f||)``;
    the other deviations are plain spectral-norm maxima over the nodes.
    Causality ratios are recomputed from the grid values.
    """
    fv = f.values
    p, q = phi.values, psi.values
    if p.shape[0] != fv.shape[0] or p.shape[1] != fv.shape[1] or q.shape[1:] != p.shape[:0:-1]:
        raise DimensionError("density, factor and inverse shapes are incompatible")
    fn = np.linalg.norm(fv, 2, axis=(1, 2))
    dev_f = np.linalg.norm(p @ adjoint(p) / (2 * np.pi) - fv, 2, axis=(1, 2)) / (1.0 + fn)
    r = p.shape[2]
    dev_i = np.linalg.norm(q @ p - np.eye(r), 2, axis=(1, 2))
    e = p @ q - np.eye(p.shape[1])
    dev_p = np.linalg.norm(e @ fv @ adjoint(e), 2, axis=(1, 2))
    ip, cp = fourier_window(p)
    iq, cq = fourier_window(q)
    return FactorizationReport(
        factor_deviation=float(dev_f.max()),
        inverse_deviation=float(dev_i.max()),
        projection_deviation=float(dev_p.max()),
        phi_negative_ratio=negative_energy_ratio(ip, cp),
        psi_negative_ratio=negative_energy_ratio(iq, cq),
        tol=tol,
        causal_tol=causal_tol,
    )


def gauge_unitary(b0, rank_tol=1e-10):
    """Constant unitary ``Q`` making the leading ``r x r`` block of ``b0 Q`` Hermitian PSD."""
    r = b0.shape[1]
    top = b0[:r, :r]
    u, s, vh = np.linalg.svd(top)
    if s[0] == 0.0 or s[-1] <= rank_tol * s[0]:
        raise GaugeError(
            f"leading {r}x{r} block of b(0) is rank deficient "
            f"(singular values {np.array2string(s, precision=3)})"
        )
    return vh.conj().T @ u.conj().T


def normalize_phase(phi, psi, rank_tol=1e-10):
    """Fix the constant unitary gauge via the polar factor of ``b(0)``.

    ``phi`` is right-multiplied and ``psi`` left-multiplied by the same
    ``r x r`` unitary, so ``phi phi*`` and ``psi phi`` are unchanged.

    Raises
    ------
    GaugeError
        If the leading ``r x r`` block of ``b(0)`` is singular.
    """
    q = gauge_unitary(phi.coefficients[0], rank_tol)
    qh = q.conj().T
    phi2 = replace(phi, values=phi.values @ q, coefficients=phi.coefficients @ q)
    psi2 = replace(psi, values=qh @ psi.values, coefficients=qh @ psi.coefficients)
    return phi2, psi2
