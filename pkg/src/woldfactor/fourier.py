"""Discrete Fourier kernels on the grid ``w_m = -pi + 2*pi*m/N``.

Expansions are written as ``g(w) = sum_k c(k) exp(-1j*k*w)`` and the
coefficients are recovered with the analysis kernel ``exp(+1j*k*w)``::

    c(k) = 1/(2 pi) int g(w) exp(1j*k*w) dw  ~  1/N sum_m g(w_m) exp(1j*k*w_m)

Sample arrays carry the grid on axis 0; any trailing axes (matrix entries)
are transformed independently.
"""
import numpy as np

from .errors import AliasingError


def grid_nodes(n):
    """Return the ``n`` nodes ``-pi + 2*pi*m/n``, ``m = 0..n-1``."""
    return -np.pi + 2.0 * np.pi * np.arange(n) / n


def _check_indices(indices, n):
    indices = np.asarray(indices, dtype=int).reshape(-1)
    if indices.size and np.abs(indices).max() >= n / 2:
        raise AliasingError(
            f"indices must satisfy |k| < N/2 = {n / 2:g}; got max |k| = {np.abs(indices).max()}"
        )
    return indices


def _sign(indices):
    # exp(-1j*k*pi) = (-1)**k shifts the FFT origin to w_0 = -pi
    return np.where(indices % 2 == 0, 1.0, -1.0)


def dft_coefficients(samples, indices):
    """Fourier coefficients ``c(k)`` of a sampled function.

    Parameters
    ----------
    samples : (N, ...) array_like
        Values ``g(w_m)`` on the uniform grid.
    indices : sequence of int
        Requested indices; each must satisfy ``|k| < N/2``.

    Returns
    -------
    (len(indices), ...) complex ndarray

    Raises
    ------
    AliasingError
        If an index is outside the alias-free range.
    """
    samples = np.asarray(samples, dtype=complex)
    n = samples.shape[0]
    indices = _check_indices(indices, n)
    spectrum = np.fft.ifft(samples, axis=0)
    sign = _sign(indices).reshape((-1,) + (1,) * (samples.ndim - 1))
    return sign * spectrum[indices % n]


def dft_synthesize(coefficients, indices, n):
    """Evaluate ``g(w_m) = sum_k c(k) exp(-1j*k*w_m)`` on an ``n``-point grid.

    Inverse of :func:`dft_coefficients` for alias-free index sets.
    """
    coefficients = np.asarray(coefficients, dtype=complex)
    indices = _check_indices(indices, n)
    if coefficients.shape[0] != indices.size:
        raise ValueError("one coefficient block per index is required")
    if len(set(indices.tolist())) != indices.size:
        raise ValueError("indices must be distinct")
    buf = np.zeros((n,) + coefficients.shape[1:], dtype=complex)
    sign = _sign(indices).reshape((-1,) + (1,) * (coefficients.ndim - 1))
    buf[indices % n] = sign * coefficients
    return np.fft.fft(buf, axis=0)


def window_indices(n):
    """Symmetric alias-free window ``-(n/2 - 1) .. n/2 - 1``."""
    half = n // 2 - 1 if n % 2 == 0 else n // 2
    return np.arange(-half, half + 1)


def fourier_window(samples):
    """Coefficients over the full symmetric window.

    Returns
    -------
    indices : (n - 1,) int ndarray
    coefficients : (n - 1, ...) complex ndarray
    """
    samples = np.asarray(samples, dtype=complex)
    idx = window_indices(samples.shape[0])
    return idx, dft_coefficients(samples, idx)


def negative_energy_ratio(indices, coefficients):
    """Fraction of coefficient energy carried by negative indices.

    Returns 0 for an all-zero sequence.
    """
    coefficients = np.asarray(coefficients)
    energy = np.abs(coefficients.reshape(coefficients.shape[0], -1)) ** 2
    energy = energy.sum(axis=1)
    total = energy.sum()
    if total == 0.0:
        return 0.0
    return float(energy[np.asarray(indices) < 0].sum() / total)
