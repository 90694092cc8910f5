"""Cepstral factorization of positive scalar grid functions.

A positive ``lam`` is written as ``lam = gamma * conj(gamma)`` with
``gamma = exp(Q)`` and ``Q`` carrying the analytic (non-negative index)
half of ``log lam``.  Everything is evaluated pointwise on the grid.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, MagnitudeError, PositivityError
from .fourier import dft_coefficients, dft_synthesize, negative_energy_ratio, window_indices

EXP_LIMIT = 700.0


@dataclass(frozen=True)
class CepstrumCoeffs:
    """Coefficients ``beta_n`` of ``log lam(w) = sum_n beta_n exp(1j*n*w)``.

    ``indices`` runs over ``-(N/2-1) .. N/2-1``.
    """

    index: int
    indices: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)
    grid_size: int
    smoothness: float
    floored_nodes: tuple = ()

    @property
    def beta0(self):
        return float(self.beta[self.indices == 0][0].real)

    def coefficient(self, n):
        return complex(self.beta[self.indices == n][0])


@dataclass(frozen=True)
class ScalarFactor:
    """``gamma = exp(Q)`` on the grid with ``|gamma|**2 = lam``.

    ``coefficients`` are the Fourier coefficients of ``gamma`` in the
    ``exp(-1j*k*w)`` expansion over the symmetric window ``indices``.
    """

    index: int
    values: np.ndarray = field(repr=False)
    analytic_half: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    negative_energy_ratio: float

    @property
    def inverse_values(self):
        """``1/gamma = exp(-Q)``."""
        return np.exp(-self.analytic_half)

    def causal_coefficients(self, count):
        start = int(np.flatnonzero(self.indices == 0)[0])
        return self.coefficients[start:start + count]


@dataclass(frozen=True)
class ScalarFactorSet:
    cepstra: tuple
    factors: tuple

    def __len__(self):
        return len(self.factors)

    @property
    def values(self):
        """``(N, r)`` array of ``gamma_j(w_m)``."""
        return np.stack([g.values for g in self.factors], axis=1)

    @property
    def inverse_values(self):
        return np.stack([g.inverse_values for g in self.factors], axis=1)

    @property
    def beta0(self):
        return np.array([c.beta0 for c in self.cepstra])

    def to_dict(self):
        return {
            "smoothness_proxy": [c.smoothness for c in self.cepstra],
            "floored_nodes": [list(c.floored_nodes) for c in self.cepstra],
            "negative_energy_ratios": [g.negative_energy_ratio for g in self.factors],
            "beta0": self.beta0.tolist(),
        }


def cepstrum(lam, index=0, floor=0.0):
    """Cepstral coefficients of a positive grid function.

    Parameters
    ----------
    lam : (N,) array_like
        Strictly positive samples.
    index : int
        Eigenvalue label carried along for reporting.
    floor : float
        If positive, samples below ``floor`` are raised to it first; the
        affected nodes are recorded.

    Notes
    -----
    ``smoothness`` is the share of the non-constant cepstral energy in the
    top quartile of ``|n|``; large values indicate a non-smooth
    ``log lam`` for which the truncated series converges slowly.

    Raises
    ------
    PositivityError
        If some sample is not strictly positive after flooring.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1:
        raise DimensionError("cepstrum expects a 1-D grid function")
    floored = ()
    if floor > 0:
        low = np.flatnonzero(lam < floor)
        floored = tuple(int(i) for i in low)
        lam = np.maximum(lam, floor)
    if not np.all(lam > 0):
        bad = np.flatnonzero(~(lam > 0))
        raise PositivityError(f"eigenvalue {index} is not positive at nodes {bad[:10].tolist()}")
    n = lam.size
    idx = window_indices(n)
    # beta_n multiplies exp(+1j*n*w): it is the exp(-1j*k*w) coefficient at k = -n
    beta = dft_coefficients(np.log(lam), -idx)
    beta = 0.5 * (beta + np.conj(beta[::-1]))
    beta[idx == 0] = beta[idx == 0].real
    energy = np.abs(beta) ** 2
    nonconst = energy[idx != 0].sum()
    top = energy[np.abs(idx) >= 3 * n // 8].sum()
    smooth = float(top / nonconst) if nonconst > 0 else 0.0
    return CepstrumCoeffs(index, idx, beta, n, smooth, floored)


def analytic_half(c):
    """``Q(w) = beta_0/2 + sum_{n>=1} conj(beta_n) exp(-1j*n*w)`` on the grid."""
    pos = c.indices >= 0
    k = c.indices[pos]
    q = np.conj(c.beta[pos])
    q = np.where(k == 0, 0.5 * q, q)
    return dft_synthesize(q, k, c.grid_size)


def scalar_factor(q, index=0):
    """``gamma = exp(Q)`` with its Fourier coefficients.

    Raises
    ------
    MagnitudeError
        If ``|Re Q|`` exceeds 700 anywhere, where ``exp`` over- or underflows.
    """
    q = np.asarray(q, dtype=complex)
    big = np.flatnonzero(~np.isfinite(q) | (np.abs(q.real) > EXP_LIMIT))
    if big.size:
        node = int(big[0])
        raise MagnitudeError(f"|Re Q| exceeds {EXP_LIMIT} at node {node}", node=node)
    gamma = np.exp(q)
    idx = window_indices(q.size)
    coeffs = dft_coefficients(gamma, idx)
    return ScalarFactor(
        index=index,
        values=gamma,
        analytic_half=q,
        indices=idx,
        coefficients=coeffs,
        negative_energy_ratio=negative_energy_ratio(idx, coeffs),
    )


def factor_eigenvalues(field, floor=0.0):
    """Cepstral factor of every retained eigenvalue branch of ``field``."""
    cepstra, factors = [], []
    for j in range(field.rank):
        c = cepstrum(field.lambdas[:, j], index=j, floor=floor)
        cepstra.append(c)
        factors.append(scalar_factor(analytic_half(c), index=j))
    return ScalarFactorSet(tuple(cepstra), tuple(factors))
