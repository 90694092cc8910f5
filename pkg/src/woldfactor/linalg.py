"""Dense complex linear algebra used throughout the package.

Thin deterministic layers over LAPACK (via numpy) that fix ordering and
phase conventions so results are reproducible across calls.
"""
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, SymmetryError


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class SVD(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray


def adjoint(a):
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_part(a):
    return 0.5 * (a + adjoint(a))


def phase_normalize(vectors, rel=1e-12):
    """Rotate each column so its largest-magnitude component is real positive.

    Works on stacks ``(..., d, k)``. Among components whose magnitude is
    within ``rel`` of the maximum the first one is used, which keeps the
    choice stable under re-application.
    """
    vectors = np.array(vectors, dtype=complex, copy=True)
    mag = np.abs(vectors)
    top = mag.max(axis=-2, keepdims=True)
    pick = np.argmax(mag >= top * (1.0 - rel), axis=-2)
    pivot = np.take_along_axis(vectors, pick[..., None, :], axis=-2)
    pmag = np.abs(pivot)
    phase = np.where(pmag > 0, np.conj(pivot) / np.where(pmag > 0, pmag, 1.0), 1.0)
    already = (pivot.imag == 0) & (pivot.real > 0)
    phase = np.where(already, 1.0, phase)
    return vectors * phase


def _tie_key(v):
    return tuple(np.concatenate([-v.real, -v.imag]).round(12))


def eigh_sorted(stack, tie_rel=1e-12):
    """Batched Hermitian eigendecomposition with fixed conventions.

    Parameters
    ----------
    stack : (n, d, d) complex ndarray
        Hermitian matrices.

    Returns
    -------
    eigenvalues : (n, d) float ndarray, non-increasing along axis 1
    eigenvectors : (n, d, d) complex ndarray, columns phase-normalized

    Notes
    -----
    Eigenvalues closer than ``tie_rel`` times the largest magnitude at a node
    are tied; tied columns are ordered by the lexicographic key
    ``(-Re v, -Im v)`` after phase normalization, so ``e1`` precedes ``e2``.
    """
    lam, vec = np.linalg.eigh(stack)
    lam = lam[:, ::-1]
    vec = phase_normalize(vec[:, :, ::-1])
    scale = np.abs(lam).max(axis=1)
    gaps = -np.diff(lam, axis=1)
    tied = gaps <= tie_rel * scale[:, None]
    for node in np.flatnonzero(tied.any(axis=1)):
        lam_n, vec_n = lam[node].copy(), vec[node].copy()
        start = 0
        d = lam_n.size
        while start < d:
            stop = start + 1
            while stop < d and tied[node, stop - 1]:
                stop += 1
            if stop - start > 1:
                cols = list(range(start, stop))
                cols.sort(key=lambda c: _tie_key(vec_n[:, c]))
                vec[node, :, start:stop] = vec_n[:, cols]
                lam[node, start:stop] = lam_n[cols]
            start = stop
    return lam, vec


def _as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def eig_hermitian(m, symmetrize=False, tol=1e-10):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : (d, d) array_like
    symmetrize : bool
        Replace ``m`` by ``(m + m*)/2`` before decomposing.
    tol : float
        Allowed asymmetry ``||m - m*|| <= tol * (1 + ||m||)`` when
        ``symmetrize`` is off.

    Returns
    -------
    HermitianEig
        Eigenvalues non-increasing; eigenvectors orthonormal, each with its
        largest-magnitude component real positive.

    Raises
    ------
    DimensionError
        Non-square input.
    SymmetryError
        Input is not Hermitian and ``symmetrize`` is off.
    """
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix must be square, got {m.shape}")
    if symmetrize:
        m = hermitian_part(m)
    else:
        asym = np.linalg.norm(m - m.conj().T, 2)
        if asym > tol * (1.0 + np.linalg.norm(m, 2)):
            raise SymmetryError(f"matrix is not Hermitian (||m - m*|| = {asym:.3e})")
    lam, vec = eigh_sorted(m[None])
    return HermitianEig(lam[0], vec[0])


def svd(m):
    """Economy SVD ``m = left @ diag(singulars) @ right*``."""
    m = _as_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return SVD(u, s, vh.conj().T)


def moore_penrose_pinv(m, rank_tol=1e-12):
    """Moore-Penrose inverse with relative singular value cut-off.

    Singular values ``<= rank_tol * s_max`` are treated as zero; the zero
    matrix maps to the zero matrix of transposed shape.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    m = _as_matrix(m)
    left, s, right = svd(m)
    out = np.zeros((m.shape[1], m.shape[0]), dtype=complex)
    if s.size == 0 or s[0] == 0.0:
        return out
    keep = s > rank_tol * s[0]
    return (right[:, keep] / s[keep]) @ left[:, keep].conj().T


def polar_unitary(a):
    """Unitary factor ``W`` of the polar decomposition ``a = W P``."""
    u, _, vh = np.linalg.svd(a)
    return u @ vh
