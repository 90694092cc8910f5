"""Sample paths of finite moving averages and round-trip experiments."""
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .linalg import polar_unitary
from .pipeline import RunConfig, factorize
from .spectra import MASpec, density_from_ma, ma_transfer

NOISE_KINDS = ("complex", "real")


@dataclass(frozen=True)
class SimulationConfig:
    """Path length, seed, burn-in (default: MA order) and noise law.

    ``noise_kind`` is ``"complex"`` (circular Gaussian, ``E xi xi* = I``) or
    ``"real"`` (standard normal).
    """

    length: int
    seed: int = 0
    burn_in: int = None
    noise_kind: str = "complex"

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be at least 1")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if self.noise_kind not in NOISE_KINDS:
            raise ValueError(f"noise_kind must be one of {NOISE_KINDS}")

    def rng(self):
        return np.random.Generator(np.random.PCG64(self.seed))


@dataclass(frozen=True)
class SamplePath:
    """Values ``X_1..X_T`` (``T x d``) with the driving noise if known."""

    values: np.ndarray
    noise: np.ndarray = None

    @property
    def length(self):
        return self.values.shape[0]

    @property
    def dimension(self):
        return self.values.shape[1]


def draw_noise(config, r, length=None, rng=None):
    """Orthonormal white noise, shape ``(length, r)``; deterministic in the seed."""
    length = config.length if length is None else length
    rng = config.rng() if rng is None else rng
    if config.noise_kind == "real":
        return rng.standard_normal((length, r)).astype(complex)
    z = rng.standard_normal((length, r, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def ma_sample_path(spec, config):
    """Simulate ``X_t = sum_{j=0}^q b(j) xi_{t-j}`` for ``t = 1..T``.

    The first ``burn_in`` noise values only feed the initial windows and are
    discarded; the stored noise is aligned with the returned values.
    """
    q = spec.order
    burn = q if config.burn_in is None else config.burn_in
    if burn < q:
        raise ValueError(f"burn_in {burn} is shorter than the MA order {q}")
    t = config.length
    xi = draw_noise(config, spec.rank, t + burn)
    x = np.zeros((t, spec.dimension), dtype=complex)
    for j, bj in enumerate(spec.coefficients):
        x += xi[burn - j: burn - j + t] @ bj.T
    return SamplePath(x, xi[burn:])


def random_miniphase_spec(rng, d, q, min_root=1.5, max_root=3.0):
    """Constant Haar unitary mixing of ``d`` scalar minimum-phase MA channels.

    Channel ``j`` has order ``q_j <= q`` with all polynomial roots in the
    annulus ``min_root <= |z| <= max_root``, so every eigenvalue of the
    density is smooth and zero-free and the eigenvectors are constant.
    """
    u = unitary_group.rvs(d, random_state=rng) if d > 1 else np.ones((1, 1), complex)
    b = np.zeros((q + 1, d, d), dtype=complex)
    for j in range(d):
        order = int(rng.integers(0, q + 1))
        roots = rng.uniform(min_root, max_root, order) * np.exp(2j * np.pi * rng.uniform(size=order))
        poly = np.array([1.0 + 0j])
        for root in roots:
            poly = np.convolve(poly, [1.0, -1.0 / root])
        poly *= rng.uniform(0.5, 2.0)
        b[: order + 1, :, j] = poly[:, None] * u[:, j]
    return MASpec(b)


@dataclass(frozen=True)
class RoundTripReport:
    unitary: np.ndarray
    residual: float
    residual_identity: float
    sigma_gap: float
    ks_rel_gap: float
    phi_negative_ratio: float
    psi_negative_ratio: float
    miniphase: object
    tol: float
    passed: bool
    factorization: object = None

    def to_dict(self):
        from .io import matrix_to_json, sanitize

        return sanitize({
            "unitary": matrix_to_json(self.unitary),
            "residual": self.residual,
            "residual_identity": self.residual_identity,
            "sigma_gap": self.sigma_gap,
            "ks_rel_gap": self.ks_rel_gap,
            "phi_negative_ratio": self.phi_negative_ratio,
            "psi_negative_ratio": self.psi_negative_ratio,
            "miniphase": self.miniphase,
            "note": None if self.miniphase is not False else
                "generating spec is not minimum phase; the factorization returns its "
                "minimum-phase representative",
            "tol": self.tol,
            "passed": self.passed,
        })


def winding_zeros(spec, grid):
    """Number of zeros of ``det sum_j b(j) z^j`` inside the unit disc (square specs).

    Returns None for ``r < d`` or when the determinant vanishes on the circle.
    """
    if spec.rank != spec.dimension:
        return None
    det = np.linalg.det(ma_transfer(spec, grid))
    if np.abs(det).min() <= 1e-12 * np.abs(det).max():
        return None
    phase = np.unwrap(np.angle(np.append(det, det[0])))
    # z = exp(-1j*w) runs clockwise as w increases
    return int(round(-(phase[-1] - phase[0]) / (2 * np.pi)))


def procrustes_unitary(b_hat, b):
    """Unitary ``Q`` minimising ``sum_j ||b_hat(j) Q - b(j)||_F^2``."""
    m = np.einsum("jdr,jds->rs", b_hat.conj(), b)
    return polar_unitary(m)


def round_trip(spec, grid, config=None, tol=1e-6):
    """Factorize the density of ``spec`` and compare with its coefficients.

    The comparison is modulo a constant ``r x r`` unitary found by
    orthogonal Procrustes.
    """
    config = config or RunConfig(grid_size=grid.size)
    f = density_from_ma(spec, grid)
    fac = factorize(f, config)
    zeros = winding_zeros(spec, grid)
    if fac.model is None:
        r = spec.rank
        nan = float("nan")
        return RoundTripReport(np.eye(r), nan, nan, nan, nan, nan, nan,
                               None if zeros is None else zeros == 0, tol, False, fac)
    b_hat = fac.model.b
    n = max(b_hat.shape[0], spec.order + 1)
    pad = lambda a: np.concatenate([a, np.zeros((n - a.shape[0],) + a.shape[1:], complex)])
    bh, bt = pad(b_hat), pad(spec.coefficients)
    q = procrustes_unitary(bh, bt)
    residual = float(np.sqrt(np.sum(np.abs(bh @ q - bt) ** 2)))
    residual_id = float(np.sqrt(np.sum(np.abs(bh - bt) ** 2)))
    b0 = spec.coefficients[0]
    sigma_gap = float(np.linalg.norm(fac.model.sigma - b0 @ b0.conj().T, 2))
    if zeros is not None:
        miniphase = zeros == 0
    else:
        miniphase = sigma_gap <= tol * (1.0 + np.linalg.norm(fac.model.sigma, 2))
    return RoundTripReport(
        unitary=q,
        residual=residual,
        residual_identity=residual_id,
        sigma_gap=sigma_gap,
        ks_rel_gap=fac.ks.rel_gap,
        phi_negative_ratio=fac.verification.phi_negative_ratio,
        psi_negative_ratio=fac.verification.psi_negative_ratio,
        miniphase=bool(miniphase),
        tol=tol,
        passed=bool(residual <= tol),
        factorization=fac,
    )
