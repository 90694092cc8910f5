"""End-to-end factorization of a sampled spectral density."""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .eigenfield import align_phases, detect_rank, hinfty_check, log_integrability_check, pointwise_eig
from .errors import GaugeError
from .factor import assemble_factor, assemble_inverse, normalize_phase, verify_factorization
from .scalar import factor_eigenvalues
from .wold import WoldModel, innovation_covariance_closed, ks_determinant_check


@dataclass(frozen=True)
class RunConfig:
    grid_size: int = 4096
    rank_tol: float = 1e-10
    causal_tol: float = 1e-8
    trunc: int = None
    inverse_trunc: int = None
    seed: int = 0
    agreement: float = 0.99
    factor_tol: float = 1e-8
    sigma_tol: float = 1e-6
    ks_rtol: float = 1e-6
    eigen_floor: float = 0.0
    force_noncausal: bool = False

    def __post_init__(self):
        n = self.grid_size
        if n < 8 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {n}")
        for name in ("rank_tol", "causal_tol", "factor_tol", "sigma_tol", "ks_rtol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def truncations(self, n):
        j = n // 4 if self.trunc is None else self.trunc
        k = j if self.inverse_trunc is None else self.inverse_trunc
        return j, k

    def to_dict(self):
        return asdict(self)


@dataclass
class Factorization:
    """Everything produced by :func:`factorize`; ``model`` is None when a check blocked it."""

    density: object
    config: RunConfig
    rank: object
    eigen: object = None
    log_integrability: object = None
    aligned: object = None
    alignment: object = None
    causality: object = None
    factors: object = None
    phi: object = None
    psi: object = None
    verification: object = None
    model: WoldModel = None
    sigma_closed: np.ndarray = None
    two_route_gap: float = None
    ks: object = None
    notes: list = field(default_factory=list)

    @property
    def gauge(self):
        return self.model.gauge if self.model is not None else None

    @property
    def conditions(self):
        return {
            "rank_ae_constant": bool(self.rank.almost_everywhere),
            "log_integrable": bool(self.log_integrability is not None and self.log_integrability.passed),
            "hinfty": bool(self.causality is not None and self.causality.passed),
        }

    @property
    def checks(self):
        out = dict(self.conditions)
        if self.model is not None:
            out["factorization"] = self.verification.passed
            out["two_route_sigma"] = bool(self.two_route_gap <= self.config.sigma_tol * (
                1.0 + np.linalg.norm(self.model.sigma, 2)))
            out["kolmogorov_szego"] = self.ks.passed
        return out

    @property
    def passed(self):
        return self.model is not None and all(self.checks.values())

    def report(self):
        from .io import sanitize

        rep = {
            "tool": "woldfactor",
            "version": __version__,
            "config": self.config.to_dict(),
            "tolerances": {
                "rank_tol": self.config.rank_tol,
                "causal_tol": self.config.causal_tol,
                "factor_tol": self.config.factor_tol,
                "sigma_tol": self.config.sigma_tol,
                "ks_rtol": self.config.ks_rtol,
            },
            "grid_size": self.density.grid.size,
            "dimension": self.density.dimension,
            "psd_adjustment": self.density.psd_adjustment,
            "rank": self.rank.to_dict(),
            "conditions": self.conditions,
            "checks": self.checks,
            "passed": self.passed,
            "gauge": self.gauge,
            "tail_energy": None,
            "notes": list(self.notes),
        }
        if self.eigen is not None:
            rep["deficient_nodes"] = list(self.eigen.deficient_nodes)
        if self.log_integrability is not None:
            rep["log_integrability"] = self.log_integrability.to_dict()
        if self.alignment is not None:
            rep["alignment"] = self.alignment.to_dict()
        if self.causality is not None:
            rep["causality"] = self.causality.to_dict()
        if self.factors is not None:
            rep["scalar_factors"] = self.factors.to_dict()
        if self.model is not None:
            rep["tail_energy"] = {"b": self.model.b_tail_energy, "c_psi": self.model.c_psi_tail_energy}
            rep["verification"] = self.verification.to_dict()
            rep["sigma_two_route_gap"] = self.two_route_gap
            rep["kolmogorov_szego"] = self.ks.to_dict()
        return sanitize(rep)


def factorize(f, config=None):
    """Run rank detection, eigen decomposition, alignment, causality check,
    cepstral factors, assembly, verification and both innovation covariance
    routes on a :class:`~woldfactor.spectra.SpectralDensityField`.

    Condition failures do not raise; they leave ``model`` unset and are
    visible through :attr:`Factorization.conditions`. A failed Hardy-space
    check is bypassed when ``config.force_noncausal`` is set.
    """
    config = config or RunConfig(grid_size=f.grid.size)
    out = Factorization(density=f, config=config, rank=detect_rank(f, config.rank_tol, config.agreement))
    if out.rank.rank == 0:
        out.notes.append("density vanishes on the whole grid")
        return out
    # with an unstable rank the field is still built so the remaining diagnostics run
    agreement = config.agreement if out.rank.almost_everywhere else 0.0
    out.eigen = pointwise_eig(f, config.rank_tol, agreement)
    out.log_integrability = log_integrability_check(out.eigen)
    out.aligned, out.alignment = align_phases(out.eigen)
    out.causality = hinfty_check(out.aligned, config.causal_tol)
    cond = out.conditions
    if not (cond["rank_ae_constant"] and cond["log_integrable"]):
        return out
    if not cond["hinfty"]:
        if not config.force_noncausal:
            return out
        out.notes.append("Hardy-space check failed; outputs carry the non-causal gauge tag")

    j, k = config.truncations(f.grid.size)
    out.factors = factor_eigenvalues(out.aligned, floor=config.eigen_floor)
    force = config.force_noncausal
    phi = assemble_factor(out.aligned, out.factors, j, config.causal_tol, out.causality, force)
    psi = assemble_inverse(out.aligned, out.factors, k, config.causal_tol, out.causality, force)
    try:
        phi, psi = normalize_phase(phi, psi, config.rank_tol)
    except GaugeError as exc:
        out.notes.append(f"gauge normalization skipped: {exc}")
    out.phi, out.psi = phi, psi
    out.verification = verify_factorization(f, phi, psi, config.factor_tol, config.causal_tol)
    out.model = WoldModel.from_factors(phi, psi)
    out.sigma_closed = innovation_covariance_closed(out.aligned, out.factors)
    out.two_route_gap = float(np.linalg.norm(out.sigma_closed - out.model.sigma, 2))
    out.ks = ks_determinant_check(out.aligned, out.model.sigma, config.ks_rtol)
    return out
