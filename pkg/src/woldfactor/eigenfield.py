"""Pointwise spectral decomposition ``f = U Lambda U*`` across the grid.

Besides computing the eigen-pairs this module fixes the per-frequency gauge
(column order and unit phase of each eigenvector) by a sequential sweep and
measures how close the resulting eigenvector field is to having a one-sided
Fourier series.
"""
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import RankInstabilityError
from .fourier import fourier_window, negative_energy_ratio
from .linalg import adjoint, eigh_sorted, phase_normalize, polar_unitary


@dataclass(frozen=True)
class RankReport:
    rank: int
    histogram: dict
    disagreeing_nodes: tuple
    agreement: float
    almost_everywhere: bool
    threshold: float

    def to_dict(self):
        return {
            "rank": self.rank,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "disagreeing_nodes": list(self.disagreeing_nodes),
            "agreement": self.agreement,
            "almost_everywhere": self.almost_everywhere,
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class EigenField:
    """Nonzero eigenvalues and eigenvectors of a density at every node.

    Attributes
    ----------
    lambdas : (N, r) float ndarray
        Sorted non-increasing per node until :func:`align_phases` is applied;
        afterwards column ``j`` follows one continuous eigenvalue branch.
    vectors : (N, d, r) complex ndarray
        Orthonormal columns.
    aligned : bool
        Whether the gauge was fixed by :func:`align_phases`.
    deficient_nodes : tuple of int
        Nodes where ``lambda_r`` does not exceed the rank threshold.
    """

    grid: object
    lambdas: np.ndarray
    vectors: np.ndarray
    rank: int
    aligned: bool = False
    deficient_nodes: tuple = ()

    @property
    def dimension(self):
        return self.vectors.shape[1]

    def gram(self):
        """``U Lambda U*`` at every node."""
        v = self.vectors
        return (v * self.lambdas[:, None, :]) @ adjoint(v)

    def orthonormality_error(self):
        eye = np.eye(self.rank)
        return float(np.abs(adjoint(self.vectors) @ self.vectors - eye).max())


@dataclass(frozen=True)
class AlignmentReport:
    permuted_nodes: tuple
    rotated_clusters: int
    warnings: tuple
    min_overlap: float
    sequential: bool = True

    def to_dict(self):
        return {
            "permuted_nodes": list(self.permuted_nodes),
            "rotated_clusters": self.rotated_clusters,
            "warnings": [{"node": n, "column": c, "overlap": o} for n, c, o in self.warnings],
            "min_overlap": self.min_overlap,
        }


@dataclass(frozen=True)
class CausalityReport:
    indices: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    negative_energy_ratio: float
    column_ratios: tuple
    wraparound_gap: float
    max_node_gap: float
    aligned: bool
    causal_tol: float
    passed: bool

    def to_dict(self):
        return {
            "negative_energy_ratio": self.negative_energy_ratio,
            "column_ratios": list(self.column_ratios),
            "wraparound_gap": self.wraparound_gap,
            "max_node_gap": self.max_node_gap,
            "aligned": self.aligned,
            "causal_tol": self.causal_tol,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class LogIntegrabilityReport:
    integral: float
    column_integrals: tuple
    min_lambda: float
    failing_nodes: tuple
    floor: float
    passed: bool

    def to_dict(self):
        return {
            "integral": self.integral,
            "column_integrals": list(self.column_integrals),
            "min_lambda": self.min_lambda,
            "failing_nodes": list(self.failing_nodes),
            "floor": self.floor,
            "passed": self.passed,
        }


def _rank_report(lam, rank_tol, agreement):
    top = float(lam.max()) if lam.size else 0.0
    threshold = rank_tol * top
    counts = (lam > threshold).sum(axis=1) if top > 0 else np.zeros(lam.shape[0], int)
    hist = Counter(counts.tolist())
    # most common count; ties resolved towards the larger rank
    rank = max(hist, key=lambda k: (hist[k], k))
    disagree = np.flatnonzero(counts != rank)
    frac = 1.0 - disagree.size / lam.shape[0]
    return RankReport(
        rank=int(rank),
        histogram=dict(hist),
        disagreeing_nodes=tuple(int(i) for i in disagree),
        agreement=frac,
        almost_everywhere=bool(frac >= agreement and rank > 0),
        threshold=threshold,
    )


def detect_rank(f, rank_tol=1e-10, agreement=0.99):
    """Modal number of eigenvalues above ``rank_tol * max_m lambda_1(w_m)``.

    The rank is declared a.e. constant when at least ``agreement`` of the
    nodes share the modal count. Scale invariant.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    lam = np.linalg.eigvalsh(f.values)[:, ::-1]
    return _rank_report(lam, rank_tol, agreement)


def pointwise_eig(f, rank_tol=1e-10, agreement=0.99):
    """Keep the ``r`` largest eigen-pairs at every node.

    Raises
    ------
    RankInstabilityError
        If fewer than ``agreement`` of the nodes share the modal rank, or the
        modal rank is zero. The exception carries the rank histogram.
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    lam, vec = eigh_sorted(f.values)
    report = _rank_report(lam, rank_tol, agreement)
    if not report.almost_everywhere:
        raise RankInstabilityError(
            f"rank is not a.e. constant: histogram {dict(sorted(report.histogram.items()))}, "
            f"agreement {report.agreement:.4f}",
            report.histogram,
        )
    r = report.rank
    lambdas = np.ascontiguousarray(lam[:, :r])
    deficient = np.flatnonzero(lambdas[:, -1] <= report.threshold)
    return EigenField(
        grid=f.grid,
        lambdas=lambdas,
        vectors=np.ascontiguousarray(vec[:, :, :r]),
        rank=r,
        deficient_nodes=tuple(int(i) for i in deficient),
    )


def _clusters(lam, rel):
    order = np.argsort(-lam, kind="stable")
    scale = np.abs(lam).max()
    groups, current = [], [order[0]]
    for a, b in zip(order[:-1], order[1:]):
        if lam[a] - lam[b] <= rel * scale:
            current.append(b)
        else:
            groups.append(sorted(current))
            current = [b]
    groups.append(sorted(current))
    return groups


def _unit_phase(z, tol=1e-13):
    mag = abs(z)
    if mag == 0.0 or (z.real > 0 and abs(z.imag) <= tol * mag):
        return 1.0
    return np.conj(z) / mag


def align_phases(field, degenerate_tol=1e-12, warn_overlap=0.1):
    """Fix column order and phases by a sweep over ``m = 1..N-1``.

    Node 0 is normalized so each column's largest-magnitude component is
    real positive. At each later node the current eigenvectors are matched
    to the previous node's columns greedily by ``|<u_prev, u_cur>|`` and
    rotated so the matched inner product is real positive. Within a cluster
    of degenerate eigenvalues the basis is rotated onto the projection of
    the previous columns (identity when it already matches).

    The result depends on the sweep order and is idempotent. Spans and the
    products ``U Lambda U*`` are unchanged.

    Returns
    -------
    EigenField
        With ``aligned=True``; lambdas permuted together with the columns.
    AlignmentReport
    """
    n, d, r = field.vectors.shape
    vec_in, lam_in = field.vectors, field.lambdas
    out_vec = np.empty_like(vec_in)
    out_lam = np.empty_like(lam_in)
    out_vec[0] = phase_normalize(vec_in[0])
    out_lam[0] = lam_in[0]
    permuted, warnings = [], []
    rotated = 0
    min_overlap = 1.0

    for m in range(1, n):
        prev = out_vec[m - 1]
        cur, lam = vec_in[m], lam_in[m]
        new_vec = np.empty((d, r), dtype=complex)
        new_lam = np.empty(r)
        free_prev = list(range(r))
        singles = []
        mapping = {}
        for group in _clusters(lam, degenerate_tol):
            if len(group) == 1:
                singles.append(group[0])
                continue
            block = cur[:, group]
            proj = np.linalg.norm(block.conj().T @ prev[:, free_prev], axis=0)
            pick = np.argsort(-proj, kind="stable")[: len(group)]
            targets = sorted(free_prev[i] for i in pick)
            a = block.conj().T @ prev[:, targets]
            w = polar_unitary(a)
            if np.abs(w - np.eye(len(group))).max() > 1e-12:
                block = block @ w
                rotated += 1
            for i, p in enumerate(targets):
                new_vec[:, p] = block[:, i]
                new_lam[p] = lam[group[i]]
                mapping[p] = group[i]
                free_prev.remove(p)
        if singles:
            overlap = np.abs(prev[:, free_prev].conj().T @ cur[:, singles])
            rows, cols = list(free_prev), list(singles)
            while rows:
                i, j = np.unravel_index(np.argmax(overlap), overlap.shape)
                p, c = rows[i], cols[j]
                z = np.vdot(prev[:, p], cur[:, c])
                new_vec[:, p] = cur[:, c] * _unit_phase(z)
                new_lam[p] = lam[c]
                mapping[p] = c
                if abs(z) < warn_overlap:
                    warnings.append((m, p, float(abs(z))))
                min_overlap = min(min_overlap, float(abs(z)))
                overlap = np.delete(np.delete(overlap, i, axis=0), j, axis=1)
                del rows[i], cols[j]
        if any(mapping[p] != p for p in range(r)):
            permuted.append(m)
        out_vec[m] = new_vec
        out_lam[m] = new_lam

    aligned = replace(field, vectors=out_vec, lambdas=out_lam, aligned=True)
    report = AlignmentReport(
        permuted_nodes=tuple(permuted),
        rotated_clusters=rotated,
        warnings=tuple(warnings),
        min_overlap=min_overlap,
    )
    return aligned, report


def hinfty_check(field, causal_tol=1e-8, wrap_factor=10.0):
    """Numerical test that the eigenvector field lies in the Hardy space.

    Computes the coefficients ``psi_U(j)``, ``|j| <= N/2 - 1``, of
    ``U(w) = sum_j psi_U(j) exp(-1j*j*w)`` and the share of their energy at
    negative ``j``. The field also has to close up across ``w = +-pi``: the
    jump between the last and first node may not exceed ``wrap_factor``
    times the largest jump between neighbouring nodes.
    """
    v = field.vectors
    idx, coeffs = fourier_window(v)
    ratio = negative_energy_ratio(idx, coeffs)
    cols = tuple(negative_energy_ratio(idx, coeffs[:, :, j]) for j in range(field.rank))
    steps = np.linalg.norm(np.diff(v, axis=0), axis=1).max(axis=1)
    max_gap = float(steps.max()) if steps.size else 0.0
    wrap = float(np.linalg.norm(v[0] - v[-1], axis=0).max())
    passed = ratio <= causal_tol and wrap <= wrap_factor * max_gap + 1e-12
    return CausalityReport(
        indices=idx,
        coefficients=coeffs,
        negative_energy_ratio=ratio,
        column_ratios=cols,
        wraparound_gap=wrap,
        max_node_gap=max_gap,
        aligned=field.aligned,
        causal_tol=causal_tol,
        passed=bool(passed),
    )


def log_integrability_check(field, floor=-1e6, underflow=1e-300):
    """Rectangle-rule value of ``int log lambda_r(w) dw`` with failure flags.

    Uses the smallest retained eigenvalue at each node, so it stays valid
    after alignment has permuted columns.
    """
    lam = field.lambdas
    smallest = lam.min(axis=1)
    bad = np.flatnonzero(smallest <= underflow)
    h = field.grid.spacing
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(np.where(lam > 0, lam, 0.0))
    integral = float(np.log(smallest).sum() * h) if not bad.size else float("-inf")
    cols = tuple(float(logs[:, j].sum() * h) if np.all(lam[:, j] > 0) else float("-inf")
                 for j in range(field.rank))
    passed = bad.size == 0 and integral >= floor
    return LogIntegrabilityReport(
        integral=integral,
        column_integrals=cols,
        min_lambda=float(smallest.min()),
        failing_nodes=tuple(int(i) for i in bad),
        floor=floor,
        passed=bool(passed),
    )
