import numpy as np
import pytest
from dataclasses import replace
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from woldfactor import (
    FrequencyGrid,
    MASpec,
    align_phases,
    assemble_factor,
    assemble_inverse,
    density_from_ma,
    factor_eigenvalues,
    normalize_phase,
    pointwise_eig,
    verify_factorization,
)
from woldfactor.eigenfield import EigenField
from woldfactor.errors import DimensionError, GaugeError, NonCausalGaugeError
from woldfactor.fourier import fourier_window

from conftest import MIX, U_RANK1


def pieces(f, trunc=None):
    aligned, _ = align_phases(pointwise_eig(f))
    factors = factor_eigenvalues(aligned)
    phi = assemble_factor(aligned, factors, trunc)
    psi = assemble_inverse(aligned, factors, trunc)
    return aligned, factors, phi, psi


def normalized(f, trunc=None):
    _, _, phi, psi = pieces(f, trunc)
    return normalize_phase(phi, psi)


class TestAssemble:
    def test_white_noise(self):
        f = density_from_ma(MASpec(np.eye(3)[None]), FrequencyGrid(64))
        _, _, phi, psi = pieces(f)
        np.testing.assert_allclose(phi.values, np.broadcast_to(np.eye(3), (64, 3, 3)), atol=1e-14)
        np.testing.assert_allclose(psi.values, np.broadcast_to(np.eye(3), (64, 3, 3)), atol=1e-14)
        assert phi.coefficients.shape == (17, 3, 3)
        np.testing.assert_allclose(phi.coefficients[0], np.eye(3), atol=1e-14)
        assert np.abs(phi.coefficients[1:]).max() <= 1e-14
        np.testing.assert_allclose(psi.coefficients[0], np.eye(3), atol=1e-14)
        rep = verify_factorization(f, phi, psi)
        assert max(rep.factor_deviation, rep.inverse_deviation, rep.projection_deviation) <= 1e-12
        assert rep.passed

    def test_ma1(self, ma1, grid):
        phi, psi = normalized(density_from_ma(ma1, grid))
        b = phi.coefficients[:, 0, 0]
        np.testing.assert_allclose(b[:3], [1.0, 0.5, 0.0], atol=1e-6)
        c = psi.coefficients[:21, 0, 0]
        np.testing.assert_allclose(c, (-0.5) ** np.arange(21), atol=1e-6)
        assert phi.gauge == "causal" and phi.tail_energy <= 1e-20

    def test_rank1(self, rank1, grid):
        f = density_from_ma(rank1, grid)
        phi, psi = normalized(f)
        np.testing.assert_allclose(phi.coefficients[0, :, 0], U_RANK1, atol=1e-6)
        np.testing.assert_allclose(phi.coefficients[1, :, 0], 0.5 * U_RANK1, atol=1e-6)
        k = np.arange(21)
        want = ((-0.5) ** k)[:, None] * U_RANK1[None, :]
        np.testing.assert_allclose(psi.coefficients[:21, 0, :], want, atol=1e-6)
        rep = verify_factorization(f, phi, psi)
        assert rep.passed, rep.to_dict()

    def test_mixed_pipeline(self, mixed, grid):
        f = density_from_ma(mixed, grid)
        phi, psi = normalized(f)
        rep = verify_factorization(f, phi, psi)
        assert rep.passed and rep.factor_deviation <= 1e-8

    def test_rank_mismatch(self, mixed):
        f = density_from_ma(mixed, FrequencyGrid(64))
        aligned, factors, _, _ = pieces(f)
        short = replace(factors, cepstra=factors.cepstra[:1], factors=factors.factors[:1])
        with pytest.raises(DimensionError):
            assemble_factor(aligned, short)
        with pytest.raises(DimensionError):
            assemble_inverse(aligned, short)

    def test_noncausal_requires_force(self):
        g = FrequencyGrid(64)
        u = np.stack([np.ones(64), np.exp(1j * g.nodes)], axis=1)[:, :, None] / np.sqrt(2)
        field = EigenField(g, np.ones((64, 1)), u, 1, aligned=True)
        factors = factor_eigenvalues(field)
        with pytest.raises(NonCausalGaugeError):
            assemble_factor(field, factors)
        phi = assemble_factor(field, factors, force=True)
        psi = assemble_inverse(field, factors, force=True)
        assert phi.gauge == psi.gauge == "non-causal"


class TestVerify:
    def test_corrupted_factor(self, ma1, grid):
        f = density_from_ma(ma1, grid)
        phi, psi = normalized(f)
        # perturb b(1) by 1e-2 and resynthesize the grid values
        bumped = phi.values + 1e-2 * np.exp(-1j * grid.nodes)[:, None, None]
        rep = verify_factorization(f, replace(phi, values=bumped), psi)
        assert rep.factor_deviation >= 1e-3
        assert not rep.checks["factor"] and not rep.passed

    def test_shape_mismatch(self, ma1, mixed):
        g = FrequencyGrid(64)
        _, _, phi, psi = pieces(density_from_ma(ma1, g))
        with pytest.raises(DimensionError):
            verify_factorization(density_from_ma(mixed, g), phi, psi)


class TestNormalizePhase:
    def test_phase_removed(self):
        f = density_from_ma(MASpec(np.eye(2)[None]), FrequencyGrid(32))
        _, _, phi, psi = pieces(f)
        tw = np.exp(0.7j)
        phi = replace(phi, values=phi.values * tw, coefficients=phi.coefficients * tw)
        psi = replace(psi, values=psi.values / tw, coefficients=psi.coefficients / tw)
        p2, _ = normalize_phase(phi, psi)
        np.testing.assert_allclose(p2.coefficients[0], np.eye(2), atol=1e-14)

    def test_sign_flip(self, ma1):
        _, _, phi, psi = pieces(density_from_ma(ma1, FrequencyGrid(256)))
        phi = replace(phi, values=-phi.values, coefficients=-phi.coefficients)
        psi = replace(psi, values=-psi.values, coefficients=-psi.coefficients)
        p2, _ = normalize_phase(phi, psi)
        np.testing.assert_allclose(p2.coefficients[:2, 0, 0], [1.0, 0.5], atol=1e-12)

    def test_random_unitary_twist(self, grid):
        # two independent MA(1) channels, so the oracle is b(0) = I, b(1) = diag(0.5, -0.3)
        spec = MASpec(np.stack([np.eye(2), np.diag([0.5, -0.3])]))
        f = density_from_ma(spec, grid)
        phi, psi = normalized(f)
        q = unitary_group.rvs(2, random_state=np.random.default_rng(11))
        twisted = replace(phi, values=phi.values @ q, coefficients=phi.coefficients @ q)
        inv = replace(psi, values=q.conj().T @ psi.values, coefficients=q.conj().T @ psi.coefficients)
        p2, s2 = normalize_phase(twisted, inv)
        np.testing.assert_allclose(p2.coefficients[0], np.eye(2), atol=1e-8)
        np.testing.assert_allclose(p2.coefficients[1], np.diag([0.5, -0.3]), atol=1e-8)
        assert np.abs(p2.coefficients[2:]).max() <= 1e-8
        np.testing.assert_allclose(s2.values @ p2.values, np.broadcast_to(np.eye(2), p2.values.shape[:1] + (2, 2)), atol=1e-12)

    def test_grams_unchanged(self, mixed):
        f = density_from_ma(mixed, FrequencyGrid(512))
        _, _, phi, psi = pieces(f)
        p2, s2 = normalize_phase(phi, psi)
        g1 = phi.values @ np.conj(np.swapaxes(phi.values, 1, 2))
        g2 = p2.values @ np.conj(np.swapaxes(p2.values, 1, 2))
        assert np.abs(g1 - g2).max() <= 1e-12
        assert np.abs(psi.values @ phi.values - s2.values @ p2.values).max() <= 1e-12
        top = p2.coefficients[0]
        np.testing.assert_allclose(top, top.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(top).min() >= -1e-12

    def test_singular_leading_block(self):
        # rank-1 factor with a zero first row in b(0)
        g = FrequencyGrid(32)
        u = np.zeros((32, 2, 1), dtype=complex)
        u[:, 1, 0] = 1.0
        field = EigenField(g, np.ones((32, 1)), u, 1, aligned=True)
        factors = factor_eigenvalues(field)
        phi, psi = assemble_factor(field, factors), assemble_inverse(field, factors)
        with pytest.raises(GaugeError):
            normalize_phase(phi, psi)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gram_gauge_invariance(seed):
    g = FrequencyGrid(256)
    f = density_from_ma(MASpec(np.stack([MIX, MIX @ np.diag([0.5, -0.3])])), g)
    aligned, factors, phi, _ = pieces(f)
    q = unitary_group.rvs(2, random_state=np.random.default_rng(seed))
    # the eigenvalues are distinct, so only diagonal unitaries keep U Gamma consistent
    d = np.diag(np.diag(q) / np.abs(np.diag(q)))
    other = assemble_factor(replace(aligned, vectors=aligned.vectors @ d), factors)
    gram = lambda p: p @ np.conj(np.swapaxes(p, 1, 2)) / (2 * np.pi)
    assert np.abs(gram(phi.values) - gram(other.values)).max() <= 1e-12


def test_parseval_and_convolution(mixed):
    g = FrequencyGrid(1024)
    phi, psi = normalized(density_from_ma(mixed, g))
    energy = np.mean(np.sum(np.abs(phi.values) ** 2, axis=(1, 2)))
    kept = np.sum(np.abs(phi.coefficients) ** 2)
    assert abs(kept + phi.tail_energy - energy) <= 1e-10
    idx, coeffs = fourier_window(phi.values)
    assert coeffs.shape[0] == idx.size
    b, c = phi.coefficients, psi.coefficients
    kmax = (c.shape[0] - 1) // 2
    for k in range(kmax + 1):
        s = sum(c[k - j] @ b[j] for j in range(k + 1))
        want = np.eye(2) if k == 0 else np.zeros((2, 2))
        assert np.abs(s - want).max() <= 1e-6, k
