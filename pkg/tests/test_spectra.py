import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from woldfactor import (
    CovarianceSequence,
    FrequencyGrid,
    MASpec,
    SpectralDensityField,
    covariance_from_density,
    density_from_covariance,
    density_from_ma,
    sup_norm_bound,
)
from woldfactor import io
from woldfactor.errors import AliasingError, DefinitenessError


def convolution_covariance(b, h):
    """Oracle C(h) = sum_j b(j+h) b(j)* by explicit loops."""
    q, d = len(b) - 1, b[0].shape[0]
    out = np.zeros((d, d), dtype=complex)
    for j in range(q + 1):
        if 0 <= j + h <= q:
            out += b[j + h] @ np.conj(b[j]).T
    return out


def random_spec(rng, d, r, q):
    return MASpec(rng.standard_normal((q + 1, d, r)) + 1j * rng.standard_normal((q + 1, d, r)))


class TestGrid:
    @pytest.mark.parametrize("n", [0, 4, 12, 100])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ValueError):
            FrequencyGrid(n)

    def test_nodes(self):
        g = FrequencyGrid(8)
        np.testing.assert_allclose(g.nodes, -np.pi + np.pi / 4 * np.arange(8))


class TestDensityFromMA:
    def test_unit_density(self):
        f = density_from_ma(MASpec([[[np.sqrt(2 * np.pi)]]]), FrequencyGrid(16))
        np.testing.assert_allclose(f.values[:, 0, 0], 1.0)

    def test_ma1_at_zero(self, ma1):
        g = FrequencyGrid(64)
        f = density_from_ma(ma1, g)
        zero = int(np.flatnonzero(np.isclose(g.nodes, 0.0))[0])
        assert f.values[zero, 0, 0].real == pytest.approx(2.25 / (2 * np.pi), rel=1e-14)

    def test_white_noise(self):
        f = density_from_ma(MASpec(np.eye(2)[None]), FrequencyGrid(8))
        np.testing.assert_allclose(f.values, np.broadcast_to(np.eye(2) / (2 * np.pi), (8, 2, 2)))

    def test_aliasing(self):
        with pytest.raises(AliasingError):
            density_from_ma(MASpec(np.ones((5, 1, 1))), FrequencyGrid(8))

    def test_rank_bounded(self, rank1):
        f = density_from_ma(rank1, FrequencyGrid(32))
        lam = np.linalg.eigvalsh(f.values)
        assert np.abs(lam[:, 0]).max() < 1e-15


class TestCovariance:
    def test_white_noise(self):
        f = SpectralDensityField(FrequencyGrid(16), np.broadcast_to(np.eye(3) / (2 * np.pi), (16, 3, 3)))
        c = covariance_from_density(f, 3)
        np.testing.assert_allclose(c.lags[0], np.eye(3), atol=1e-15)
        np.testing.assert_allclose(c.lags[1:], 0, atol=1e-15)

    def test_ma1(self, ma1):
        c = covariance_from_density(density_from_ma(ma1, FrequencyGrid(64)), 2)
        oracle = [convolution_covariance(ma1.coefficients, h)[0, 0] for h in range(3)]
        np.testing.assert_allclose(oracle, [1.25, 0.5, 0.0])
        np.testing.assert_allclose(c.lags[:, 0, 0], oracle, atol=1e-14)

    def test_linearity(self, ma1):
        f = density_from_ma(ma1, FrequencyGrid(64))
        np.testing.assert_allclose(covariance_from_density(f.scaled(3.5), 4).lags,
                                   3.5 * covariance_from_density(f, 4).lags, atol=1e-14)

    def test_negative_lags_are_adjoints(self):
        rng = np.random.default_rng(0)
        c = covariance_from_density(density_from_ma(random_spec(rng, 3, 2, 3), FrequencyGrid(32)), 5)
        for h in range(1, 6):
            assert np.array_equal(c.at(-h), c.lags[h].conj().T)
        assert np.linalg.eigvalsh(c.lags[0]).min() >= -1e-10

    def test_max_lag_alias(self, ma1):
        with pytest.raises(AliasingError):
            covariance_from_density(density_from_ma(ma1, FrequencyGrid(8)), 4)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4), st.integers(0, 8), st.integers(0, 2**32 - 1))
    def test_round_trip_matches_convolution(self, d, q, seed):
        rng = np.random.default_rng(seed)
        spec = random_spec(rng, d, int(rng.integers(1, d + 1)), q)
        f = density_from_ma(spec, FrequencyGrid(64))
        c = covariance_from_density(f, q + 2)
        for h in range(q + 3):
            oracle = convolution_covariance(spec.coefficients, h)
            assert np.abs(c.lags[h] - oracle).max() <= 1e-10 * (1 + np.abs(oracle).max())
        assert f.total_power == pytest.approx(np.trace(c.lags[0]).real, rel=1e-10)

    def test_closed_form_autocovariance_method(self, mixed):
        for h in range(-2, 3):
            np.testing.assert_allclose(mixed.autocovariance(h), convolution_covariance(mixed.coefficients, h)
                                       if h >= 0 else convolution_covariance(mixed.coefficients, -h).conj().T)


class TestDensityFromCovariance:
    def test_identity(self):
        f = density_from_covariance(CovarianceSequence(np.eye(2)[None]), FrequencyGrid(8))
        np.testing.assert_allclose(f.values, np.broadcast_to(np.eye(2) / (2 * np.pi), (8, 2, 2)), atol=1e-16)

    def test_ma1_recovered(self, ma1):
        g = FrequencyGrid(64)
        f = density_from_covariance(CovarianceSequence([1.25, 0.5]), g)
        closed = np.abs(1 + 0.5 * np.exp(-1j * g.nodes)) ** 2 / (2 * np.pi)
        np.testing.assert_allclose(f.values[:, 0, 0], closed, atol=1e-12)

    def test_indefinite_flagged(self):
        g = FrequencyGrid(16)
        # 1 + 1.4 cos w is -0.4 at w = pi
        assert 1 + 1.4 * np.cos(np.pi) == pytest.approx(-0.4)
        cov = CovarianceSequence([1.0, 0.7])
        with pytest.raises(DefinitenessError):
            density_from_covariance(cov, g)
        fixed = density_from_covariance(cov, g, psd_fix=True)
        assert fixed.psd_adjustment > 0
        assert np.linalg.eigvalsh(fixed.values).min() >= -1e-15
        neg = np.clip((1 + 1.4 * np.cos(g.nodes)) / (2 * np.pi), None, 0)
        assert fixed.psd_adjustment == pytest.approx(-neg.sum() * g.spacing, rel=1e-10)


class TestSupNorm:
    def test_white_noise(self):
        f = SpectralDensityField(FrequencyGrid(8), np.broadcast_to(np.eye(2) / (2 * np.pi), (8, 2, 2)))
        assert sup_norm_bound(f) == pytest.approx(1 / (2 * np.pi))

    def test_ma1_and_homogeneity(self, ma1):
        f = density_from_ma(ma1, FrequencyGrid(64))
        assert sup_norm_bound(f) == pytest.approx(2.25 / (2 * np.pi), rel=1e-14)
        assert sup_norm_bound(f.scaled(4.0)) == pytest.approx(4 * sup_norm_bound(f), rel=1e-14)

    def test_zero(self):
        assert sup_norm_bound(SpectralDensityField(FrequencyGrid(8), np.zeros(8))) == 0.0


class TestValidation:
    def test_rejects_non_hermitian(self):
        v = np.zeros((8, 2, 2), dtype=complex)
        v[:, 0, 1] = 1.0
        with pytest.raises(DefinitenessError):
            SpectralDensityField(FrequencyGrid(8), v)

    def test_rejects_indefinite(self):
        with pytest.raises(DefinitenessError):
            SpectralDensityField(FrequencyGrid(8), -np.ones(8))


class TestJSON:
    def test_ma_round_trip(self, mixed, tmp_path):
        p = tmp_path / "spec.json"
        io.dump_json(io.ma_spec_to_json(mixed), p)
        back = io.ma_spec_from_json(io.load_json(p))
        assert np.array_equal(back.coefficients, mixed.coefficients)

    def test_covariance_round_trip(self, mixed, tmp_path):
        c = covariance_from_density(density_from_ma(mixed, FrequencyGrid(32)), 3)
        p = tmp_path / "cov.json"
        io.dump_json(io.covariance_to_json(c), p)
        assert np.array_equal(io.covariance_from_json(io.load_json(p)).lags, c.lags)

    def test_layout(self, mixed):
        obj = io.ma_spec_to_json(mixed)
        assert obj["dimension"] == 2 and obj["rank"] == 2
        assert obj["coefficients"][0][0][1] == [mixed.coefficients[0][0, 1].real, mixed.coefficients[0][0, 1].imag]
