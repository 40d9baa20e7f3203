import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitonkit import squeeze as sq
from solitonkit.exceptions import ConfigurationError, DomainError, ValidationError

from oracles import covariance_min_variance as covariance_oracle


class TestBogoliubov:
    def test_identity(self):
        p = sq.squeeze_from_gain(1.0, 0.0)
        assert p.U == 1 and p.V == 0
        assert sq.min_quadrature_variance(p) == 0.5

    def test_unit_gain(self):
        p = sq.squeeze_from_gain(1.0, 1.0)
        assert p.U.real == pytest.approx(1.54308, abs=1e-5)
        assert abs(p.V) == pytest.approx(1.17520, abs=1e-5)

    @pytest.mark.parametrize("gz,expected", [(1.0, 0.5 * np.exp(-2)), (2.0, 0.5 * np.exp(-4))])
    def test_variance_values(self, gz, expected):
        v = sq.min_quadrature_variance(sq.squeeze_from_gain(1.0, gz))
        assert v == pytest.approx(expected, rel=1e-12)
        assert covariance_oracle(sq.squeeze_from_gain(1.0, gz)) == pytest.approx(expected, abs=1e-10)

    def test_reference_numbers(self):
        assert 0.5 * np.exp(-2) == pytest.approx(0.0676676, abs=1e-7)
        assert 0.5 * np.exp(-4) == pytest.approx(0.0091578, abs=1e-7)

    def test_oracle_grid(self):
        worst = 0.0
        for gz in np.linspace(0.0, 2.0, 10):
            for eta in np.linspace(0.0, 2 * np.pi, 10, endpoint=False):
                p = sq.squeeze_from_gain(1.0, gz, eta)
                worst = max(worst, abs(sq.min_quadrature_variance(p) - covariance_oracle(p)))
        assert worst < 1e-10

    @given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 2 * np.pi))
    @settings(max_examples=50, deadline=None)
    def test_composition_adds_gains(self, a, b, eta):
        p = sq.squeeze_from_gain(1.0, a, eta).compose(sq.squeeze_from_gain(1.0, b, eta))
        q = sq.squeeze_from_gain(1.0, a + b, eta)
        assert abs(abs(p.U) ** 2 - abs(p.V) ** 2 - 1) < 1e-12 * max(1.0, abs(p.U) ** 2)
        assert abs(p.U - q.U) < 1e-12 * abs(q.U)
        assert abs(p.V - q.V) < 1e-12 * max(1.0, abs(q.V))

    @given(st.floats(0, 10), st.floats(0, 2 * np.pi))
    @settings(max_examples=50, deadline=None)
    def test_variance_never_above_vacuum(self, gz, eta):
        p = sq.squeeze_from_gain(1.0, gz, eta)
        v = sq.min_quadrature_variance(p)
        assert v <= 0.5
        if abs(p.V) == 0:
            assert v == 0.5
        elif abs(p.V) > 1e-12:
            # below this |V| the deficit is lost to rounding of (1 - |V|)^2
            assert v < 0.5

    def test_invalid_pair(self):
        with pytest.raises(ValidationError):
            sq.SqueezeParams(1.0, 0.5)

    def test_negative_gain(self):
        with pytest.raises(DomainError):
            sq.squeeze_from_gain(-1.0, 1.0)


class TestRaman:
    @pytest.mark.parametrize("k1,k2,expected", [(1, 1, 0.0), (0, 2, 0.5), (1, 3, 0.125)])
    def test_hypertransient(self, k1, k2, expected):
        assert abs(sq.variance_hypertransient(sq.RamanCouplings(k1, k2)) - expected) < 1e-12

    @pytest.mark.parametrize("k1,k2,expected", [(0, 2, 0.5), (1, 1, 0.125), (3, 1, 1 / 32)])
    def test_steady_state(self, k1, k2, expected):
        assert abs(sq.variance_steady_state(sq.RamanCouplings(k1, k2)) - expected) < 1e-12

    def test_both_zero(self):
        with pytest.raises(DomainError):
            sq.RamanCouplings(0, 0)

    @given(st.floats(0, 100), st.floats(0.01, 100), st.floats(0.01, 100))
    @settings(max_examples=50, deadline=None)
    def test_rescaling_invariance(self, k1, k2, lam):
        a, b = sq.RamanCouplings(k1, k2), sq.RamanCouplings(lam * k1, lam * k2)
        assert sq.variance_hypertransient(a) == pytest.approx(sq.variance_hypertransient(b), abs=1e-14)
        assert sq.variance_steady_state(a) == pytest.approx(sq.variance_steady_state(b), abs=1e-14)

    def test_percent(self):
        assert sq.squeezing_percent(0.5) == 0.0
        assert sq.squeezing_percent(0.011) == pytest.approx(97.8)


class TestDirichlet:
    def test_values(self):
        assert abs(sq.dirichlet_null_energy(1.0) / -6.33257e-3 - 1) < 1e-6
        assert abs(sq.dirichlet_null_energy(2.0) / -3.95786e-4 - 1) < 1e-6

    def test_quartic_decade(self):
        z = np.linspace(1.0, 10.0, 91)
        e = np.array([sq.dirichlet_null_energy(x) for x in z])
        assert np.all(e < 0) and np.all(np.diff(np.abs(e)) < 0)
        np.testing.assert_allclose(e * z ** 4, e[0], rtol=1e-13)

    @pytest.mark.parametrize("z", [0.0, -1.0])
    def test_on_plate(self, z):
        with pytest.raises(DomainError):
            sq.dirichlet_null_energy(z)


class TestSech2Fit:
    t = np.linspace(-10, 10, 201)

    def test_exact_recovery(self):
        y = sq.sech2_model(self.t, -3.0, 2.0, 0.0, 0.0)
        fit = sq.fit_sech2_envelope(self.t, y)
        np.testing.assert_allclose([fit.amplitude, fit.width, fit.center, fit.offset],
                                   [-3.0, 2.0, 0.0, 0.0], atol=1e-8)
        assert fit.rms_residual < 1e-10

    def test_noisy(self, rng):
        y = sq.sech2_model(self.t, -3.0, 2.0, 0.0, 0.0) + rng.uniform(-0.01, 0.01, self.t.size)
        fit = sq.fit_sech2_envelope(self.t, y)
        assert abs(fit.amplitude + 3.0) < 0.05
        # uniform noise on [-a, a] has rms a / sqrt(3)
        assert fit.rms_residual == pytest.approx(0.01 / np.sqrt(3), rel=0.3)

    def test_constant(self):
        with pytest.raises(ConfigurationError):
            sq.fit_sech2_envelope(self.t, np.ones_like(self.t))

    def test_too_few(self):
        with pytest.raises(ConfigurationError):
            sq.fit_sech2_envelope(self.t[:5], self.t[:5])


def test_sweep_csv(tmp_path):
    sq.write_squeeze_sweep([(1, 3), (3, 1)], tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "kappa1,kappa2,var_hyper,var_steady,squeezing_pct"
    assert lines[2].split(",")[3] == "0.03125"
