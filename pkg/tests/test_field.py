import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitonkit.exceptions import ConfigurationError
from solitonkit.field import (ComplexEnvelope, PulseSpec, RealField, channel_energy, integrate_quantity,
                              make_grid, make_pulse, pulse_energy, read_field_csv, resample,
                              spectral_derivative, write_field_csv)
from solitonkit.kdv import KdvSolitonSpec, kdv_soliton_profile


class TestGrid:
    def test_reference_spacing(self):
        assert make_grid(1024, 80, -40).dx == 0.078125
        assert make_grid(8, 8, 0).dx == 1.0

    @pytest.mark.parametrize("n,length", [(1000, 80), (0, 1), (8, 0), (8, -1)])
    def test_rejected(self, n, length):
        with pytest.raises(ConfigurationError):
            make_grid(n, length)

    def test_frozen_samples(self):
        f = RealField(make_grid(8, 8), np.ones(8))
        with pytest.raises(ValueError):
            f.samples[0] = 2.0


class TestSpectralDerivative:
    def setup_method(self):
        self.grid = make_grid(64, 2 * np.pi)
        self.f = RealField(self.grid, np.sin(self.grid.x))

    def test_first_and_third_order(self):
        x = self.grid.x
        assert np.max(np.abs(spectral_derivative(self.f, 1).samples - np.cos(x))) < 1e-10
        assert np.max(np.abs(spectral_derivative(self.f, 3).samples + np.cos(x))) < 1e-10

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_constant_has_zero_derivative(self, order):
        c = RealField(self.grid, np.full(64, 3.7))
        assert np.max(np.abs(spectral_derivative(c, order).samples)) < 1e-12

    @pytest.mark.parametrize("order", [0, 4])
    def test_bad_order(self, order):
        with pytest.raises(ConfigurationError):
            spectral_derivative(self.f, order)

    @given(st.floats(-5, 5), st.floats(-5, 5))
    @settings(max_examples=25, deadline=None)
    def test_linear(self, a, b):
        g = RealField(self.grid, np.cos(3 * self.grid.x) + 0.1 * self.grid.x ** 0)
        lhs = spectral_derivative(RealField(self.grid, a * self.f.samples + b * g.samples), 2).samples
        rhs = a * spectral_derivative(self.f, 2).samples + b * spectral_derivative(g, 2).samples
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, abs(a) + abs(b)) * 10


class TestIntegrals:
    def test_kdv_mass(self):
        u = kdv_soliton_profile(KdvSolitonSpec(1.0), 0.0, make_grid(1024, 80, -40))
        assert abs(integrate_quantity(u, "mass") / -12.0 - 1) < 1e-6

    def test_sech_power(self):
        g = make_grid(1024, 80, -40)
        q = ComplexEnvelope(g, 1 / np.cosh(g.x))
        assert abs(integrate_quantity(q, "power") / 2.0 - 1) < 1e-6

    @pytest.mark.parametrize("kind", ["mass", "momentum", "power"])
    def test_zero(self, kind):
        g = make_grid(16, 4)
        f = ComplexEnvelope(g, np.zeros(16)) if kind == "power" else RealField(g, np.zeros(16))
        assert integrate_quantity(f, kind) == 0.0

    @pytest.mark.parametrize("A,W,expected", [(2.0, 1.0, 1.0), (1.0, 2.0, 2.0)])
    def test_channel_energy_closed_form(self, A, W, expected):
        g = make_grid(2048, 40, -20)
        spec = PulseSpec(amplitude=A, width=W, chirp=0.7, phase=0.3)
        assert pulse_energy(spec) == pytest.approx(expected, rel=1e-15)
        assert abs(channel_energy(make_pulse(spec, g)) / expected - 1) < 1e-6

    def test_channel_energy_phase_blind(self):
        g = make_grid(2048, 40, -20)
        e0 = channel_energy(make_pulse(PulseSpec(2.0, 1.0, 0.0, 0.0), g))
        e1 = channel_energy(make_pulse(PulseSpec(2.0, 1.0, 3.0, 1.2), g))
        assert abs(e1 / e0 - 1) < 1e-12

    def test_power_matches_channel_energy(self):
        g = make_grid(512, 40, -20)
        q = make_pulse(PulseSpec(1.5, 1.3, 0.4, 0.0), g)
        ratio = integrate_quantity(q, "power") / (channel_energy(q) / np.sqrt(2 / np.pi))
        assert abs(ratio - 1) < 1e-12

    def test_zero_channel_energy(self):
        assert channel_energy(ComplexEnvelope(make_grid(8, 8), np.zeros(8))) == 0.0

    def test_resample_preserves_integrals(self):
        g = make_grid(256, 40, -20)
        q = ComplexEnvelope(g, np.exp(-g.x ** 2))
        fine = resample(q, 1024)
        assert fine.grid.n == 1024
        assert abs(integrate_quantity(fine, "power") / integrate_quantity(q, "power") - 1) < 1e-10


def test_csv_round_trip(tmp_path):
    g = make_grid(32, 8, -4)
    q = ComplexEnvelope(g, np.exp(-g.x ** 2) * np.exp(0.3j * g.x))
    write_field_csv(q, tmp_path / "q.csv")
    back = read_field_csv(tmp_path / "q.csv")
    np.testing.assert_array_equal(back.samples, q.samples)
    assert (tmp_path / "q.csv").read_text().splitlines()[0] == "index,x,value_re,value_im"
