import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitonkit import wavelets as wv
from solitonkit.exceptions import ConfigurationError, DomainError, ValidationError

NAMES = sorted(wv.FILTERS)
LENGTHS = [2 ** k for k in range(3, 13)]


def sech2_pulse(n=1024):
    t = np.linspace(-20, 20, n, endpoint=False)
    return t, 1.0 / np.cosh(t) ** 2


class TestFilters:
    @pytest.mark.parametrize("name", NAMES)
    def test_shipped_tables_are_admissible(self, name):
        f = wv.get_filter(name).validate()
        assert abs(np.sum(f.c) - 2) < 1e-12
        assert abs(np.sum(f.lowpass ** 2) - 1) < 1e-12

    def test_haar_wavelet_taps(self):
        taps = wv.wavelet_from_scaling(wv.get_filter("haar"))
        np.testing.assert_array_equal(taps.shifts, [0, 1])
        np.testing.assert_array_equal(taps.coeffs, [1.0, -1.0])

    @pytest.mark.parametrize("name", NAMES)
    def test_wavelet_taps_sum_to_zero(self, name):
        assert abs(np.sum(wv.wavelet_from_scaling(wv.get_filter(name)).coeffs)) < 1e-12

    def test_coif1_has_six_taps(self):
        assert wv.get_filter("coif1").N == 6

    @pytest.mark.parametrize("c,match", [([1.0, 1.0, 1.0], "even"), ([1.5, 0.5], "orthonormality"),
                                         ([1.0, 0.9], "sum")])
    def test_inadmissible(self, c, match):
        with pytest.raises(ValidationError, match=match):
            wv.WaveletFilter("bad", c).validate()

    def test_unknown_name(self):
        with pytest.raises(ConfigurationError):
            wv.get_filter("db99")


class TestTransform:
    @pytest.mark.parametrize("name", NAMES)
    @pytest.mark.parametrize("n", LENGTHS)
    def test_perfect_reconstruction_and_parseval(self, name, n, rng):
        f = wv.get_filter(name)
        x = rng.standard_normal(n)
        r = wv.dwt_forward(x, f)
        assert np.max(np.abs(wv.dwt_inverse(r, f) - x)) < 1e-10
        assert abs(r.energy() / np.sum(x ** 2) - 1) < 1e-10

    @given(st.sampled_from(NAMES), st.integers(3, 10), st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_reconstruction_property(self, name, k, seed):
        f = wv.get_filter(name)
        x = np.random.Generator(np.random.PCG64(seed)).uniform(-1, 1, 2 ** k)
        levels = 1 + seed % k
        assert np.max(np.abs(wv.dwt_inverse(wv.dwt_forward(x, f, levels), f) - x)) < 1e-10

    @pytest.mark.parametrize("name", NAMES)
    def test_constant_has_no_details(self, name):
        r = wv.dwt_forward(np.full(256, 3.0), wv.get_filter(name))
        assert max(np.max(np.abs(d)) for d in r.details) < 1e-12

    @pytest.mark.parametrize("name", NAMES)
    def test_vanishing_moments(self, name):
        f = wv.get_filter(name)
        n = 512
        x = np.arange(n, dtype=float) / n
        for deg in range(f.vanishing_moments):
            d = wv.dwt_forward(x ** deg, f, 1).details[0]
            # drop the coefficients whose support wraps around the period
            interior = d[: n // 2 - f.N]
            assert np.max(np.abs(interior)) < 1e-8

    def test_haar_impulse(self):
        x = np.zeros(8)
        x[0] = 1.0
        r = wv.dwt_forward(x, wv.get_filter("haar"), 1)
        s = 1 / np.sqrt(2)
        np.testing.assert_allclose(r.approx, [s, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(r.details[0], [s, 0, 0, 0], atol=1e-15)
        assert r.energy() == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n,levels", [(12, None), (8, 4), (8, 0)])
    def test_bad_shape(self, n, levels):
        with pytest.raises(ConfigurationError):
            wv.dwt_forward(np.ones(n), wv.get_filter("haar"), levels)

    def test_filter_mismatch(self):
        r = wv.dwt_forward(np.ones(16), wv.get_filter("haar"))
        with pytest.raises(ValidationError):
            wv.dwt_inverse(r, wv.get_filter("db2"))

    def test_zeroed_details_of_constant(self):
        f = wv.get_filter("db2")
        r = wv.dwt_forward(np.full(64, -2.0), f)
        r.details = [np.zeros_like(d) for d in r.details]
        np.testing.assert_allclose(wv.dwt_inverse(r, f), -2.0, atol=1e-12)


class TestCompression:
    def test_identity(self, rng):
        r = wv.dwt_forward(rng.standard_normal(64), wv.get_filter("db3"))
        c = wv.compress_threshold(r, 1.0)
        assert c.l2_error_bound == 0.0
        np.testing.assert_array_equal(c.result.flatten(), r.flatten())

    @pytest.mark.parametrize("frac", [0.0, 1.5, -0.1])
    def test_bad_fraction(self, frac):
        r = wv.dwt_forward(np.ones(8), wv.get_filter("haar"))
        with pytest.raises(DomainError):
            wv.compress_threshold(r, frac)

    def test_zero_signal(self):
        c = wv.compress_threshold(wv.dwt_forward(np.zeros(32), wv.get_filter("haar")), 0.5)
        assert c.retained == 0 and c.l2_error_bound == 0.0

    @pytest.mark.parametrize("name", NAMES)
    @pytest.mark.parametrize("frac", [0.05, 0.3, 0.9])
    def test_bound_is_exact(self, name, frac, rng):
        f = wv.get_filter(name)
        x = rng.standard_normal(256)
        c = wv.compress_threshold(wv.dwt_forward(x, f), frac)
        err = np.linalg.norm(wv.dwt_inverse(c.result, f) - x)
        assert abs(err - c.l2_error_bound) < 1e-10

    def test_smooth_pulse_at_half(self):
        f = wv.get_filter("coif1")
        _, x = sech2_pulse()
        c = wv.compress_threshold(wv.dwt_forward(x, f), 0.5)
        rel = np.linalg.norm(wv.dwt_inverse(c.result, f) - x) / np.linalg.norm(x)
        assert rel < 1e-3

    def test_pulse_vs_noise_sparsity(self, rng):
        f = wv.get_filter("coif1")
        _, x = sech2_pulse()
        noise = rng.standard_normal(x.size)

        def rel_err(y):
            c = wv.compress_threshold(wv.dwt_forward(y, f), 0.1)
            return np.linalg.norm(wv.dwt_inverse(c.result, f) - y) / np.linalg.norm(y)

        assert 10 * rel_err(x) < rel_err(noise)


class TestSpectrogram:
    def test_sinusoid(self):
        n = np.arange(1024)
        s = wv.wft_spectrogram(np.sin(2 * np.pi * 8 * n / 64), 64, 16)
        peak = np.argmax(s.magnitude, axis=0)
        assert np.all(peak == 8)
        np.testing.assert_allclose(s.magnitude[8], s.magnitude[8, 0], rtol=1e-10)

    def test_step_edge(self):
        x = np.zeros(1024)
        x[500:] = 1.0
        s = wv.wft_spectrogram(x, 64, 16)
        high = s.magnitude[10:].sum(axis=0)
        edge_frame = np.argmax(high)
        assert abs(s.times[edge_frame] - 500) <= 16
        assert high[0] == pytest.approx(0.0, abs=1e-12) and high[-1] < 1e-10

    def test_zero(self):
        assert np.all(wv.wft_spectrogram(np.zeros(128), 32, 8).magnitude == 0)

    def test_window_too_wide(self):
        with pytest.raises(ConfigurationError):
            wv.wft_spectrogram(np.zeros(16), 32, 8)


def test_csv_outputs(tmp_path):
    f = wv.get_filter("haar")
    r = wv.dwt_forward(np.arange(8.0), f, 2)
    wv.write_coefficients_csv(r, tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "level,index,value" and len(lines) == 1 + 8
    wv.write_spectrogram_csv(wv.wft_spectrogram(np.arange(64.0), 16, 8), tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text().startswith("time,0.0,0.0625,")
