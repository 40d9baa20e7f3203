"""scikit-learn compatible wrappers for the fit/transform-shaped parts of the toolkit.

Rows of ``X`` are independent signals (or, for the regressor, sample times).
"""
import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import is_power_of_two
from .squeeze import fit_sech2_envelope, sech2_model
from .wavelets import (compress_threshold, dwt_forward, dwt_inverse, get_filter,
                       max_levels, wft_spectrogram)


def _check_signals(X):
    X = check_array(X, dtype=np.float64, ensure_min_features=2)
    if not is_power_of_two(X.shape[1]):
        raise ValueError(f"signal length must be a power of two, got {X.shape[1]}")
    return X


class Sech2EnvelopeRegressor(RegressorMixin, BaseEstimator):
    """Fit ``A sech^2((t - t0) / w) + d`` to a single series ``(t, y)``."""

    def __init__(self, max_nfev=2000):
        self.max_nfev = max_nfev

    def fit(self, X, y):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 1:
            raise ValueError("X must have exactly one column (the sample times)")
        y = np.asarray(y, dtype=np.float64).ravel()
        self.n_features_in_ = 1
        self.fit_ = fit_sech2_envelope(X[:, 0], y, max_nfev=self.max_nfev)
        self.amplitude_ = self.fit_.amplitude
        self.width_ = self.fit_.width
        self.center_ = self.fit_.center
        self.offset_ = self.fit_.offset
        self.rms_residual_ = self.fit_.rms_residual
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        X = check_array(X, dtype=np.float64)
        return sech2_model(X[:, 0], self.amplitude_, self.width_, self.center_, self.offset_)


class WaveletTransformer(TransformerMixin, BaseEstimator):
    """Periodic orthonormal DWT of each row, flattened coarse-to-fine."""

    def __init__(self, wavelet="coif1", levels=None):
        self.wavelet = wavelet
        self.levels = levels

    def fit(self, X, y=None):
        X = _check_signals(X)
        self.filter_ = get_filter(self.wavelet)
        self.n_features_in_ = X.shape[1]
        self.levels_ = max_levels(X.shape[1]) if self.levels is None else int(self.levels)
        # surfaces a bad level count at fit time
        self._template_ = dwt_forward(X[0], self.filter_, self.levels_)
        return self

    def _check(self, X):
        check_is_fitted(self, "filter_")
        X = _check_signals(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X

    def transform(self, X):
        X = self._check(X)
        return np.vstack([dwt_forward(row, self.filter_, self.levels_).flatten() for row in X])

    def inverse_transform(self, X):
        X = self._check(X)
        return np.vstack([dwt_inverse(self._template_.with_flat(row), self.filter_) for row in X])


class WaveletCompressor(WaveletTransformer):
    """Hard-threshold each row in the wavelet domain and reconstruct it."""

    def __init__(self, wavelet="coif1", levels=None, keep_fraction=0.1):
        super().__init__(wavelet=wavelet, levels=levels)
        self.keep_fraction = keep_fraction

    def _compress(self, X):
        X = self._check(X)
        return [compress_threshold(dwt_forward(row, self.filter_, self.levels_), self.keep_fraction)
                for row in X]

    def transform(self, X):
        return np.vstack([dwt_inverse(c.result, self.filter_) for c in self._compress(X)])

    def error_bounds(self, X):
        """l2 reconstruction error of each row (exact for orthonormal filters)."""
        return np.array([c.l2_error_bound for c in self._compress(X)])

    def inverse_transform(self, X):
        raise NotImplementedError("thresholding is not invertible")


class SpectrogramTransformer(TransformerMixin, BaseEstimator):
    """Hann-window WFT magnitudes of each row, flattened frequency-major."""

    def __init__(self, window_width=64, hop=16):
        self.window_width = window_width
        self.hop = hop

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        self.n_features_in_ = X.shape[1]
        spec = wft_spectrogram(X[0], self.window_width, self.hop)
        self.frequencies_ = spec.frequencies
        self.frame_times_ = spec.times
        return self

    def transform(self, X):
        check_is_fitted(self, "frequencies_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return np.vstack([wft_spectrogram(row, self.window_width, self.hop).magnitude.ravel()
                          for row in X])
