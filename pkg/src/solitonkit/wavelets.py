"""Orthonormal wavelet filter bank on periodic signals.

Two normalizations coexist and are kept explicit:

* scaling coefficients ``c_k`` satisfy the dilation convention ``sum c_k = 2``
  and ``sum_k c_k c_{k+2m} = 2 delta_m``;
* the filter bank uses ``h_k = c_k / sqrt(2)`` so each level is orthonormal.

The wavelet is built from the scaling coefficients as
``W(x) = sum_{k=-1}^{N-2} (-1)^k c_{k+1} Phi(2x + k)``.  Re-indexed by the shift
``m = -k`` this is ``W(x) = sum_m d_m Phi(2x - m)`` with ``d_m = (-1)^m c_{1-m}``,
``m = 2-N .. 1``; for Haar that is ``Phi(2x) - Phi(2x - 1)``.  The bank's
high-pass filter ``g_j = (-1)^j h_{N-1-j}`` is the same sequence shifted so it
starts at index 0.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ._validation import is_power_of_two
from .exceptions import ConfigurationError, DomainError, ValidationError
from .field import format_float

SUM_TOLERANCE = 1e-12
ORTHO_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class WaveletFilter:
    name: str
    c: np.ndarray
    vanishing_moments: int = 1

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def N(self) -> int:
        return int(self.c.size)

    @property
    def lowpass(self) -> np.ndarray:
        return self.c / np.sqrt(2.0)

    @property
    def highpass(self) -> np.ndarray:
        h = self.lowpass
        j = np.arange(h.size)
        return (-1.0) ** j * h[::-1]

    def validate(self) -> "WaveletFilter":
        """Raise :class:`ValidationError` naming the first violated condition."""
        c = self.c
        if c.size < 2 or c.size % 2:
            raise ValidationError(f"{self.name}: tap count must be even and >= 2, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValidationError(f"{self.name}: coefficients must be finite")
        s = float(np.sum(c))
        if abs(s - 2.0) > SUM_TOLERANCE:
            raise ValidationError(f"{self.name}: dilation normalization sum(c) = {s!r}, expected 2")
        for m in range(0, c.size // 2):
            acc = float(np.dot(c[: c.size - 2 * m], c[2 * m:]))
            want = 2.0 if m == 0 else 0.0
            if abs(acc - want) > ORTHO_TOLERANCE:
                raise ValidationError(
                    f"{self.name}: orthonormality sum c_k c_(k+{2 * m}) = {acc!r}, expected {want}")
        return self


def _from_lowpass(name, h, moments):
    return WaveletFilter(name, np.sqrt(2.0) * np.asarray(h, dtype=float), moments)


def _builtin_filters() -> Dict[str, WaveletFilter]:
    r3 = np.sqrt(3.0)
    r7 = np.sqrt(7.0)
    r10 = np.sqrt(10.0)
    q = np.sqrt(5.0 + 2.0 * r10)
    s2 = np.sqrt(2.0)
    filters = [
        WaveletFilter("haar", [1.0, 1.0], 1),
        _from_lowpass("db2", np.array([1 + r3, 3 + r3, 3 - r3, 1 - r3]) / (4 * s2), 2),
        _from_lowpass("db3", np.array([1 + r10 + q, 5 + r10 + 3 * q, 10 - 2 * r10 + 2 * q,
                                       10 - 2 * r10 - 2 * q, 5 + r10 - 3 * q, 1 + r10 - q])
                      / (16 * s2), 3),
        # coiflet family, 6 taps: sech-like scaling function
        _from_lowpass("coif1", np.array([-3 + r7, 1 - r7, 14 - 2 * r7, 14 + 2 * r7,
                                         5 + r7, 1 - r7]) / (16 * s2), 2),
    ]
    # shipped tables are checked, not trusted
    return {f.name: f.validate() for f in filters}


FILTERS: Dict[str, WaveletFilter] = _builtin_filters()


def get_filter(name: str) -> WaveletFilter:
    try:
        return FILTERS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown wavelet {name!r}; available: {', '.join(sorted(FILTERS))}") from None


@dataclass(frozen=True, eq=False)
class WaveletTaps:
    """Wavelet refinement taps: ``W(x) = sum_i coeffs[i] * Phi(2x - shifts[i])``."""

    shifts: np.ndarray
    coeffs: np.ndarray


def wavelet_from_scaling(f: WaveletFilter) -> WaveletTaps:
    f.validate()
    N = f.N
    shifts = np.arange(2 - N, 2)
    coeffs = np.array([(-1.0) ** (m % 2) * f.c[1 - m] for m in shifts])
    return WaveletTaps(shifts, coeffs)


@dataclass
class DwtResult:
    """Pyramid coefficients; ``details[0]`` is the finest level."""

    levels: int
    approx: np.ndarray
    details: List[np.ndarray]
    original_length: int
    filter_name: str

    @property
    def n_coefficients(self) -> int:
        return int(self.approx.size + sum(d.size for d in self.details))

    def flatten(self) -> np.ndarray:
        """Coarse-to-fine layout ``[approx, details[-1], ..., details[0]]``."""
        return np.concatenate([self.approx] + self.details[::-1])

    def with_flat(self, flat: np.ndarray) -> "DwtResult":
        flat = np.asarray(flat, dtype=float)
        sizes = [self.approx.size] + [d.size for d in self.details[::-1]]
        parts = np.split(flat, np.cumsum(sizes)[:-1])
        return DwtResult(self.levels, parts[0], parts[1:][::-1], self.original_length, self.filter_name)

    def energy(self) -> float:
        return float(np.sum(self.flatten() ** 2))


def max_levels(n: int) -> int:
    return int(np.log2(n)) if is_power_of_two(n) else 0


def _analysis(x, h, g):
    n = x.size
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(h.size)[None, :]) % n
    seg = x[idx]
    return seg @ h, seg @ g


def _synthesis(a, d, h, g):
    n = 2 * a.size
    out = np.zeros(n)
    base = 2 * np.arange(a.size)
    for j in range(h.size):
        np.add.at(out, (base + j) % n, h[j] * a + g[j] * d)
    return out


def dwt_forward(signal, f: WaveletFilter, levels: Optional[int] = None) -> DwtResult:
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ConfigurationError("signal must be one-dimensional")
    n = x.size
    if not is_power_of_two(n) or n < 2:
        raise ConfigurationError(f"signal length must be a power of two >= 2, got {n}")
    top = max_levels(n)
    if levels is None:
        levels = top
    if not 1 <= levels <= top:
        raise ConfigurationError(f"levels must be in 1..{top} for length {n}, got {levels}")
    h, g = f.lowpass, f.highpass
    details = []
    a = x
    for _ in range(levels):
        a, d = _analysis(a, h, g)
        details.append(d)
    return DwtResult(levels, a, details, n, f.name)


def dwt_inverse(r: DwtResult, f: WaveletFilter) -> np.ndarray:
    if r.filter_name != f.name:
        raise ValidationError(
            f"coefficients were produced with {r.filter_name!r}, not {f.name!r}")
    h, g = f.lowpass, f.highpass
    a = r.approx
    for d in r.details[::-1]:
        a = _synthesis(a, d, h, g)
    return a


@dataclass
class CompressionResult:
    result: DwtResult
    l2_error_bound: float
    retained: int


def compress_threshold(r: DwtResult, keep_fraction: float) -> CompressionResult:
    """Hard threshold keeping the largest ``keep_fraction`` of coefficients by magnitude.

    The error bound is the l2 norm of the discarded coefficients, which equals
    the reconstruction error for an orthonormal bank.
    """
    if not (0 < keep_fraction <= 1):
        raise DomainError(f"keep_fraction must be in (0, 1], got {keep_fraction!r}")
    flat = r.flatten()
    total = flat.size
    n_keep = int(np.ceil(keep_fraction * total - 1e-9))
    order = np.argsort(-np.abs(flat), kind="stable")
    keep = np.zeros(total, dtype=bool)
    keep[order[:n_keep]] = True
    keep &= flat != 0
    kept = np.where(keep, flat, 0.0)
    bound = float(np.sqrt(np.sum(flat[~keep] ** 2)))
    return CompressionResult(r.with_flat(kept), bound, int(keep.sum()))


def hann_window(width: int) -> np.ndarray:
    """Periodic Hann window."""
    n = np.arange(width)
    return 0.5 - 0.5 * np.cos(2 * np.pi * n / width)


@dataclass
class Spectrogram:
    frequencies: np.ndarray   # cycles per sample (scaled by 1/dt when given)
    times: np.ndarray         # frame centers
    magnitude: np.ndarray     # (n_frequencies, n_frames)


def wft_spectrogram(signal, window_width: int, hop: int, dt: float = 1.0) -> Spectrogram:
    """Windowed Fourier transform magnitudes on a Hann window."""
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ConfigurationError("signal must be one-dimensional")
    if window_width < 2 or window_width > x.size:
        raise ConfigurationError(
            f"window width {window_width} must be between 2 and the signal length {x.size}")
    if hop < 1:
        raise ConfigurationError("hop must be >= 1")
    starts = np.arange(0, x.size - window_width + 1, hop)
    frames = x[starts[:, None] + np.arange(window_width)[None, :]] * hann_window(window_width)
    mag = np.abs(np.fft.rfft(frames, axis=1)).T
    freqs = np.fft.rfftfreq(window_width, d=dt)
    times = (starts + 0.5 * window_width) * dt
    return Spectrogram(freqs, times, mag)


def write_coefficients_csv(r: DwtResult, path) -> None:
    """``level,index,value`` rows; level 0 is the coarsest approximation."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["level", "index", "value"])
        for i, v in enumerate(r.approx):
            w.writerow([0, i, format_float(v)])
        for lev, d in enumerate(r.details, start=1):
            for i, v in enumerate(d):
                w.writerow([lev, i, format_float(v)])


def write_spectrogram_csv(s: Spectrogram, path) -> None:
    """One row per frame; header lists the frequency-bin centers."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time"] + [format_float(f) for f in s.frequencies])
        for j, t in enumerate(s.times):
            w.writerow([format_float(t)] + [format_float(v) for v in s.magnitude[:, j]])
