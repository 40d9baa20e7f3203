"""Periodic grids, sampled fields and the spectral/integral primitives on them.

Every solver in the package works on a uniform periodic lattice with a
power-of-two sample count, so derivatives are taken in Fourier space and
integrals use the rectangle rule (spectrally accurate for smooth periodic data).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._validation import check_finite_array, check_positive, check_power_of_two, frozen
from .exceptions import ConfigurationError

MIN_GRID_POINTS = 8


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid covering ``[x0, x0 + n*dx)``."""

    n: int
    dx: float
    x0: float = 0.0
    periodic: bool = True

    def __post_init__(self):
        check_power_of_two(self.n, "n", MIN_GRID_POINTS)
        check_positive(self.dx, "dx")
        if not self.periodic:
            raise ConfigurationError("only periodic grids are supported")

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in numpy FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @property
    def k_real(self) -> np.ndarray:
        """Angular wavenumbers matching ``np.fft.rfft`` output."""
        return 2.0 * np.pi * np.fft.rfftfreq(self.n, d=self.dx)

    def wrap(self, x):
        """Map coordinates into ``[x0, x0 + length)``."""
        return self.x0 + np.mod(np.asarray(x) - self.x0, self.length)

    def displacement(self, a, b):
        """Signed periodic distance ``a - b`` folded into ``[-L/2, L/2)``."""
        L = self.length
        return np.mod(np.asarray(a) - b + 0.5 * L, L) - 0.5 * L


def make_grid(n: int, length: float, x0: float = 0.0) -> Grid1D:
    """Build a periodic grid of ``n`` points spanning ``length`` starting at ``x0``."""
    check_power_of_two(n, "n", MIN_GRID_POINTS)
    length = check_positive(length, "length")
    return Grid1D(n=int(n), dx=length / n, x0=float(x0))


@dataclass(frozen=True, eq=False)
class RealField:
    grid: Grid1D
    samples: np.ndarray

    def __post_init__(self):
        s = check_finite_array(self.samples, "samples", float)
        if s.size != self.grid.n:
            raise ConfigurationError(
                f"expected {self.grid.n} samples, got {s.size}")
        object.__setattr__(self, "samples", frozen(s))

    def with_samples(self, samples) -> "RealField":
        return RealField(self.grid, samples)


@dataclass(frozen=True, eq=False)
class ComplexEnvelope:
    """Complex envelope sampled on a grid.

    ``carrier_offset`` is the angular frequency of the channel carrier; the
    samples are the envelope relative to that carrier.
    """

    grid: Grid1D
    samples: np.ndarray
    carrier_offset: float = 0.0

    def __post_init__(self):
        s = check_finite_array(self.samples, "samples", complex)
        if s.size != self.grid.n:
            raise ConfigurationError(
                f"expected {self.grid.n} samples, got {s.size}")
        if not np.isfinite(self.carrier_offset):
            raise ConfigurationError("carrier_offset must be finite")
        object.__setattr__(self, "samples", frozen(s))
        object.__setattr__(self, "carrier_offset", float(self.carrier_offset))

    def with_samples(self, samples) -> "ComplexEnvelope":
        return ComplexEnvelope(self.grid, samples, self.carrier_offset)


Field = Union[RealField, ComplexEnvelope]


@dataclass(frozen=True)
class PulseSpec:
    """Chirped odd Gaussian ``A*tau*exp(-tau^2/W^2 + i*b*tau^2 + i*phi)``."""

    amplitude: float
    width: float
    chirp: float = 0.0
    phase: float = 0.0
    center: float = 0.0

    def __post_init__(self):
        check_positive(self.width, "width")


def make_pulse(spec: PulseSpec, grid: Grid1D, carrier_offset: float = 0.0) -> ComplexEnvelope:
    tau = grid.x - spec.center
    q = spec.amplitude * tau * np.exp(
        -tau ** 2 / spec.width ** 2 + 1j * spec.chirp * tau ** 2 + 1j * spec.phase)
    return ComplexEnvelope(grid, q, carrier_offset)


def pulse_energy(spec: PulseSpec) -> float:
    """Closed-form channel energy of :func:`make_pulse` output, ``A^2 W^3 / 4``."""
    return spec.amplitude ** 2 * spec.width ** 3 / 4.0


def spectral_derivative(f: Field, order: int = 1) -> Field:
    """Fourier differentiation of ``f``; order must be 1, 2 or 3."""
    if order not in (1, 2, 3):
        raise ConfigurationError(f"derivative order must be 1, 2 or 3, got {order!r}")
    grid = f.grid
    if isinstance(f, RealField):
        k = grid.k_real
        symbol = (1j * k) ** order
        if order % 2 and grid.n % 2 == 0:
            # Nyquist mode has no consistent odd derivative for real data
            symbol[-1] = 0.0
        d = np.fft.irfft(symbol * np.fft.rfft(f.samples), n=grid.n)
        return f.with_samples(d)
    k = grid.k
    symbol = (1j * k) ** order
    if order % 2:
        symbol[grid.n // 2] = 0.0
    return f.with_samples(np.fft.ifft(symbol * np.fft.fft(f.samples)))


def integrate_quantity(f: Field, kind: str) -> float:
    """Rectangle-rule integral of ``u`` (mass), ``u^2`` (momentum) or ``|q|^2`` (power)."""
    s = f.samples
    if kind == "mass":
        integrand = s
    elif kind == "momentum":
        integrand = s * s if np.isrealobj(s) else s ** 2
    elif kind == "power":
        integrand = np.abs(s) ** 2
    else:
        raise ConfigurationError(f"unknown integral kind {kind!r}")
    value = f.grid.dx * np.sum(integrand)
    if np.iscomplexobj(value):
        return complex(value)
    return float(value)


def channel_energy(q: ComplexEnvelope) -> float:
    """Channel energy ``sqrt(2/pi) * integral |q|^2``."""
    return float(np.sqrt(2.0 / np.pi) * integrate_quantity(q, "power"))


def resample(f: Field, n: int) -> Field:
    """Band-limited (Fourier zero-padding) refinement onto ``n >= f.grid.n`` points."""
    check_power_of_two(n, "n", MIN_GRID_POINTS)
    old = f.grid
    if n < old.n:
        raise ConfigurationError("resample only refines grids")
    new_grid = Grid1D(n=n, dx=old.length / n, x0=old.x0)
    m = old.n // 2
    scale = n / old.n
    if isinstance(f, RealField):
        spec = np.fft.rfft(f.samples)
        out = np.zeros(n // 2 + 1, dtype=complex)
        out[:m] = spec[:m]
        out[m] = spec[m] if n == old.n else 0.5 * spec[m]
        return RealField(new_grid, np.fft.irfft(out * scale, n=n))
    spec = np.fft.fft(f.samples)
    if n == old.n:
        return ComplexEnvelope(new_grid, f.samples, f.carrier_offset)
    out = np.zeros(n, dtype=complex)
    out[:m] = spec[:m]
    out[n - m + 1:] = spec[m + 1:]
    out[m] = out[n - m] = 0.5 * spec[m]
    return ComplexEnvelope(new_grid, np.fft.ifft(out) * scale, f.carrier_offset)


def write_field_csv(f: Field, path) -> None:
    """Dump a field as ``index,x,value_re[,value_im]`` rows."""
    is_complex = isinstance(f, ComplexEnvelope)
    header = ["index", "x", "value_re"] + (["value_im"] if is_complex else [])
    x = f.grid.x
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, (xi, v) in enumerate(zip(x, f.samples)):
            row = [str(i), format_float(xi), format_float(np.real(v))]
            if is_complex:
                row.append(format_float(np.imag(v)))
            w.writerow(row)


def read_field_csv(path, carrier_offset: float = 0.0) -> Field:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigurationError(f"{path}: empty field dump")
    x = np.array([float(r["x"]) for r in rows])
    re = np.array([float(r["value_re"]) for r in rows])
    n = len(rows)
    dx = (x[-1] - x[0]) / (n - 1) if n > 1 else 1.0
    grid = Grid1D(n=n, dx=dx, x0=x[0])
    if "value_im" in rows[0]:
        im = np.array([float(r["value_im"]) for r in rows])
        return ComplexEnvelope(grid, re + 1j * im, carrier_offset)
    return RealField(grid, re)


def format_float(v) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(v))
