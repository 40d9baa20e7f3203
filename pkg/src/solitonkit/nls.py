"""Split-step propagation of the NLS equation and its multi-channel WDM extension.

Equation (per channel, carrier offset ``Omega_j``)::

    i q_z + (beta2 / 2) q_TT + nu (|q_j|^2 + alpha * sum_k gamma_jk |q_k|^2) q_j = 0

Sign convention: ``beta2 < 0`` is the *defocusing* regime (with ``nu > 0``),
so bright solitons need ``beta2 > 0``.  This is the opposite of the usual
fibre-optics convention.  Four-wave-mixing terms are neglected and each
channel is carried as its own baseband envelope; the carrier offset enters
through the linear propagator ``exp(-i beta2 (kappa + Omega)^2 dz / 2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._validation import check_nonnegative, check_positive
from .exceptions import ConfigurationError, DomainError, NumericalInstabilityError
from .field import ComplexEnvelope, Grid1D, channel_energy, integrate_quantity

#: Largest allowed nonlinear phase rotation ``nu * max|q|^2 * dz`` per step.
MAX_NONLINEAR_PHASE = 0.1

NRZ_GUARD_RISES = 10.0


@dataclass(frozen=True)
class NlsParams:
    """Propagation parameters.

    ``beta2_schedule`` optionally replaces the constant ``beta2`` with a
    periodically repeated piecewise-constant map given as ``(length, beta2)``
    segments (dispersion management).
    """

    beta2: float
    nu: float
    dz: float
    z_end: float
    n_snapshots: int = 10
    beta2_schedule: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        check_positive(self.dz, "dz")
        if not np.isfinite(self.z_end) or self.z_end < 0:
            raise ConfigurationError(f"z_end must be >= 0, got {self.z_end!r}")
        if self.n_snapshots < 1:
            raise ConfigurationError("n_snapshots must be >= 1")
        if self.beta2_schedule is not None:
            sched = tuple((float(a), float(b)) for a, b in self.beta2_schedule)
            if not sched or any(length <= 0 for length, _ in sched):
                raise ConfigurationError("beta2_schedule segments need positive lengths")
            object.__setattr__(self, "beta2_schedule", sched)

    @property
    def n_steps(self) -> int:
        return int(round(self.z_end / self.dz))

    def beta2_at(self, z: float) -> float:
        if self.beta2_schedule is None:
            return self.beta2
        period = sum(length for length, _ in self.beta2_schedule)
        zz = z % period
        for length, b2 in self.beta2_schedule:
            if zz < length:
                return b2
            zz -= length
        return self.beta2_schedule[-1][1]


@dataclass(frozen=True)
class GuidingFilter:
    """Gaussian spectral filter ``gain * exp(-(omega - center_freq)^2 / (2 bandwidth^2))``
    applied every ``span`` in z."""

    center_freq: float
    bandwidth: float
    gain: float = 1.0
    span: float = 1.0

    def __post_init__(self):
        check_positive(self.bandwidth, "bandwidth")
        check_positive(self.span, "span")
        if not np.isfinite(self.gain) or self.gain < 1.0:
            raise ConfigurationError(f"gain must be >= 1, got {self.gain!r}")

    def transfer(self, omega: np.ndarray) -> np.ndarray:
        return self.gain * np.exp(-0.5 * ((omega - self.center_freq) / self.bandwidth) ** 2)


@dataclass(frozen=True)
class WdmConfig:
    channels: Tuple[ComplexEnvelope, ...]
    xpm_matrix: Optional[np.ndarray] = None
    alpha: float = 1.0

    def __post_init__(self):
        chans = tuple(self.channels)
        if not chans:
            raise ConfigurationError("WDM configuration needs at least one channel")
        grid = chans[0].grid
        if any(c.grid != grid for c in chans):
            raise ConfigurationError("all channels must share one grid")
        offsets = [c.carrier_offset for c in chans]
        if len(set(offsets)) != len(offsets):
            raise ConfigurationError("channel carrier offsets must be distinct")
        m = len(chans)
        gam = np.ones((m, m)) if self.xpm_matrix is None else np.array(self.xpm_matrix, dtype=float)
        if gam.shape != (m, m):
            raise ConfigurationError(f"xpm_matrix must be {m}x{m}")
        if not np.allclose(gam, gam.T, rtol=0, atol=1e-14):
            raise ConfigurationError("xpm_matrix must be symmetric")
        if not np.allclose(np.diag(gam), 1.0, rtol=0, atol=1e-14):
            raise ConfigurationError("xpm_matrix must have unit diagonal")
        if np.any(gam < 0):
            raise ConfigurationError("xpm_matrix entries must be non-negative")
        gam.setflags(write=False)
        object.__setattr__(self, "channels", chans)
        object.__setattr__(self, "xpm_matrix", gam)
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass
class NlsTrajectory:
    z: np.ndarray
    snapshots: List[ComplexEnvelope]
    power: np.ndarray

    @property
    def final(self) -> ComplexEnvelope:
        return self.snapshots[-1]

    @property
    def power_drift(self) -> float:
        return float(np.max(np.abs(self.power - self.power[0])) / self.power[0]) if self.power[0] else 0.0


@dataclass
class WdmResult:
    z: np.ndarray
    channels: List[NlsTrajectory]
    energy: np.ndarray          # (n_channels, n_snapshots)
    center: np.ndarray
    mean_freq: np.ndarray
    peak_amp: np.ndarray
    center_shift: Optional[np.ndarray] = None  # vs. isolated propagation, final z
    isolated: Optional[List[NlsTrajectory]] = field(default=None, repr=False)

    def summary_rows(self):
        rows = []
        for s, z in enumerate(self.z):
            for j in range(len(self.channels)):
                rows.append((float(z), j, float(self.energy[j, s]), float(self.center[j, s]),
                             float(self.mean_freq[j, s]), float(self.peak_amp[j, s])))
        return rows


def _check_filter_span(filt: GuidingFilter, dz: float) -> int:
    ratio = filt.span / dz
    every = int(round(ratio))
    if every < 1 or abs(ratio - every) > 1e-9 * max(1.0, ratio):
        raise ConfigurationError(
            f"filter span {filt.span:g} is not a multiple of dz={dz:g}")
    return every


# overflow surfaces as NumericalInstabilityError, not warnings
@np.errstate(over="ignore", invalid="ignore")
def _split_step(fields: List[np.ndarray], grid: Grid1D, offsets: Sequence[float],
                p: NlsParams, coupling: np.ndarray,
                filt: Optional[GuidingFilter] = None):
    """Symmetric split-step marching shared by the single- and multi-channel paths."""
    n_steps = p.n_steps
    dz = p.dz
    k = grid.k
    omegas = [k + om for om in offsets]
    m = len(fields)
    filter_every = _check_filter_span(filt, dz) if filt is not None else None
    transfers = [filt.transfer(w) for w in omegas] if filt is not None else None

    peak = max(float(np.max(np.abs(q)) ** 2) for q in fields) if fields else 0.0
    row_sums = coupling.sum(axis=1).max() if m else 1.0
    if abs(p.nu) * peak * row_sums * dz > MAX_NONLINEAR_PHASE:
        raise ConfigurationError(
            f"dz={dz:g} too large: nonlinear phase per step exceeds {MAX_NONLINEAR_PHASE}")

    def half_linear(b2):
        return [np.exp(-0.25j * b2 * w ** 2 * dz) for w in omegas]

    cache = {}
    out_steps = np.unique(np.round(np.linspace(0, n_steps, p.n_snapshots + 1)).astype(int))
    snaps = [[q.copy() for q in fields]]
    zs = [0.0]
    spectra = [np.fft.fft(q) for q in fields]
    next_out = 1
    qs = list(fields)
    for step in range(1, n_steps + 1):
        b2 = p.beta2_at((step - 0.5) * dz)
        if b2 not in cache:
            cache[b2] = half_linear(b2)
        H = cache[b2]
        qs = [np.fft.ifft(H[j] * spectra[j]) for j in range(m)]
        if p.nu != 0.0:
            intens = [np.abs(q) ** 2 for q in qs]
            rot = []
            for j in range(m):
                total = intens[j]
                for kk in range(m):
                    if kk != j and coupling[j, kk] != 0.0:
                        total = total + coupling[j, kk] * intens[kk]
                rot.append(total)
            qs = [qs[j] * np.exp(1j * p.nu * dz * rot[j]) for j in range(m)]
        spectra = [H[j] * np.fft.fft(qs[j]) for j in range(m)]
        if filter_every is not None and step % filter_every == 0:
            spectra = [transfers[j] * spectra[j] for j in range(m)]
        if step == out_steps[next_out] or step % 256 == 0:
            if not all(np.all(np.isfinite(s)) for s in spectra):
                raise NumericalInstabilityError(
                    f"split-step run became non-finite at step {step} (z={step * dz:g})", step=step)
        if step == out_steps[next_out]:
            zs.append(step * dz)
            snaps.append([np.fft.ifft(s) for s in spectra])
            next_out += 1
    return np.array(zs), snaps


def _trajectory(zs, snaps, j, grid, offset) -> NlsTrajectory:
    envs = [ComplexEnvelope(grid, s[j], offset) for s in snaps]
    power = np.array([integrate_quantity(e, "power") for e in envs])
    return NlsTrajectory(zs, envs, power)


def nls_propagate(q0: ComplexEnvelope, p: NlsParams,
                  filter: Optional[GuidingFilter] = None) -> NlsTrajectory:
    zs, snaps = _split_step([np.array(q0.samples)], q0.grid, [q0.carrier_offset], p,
                            np.ones((1, 1)), filter)
    return _trajectory(zs, snaps, 0, q0.grid, q0.carrier_offset)


def wdm_propagate(cfg: WdmConfig, p: NlsParams, filter: Optional[GuidingFilter] = None,
                  reference_runs: bool = False) -> WdmResult:
    """Coupled split-step propagation of all channels.

    With ``reference_runs`` every channel is also propagated in isolation and
    ``center_shift`` holds the final-z center offset caused by the collisions.
    """
    grid = cfg.channels[0].grid
    offsets = [c.carrier_offset for c in cfg.channels]
    coupling = cfg.alpha * np.array(cfg.xpm_matrix)
    np.fill_diagonal(coupling, 1.0)
    zs, snaps = _split_step([np.array(c.samples) for c in cfg.channels], grid, offsets, p,
                            coupling, filter)
    trajs = [_trajectory(zs, snaps, j, grid, offsets[j]) for j in range(len(offsets))]
    result = _metrics(zs, trajs)
    if reference_runs:
        iso = [nls_propagate(c, p, filter) for c in cfg.channels]
        iso_center = np.array([[pulse_center(e) for e in t.snapshots] for t in iso])
        iso_center = _unwrap_centers(iso_center, grid)
        result.center_shift = result.center[:, -1] - iso_center[:, -1]
        result.isolated = iso
    return result


def _metrics(zs, trajs: List[NlsTrajectory]) -> WdmResult:
    grid = trajs[0].snapshots[0].grid
    energy = np.array([[channel_energy(e) for e in t.snapshots] for t in trajs])
    center = np.array([[pulse_center(e) for e in t.snapshots] for t in trajs])
    center = _unwrap_centers(center, grid)
    mean_freq = np.array([[mean_frequency(e) for e in t.snapshots] for t in trajs])
    peak = np.array([[float(np.max(np.abs(e.samples))) for e in t.snapshots] for t in trajs])
    return WdmResult(zs, trajs, energy, center, mean_freq, peak)


def _unwrap_centers(center, grid):
    L = grid.length
    phase = 2 * np.pi * (center - grid.x0) / L
    return grid.x0 + np.unwrap(phase, axis=-1) * L / (2 * np.pi)


def pulse_center(q: ComplexEnvelope) -> float:
    """Intensity-weighted circular mean position on the periodic grid."""
    g = q.grid
    w = np.abs(q.samples) ** 2
    total = w.sum()
    if total == 0:
        return float("nan")
    phase = 2 * np.pi * (g.x - g.x0) / g.length
    ang = np.angle(np.sum(w * np.exp(1j * phase)))
    return float(g.wrap(g.x0 + ang * g.length / (2 * np.pi)))


def mean_frequency(q: ComplexEnvelope) -> float:
    """Spectral centroid in absolute angular frequency (carrier offset included)."""
    spec = np.abs(np.fft.fft(q.samples)) ** 2
    total = spec.sum()
    if total == 0:
        return float(q.carrier_offset)
    return float(q.carrier_offset + np.sum(q.grid.k * spec) / total)


def rms_width(q: ComplexEnvelope) -> float:
    """Root-mean-square width of ``|q|^2`` about its center."""
    g = q.grid
    w = np.abs(q.samples) ** 2
    d = g.displacement(g.x, pulse_center(q))
    return float(np.sqrt(np.sum(w * d ** 2) / np.sum(w)))


def gaussian_rms_width(t0: float, beta2: float, z: float) -> float:
    """Linear-dispersion rms width of ``|q|^2`` for input ``exp(-T^2 / (2 t0^2))``."""
    return t0 / np.sqrt(2.0) * np.sqrt(1.0 + (beta2 * z / t0 ** 2) ** 2)


def sech_envelope(grid: Grid1D, amplitude: float = 1.0, center: float = 0.0,
                  carrier_offset: float = 0.0) -> ComplexEnvelope:
    xi = grid.displacement(grid.x, center)
    return ComplexEnvelope(grid, amplitude / np.cosh(amplitude * xi), carrier_offset)


def nrz_runs(bits: str) -> List[Tuple[int, int]]:
    """``(start_index, length)`` of every run of ones in ``bits``."""
    runs, start = [], None
    for i, b in enumerate(bits + "0"):
        if b == "1" and start is None:
            start = i
        elif b != "1" and start is not None:
            runs.append((start, i - start))
            start = None
    return runs


def encode_nrz(bits: str, rho0: float, bit_width: float, rise: float, grid: Grid1D,
               center: Optional[float] = None, chirp_amplitude: float = 0.0,
               beta: Optional[float] = None, carrier_offset: float = 0.0) -> ComplexEnvelope:
    """Non-return-to-zero envelope with tanh edges.

    Each run of ones becomes a plateau of height ``rho0`` whose edges are
    ``tanh`` ramps of scale ``rise``.  A nonzero ``chirp_amplitude`` adds the
    bit-synchronous phase modulation whose chirp ``beta * d(arg q)/dT`` equals
    ``chirp_amplitude * sin(2 pi (T - start) / bit_width)``.
    """
    if not bits or set(bits) - {"0", "1"}:
        raise ConfigurationError(f"bits must be a nonempty 0/1 string, got {bits!r}")
    check_positive(bit_width, "bit_width")
    check_positive(rise, "rise")
    if center is None:
        center = grid.x0 + 0.5 * grid.length
    start = center - 0.5 * len(bits) * bit_width
    stop = start + len(bits) * bit_width
    guard = NRZ_GUARD_RISES * rise
    if start - guard < grid.x0 or stop + guard > grid.x0 + grid.length:
        raise ConfigurationError("NRZ signal with guard bands exceeds the grid domain")
    T = grid.x
    env = np.zeros_like(T)
    for i0, length in nrz_runs(bits):
        a = start + i0 * bit_width
        b = a + length * bit_width
        env += 0.5 * (np.tanh((T - a) / rise) - np.tanh((T - b) / rise))
    q = rho0 * env.astype(complex)
    if chirp_amplitude:
        if beta is None or beta <= 0:
            raise ConfigurationError("chirp modulation needs beta > 0")
        sigma = -chirp_amplitude * bit_width / (2 * np.pi) * np.cos(2 * np.pi * (T - start) / bit_width)
        q = q * np.exp(1j * sigma / beta)
    return ComplexEnvelope(grid, q, carrier_offset)


def chirp(q: ComplexEnvelope, beta: float) -> np.ndarray:
    """Chirp ``beta * d arg(q) / dT`` from the unwrapped phase.

    Unreliable near zeros of ``q`` where the phase is undefined.
    """
    phase = np.unwrap(np.angle(q.samples))
    return beta * np.gradient(phase, q.grid.dx)


def min_frequency_separation(alpha: float, rho0: float) -> float:
    """Smallest ``|u0|`` for stable two-channel NRZ propagation, ``sqrt((1 + alpha) rho0)``."""
    check_nonnegative(alpha, "alpha", DomainError)
    check_nonnegative(rho0, "rho0", DomainError)
    return float(np.sqrt((1.0 + alpha) * rho0))


@dataclass
class SteepeningResult:
    z: np.ndarray
    max_gradient: np.ndarray
    growth: np.ndarray
    z_at_max: float

    def growth_before(self, z_star: float) -> float:
        mask = self.z <= z_star + 1e-12
        return float(np.max(self.growth[mask]))


def amplitude_gradient(q: ComplexEnvelope) -> np.ndarray:
    """``d|q|/dT = Re(conj(q) q_T) / |q|`` with a spectral ``q_T`` (0 where ``q = 0``)."""
    s = q.samples
    qt = np.fft.ifft(1j * q.grid.k * np.fft.fft(s))
    mag = np.abs(s)
    out = np.zeros(mag.shape)
    nz = mag > 1e-300
    out[nz] = np.real(np.conj(s[nz]) * qt[nz]) / mag[nz]
    return out


def steepening_metric(traj: NlsTrajectory) -> SteepeningResult:
    grads = np.array([np.max(np.abs(amplitude_gradient(e))) for e in traj.snapshots])
    base = grads[0]
    growth = grads / base if base > 0 else np.zeros_like(grads)
    return SteepeningResult(np.asarray(traj.z), grads, growth, float(traj.z[int(np.argmax(grads))]))
