"""Two-mode squeezing statistics, Raman-laser variance limits and sech^2 fitting.

Vacuum quadrature variance is 1/2; squeezing percentages are ``1 - var / (1/2)``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .exceptions import ConfigurationError, DomainError, FitConvergenceError, ValidationError
from .field import format_float

VACUUM_VARIANCE = 0.5
_ACOSH_SQRT2 = np.arccosh(np.sqrt(2.0))


@dataclass(frozen=True)
class SqueezeParams:
    """Bogoliubov coefficients with ``|U|^2 - |V|^2 = 1``."""

    U: complex
    V: complex
    eta: float = 0.0
    g: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        U, V = complex(self.U), complex(self.V)
        defect = abs(U) ** 2 - abs(V) ** 2 - 1.0
        # relative check: cosh^2 - sinh^2 loses digits for large gain
        if abs(defect) > 1e-12 * max(1.0, abs(U) ** 2):
            raise ValidationError(f"|U|^2 - |V|^2 = {1 + defect!r}, expected 1")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)

    def bogoliubov_matrix(self) -> np.ndarray:
        """Complex matrix mapping ``(b1, b2^dag)`` to ``(c1, c2^dag)``."""
        U, V = self.U, self.V
        return np.array([[U, -V], [-np.conj(V), np.conj(U)]])

    def compose(self, other: "SqueezeParams") -> "SqueezeParams":
        """Apply ``other`` after ``self``."""
        M = other.bogoliubov_matrix() @ self.bogoliubov_matrix()
        return SqueezeParams(M[0, 0], -M[0, 1], self.eta, self.g, self.z + other.z)

    def symplectic(self) -> np.ndarray:
        """Real 4x4 map on ``(x1, x2, p1, p2)`` with ``b = (x + i p) / sqrt(2)``."""
        A = np.diag([self.U, self.U])
        B = np.array([[0, -self.V], [-self.V, 0]])
        top = np.hstack([np.real(A + B), -np.imag(A - B)])
        bottom = np.hstack([np.imag(A + B), np.real(A - B)])
        return np.vstack([top, bottom])


@dataclass(frozen=True)
class RamanCouplings:
    kappa1: float
    kappa2: float

    def __post_init__(self):
        for name in ("kappa1", "kappa2"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be non-negative, got {v!r}")
        if self.kappa1 + self.kappa2 <= 0:
            raise DomainError("kappa1 and kappa2 cannot both vanish")


def squeeze_from_gain(g: float, z: float, eta: float = 0.0) -> SqueezeParams:
    if g < 0 or z < 0:
        raise DomainError("gain rate and distance must be non-negative")
    r = g * z
    return SqueezeParams(np.cosh(r), np.exp(1j * eta) * np.sinh(r), eta, g, z)


def min_quadrature_variance(p: SqueezeParams) -> float:
    """Smallest combination-quadrature variance, ``(|U| - |V|)^2 / 2``."""
    return 0.5 * (abs(p.U) - abs(p.V)) ** 2


def squeezing_percent(variance: float) -> float:
    return 100.0 * (1.0 - variance / VACUUM_VARIANCE)


def variance_hypertransient(k: RamanCouplings) -> float:
    """Minimal variance in the hypertransient limit."""
    return 0.5 * ((k.kappa2 - k.kappa1) / (k.kappa2 + k.kappa1)) ** 2


def variance_steady_state(k: RamanCouplings) -> float:
    """Conventional two-mode squeezing variance in the steady state."""
    return 0.5 * (k.kappa2 / (k.kappa2 + k.kappa1)) ** 2


def dirichlet_null_energy(z: float) -> float:
    """Null-energy density ``-1 / (16 pi^2 z^4)`` at distance ``z`` from a Dirichlet plate."""
    if not np.isfinite(z) or z <= 0:
        raise DomainError(f"distance must be positive, got {z!r}")
    return -1.0 / (16.0 * np.pi ** 2 * z ** 4)


@dataclass(frozen=True)
class Sech2Fit:
    amplitude: float
    width: float
    center: float
    offset: float
    rms_residual: float

    def __call__(self, t):
        return sech2_model(np.asarray(t, dtype=float), self.amplitude, self.width,
                           self.center, self.offset)


def sech2_model(t, amplitude, width, center, offset):
    return amplitude / np.cosh((t - center) / width) ** 2 + offset


def initial_sech2_guess(t: np.ndarray, y: np.ndarray):
    """Deterministic start: baseline from the series ends, peak from the extremum."""
    order = np.argsort(t)
    t, y = t[order], y[order]
    m = max(1, len(y) // 8)
    offset = float(np.median(np.concatenate([y[:m], y[-m:]])))
    dev = y - offset
    i = int(np.argmax(np.abs(dev)))
    amplitude = float(dev[i])
    half = np.abs(dev) >= 0.5 * abs(amplitude)
    lo = i
    while lo > 0 and half[lo - 1]:
        lo -= 1
    hi = i
    while hi < len(y) - 1 and half[hi + 1]:
        hi += 1
    half_width = 0.5 * max(t[hi] - t[lo], t[1] - t[0] if len(t) > 1 else 1.0)
    width = half_width / _ACOSH_SQRT2
    return amplitude, width, float(t[i]), offset


def fit_sech2_envelope(t, values, max_nfev: int = 2000) -> Sech2Fit:
    """Least-squares fit of ``A sech^2((t - t0)/w) + d``."""
    t = np.asarray(t, dtype=float).ravel()
    y = np.asarray(values, dtype=float).ravel()
    if t.shape != y.shape:
        raise ConfigurationError("t and values must have the same length")
    if t.size < 8:
        raise ConfigurationError("need at least 8 samples to fit")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
        raise ConfigurationError("samples must be finite")
    if np.ptp(y) == 0:
        raise ConfigurationError("cannot fit a constant series")
    x0 = np.array(initial_sech2_guess(t, y))
    span = np.ptp(t)

    def resid(p):
        return sech2_model(t, p[0], p[1], p[2], p[3]) - y

    lower = [-np.inf, 1e-12 * span, -np.inf, -np.inf]
    sol = least_squares(resid, x0, bounds=(lower, np.inf), method="trf",
                        x_scale="jac", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    fit = Sech2Fit(float(sol.x[0]), float(sol.x[1]), float(sol.x[2]), float(sol.x[3]), rms)
    if sol.status <= 0:
        raise FitConvergenceError(f"sech^2 fit did not converge: {sol.message}", best=fit)
    return fit


#: Reported squeezing figures quoted from the literature; documentation only.
REFERENCE_VALUES = {
    "intracavity_squeezing_three_level_parametric_pct": 97.8,
    "max_squeezing_cascade_laser_pct": 98.0,
    "max_squeezing_cascade_laser_upper_pct": 98.3,
    "cascade_laser_eta": 0.02,
    "cascade_laser_A": 1000.0,
    "raman_linewidth_Gamma": 0.0,
    "raman_detuning_Delta": 0.4,
}


def write_squeeze_sweep(rows, path) -> None:
    """``rows`` of ``(kappa1, kappa2)``; writes both variance limits and squeezing."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kappa1", "kappa2", "var_hyper", "var_steady", "squeezing_pct"])
        for k1, k2 in rows:
            k = RamanCouplings(k1, k2)
            vs = variance_steady_state(k)
            w.writerow([format_float(k1), format_float(k2),
                        format_float(variance_hypertransient(k)), format_float(vs),
                        format_float(squeezing_percent(vs))])
