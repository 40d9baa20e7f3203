"""Reduced dynamics of two colliding solitons: frequency and position shifts.

State ``(omega_0, omega_1, t_0, t_1)`` evolves in ``z`` as::

    d omega_l / dz = -K_l * d/dt_l exp(-(t_l - t_{1-l})^2 / (2 S))
    d t_l / dz     = sigma_l - epsD_l * omega_l

with ``S = T0^2 + T1^2`` and ``K_l = 4 |beta_l| gamma_l / (T_{1-l} sqrt(S))``.  For a
frozen frequency shift the position drifts as ``-delta_omega * epsD * z``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .exceptions import ConfigurationError
from .field import format_float

RTOL = 1e-10
ATOL = 1e-12
#: A collision is complete once the separation has reversed and reached this many widths.
EXIT_WIDTHS = 10.0


def _pair(values, name, nonneg=False, positive=False):
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size == 1:
        arr = np.repeat(arr, 2)
    if arr.size != 2 or not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} must be a finite scalar or pair")
    if nonneg and np.any(arr < 0):
        raise ConfigurationError(f"{name} must be non-negative")
    if positive and np.any(arr <= 0):
        raise ConfigurationError(f"{name} must be positive")
    return arr


@dataclass(frozen=True)
class CollisionParams:
    beta: Tuple[float, float] = (1.0, 1.0)
    gamma: Tuple[float, float] = (1.0, 1.0)
    T0: float = 1.0
    T1: float = 1.0
    group_offset: Tuple[float, float] = (0.5, -0.5)
    eps_D: Tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(np.abs(_pair(self.beta, "beta"))))
        object.__setattr__(self, "gamma", tuple(_pair(self.gamma, "gamma", nonneg=True)))
        object.__setattr__(self, "group_offset", tuple(_pair(self.group_offset, "group_offset")))
        object.__setattr__(self, "eps_D", tuple(_pair(self.eps_D, "eps_D")))
        for name in ("T0", "T1"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ConfigurationError(f"{name} must be positive")
            object.__setattr__(self, name, float(v))

    @property
    def width_sq(self) -> float:
        return self.T0 ** 2 + self.T1 ** 2

    @property
    def coupling(self) -> np.ndarray:
        S = self.width_sq
        widths_other = np.array([self.T1, self.T0])
        return 4.0 * np.array(self.beta) * np.array(self.gamma) / (widths_other * np.sqrt(S))

    def swapped(self) -> "CollisionParams":
        """Same physics with the soliton labels exchanged."""
        return CollisionParams(self.beta[::-1], self.gamma[::-1], self.T1, self.T0,
                               self.group_offset[::-1], self.eps_D[::-1])


@dataclass(frozen=True)
class CollisionState:
    omega: Tuple[float, float]
    t: Tuple[float, float]
    z: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(_pair(self.omega, "omega")))
        object.__setattr__(self, "t", tuple(_pair(self.t, "t")))
        if not np.isfinite(self.z):
            raise ConfigurationError("z must be finite")

    def as_vector(self) -> np.ndarray:
        return np.array([*self.omega, *self.t])


def _rhs_vector(y, p: CollisionParams, K, sigma, epsD, freeze_omega=False):
    om0, om1, t0, t1 = y
    S = p.width_sq
    d = t0 - t1
    g = np.exp(-d * d / (2.0 * S))
    # d/dt_l of the Gaussian is -(t_l - t_other)/S * g
    if freeze_omega:
        dom0 = dom1 = 0.0
    else:
        dom0 = K[0] * d / S * g
        dom1 = -K[1] * d / S * g
    return np.array([dom0, dom1, sigma[0] - epsD[0] * om0, sigma[1] - epsD[1] * om1])


def collision_rhs(state: CollisionState, p: CollisionParams) -> CollisionState:
    """Derivative of ``state`` with respect to ``z`` (returned in a CollisionState)."""
    dy = _rhs_vector(state.as_vector(), p, p.coupling, np.array(p.group_offset), np.array(p.eps_D))
    return CollisionState(omega=tuple(dy[:2]), t=tuple(dy[2:]), z=1.0)


def position_shift_growth(delta_omega: float, eps_D: float, z) -> np.ndarray:
    """Position shift generated by a constant frequency shift, ``-delta_omega * eps_D * z``."""
    return -delta_omega * eps_D * np.asarray(z, dtype=float)


@dataclass
class CollisionResult:
    net_domega: np.ndarray
    net_dt: np.ndarray
    complete: bool
    z: np.ndarray
    omega: np.ndarray        # (2, n)
    t: np.ndarray            # (2, n)
    params: CollisionParams
    name: str = ""

    @property
    def peak_omega(self) -> float:
        return float(np.max(np.abs(self.omega)))

    def rows(self):
        return [(float(z), float(a), float(b), float(c), float(d))
                for z, a, b, c, d in zip(self.z, self.omega[0], self.omega[1], self.t[0], self.t[1])]


def integrate_collision(p: CollisionParams, state: CollisionState, z_end: float,
                        freeze_omega: bool = False, events=None, max_step=np.inf,
                        n_output: Optional[int] = None):
    """Adaptive DOP853 integration of the collision system from ``state``."""
    K = p.coupling
    sigma = np.array(p.group_offset)
    epsD = np.array(p.eps_D)
    t_eval = None
    if n_output is not None:
        t_eval = np.linspace(state.z, state.z + z_end, n_output)
    return solve_ivp(lambda z, y: _rhs_vector(y, p, K, sigma, epsD, freeze_omega),
                     (state.z, state.z + z_end), state.as_vector(), method="DOP853",
                     rtol=RTOL, atol=ATOL, events=events, max_step=max_step,
                     t_eval=t_eval, dense_output=False)


def simulate_collision(p: CollisionParams, initial_separation: float, z_end: float,
                       omega0: Sequence[float] = (0.0, 0.0), name: str = "",
                       exit_widths: float = EXIT_WIDTHS) -> CollisionResult:
    """Run a collision starting with ``t_0 - t_1 = initial_separation``.

    Integration stops when the separation has changed sign and grown to
    ``exit_widths * sqrt(T0^2 + T1^2)`` (complete collision) or at ``z_end``.
    Net shifts are measured against the free trajectory with frozen initial
    frequencies.
    """
    if not np.isfinite(z_end) or z_end <= 0:
        raise ConfigurationError("z_end must be positive")
    if initial_separation == 0:
        raise ConfigurationError("initial separation must be nonzero")
    half = 0.5 * initial_separation
    state = CollisionState(omega=tuple(omega0), t=(half, -half))
    exit_sep = exit_widths * np.sqrt(p.width_sq)
    sgn = np.sign(initial_separation)

    def separated(z, y):
        return sgn * (y[2] - y[3]) + exit_sep

    separated.terminal = True
    separated.direction = -1
    sol = integrate_collision(p, state, z_end, events=separated,
                              max_step=np.sqrt(p.width_sq) / max(1e-300, _relative_speed(p)) / 4)
    complete = sol.status == 1
    y_end = sol.y[:, -1]
    z_final = sol.t[-1]
    om_init = np.array(state.omega)
    t_init = np.array(state.t)
    free = t_init + (np.array(p.group_offset) - np.array(p.eps_D) * om_init) * z_final
    return CollisionResult(
        net_domega=y_end[:2] - om_init,
        net_dt=y_end[2:] - free,
        complete=bool(complete),
        z=sol.t,
        omega=sol.y[:2],
        t=sol.y[2:],
        params=p,
        name=name,
    )


def _relative_speed(p: CollisionParams) -> float:
    return abs(p.group_offset[0] - p.group_offset[1])


@dataclass
class CrosstalkReport:
    rows: List[dict]
    ratios: List[dict] = field(default_factory=list)


def crosstalk_report(runs: Sequence[CollisionResult]) -> CrosstalkReport:
    """Shift magnitudes per run and pairwise ratios (first run as numerator)."""
    if not runs:
        raise ConfigurationError("crosstalk_report needs at least one run")
    rows = []
    for i, r in enumerate(runs):
        rows.append({
            "name": r.name or f"run{i}",
            "abs_dt0": float(abs(r.net_dt[0])),
            "abs_dt1": float(abs(r.net_dt[1])),
            "abs_domega0": float(abs(r.net_domega[0])),
            "abs_domega1": float(abs(r.net_domega[1])),
            "complete": bool(r.complete),
        })
    ratios = []
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            a, b = rows[i], rows[j]
            ratios.append({
                "numerator": a["name"],
                "denominator": b["name"],
                "dt0_ratio": _ratio(a["abs_dt0"], b["abs_dt0"]),
                "dt1_ratio": _ratio(a["abs_dt1"], b["abs_dt1"]),
            })
    return CrosstalkReport(rows, ratios)


def _ratio(a, b):
    if b == 0:
        return 1.0 if a == 0 else float("inf")
    return a / b


def write_collision_csv(result: CollisionResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["z", "omega0", "omega1", "t0", "t1"])
        for row in result.rows():
            w.writerow([format_float(v) for v in row])


def write_crosstalk_csv(report: CrosstalkReport, path) -> None:
    cols = ["name", "abs_dt0", "abs_dt1", "abs_domega0", "abs_domega1", "complete"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in report.rows:
            w.writerow([r["name"]] + [format_float(r[c]) for c in cols[1:5]] + [int(r["complete"])])
        if report.ratios:
            w.writerow([])
            w.writerow(["numerator", "denominator", "dt0_ratio", "dt1_ratio"])
            for r in report.ratios:
                w.writerow([r["numerator"], r["denominator"],
                            format_float(r["dt0_ratio"]), format_float(r["dt1_ratio"])])
