"""Polychromatic solitons of a quadratic medium: stationary sech^2 algebra and
beam propagation of the two fundamental-harmonic components.

The evolved pair is::

    i U1_z + U1_XX - alpha1 U1 + chi1 conj(U1) U3 + chi2 conj(U2) U4 = 0
    i U2_z + U2_XX - alpha2 U2 + chi2 conj(U1) U4 + chi3 conj(U2) U5 = 0

with ``U3, U4, U5`` held fixed in z (their own evolution equations are not
modelled).  For ``U_n = A_n sech^2(lambda X)`` the sech^2 terms balance when
``alpha_n = 4 lambda^2`` and the sech^4 terms give a homogeneous 2x2 system
for ``(A1, A2)`` whose matrix depends on the drivers.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._validation import check_positive
from .exceptions import ConfigurationError, NumericalInstabilityError
from .field import ComplexEnvelope, Grid1D, RealField, format_float

ALPHA_TOLERANCE = 1e-10
SINGULAR_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PcsParams:
    alpha1: float
    alpha2: float
    chi1: float
    chi2: float
    chi3: float
    lam: float

    def __post_init__(self):
        check_positive(self.lam, "lambda")

    @classmethod
    def matched(cls, lam: float, chi1: float = 1.0, chi2: float = 1.0, chi3: float = 1.0):
        """Parameters with the mismatches fixed by the sech^2 balance."""
        a = 4.0 * lam ** 2
        return cls(a, a, chi1, chi2, chi3, lam)


@dataclass(frozen=True)
class PcsAmplitudes:
    A: Tuple[float, float, float, float, float]

    def __post_init__(self):
        a = tuple(float(v) for v in self.A)
        if len(a) != 5 or not all(np.isfinite(a)):
            raise ConfigurationError("PcsAmplitudes needs five finite amplitudes")
        object.__setattr__(self, "A", a)

    def profiles(self, grid: Grid1D, lam: float, center: float = 0.0) -> List[np.ndarray]:
        s2 = 1.0 / np.cosh(lam * grid.displacement(grid.x, center)) ** 2
        return [a * s2 for a in self.A]


@dataclass
class PcsSolution:
    """Stationary solve result.

    ``branch_type`` is ``"trivial"`` (only A1 = A2 = 0), ``"simple"`` (a
    one-parameter family with a single nonzero component), ``"polychromatic"``
    (a family with both components) or ``"free"`` (every (A1, A2) works).
    ``family`` holds orthonormal rows spanning the admissible (A1, A2) when a
    family exists, else None.
    """

    amplitudes: PcsAmplitudes
    branch_type: str
    family: Optional[np.ndarray]
    algebraic_residual: float
    grid_residual: float
    matrix: np.ndarray


def balance_matrix(p: PcsParams, drivers: Sequence[float]) -> np.ndarray:
    A3, A4, A5 = drivers
    l2 = 6.0 * p.lam ** 2
    return np.array([[-l2 + p.chi1 * A3, p.chi2 * A4],
                     [p.chi2 * A4, -l2 + p.chi3 * A5]])


def simple_branch_driver(lam: float, chi1: float) -> float:
    """Driver ``A3 = 6 lambda^2 / chi1`` that admits the single-component soliton."""
    if chi1 == 0:
        raise ConfigurationError("chi1 must be nonzero on the simple branch")
    return 6.0 * lam ** 2 / chi1


def stationary_operator(U1, U2, U3, U4, U5, p: PcsParams, grid: Grid1D):
    """Left-hand sides of the stationary (z-independent, real) equations on ``grid``."""
    k2 = grid.k ** 2

    def dxx(u):
        return np.real(np.fft.ifft(-k2 * np.fft.fft(u)))

    r1 = dxx(U1) - p.alpha1 * U1 + p.chi1 * U1 * U3 + p.chi2 * U2 * U4
    r2 = dxx(U2) - p.alpha2 * U2 + p.chi2 * U1 * U4 + p.chi3 * U2 * U5
    return r1, r2


def pcs_stationary_amplitudes(p: PcsParams, drivers: Sequence[float], scale: float = 1.0,
                              grid: Optional[Grid1D] = None) -> PcsSolution:
    """Solve the sech^4 balance for ``(A1, A2)`` given ``(A3, A4, A5)``.

    On a family branch the returned member is ``scale`` times the unit null
    vector (sign fixed so its largest component is positive).
    """
    target = 4.0 * p.lam ** 2
    if max(abs(p.alpha1 - target), abs(p.alpha2 - target)) > ALPHA_TOLERANCE * max(1.0, target):
        raise ConfigurationError(
            f"sech^2 balance requires alpha1 = alpha2 = 4 lambda^2 = {target:g}, "
            f"got ({p.alpha1:g}, {p.alpha2:g})")
    drivers = tuple(float(d) for d in drivers)
    M = balance_matrix(p, drivers)
    norm = max(1.0, np.max(np.abs(M)))
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] <= SINGULAR_TOLERANCE * norm:
        branch, family = "free", np.eye(2)
    elif sv[1] <= SINGULAR_TOLERANCE * norm:
        _, _, vt = np.linalg.svd(M)
        vec = vt[-1] * np.sign(vt[-1][np.argmax(np.abs(vt[-1]))])
        vec[np.abs(vec) < 1e-14] = 0.0
        family = vec[None, :]
        branch = "simple" if np.count_nonzero(vec) == 1 else "polychromatic"
    else:
        branch, family = "trivial", None
    a12 = np.zeros(2) if family is None else scale * family[0]
    amps = PcsAmplitudes((a12[0], a12[1], *drivers))
    alg = float(np.max(np.abs(M @ a12)))
    if grid is None:
        grid = default_grid(p.lam)
    fields = amps.profiles(grid, p.lam)
    r1, r2 = stationary_operator(*fields, p, grid)
    return PcsSolution(amps, branch, family, alg, float(max(np.max(np.abs(r1)), np.max(np.abs(r2)))), M)


def default_grid(lam: float, n: int = 512) -> Grid1D:
    """Grid wide enough that sech^2(lambda X) decays below 1e-16 at the edges."""
    half = 20.0 / lam
    return Grid1D(n=n, dx=2 * half / n, x0=-half)


@dataclass
class PcsTrajectory:
    z: np.ndarray
    U1: List[ComplexEnvelope]
    U2: List[ComplexEnvelope]

    def drift(self) -> np.ndarray:
        """Sup-norm deviation from the initial fields at each snapshot."""
        a0, b0 = self.U1[0].samples, self.U2[0].samples
        return np.array([max(np.max(np.abs(a.samples - a0)), np.max(np.abs(b.samples - b0)))
                         for a, b in zip(self.U1, self.U2)])

    def centroids(self) -> np.ndarray:
        """Intensity centroids of (U1, U2) per snapshot, shape (2, n)."""
        out = np.empty((2, len(self.z)))
        for i, (a, b) in enumerate(zip(self.U1, self.U2)):
            for j, f in enumerate((a, b)):
                w = np.abs(f.samples) ** 2
                out[j, i] = np.sum(w * f.grid.x) / np.sum(w) if w.sum() else np.nan
        return out


def _check_field(f, grid, name):
    if f.grid != grid:
        raise ConfigurationError(f"{name} is not on the shared grid")


# overflow surfaces as NumericalInstabilityError, not warnings
@np.errstate(over="ignore", invalid="ignore")
def pcs_propagate(U1: ComplexEnvelope, U2: ComplexEnvelope, U3: RealField, U4: RealField,
                  U5: RealField, p: PcsParams, z_end: float, dz: float = 5e-3,
                  n_snapshots: int = 10, order: int = 4) -> PcsTrajectory:
    """Split-step for the two displayed equations with frozen drivers.

    ``order=2`` is plain Strang splitting, ``order=4`` its Yoshida composition.

    Both sub-flows are solved exactly: diffraction/mismatch in Fourier space,
    and the parametric coupling pointwise.  Writing ``U1 = a + ib``,
    ``U2 = c + id`` the coupling step is ``(a, c)' = M (b, d)``, ``(b, d)' = M (a, c)``
    with ``M = [[chi1 U3, chi2 U4], [chi2 U4, chi3 U5]]``, so ``(a+b, c+d)`` grows
    with ``exp(M z)`` and ``(a-b, c-d)`` with ``exp(-M z)``.
    """
    grid = U1.grid
    for f, name in ((U2, "U2"), (U3, "U3"), (U4, "U4"), (U5, "U5")):
        _check_field(f, grid, name)
    check_positive(dz, "dz")
    if z_end < 0:
        raise ConfigurationError("z_end must be >= 0")
    if order not in (2, 4):
        raise ConfigurationError("order must be 2 or 4")
    n_steps = int(round(z_end / dz))
    k2 = grid.k ** 2
    m11 = p.chi1 * U3.samples
    m12 = p.chi2 * U4.samples
    m22 = p.chi3 * U5.samples
    # eigen-decomposition of the symmetric 2x2 coupling matrix at each X
    stacked = np.stack([np.stack([m11, m12], -1), np.stack([m12, m22], -1)], -2)
    w, V = np.linalg.eigh(stacked)
    Vt = np.swapaxes(V, -1, -2)

    def make_substep(h):
        H1 = np.exp(-0.5j * (k2 + p.alpha1) * h)
        H2 = np.exp(-0.5j * (k2 + p.alpha2) * h)
        Ep = V @ (np.exp(w * h)[..., None] * Vt)
        Em = V @ (np.exp(-w * h)[..., None] * Vt)

        def substep(f1, f2):
            u1 = np.fft.ifft(H1 * f1)
            u2 = np.fft.ifft(H2 * f2)
            sp = np.stack([u1.real + u1.imag, u2.real + u2.imag], -1)
            sm = np.stack([u1.real - u1.imag, u2.real - u2.imag], -1)
            sp = np.einsum("nij,nj->ni", Ep, sp)
            sm = np.einsum("nij,nj->ni", Em, sm)
            u1 = 0.5 * (sp[:, 0] + sm[:, 0]) + 0.5j * (sp[:, 0] - sm[:, 0])
            u2 = 0.5 * (sp[:, 1] + sm[:, 1]) + 0.5j * (sp[:, 1] - sm[:, 1])
            return H1 * np.fft.fft(u1), H2 * np.fft.fft(u2)

        return substep

    if order == 2:
        substeps = [make_substep(dz)]
    else:
        # Yoshida triple jump: symmetric composition of Strang steps
        cbrt2 = 2.0 ** (1.0 / 3.0)
        w1 = 1.0 / (2.0 - cbrt2)
        w0 = -cbrt2 / (2.0 - cbrt2)
        outer = make_substep(w1 * dz)
        substeps = [outer, make_substep(w0 * dz), outer]

    out_steps = np.unique(np.round(np.linspace(0, n_steps, n_snapshots + 1)).astype(int))
    f1, f2 = np.fft.fft(U1.samples), np.fft.fft(U2.samples)
    zs, s1, s2 = [0.0], [U1], [U2]
    nxt = 1
    for step in range(1, n_steps + 1):
        for sub in substeps:
            f1, f2 = sub(f1, f2)
        if nxt < len(out_steps) and step == out_steps[nxt]:
            a, b = np.fft.ifft(f1), np.fft.ifft(f2)
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise NumericalInstabilityError(
                    f"PCS run became non-finite at step {step} (z={step * dz:g})", step=step)
            zs.append(step * dz)
            s1.append(U1.with_samples(a))
            s2.append(U2.with_samples(b))
            nxt += 1
    return PcsTrajectory(np.array(zs), s1, s2)


def linear_propagator(u0: ComplexEnvelope, alpha: float, z: float) -> ComplexEnvelope:
    """Exact solution of ``i U_z + U_XX - alpha U = 0``."""
    k2 = u0.grid.k ** 2
    return u0.with_samples(np.fft.ifft(np.exp(-1j * (k2 + alpha) * z) * np.fft.fft(u0.samples)))


def write_branches_csv(rows: Sequence[Tuple[PcsParams, PcsSolution]], path) -> None:
    cols = ["lambda", "chi1", "chi2", "chi3", "A1", "A2", "A3", "A4", "A5", "residual", "branch_type"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for p, sol in rows:
            vals = [p.lam, p.chi1, p.chi2, p.chi3, *sol.amplitudes.A,
                    max(sol.algebraic_residual, sol.grid_residual)]
            w.writerow([format_float(v) for v in vals] + [sol.branch_type])
