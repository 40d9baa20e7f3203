"""Independent reference computations shared by the unit and acceptance tests."""
import numpy as np
from scipy.optimize import minimize_scalar


def covariance_min_variance(p):
    """Brute-force minimum of the combination-quadrature variance.

    Vacuum covariance 1/2 I is pushed through the 4x4 symplectic map; the
    variance of (X1(0) + X2(phi)) / sqrt(2) is scanned over phi, then refined.
    """
    S = p.symplectic()
    C = S @ (0.5 * np.eye(4)) @ S.T

    def var(phi):
        v = np.array([1.0, np.cos(phi), 0.0, np.sin(phi)]) / np.sqrt(2)
        return float(v @ C @ v)

    grid = np.linspace(0, 2 * np.pi, 4001)
    i = int(np.argmin([var(x) for x in grid]))
    h = grid[1] - grid[0]
    res = minimize_scalar(var, bounds=(grid[i] - h, grid[i] + h), method="bounded",
                          options={"xatol": 1e-12})
    return min(res.fun, var(grid[i]))


def hirota_shifts(c_slow, c_fast):
    """Asymptotic position shifts (slow, fast) of the KdV two-soliton solution."""
    k1, k2 = np.sqrt(c_slow) / 2, np.sqrt(c_fast) / 2
    log = np.log((k2 + k1) / (k2 - k1))
    return -log / k1, log / k2
