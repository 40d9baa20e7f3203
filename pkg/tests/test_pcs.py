import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitonkit import pcs
from solitonkit.exceptions import ConfigurationError
from solitonkit.field import ComplexEnvelope, RealField, make_grid


@pytest.fixture(scope="module")
def grid():
    return pcs.default_grid(1.0)


def launch(grid, sol, lam=1.0):
    f = sol.amplitudes.profiles(grid, lam)
    return (ComplexEnvelope(grid, f[0]), ComplexEnvelope(grid, f[1]),
            RealField(grid, f[2]), RealField(grid, f[3]), RealField(grid, f[4]))


class TestStationary:
    def test_simple_branch(self, grid):
        p = pcs.PcsParams.matched(1.0)
        assert pcs.simple_branch_driver(1.0, 1.0) == 6.0
        assert pcs.simple_branch_driver(2.0, 3.0) == 8.0
        sol = pcs.pcs_stationary_amplitudes(p, (6.0, 0.0, 0.0), scale=2.5, grid=grid)
        assert sol.branch_type == "simple"
        np.testing.assert_array_equal(sol.family, [[1.0, 0.0]])
        assert sol.amplitudes.A[:2] == (2.5, 0.0)
        assert sol.algebraic_residual < 1e-12
        assert sol.grid_residual < 1e-10

    def test_trivial(self, grid):
        sol = pcs.pcs_stationary_amplitudes(pcs.PcsParams.matched(1.0), (0, 0, 0), grid=grid)
        assert sol.branch_type == "trivial"
        assert sol.family is None
        assert sol.amplitudes.A[:2] == (0.0, 0.0)

    def test_degenerate_polychromatic_family(self, grid):
        sol = pcs.pcs_stationary_amplitudes(pcs.PcsParams.matched(1.0), (3, 3, 3), grid=grid)
        assert sol.branch_type == "polychromatic"
        assert abs(np.linalg.det(sol.matrix)) < 1e-12
        np.testing.assert_allclose(sol.family[0], [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-14)
        assert sol.grid_residual < 1e-10

    def test_free(self, grid):
        sol = pcs.pcs_stationary_amplitudes(pcs.PcsParams.matched(1.0), (6, 0, 6), grid=grid)
        assert sol.branch_type == "free"
        assert sol.family.shape == (2, 2)

    def test_mismatch_rejected(self):
        with pytest.raises(ConfigurationError, match="4 lambda"):
            pcs.pcs_stationary_amplitudes(pcs.PcsParams(3.0, 4.0, 1, 1, 1, 1.0), (6, 0, 0))

    @given(st.floats(0.3, 2.0), st.floats(0.2, 3.0), st.floats(-3, 3))
    @settings(max_examples=30, deadline=None)
    def test_balance_holds(self, lam, chi1, scale):
        p = pcs.PcsParams.matched(lam, chi1, 1.0, 1.0)
        sol = pcs.pcs_stationary_amplitudes(p, (pcs.simple_branch_driver(lam, chi1), 0.0, 0.0), scale)
        assert sol.algebraic_residual < 1e-12
        assert sol.grid_residual < 1e-10 * max(1.0, abs(scale) * lam ** 2 * 100)


class TestPropagation:
    @pytest.mark.parametrize("drivers", [(6, 0, 0), (3, 3, 3)])
    def test_stationary_drift(self, grid, drivers):
        p = pcs.PcsParams.matched(1.0)
        sol = pcs.pcs_stationary_amplitudes(p, drivers, grid=grid)
        tr = pcs.pcs_propagate(*launch(grid, sol), p, 5.0, dz=5e-3, n_snapshots=5)
        assert tr.drift()[-1] < 1e-3

    def test_zero_stays_zero(self, grid):
        z = np.zeros(grid.n)
        tr = pcs.pcs_propagate(ComplexEnvelope(grid, z), ComplexEnvelope(grid, z), RealField(grid, z),
                               RealField(grid, z), RealField(grid, z), pcs.PcsParams.matched(1.0), 1.0)
        assert np.all(tr.U1[-1].samples == 0) and np.all(tr.U2[-1].samples == 0)

    def test_linear_limit(self, grid):
        p = pcs.PcsParams(4.0, 4.0, 0.0, 0.0, 0.0, 1.0)
        u0 = ComplexEnvelope(grid, np.exp(-grid.x ** 2) * np.exp(0.5j * grid.x))
        ones = RealField(grid, np.ones(grid.n))
        tr = pcs.pcs_propagate(u0, u0, ones, ones, ones, p, 2.0, dz=0.01, n_snapshots=1)
        exact = pcs.linear_propagator(u0, 4.0, 2.0)
        assert np.max(np.abs(tr.U1[-1].samples - exact.samples)) < 1e-8
        assert np.max(np.abs(tr.U2[-1].samples - exact.samples)) < 1e-8

    def test_colliding_components_deflect(self):
        g = make_grid(1024, 240.0, -120.0)
        x = g.x
        # exp(i k X) travels at 2k under U_XX, so k = +-0.2 gives velocities +-0.4
        u1 = ComplexEnvelope(g, np.exp(-(x + 10) ** 2 / 32) * np.exp(0.2j * x))
        u2 = ComplexEnvelope(g, np.exp(-(x - 10) ** 2 / 32) * np.exp(-0.2j * x))
        zero = RealField(g, np.zeros(g.n))
        drive = RealField(g, 0.5 / np.cosh(x / 4) ** 2)
        p = pcs.PcsParams.matched(0.25)
        free = pcs.pcs_propagate(u1, u2, zero, zero, zero, p, 50.0, dz=0.02, n_snapshots=5)
        coupled = pcs.pcs_propagate(u1, u2, zero, drive, zero, p, 50.0, dz=0.02, n_snapshots=5)
        c0 = free.centroids()
        np.testing.assert_allclose(c0[:, -1], [-10 + 20, 10 - 20], atol=1e-6)
        assert np.max(np.abs(coupled.centroids()[:, -1] - c0[:, -1])) > 1e-3

    def test_yoshida_beats_strang(self, grid):
        p = pcs.PcsParams.matched(1.0)
        sol = pcs.pcs_stationary_amplitudes(p, (3, 3, 3), grid=grid)
        args = launch(grid, sol)
        d2 = pcs.pcs_propagate(*args, p, 2.0, dz=0.01, n_snapshots=1, order=2).drift()[-1]
        d4 = pcs.pcs_propagate(*args, p, 2.0, dz=0.01, n_snapshots=1, order=4).drift()[-1]
        assert d4 < d2


def test_branches_csv(tmp_path, grid):
    p = pcs.PcsParams.matched(1.0)
    rows = [(p, pcs.pcs_stationary_amplitudes(p, d, grid=grid)) for d in ((6, 0, 0), (0, 0, 0))]
    pcs.write_branches_csv(rows, tmp_path / "b.csv")
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert lines[0] == "lambda,chi1,chi2,chi3,A1,A2,A3,A4,A5,residual,branch_type"
    assert lines[1].endswith(",simple") and lines[2].endswith(",trivial")
