import numpy as np
import pytest

from solitonkit import kdv
from solitonkit.field import make_grid


@pytest.fixture(scope="session")
def kdv_grid():
    return make_grid(1024, 80.0, -40.0)


@pytest.fixture(scope="session")
def kdv_single_run(kdv_grid):
    spec = kdv.KdvSolitonSpec(1.0, 0.0)
    u0 = kdv.kdv_soliton_profile(spec, 0.0, kdv_grid)
    cfg = kdv.KdvRunConfig(kdv_grid, 2.0 * kdv_grid.dx ** 3, 10.0, n_snapshots=10)
    return spec, kdv.kdv_propagate(u0, cfg)


@pytest.fixture(scope="session")
def kdv_collision_run(kdv_grid):
    fast = kdv.KdvSolitonSpec(2.0, -30.0)
    slow = kdv.KdvSolitonSpec(1.0, -15.0)
    u0 = kdv.superpose([kdv.kdv_soliton_profile(s, 0.0, kdv_grid) for s in (fast, slow)])
    cfg = kdv.KdvRunConfig(kdv_grid, 2.0 * kdv_grid.dx ** 3, 30.0, n_snapshots=30)
    return kdv.kdv_propagate(u0, cfg)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


_SESSION_START = {}
SUITE_BUDGET_S = 300.0


def pytest_sessionstart(session):
    import time
    _SESSION_START["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import sys
    import time
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", {}) if mod else {}
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(results):
        tr.write_line(results[n][1])
    wall = time.perf_counter() - _SESSION_START.get("t", time.perf_counter())
    tr.write_line(f"suite wall time {wall:.1f} s (budget {SUITE_BUDGET_S:.0f} s): "
                  f"{'PASS' if wall < SUITE_BUDGET_S else 'FAIL'}")


def pytest_sessionfinish(session, exitstatus):
    import time
    wall = time.perf_counter() - _SESSION_START.get("t", time.perf_counter())
    if wall >= SUITE_BUDGET_S and session.exitstatus == 0:
        session.exitstatus = 1
