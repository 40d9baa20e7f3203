"""Scenario configs, their schemas, and the runners that turn them into artifacts.

A config is an INI-style file::

    [scenario]
    kind = kdv
    name = kdv-two-soliton
    outputs = out/kdv
    seed = 0

    [params]
    speeds = 2.0, 1.0
    ...

Every runner writes CSV artifacts plus ``report.csv`` into the output
directory and returns a :class:`RunReport`.  Identical config and seed give
byte-identical artifacts; randomness comes only from
``numpy.random.Generator(PCG64(seed))``.
"""
from __future__ import annotations

import configparser
import csv
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import collision as col
from . import kdv, nls, pcs, squeeze, wavelets
from .exceptions import ConfigurationError
from .field import ComplexEnvelope, RealField, format_float, make_grid, write_field_csv

REQUIRED = object()
KINDS = ("kdv", "nls", "wdm", "collide", "squeeze", "pcs", "wavelet")


# ---------------------------------------------------------------- parsing ---

def _parse_bool(raw):
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _parse_floats(raw):
    parts = [p for p in raw.replace(",", " ").split()]
    if not parts:
        raise ValueError(raw)
    return tuple(float(p) for p in parts)


def _parse_triples(raw):
    out = []
    for chunk in raw.split(";"):
        if chunk.strip():
            vals = _parse_floats(chunk)
            if len(vals) != 3:
                raise ValueError(chunk)
            out.append(vals)
    if not out:
        raise ValueError(raw)
    return tuple(out)


def _parse_int(raw):
    f = float(raw)
    if not f.is_integer():
        raise ValueError(raw)
    return int(f)


PARSERS: Dict[str, Callable] = {
    "int": _parse_int,
    "float": float,
    "bool": _parse_bool,
    "str": lambda s: s.strip(),
    "floats": _parse_floats,
    "triples": _parse_triples,
}


SCHEMAS: Dict[str, Dict[str, Tuple[str, object]]] = {
    "kdv": {
        "n": ("int", 1024), "length": ("float", 80.0), "x0": ("float", -40.0),
        "speeds": ("floats", REQUIRED), "centers": ("floats", REQUIRED),
        "t_end": ("float", REQUIRED), "dt_factor": ("float", kdv.STABILITY_CONSTANT),
        "n_snapshots": ("int", 10), "dealias": ("bool", True),
        "write_snapshots": ("bool", True),
    },
    "nls": {
        "n": ("int", 2048), "length": ("float", 64.0), "x0": ("float", -32.0),
        "beta2": ("float", REQUIRED), "nu": ("float", 1.0), "dz": ("float", REQUIRED),
        "z_end": ("float", REQUIRED), "n_snapshots": ("int", 10),
        "input": ("str", "sech"), "amplitude": ("float", 1.0), "width": ("float", 1.0),
        "bits": ("str", "0010110010111100"), "rho0": ("float", 1.0),
        "bit_width": ("float", 2.0), "rise": ("float", 0.25), "chirp_amplitude": ("float", 0.0),
        "z_star": ("float", 0.0), "noise": ("float", 0.0),
        "filter_bandwidth": ("float", 0.0), "filter_center": ("float", 0.0),
        "filter_gain": ("float", 1.0), "filter_span": ("float", 1.0),
    },
    "wdm": {
        "n": ("int", 1024), "length": ("float", 60.0), "x0": ("float", -30.0),
        "beta2": ("float", 1.0), "nu": ("float", 1.0), "dz": ("float", REQUIRED),
        "z_end": ("float", REQUIRED), "n_snapshots": ("int", 10),
        "offsets": ("floats", REQUIRED), "centers": ("floats", REQUIRED),
        "amplitudes": ("floats", (1.0,)), "alpha": ("float", 1.0), "gamma": ("float", 1.0),
    },
    "collide": {
        "beta": ("floats", (1e-3, 1e-3)), "gamma": ("floats", (1.0, 1.0)),
        "T0": ("float", 1.0), "T1": ("float", 1.0),
        "group_offset": ("floats", (0.5, -0.5)), "eps_D": ("floats", (1.0, 1.0)),
        "separation_widths": ("float", col.EXIT_WIDTHS), "z_end": ("float", 500.0),
        "gamma1_sweep": ("floats", (0.25, 1.66)), "frozen_delta_omega": ("float", 0.1),
    },
    "squeeze": {
        "kappa1": ("floats", (0.0, 0.5, 1.0, 3.0)), "kappa2": ("floats", (1.0, 3.0)),
        "gz": ("floats", (0.0, 0.5, 1.0, 2.0)), "eta": ("float", 0.0),
        "fit_input": ("str", ""), "fit_amplitude": ("float", -3.0),
        "fit_width": ("float", 2.0), "fit_points": ("int", 201), "noise": ("float", 0.01),
    },
    "pcs": {
        "lam": ("float", 1.0), "chi1": ("float", 1.0), "chi2": ("float", 1.0),
        "chi3": ("float", 1.0), "drivers": ("triples", ((6.0, 0.0, 0.0),)),
        "scale": ("float", 1.0), "z_end": ("float", 5.0), "dz": ("float", 5e-3),
        "n": ("int", 512),
    },
    "wavelet": {
        "wavelet": ("str", "coif1"), "levels": ("int", 0), "n": ("int", 1024),
        "signal_csv": ("str", ""), "pulse_width": ("float", 1.0), "noise": ("float", 0.05),
        "keep_fraction": ("float", 0.1), "window_width": ("int", 64), "hop": ("int", 16),
    },
}


@dataclass
class Scenario:
    kind: str
    name: str
    params: Dict[str, object]
    outputs: str
    seed: int = 0
    source: Optional[str] = None


def parse_config_text(text: str, source: str = "<string>") -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from None
    if not cp.has_section("scenario"):
        raise ConfigurationError(f"{source}: missing [scenario] section")
    sc = cp["scenario"]
    kind = sc.get("kind", "").strip()
    if kind not in SCHEMAS:
        raise ConfigurationError(
            f"{source}: [scenario] kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    unknown = set(sc) - {"kind", "name", "outputs", "seed"}
    if unknown:
        raise ConfigurationError(f"{source}: [scenario] unknown keys: {', '.join(sorted(unknown))}")
    try:
        seed = _parse_int(sc.get("seed", "0"))
        if seed < 0:
            raise ValueError
    except ValueError:
        raise ConfigurationError(
            f"{source}: [scenario] seed: expected unsigned integer, got {sc.get('seed')!r}") from None
    name = sc.get("name", kind).strip() or kind
    outputs = sc.get("outputs", os.path.join("out", name)).strip()
    raw = dict(cp["params"]) if cp.has_section("params") else {}
    schema = SCHEMAS[kind]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ConfigurationError(
            f"{source}: [params] unknown keys for kind {kind!r}: {', '.join(sorted(unknown))}")
    params = {}
    for key, (typ, default) in schema.items():
        if key in raw:
            try:
                params[key] = PARSERS[typ](raw[key])
            except (ValueError, TypeError):
                raise ConfigurationError(
                    f"{source}: [params] {key}: expected {typ}, got {raw[key]!r}") from None
        elif default is REQUIRED:
            raise ConfigurationError(f"{source}: [params] {key}: required key missing (type {typ})")
        else:
            params[key] = default
    return Scenario(kind, name, params, outputs, seed, source)


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, str(path))


# ---------------------------------------------------------------- reports ---

@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float


@dataclass
class RunReport:
    scenario: str
    wall_time: float = 0.0
    checks: List[Check] = field(default_factory=list)
    artifact_paths: List[str] = field(default_factory=list)

    def add(self, name, passed, measured, tolerance):
        if any(c.name == name for c in self.checks):
            raise ValueError(f"check {name!r} declared twice")
        self.checks.append(Check(name, bool(passed), float(measured), float(tolerance)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


def emit_report(r: RunReport, format: str = "text") -> str:
    if format == "csv":
        lines = ["check,pass,measured,tolerance"]
        for c in r.checks:
            lines.append(f"{c.name},{int(c.passed)},{format_float(c.measured)},{format_float(c.tolerance)}")
        return "\n".join(lines) + "\n"
    if format != "text":
        raise ConfigurationError(f"unknown report format {format!r}")
    lines = [f"scenario: {r.scenario}  ({r.wall_time:.2f} s)"]
    for c in r.checks:
        flag = "PASS" if c.passed else "FAIL <<<"
        lines.append(f"  [{flag}] {c.name}: measured={c.measured:.6g} tolerance={c.tolerance:.6g}")
    lines.append(f"  artifacts: {len(r.artifact_paths)}")
    lines.append("  result: " + ("all checks passed" if r.passed else "FAILED"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- helpers ---

def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (str, int, np.integer)) and not isinstance(v, bool)
                        else format_float(v) for v in row])


class _Artifacts:
    def __init__(self, root: Path, report: RunReport):
        self.root = root
        self.report = report

    def path(self, name) -> Path:
        p = self.root / name
        self.report.artifact_paths.append(str(p))
        return p


def _need_len(params, key, n, at_least=False):
    v = params[key]
    if (len(v) < n) if at_least else (len(v) != n):
        raise ConfigurationError(f"[params] {key}: expected {'>=' if at_least else ''}{n} values, got {len(v)}")


# ---------------------------------------------------------------- runners ---

def _run_kdv(sc: Scenario, out: _Artifacts):
    p = sc.params
    _need_len(p, "speeds", 1, at_least=True)
    if len(p["centers"]) != len(p["speeds"]):
        raise ConfigurationError("[params] centers: must have one entry per speed")
    grid = make_grid(p["n"], p["length"], p["x0"])
    specs = [kdv.KdvSolitonSpec(c, x) for c, x in zip(p["speeds"], p["centers"])]
    u0 = kdv.superpose([kdv.kdv_soliton_profile(s, 0.0, grid) for s in specs])
    cfg = kdv.KdvRunConfig(grid, p["dt_factor"] * grid.dx ** 3, p["t_end"], p["dealias"],
                           p["n_snapshots"])
    traj = kdv.kdv_propagate(u0, cfg)
    r = out.report
    r.add("mass_drift", traj.mass_drift < 1e-6, traj.mass_drift, 1e-6)
    r.add("momentum_drift", traj.momentum_drift < 1e-6, traj.momentum_drift, 1e-6)
    if len(specs) == 1:
        exact = kdv.kdv_soliton_profile(specs[0], traj.times[-1], grid)
        err = float(np.max(np.abs(traj.final.samples - exact.samples)))
        r.add("shape_linf_error", err < 1e-4, err, 1e-4)
    else:
        rep = kdv.kdv_collision_report(traj)
        rel = float(np.max(np.abs(rep.amplitudes_after / rep.amplitudes_before - 1)))
        r.add("elastic_amplitudes", rel < 0.01, rel, 0.01)
        signs = np.sign(rep.phase_shifts)
        r.add("opposite_phase_shifts", signs.min() < 0 < signs.max(),
              float(rep.phase_shifts.max() - rep.phase_shifts.min()), 0.0)
        r.add("taller_overtakes", rep.ordering_swapped, float(rep.ordering_swapped), 1.0)
        _write_rows(out.path("collision_report.csv"),
                    ["pulse", "amplitude_before", "amplitude_after", "phase_shift"],
                    [(i, a, b, s) for i, (a, b, s) in enumerate(
                        zip(rep.amplitudes_before, rep.amplitudes_after, rep.phase_shifts))])
    if p["write_snapshots"]:
        for i, f in enumerate(traj.snapshots):
            write_field_csv(f, out.path(f"snapshot_{i:04d}.csv"))
    _write_rows(out.path("summary.csv"), ["t", "mass", "momentum", "peak_value", "peak_x"],
                traj.summary_rows())


def _nls_input(p, grid, rng):
    kind = p["input"]
    if kind == "sech":
        q = nls.sech_envelope(grid, p["amplitude"])
    elif kind == "gaussian":
        q = ComplexEnvelope(grid, p["amplitude"] * np.exp(-grid.x ** 2 / (2 * p["width"] ** 2)))
    elif kind == "nrz":
        beta = np.sqrt(abs(p["beta2"])) if p["beta2"] else None
        q = nls.encode_nrz(p["bits"], p["rho0"], p["bit_width"], p["rise"], grid,
                           chirp_amplitude=p["chirp_amplitude"], beta=beta)
    else:
        raise ConfigurationError(f"[params] input: expected sech|gaussian|nrz, got {kind!r}")
    if p["noise"] > 0:
        noise = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
        q = q.with_samples(q.samples + p["noise"] * noise)
    return q


def _run_nls(sc: Scenario, out: _Artifacts):
    p = sc.params
    rng = np.random.Generator(np.random.PCG64(sc.seed))
    grid = make_grid(p["n"], p["length"], p["x0"])
    q0 = _nls_input(p, grid, rng)
    params = nls.NlsParams(p["beta2"], p["nu"], p["dz"], p["z_end"], p["n_snapshots"])
    filt = None
    if p["filter_bandwidth"] > 0:
        filt = nls.GuidingFilter(p["filter_center"], p["filter_bandwidth"], p["filter_gain"],
                                 p["filter_span"])
    traj = nls.nls_propagate(q0, params, filt)
    r = out.report
    if filt is None:
        tol = 1e-10 * max(1.0, params.n_steps / 1000)
        r.add("power_drift", traj.power_drift < tol, traj.power_drift, tol)
    else:
        grew = float(np.max(np.diff(traj.power))) if len(traj.power) > 1 else 0.0
        if p["filter_gain"] == 1.0:
            r.add("filter_never_adds_power", grew <= 0, grew, 0.0)
    if p["input"] == "sech" and p["beta2"] > 0 and p["nu"] > 0 and p["noise"] == 0 and filt is None:
        # A sech(A T) is a fundamental soliton only when beta2 == nu
        if p["beta2"] == p["nu"]:
            ref = np.abs(nls.sech_envelope(grid, p["amplitude"]).samples)
            err = float(np.max(np.abs(np.abs(traj.final.samples) - ref)))
            r.add("soliton_shape_linf", err < 1e-6, err, 1e-6)
    if p["input"] == "gaussian" and p["nu"] == 0:
        w = nls.rms_width(traj.final)
        law = nls.gaussian_rms_width(p["width"], p["beta2"], traj.z[-1])
        rel = abs(w / law - 1)
        r.add("linear_broadening_law", rel < 1e-6, rel, 1e-6)
    one = nls.wdm_propagate(nls.WdmConfig((q0,)), params, filt).channels[0]
    same = max(float(np.max(np.abs(a.samples - b.samples))) for a, b in zip(one.snapshots, traj.snapshots))
    r.add("single_channel_equivalence", same <= 1e-12, same, 1e-12)
    steep = nls.steepening_metric(traj)
    if p["input"] == "nrz" and p["z_star"] > 0:
        g = steep.growth_before(p["z_star"])
        r.add("gradient_growth_before_z_star", g >= 2.0, g, 2.0)
    for i, e in enumerate(traj.snapshots):
        write_field_csv(e, out.path(f"channel0_{i:04d}.csv"))
    res = nls._metrics(traj.z, [traj])
    _write_rows(out.path("wdm_summary.csv"),
                ["z", "channel", "energy", "center_t", "mean_freq", "peak_amp"], res.summary_rows())
    _write_rows(out.path("steepening.csv"), ["z", "max_gradient", "growth"],
                zip(steep.z, steep.max_gradient, steep.growth))


def _run_wdm(sc: Scenario, out: _Artifacts):
    p = sc.params
    m = len(p["offsets"])
    _need_len(p, "centers", m)
    amps = p["amplitudes"] if len(p["amplitudes"]) == m else p["amplitudes"][:1] * m
    grid = make_grid(p["n"], p["length"], p["x0"])
    chans = [nls.sech_envelope(grid, a, c, om) for a, c, om in zip(amps, p["centers"], p["offsets"])]
    gam = np.full((m, m), p["gamma"])
    np.fill_diagonal(gam, 1.0)
    cfg = nls.WdmConfig(tuple(chans), gam, p["alpha"])
    params = nls.NlsParams(p["beta2"], p["nu"], p["dz"], p["z_end"], p["n_snapshots"])
    res = nls.wdm_propagate(cfg, params, reference_runs=True)
    r = out.report
    drift = float(np.max(np.abs(res.energy / res.energy[:, :1] - 1)))
    r.add("channel_energy_conserved", drift < 1e-8, drift, 1e-8)
    if m == 2 and p["gamma"] * p["alpha"] != 0:
        s = res.center_shift
        r.add("opposite_center_shifts", s[0] * s[1] < 0, float(s[0] * s[1]), 0.0)
    # decoupled limit must reproduce the isolated runs
    dec = nls.wdm_propagate(nls.WdmConfig(tuple(chans), np.eye(m), p["alpha"]), params)
    diff = max(float(np.max(np.abs(a.final.samples - b.final.samples)))
               for a, b in zip(dec.channels, res.isolated))
    r.add("decoupled_matches_isolated", diff <= 1e-12, diff, 1e-12)
    for j, t in enumerate(res.channels):
        for i, e in enumerate(t.snapshots):
            write_field_csv(e, out.path(f"channel{j}_{i:04d}.csv"))
    _write_rows(out.path("wdm_summary.csv"),
                ["z", "channel", "energy", "center_t", "mean_freq", "peak_amp"], res.summary_rows())


def _run_collide(sc: Scenario, out: _Artifacts):
    p = sc.params
    for key in ("beta", "gamma", "group_offset", "eps_D"):
        _need_len(p, key, 2)
    params = col.CollisionParams(p["beta"], p["gamma"], p["T0"], p["T1"], p["group_offset"], p["eps_D"])
    width = np.sqrt(params.width_sq)
    rel_v = params.group_offset[0] - params.group_offset[1]
    if rel_v == 0:
        raise ConfigurationError("[params] group_offset: solitons need a nonzero relative velocity")
    sep = -np.sign(rel_v) * p["separation_widths"] * width
    base = col.simulate_collision(params, sep, p["z_end"], name="base")
    r = out.report
    r.add("collision_complete", base.complete, float(base.complete), 1.0)
    rel = float(np.max(np.abs(base.net_domega)) / base.peak_omega) if base.peak_omega else 0.0
    r.add("net_frequency_shift_vanishes", rel < 1e-6, rel, 1e-6)
    dt = float(np.max(np.abs(base.net_dt)))
    r.add("net_position_shift_nonzero", dt > 0, dt, 0.0)
    # frozen frequency shift: position drifts linearly
    dw = p["frozen_delta_omega"]
    frozen = col.integrate_collision(params, col.CollisionState((dw, 0.0), (0.0, 0.0)), 10.0,
                                     freeze_omega=True)
    z = frozen.t[-1]
    moved = frozen.y[2, -1] - params.group_offset[0] * z
    law = float(col.position_shift_growth(dw, params.eps_D[0], z))
    err = abs(moved - law) / max(abs(law), 1e-300)
    r.add("frozen_omega_growth_law", err < 1e-12, err, 1e-12)
    runs = [base]
    for g1 in p["gamma1_sweep"]:
        pr = col.CollisionParams(params.beta, (params.gamma[0], g1), params.T0, params.T1,
                                 params.group_offset, params.eps_D)
        runs.append(col.simulate_collision(pr, sep, p["z_end"], name=f"gamma1={g1:g}"))
    rep = col.crosstalk_report(runs)
    if len(p["gamma1_sweep"]) >= 2 and p["gamma1_sweep"][1] != 0:
        a, b = runs[1], runs[2]
        measured = abs(a.net_dt[1]) / abs(b.net_dt[1])
        expected = p["gamma1_sweep"][0] / p["gamma1_sweep"][1]
        err = abs(measured / expected - 1)
        r.add("crosstalk_gamma_ratio", err < 0.05, err, 0.05)
    col.write_collision_csv(base, out.path("collision.csv"))
    col.write_crosstalk_csv(rep, out.path("crosstalk.csv"))


def _run_squeeze(sc: Scenario, out: _Artifacts):
    p = sc.params
    rng = np.random.Generator(np.random.PCG64(sc.seed))
    grid = [(k1, k2) for k1 in p["kappa1"] for k2 in p["kappa2"] if k1 + k2 > 0]
    squeeze.write_squeeze_sweep(grid, out.path("squeeze_sweep.csv"))
    r = out.report
    worst = max(max(squeeze.variance_hypertransient(squeeze.RamanCouplings(*k)),
                    squeeze.variance_steady_state(squeeze.RamanCouplings(*k))) for k in grid)
    r.add("raman_variance_at_most_vacuum", worst <= 0.5, worst, 0.5)
    rows, defect = [], 0.0
    for gz in p["gz"]:
        sp = squeeze.squeeze_from_gain(1.0, gz, p["eta"])
        v = squeeze.min_quadrature_variance(sp)
        defect = max(defect, abs(abs(sp.U) ** 2 - abs(sp.V) ** 2 - 1) / max(1.0, abs(sp.U) ** 2))
        rows.append((gz, p["eta"], sp.U.real, abs(sp.V), v, squeeze.squeezing_percent(v)))
    r.add("bogoliubov_invariant", defect < 1e-12, defect, 1e-12)
    _write_rows(out.path("squeeze_variance.csv"),
                ["gz", "eta", "U", "abs_V", "min_variance", "squeezing_pct"], rows)
    if p["fit_input"]:
        t, y = read_series_csv(p["fit_input"])
    else:
        t = np.linspace(-10, 10, p["fit_points"])
        y = p["fit_amplitude"] / np.cosh(t / p["fit_width"]) ** 2
        if p["noise"] > 0:
            y = y + rng.uniform(-p["noise"], p["noise"], t.size)
    fit = squeeze.fit_sech2_envelope(t, y)
    scale = max(float(np.ptp(y)), 1e-300)
    r.add("sech2_fit_relative_rms", fit.rms_residual / scale < 0.05, fit.rms_residual / scale, 0.05)
    _write_rows(out.path("sech2_fit.csv"),
                ["amplitude", "width", "center", "offset", "rms_residual"],
                [(fit.amplitude, fit.width, fit.center, fit.offset, fit.rms_residual)])
    _write_rows(out.path("reference_values.csv"), ["quantity", "value"],
                sorted(squeeze.REFERENCE_VALUES.items()))


def _run_pcs(sc: Scenario, out: _Artifacts):
    p = sc.params
    params = pcs.PcsParams.matched(p["lam"], p["chi1"], p["chi2"], p["chi3"])
    grid = pcs.default_grid(p["lam"], p["n"])
    r = out.report
    rows, alg, gres, drift = [], 0.0, 0.0, 0.0
    drift_rows = []
    for i, d in enumerate(p["drivers"]):
        sol = pcs.pcs_stationary_amplitudes(params, d, p["scale"], grid)
        rows.append((params, sol))
        alg = max(alg, sol.algebraic_residual)
        gres = max(gres, sol.grid_residual)
        if sol.branch_type != "trivial" and p["z_end"] > 0:
            f = sol.amplitudes.profiles(grid, p["lam"])
            traj = pcs.pcs_propagate(ComplexEnvelope(grid, f[0]), ComplexEnvelope(grid, f[1]),
                                     RealField(grid, f[2]), RealField(grid, f[3]),
                                     RealField(grid, f[4]), params, p["z_end"], p["dz"])
            dr = traj.drift()
            drift = max(drift, float(dr[-1]))
            drift_rows.extend((i, z, v) for z, v in zip(traj.z, dr))
    r.add("algebraic_residual", alg < 1e-12, alg, 1e-12)
    r.add("grid_residual", gres < 1e-10, gres, 1e-10)
    if drift_rows:
        r.add("stationary_drift", drift < 1e-3, drift, 1e-3)
    pcs.write_branches_csv(rows, out.path("pcs_branches.csv"))
    _write_rows(out.path("pcs_drift.csv"), ["branch", "z", "drift"], drift_rows)


def _run_wavelet(sc: Scenario, out: _Artifacts):
    p = sc.params
    rng = np.random.Generator(np.random.PCG64(sc.seed))
    f = wavelets.get_filter(p["wavelet"])
    if p["signal_csv"]:
        t, x = read_series_csv(p["signal_csv"])
    else:
        t = np.linspace(-20, 20, p["n"], endpoint=False)
        x = 1.0 / np.cosh(t / p["pulse_width"]) ** 2
        if p["noise"] > 0:
            x = x + p["noise"] * rng.standard_normal(t.size)
    levels = p["levels"] or None
    res = wavelets.dwt_forward(x, f, levels)
    back = wavelets.dwt_inverse(res, f)
    r = out.report
    err = float(np.max(np.abs(back - x)))
    r.add("perfect_reconstruction", err < 1e-10, err, 1e-10)
    e = abs(res.energy() / float(np.sum(x ** 2)) - 1) if np.any(x) else 0.0
    r.add("parseval", e < 1e-10, e, 1e-10)
    comp = wavelets.compress_threshold(res, p["keep_fraction"])
    rec = wavelets.dwt_inverse(comp.result, f)
    measured = float(np.linalg.norm(rec - x))
    gap = abs(measured - comp.l2_error_bound)
    r.add("threshold_error_bound_exact", gap < 1e-10, gap, 1e-10)
    wavelets.write_coefficients_csv(res, out.path("coefficients.csv"))
    _write_rows(out.path("compressed.csv"), ["t", "value"], zip(t, rec))
    dt = float(t[1] - t[0]) if len(t) > 1 else 1.0
    spec = wavelets.wft_spectrogram(x, p["window_width"], p["hop"], dt)
    wavelets.write_spectrogram_csv(spec, out.path("spectrogram.csv"))


RUNNERS = {
    "kdv": _run_kdv, "nls": _run_nls, "wdm": _run_wdm, "collide": _run_collide,
    "squeeze": _run_squeeze, "pcs": _run_pcs, "wavelet": _run_wavelet,
}


def read_series_csv(path) -> Tuple[np.ndarray, np.ndarray]:
    """Two-column ``t,value`` CSV with a header row."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigurationError(f"cannot read series {path}: {exc}") from None
    if not rows or [c.strip() for c in rows[0][:2]] != ["t", "value"]:
        raise ConfigurationError(f"{path}: expected header 't,value'")
    try:
        data = np.array([[float(a), float(b)] for a, b, *_ in rows[1:] if a.strip()])
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if data.size == 0:
        raise ConfigurationError(f"{path}: no samples")
    return data[:, 0], data[:, 1]


def run_scenario(config, out_dir=None) -> RunReport:
    """Execute a scenario (path or :class:`Scenario`) and write its artifacts."""
    sc = config if isinstance(config, Scenario) else load_scenario(config)
    root = Path(out_dir if out_dir is not None else sc.outputs)
    root.mkdir(parents=True, exist_ok=True)
    report = RunReport(sc.name)
    start = time.perf_counter()
    try:
        RUNNERS[sc.kind](sc, _Artifacts(root, report))
    except Exception as exc:
        if hasattr(exc, "args") and exc.args:
            exc.args = (f"scenario {sc.name!r} ({sc.kind}): {exc.args[0]}",) + exc.args[1:]
        raise
    report.wall_time = time.perf_counter() - start
    report_path = root / "report.csv"
    report_path.write_text(emit_report(report, "csv"))
    report.artifact_paths.append(str(report_path))
    return report


# ------------------------------------------------------------------ demos ---

DEMOS = {
    "kdv": """\
# Two KdV solitons: the taller (c=2) starts behind and overtakes the shorter (c=1).
[scenario]
kind = kdv
name = kdv-two-soliton
outputs = out/kdv-two-soliton
seed = 0

[params]
n = 1024
length = 80
x0 = -40
speeds = 2.0, 1.0
centers = -30, -15
t_end = 30
n_snapshots = 30
""",
    "nls": """\
# Chirped NRZ bit pattern in the defocusing regime (beta2 < 0): steepening edges.
[scenario]
kind = nls
name = nrz-shock
outputs = out/nrz-shock
seed = 0

[params]
n = 2048
length = 64
x0 = -32
beta2 = -0.1
nu = 1.0
dz = 0.001
z_end = 0.5
n_snapshots = 5
input = nrz
bits = 0010110010111100
rho0 = 1.0
bit_width = 2.0
rise = 0.25
chirp_amplitude = 2.85
z_star = 0.5
""",
    "wdm": """\
# Two counter-propagating bright solitons in separate channels coupled by XPM.
[scenario]
kind = wdm
name = wdm-collision
outputs = out/wdm-collision
seed = 0

[params]
n = 1024
length = 60
x0 = -30
beta2 = 1.0
nu = 1.0
dz = 0.002
z_end = 10
n_snapshots = 10
offsets = 2.0, -2.0
centers = -10, 10
alpha = 1.0
gamma = 1.0
""",
    "collide": """\
# Reduced collision dynamics in the weak-coupling regime and a gamma_1 sweep.
[scenario]
kind = collide
name = collision-ode
outputs = out/collision-ode
seed = 0

[params]
beta = 0.001, 0.001
gamma = 1.0, 1.0
T0 = 1.0
T1 = 1.0
group_offset = 0.5, -0.5
eps_D = 1.0, 1.0
separation_widths = 10
z_end = 500
gamma1_sweep = 0.25, 1.66
""",
    "squeeze": """\
# Squeezing limits, Bogoliubov variance table and a noisy sech^2 fit.
[scenario]
kind = squeeze
name = squeeze-sweep
outputs = out/squeeze-sweep
seed = 7

[params]
kappa1 = 0, 0.5, 1, 3
kappa2 = 1, 3
gz = 0, 0.5, 1, 2
eta = 0
fit_amplitude = -3
fit_width = 2
noise = 0.01
""",
    "pcs": """\
# Stationary polychromatic branches and their propagation with frozen drivers.
[scenario]
kind = pcs
name = pcs-branches
outputs = out/pcs-branches
seed = 0

[params]
lam = 1
chi1 = 1
chi2 = 1
chi3 = 1
drivers = 6 0 0; 3 3 3; 0 0 0
scale = 1
z_end = 5
dz = 0.005
""",
    "wavelet": """\
# DWT of a noisy sech^2 pulse, hard-threshold compression and a WFT spectrogram.
[scenario]
kind = wavelet
name = wavelet-pulse
outputs = out/wavelet-pulse
seed = 3

[params]
wavelet = coif1
n = 1024
noise = 0.05
keep_fraction = 0.1
window_width = 64
hop = 16
""",
}


def demo_config(kind: str) -> str:
    try:
        return DEMOS[kind]
    except KeyError:
        raise ConfigurationError(f"no demo for kind {kind!r}; choose from {', '.join(KINDS)}") from None
