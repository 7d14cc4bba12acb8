"""Experiment drivers behind the CLI subcommands.

Each driver is a pure-ish function from a validated RunConfig to an outcome
object holding rows ready for serialization plus an exit code, so the CLI
stays a thin argparse/IO shell and tests can exercise the drivers directly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import GnAuditBlock, RunConfig
from .diagnostics import CaseRecord, case_report
from .dynamics import (BlowupGuardError, NonFiniteError, SimConfig, Trajectory,
                       pde_residual, simulate)
from .functionals import ConservedReport, conserved_report, mu
from .gauge import gauge_profile, gauge_trajectory
from .gn import (CGN, field_norms, gn0_extension_record, gn1_record,
                 mass_threshold)
from .grid import Spectrum, TorusGrid
from .initial_data import DataSpec, build

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOWUP = 2
EXIT_NONFINITE = 3
EXIT_GN_VIOLATION = 4
EXIT_VERIFICATION = 5

GAUGE_BETA = 0.75

GN_AUDIT_COLUMNS = ("field_id", "L", "delta", "lhs", "rhs", "slack", "satisfied",
                    "flap_l2grad", "flap_l4", "flap_l6")
SCAN_COLUMNS = ("L", "delta", "mass_fraction", "mass", "threshold",
                "below_threshold", "max_h1dot", "h1dot_ratio", "drift_M",
                "drift_P", "drift_Ecal", "n_case1", "n_case2", "n_violations",
                "exit_reason")
GAUGE_CHECK_COLUMNS = ("t", "discrepancy", "residual")


def grid_of(cfg: RunConfig) -> TorusGrid:
    return TorusGrid(cfg.grid.L, cfg.grid.N)


def drift_stats(reports: list[ConservedReport]) -> dict[str, float]:
    """Max drift per conserved column, relative to max(|X(0)|, 1e-9).

    The floor keeps the ratio meaningful when a conserved value sits at
    roundoff zero (e.g. the energy of a unit plane wave).
    """
    out = {}
    first = reports[0]
    for name in ("M", "H", "E", "P", "mu", "Ecal"):
        x0 = getattr(first, name)
        worst = max(abs(getattr(r, name) - x0) for r in reports)
        out[name] = worst / max(abs(x0), 1e-9)
    return out


def initial_values(reports: list[ConservedReport]) -> dict[str, float]:
    first = reports[0]
    return {name: getattr(first, name)
            for name in ("M", "H", "E", "P", "mu", "Ecal")}


def diagnostics_rows(records: list[CaseRecord]) -> list[tuple]:
    rows = []
    for rec in records:
        s = rec.sample
        rows.append((s.t, s.l4, s.l6, s.h1dot, s.f, s.gamma, s.eta,
                     s.lower_bound_f, s.holder_upper, s.alpha, s.case_tag))
    return rows


@dataclass
class SimOutcome:
    traj: Trajectory | None
    reports: list[ConservedReport]
    drifts: dict[str, float]
    exit_code: int
    exit_reason: str
    guard_time: float | None = None


def run_simulation(cfg: RunConfig) -> SimOutcome:
    """Simulate the configured equation from the configured data."""
    grid = grid_of(cfg)
    u0 = build(cfg.data, grid)
    try:
        traj = simulate(u0, cfg.sim)
        code, reason, guard_t = EXIT_OK, "ok", None
    except BlowupGuardError as e:
        traj, code, reason, guard_t = e.partial, EXIT_BLOWUP, "blowup-guard", e.t
    except NonFiniteError as e:
        traj, code, reason, guard_t = e.partial, EXIT_NONFINITE, "non-finite", e.t
    reports = [conserved_report(f, t) for t, f in traj.frames]
    return SimOutcome(traj, reports, drift_stats(reports), code, reason, guard_t)


@dataclass
class GaugeCheckOutcome:
    rows: list[tuple]
    max_discrepancy: float
    max_residual: float | None
    tolerance: float
    exit_code: int
    exit_reason: str


def run_gauge_check(cfg: RunConfig) -> GaugeCheckOutcome:
    """Evolve the ungauged flow, gauge the trajectory, evolve the gauged flow
    from the gauged initial data, and compare frame by frame."""
    grid = grid_of(cfg)
    beta = cfg.gauge_check.beta
    u0 = build(cfg.data, grid)
    sim_u = replace(cfg.sim, equation="dnls1")
    sim_v = replace(cfg.sim, equation="dnls2", beta=beta)
    try:
        traj_u = simulate(u0, sim_u)
        traj_v = simulate(gauge_profile(u0, beta), sim_v)
    except BlowupGuardError:
        return GaugeCheckOutcome([], math.inf, None, cfg.gauge_check.tolerance,
                                 EXIT_BLOWUP, "blowup-guard")
    except NonFiniteError:
        return GaugeCheckOutcome([], math.inf, None, cfg.gauge_check.tolerance,
                                 EXIT_NONFINITE, "non-finite")
    gauged = gauge_trajectory(traj_u, beta)

    discrepancies = []
    for (t_g, vg), (t_s, vs) in zip(gauged.frames, traj_v.frames):
        diff = vg.values - vs.values
        discrepancies.append(math.sqrt(float(np.sum(np.abs(diff) ** 2)) * grid.dx))
    residuals = [None] * len(gauged.frames)
    if len(gauged.frames) >= 3:
        mu0 = mu(traj_u.frames[0][1])
        inner = pde_residual(gauged, "dnls2", beta, mu0, cfg.sim.dealias)
        for i, r in enumerate(inner):
            residuals[i + 1] = float(r)
    rows = [(t, d, r) for (t, _), d, r in zip(gauged.frames, discrepancies, residuals)]
    max_disc = max(discrepancies)
    max_res = max((r for r in residuals if r is not None), default=None)
    ok = max_disc < cfg.gauge_check.tolerance
    return GaugeCheckOutcome(rows, max_disc, max_res, cfg.gauge_check.tolerance,
                             EXIT_OK if ok else EXIT_VERIFICATION,
                             "ok" if ok else "verification-failed")


def audit_coefficients(block: GnAuditBlock) -> list[np.ndarray]:
    """Deterministic corpus of random band-limited spectra, FFT order, length
    block.N; one entry per field id (the zero field, when included, is id 0
    and prepended)."""
    rng = np.random.default_rng(block.seed)
    band = min(block.max_mode, block.N // 3)
    envelope_scale = max(2.0, band / 3.0)
    coeffs = []
    if block.include_zero_field:
        coeffs.append(np.zeros(block.N, dtype=np.complex128))
    for _ in range(block.num_fields):
        c = np.zeros(block.N, dtype=np.complex128)
        scale = 10.0 ** rng.uniform(-1.0, 1.0)
        for m in range(-band, band + 1):
            z = rng.standard_normal() + 1j * rng.standard_normal()
            c[m % block.N] = scale * z * math.exp(-abs(m) / envelope_scale)
        coeffs.append(c)
    return coeffs


@dataclass
class GnAuditOutcome:
    rows: list[tuple]
    n_violations: int
    exit_code: int
    exit_reason: str


def run_gn_audit(block: GnAuditBlock) -> GnAuditOutcome:
    """Audit the periodic inequality, the line inequality on the flap
    extension, and the enlargement chain between their right sides, for every
    (field, L, delta) combination.

    corrupt_constant multiplies the sharp constant inside the audited bounds
    only (a fault-injection hook; 1.0 in production)."""
    constant = CGN * block.corrupt_constant
    rows = []
    n_violations = 0
    corpus = audit_coefficients(block)
    for L in block.L_values:
        grid = TorusGrid(L, block.N)
        for field_id, c in enumerate(corpus):
            norms = field_norms(Spectrum(grid, c).field())
            for delta in block.delta_values:
                rec1 = gn1_record(norms, delta, constant)
                rec0, prof = gn0_extension_record(norms, delta, constant)
                chain_ok = rec0.rhs <= rec1.rhs * (1.0 + 1e-12)
                ok = rec1.satisfied and rec0.satisfied and chain_ok
                if not ok:
                    n_violations += 1
                rows.append((field_id, L, delta, rec1.lhs, rec1.rhs, rec1.slack,
                             ok, prof.flap_l2grad, prof.flap_l4, prof.flap_l6))
    code = EXIT_OK if n_violations == 0 else EXIT_GN_VIOLATION
    return GnAuditOutcome(rows, n_violations,
                          code, "ok" if code == EXIT_OK else "gn-violations")


@dataclass(frozen=True)
class ScanTask:
    L: float
    delta: float
    dt: float
    N: int
    mass_fraction: float
    target_mass: float
    sim: SimConfig
    data: DataSpec


@dataclass
class ScanRunResult:
    task: ScanTask
    summary_row: tuple
    diagnostics: list[tuple]
    exit_code: int


def _scan_frame_stride(n_steps: int) -> int:
    # about 100 recorded frames regardless of dt
    return max(1, n_steps // 100)


def run_scan_task(task: ScanTask) -> ScanRunResult:
    grid = TorusGrid(task.L, task.N)
    u0 = build(replace(task.data, target_mass=task.target_mass), grid)
    v0 = gauge_profile(u0, GAUGE_BETA)
    n_steps = max(1, math.ceil(task.sim.T / task.dt - 1e-9))
    sim = replace(task.sim, equation="dnls2", beta=GAUGE_BETA, dt=task.dt,
                  record_stride=_scan_frame_stride(n_steps))
    threshold = mass_threshold(task.L, task.delta)
    below = task.target_mass < threshold

    exit_code, reason = EXIT_OK, "ok"
    try:
        traj = simulate(v0, sim)
    except BlowupGuardError as e:
        traj, exit_code, reason = e.partial, EXIT_BLOWUP, "blowup-guard"
    except NonFiniteError as e:
        traj, exit_code, reason = e.partial, EXIT_NONFINITE, "non-finite"

    reports = [conserved_report(f, t) for t, f in traj.frames]
    drifts = drift_stats(reports)
    records = case_report(traj, task.delta, reports[0])
    h1 = [r.sample.h1dot for r in records if not math.isnan(r.sample.f)]
    max_h1 = max(h1) if h1 else 0.0
    h1_0 = records[0].sample.h1dot if records else 0.0
    ratio = max_h1 / h1_0 if h1_0 > 0 else math.inf if max_h1 > 0 else 0.0
    n_violations = sum(1 for r in records if r.flagged)
    if n_violations and exit_code == EXIT_OK:
        exit_code, reason = EXIT_VERIFICATION, "bound-chain-violation"
    n_case1 = sum(1 for r in records if r.sample.case_tag == "case1")
    n_case2 = sum(1 for r in records if r.sample.case_tag == "case2")
    row = (task.L, task.delta, task.mass_fraction, task.target_mass, threshold,
           below, max_h1, ratio, drifts["M"], drifts["P"], drifts["Ecal"],
           n_case1, n_case2, n_violations, reason)
    return ScanRunResult(task, row, diagnostics_rows(records), exit_code)


@dataclass
class ScanOutcome:
    results: list[ScanRunResult]
    exit_code: int
    exit_reason: str


def run_threshold_scan(cfg: RunConfig, jobs: int = 1) -> ScanOutcome:
    """Run the gauged simulation for every (pair, mass fraction) and collect
    per-frame diagnostics.

    Exit is nonzero only when a BELOW-threshold run violates the bound chain
    (or its numerics fail); above-threshold rows are reported but never gate.
    """
    tasks = []
    for pair in cfg.threshold_scan.pairs:
        threshold = mass_threshold(pair.L, pair.delta)
        for frac in cfg.threshold_scan.mass_fractions:
            tasks.append(ScanTask(
                L=pair.L, delta=pair.delta,
                dt=pair.dt if pair.dt is not None else cfg.sim.dt,
                N=pair.N if pair.N is not None else cfg.grid.N,
                mass_fraction=frac, target_mass=frac * threshold,
                sim=cfg.sim, data=cfg.data))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_scan_task, tasks))
    else:
        results = [run_scan_task(t) for t in tasks]

    exit_code, reason = EXIT_OK, "ok"
    for res in results:
        below = res.task.target_mass < mass_threshold(res.task.L, res.task.delta)
        if below and res.exit_code != EXIT_OK:
            exit_code, reason = res.exit_code, res.summary_row[-1]
            break
    return ScanOutcome(results, exit_code, reason)


@dataclass
class DiagnoseOutcome:
    records: list[CaseRecord]
    reports: list[ConservedReport]
    drifts: dict[str, float]
    n_violations: int
    exit_code: int
    exit_reason: str


def run_diagnose(cfg: RunConfig) -> DiagnoseOutcome:
    """Produce the per-frame proof diagnostics of a beta = 3/4 gauged
    trajectory of the configured data.

    The configured data is always the ungauged initial state: with equation
    dnls1 the trajectory is simulated then gauged, with dnls2 the gauged flow
    is simulated from the gauged data directly.
    """
    grid = grid_of(cfg)
    u0 = build(cfg.data, grid)
    exit_code, reason = EXIT_OK, "ok"
    gauge_after = cfg.sim.equation == "dnls1"
    try:
        if gauge_after:
            traj = simulate(u0, cfg.sim)
        else:
            traj = simulate(gauge_profile(u0, GAUGE_BETA),
                            replace(cfg.sim, beta=GAUGE_BETA))
    except BlowupGuardError as e:
        traj, exit_code, reason = e.partial, EXIT_BLOWUP, "blowup-guard"
    except NonFiniteError as e:
        traj, exit_code, reason = e.partial, EXIT_NONFINITE, "non-finite"
    vtraj = gauge_trajectory(traj, GAUGE_BETA) if gauge_after else traj

    reports = [conserved_report(f, t) for t, f in vtraj.frames]
    records = case_report(vtraj, cfg.delta, reports[0])
    n_violations = sum(1 for r in records if r.flagged)
    if n_violations and exit_code == EXIT_OK:
        exit_code, reason = EXIT_VERIFICATION, "bound-chain-violation"
    return DiagnoseOutcome(records, reports, drift_stats(reports), n_violations,
                           exit_code, reason)
