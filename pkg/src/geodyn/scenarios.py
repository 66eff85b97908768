"""Builtin scenarios and the task runner behind the command line.

A scenario is an ordinary configuration dict (schema geodyn-config-v1); the
builtins below double as format documentation.  run_scenario executes every
task in config order and returns a RunReport; tasks are independent and may
run concurrently, but the report and the CSV artifacts are assembled in
config order so outputs are deterministic.

CSV artifacts carry no timings and format floats with 17 significant digits,
so a rerun with the same config and seed is byte-identical.  Timings go to
the human-readable report only.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .action import (FieldEquationInput, HeatKernelData,
                     field_equation_residual, heat_kernel_coefficients,
                     moments, riemannian_limit_action, spectral_action)
from .config import Scenario, build_scenario, validate_config
from .connection import (ConnectionConstants, HiggsField, SMGaugeConfig,
                         assemble_connection, curvature, gauge_square_report)
from .fields import ChartField
from .geodesics import integrate_geodesic
from .geometry import GeneralizedMetric
from .tensors import Point
from .triples import (check_axioms, fluctuate, fluctuation_space,
                      inner_fluctuations, unimodular_projection)

__all__ = ["TaskResult", "RunReport", "BUILTIN_SCENARIOS", "builtin_config",
           "run_scenario", "format_csv"]


@dataclass
class TaskResult:
    index: int
    task_type: str
    status: str                  # "pass" or "fail"
    tolerance: float
    worst_residual: float
    columns: tuple
    rows: list                   # list of tuples matching columns
    summary: dict = field(default_factory=dict)
    duration: float = 0.0

    @property
    def csv_name(self) -> str:
        return f"{self.index:02d}-{self.task_type}.csv"


@dataclass
class RunReport:
    name: str
    seed: int
    results: list
    duration: float = 0.0

    def all_passed(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def to_text(self) -> str:
        lines = [f"scenario: {self.name}", f"seed: {self.seed}"]
        for r in self.results:
            lines.append(f"task {r.index} [{r.task_type}] {r.status}: "
                         f"worst residual {r.worst_residual:.3e} "
                         f"(tolerance {r.tolerance:.1e}, {r.duration:.2f}s)")
            for key in sorted(r.summary):
                lines.append(f"    {key}: {r.summary[key]}")
        lines.append(f"total wall time: {self.duration:.2f}s")
        lines.append("status: " + ("pass" if self.all_passed() else "fail"))
        return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def format_csv(result: TaskResult) -> str:
    lines = [",".join(result.columns)]
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


# -- task implementations ---------------------------------------------------------


def _default_points(scn: Scenario, task: dict) -> list:
    if task.get("points"):
        return [Point(tuple(p)) for p in task["points"]]
    mid = tuple(0.5 * (l + h) for l, h in zip(scn.region.lo, scn.region.hi))
    return [Point(mid)]


def _run_curvature(scn: Scenario, task: dict) -> dict:
    gm = scn.frame.metric()
    tol = float(task.get("tolerance", 1e-6))
    expected = task.get("expected_scalar")
    rows, worst = [], 0.0
    for p in _default_points(scn, task):
        ct = gm.curvature(p)
        ricci_max = float(np.abs(ct.ricci).max())
        res = abs(ct.scalar - expected) if expected is not None else 0.0
        if task.get("expect_vacuum"):
            res = max(res, ricci_max)
        worst = max(worst, res)
        rows.append(tuple(p.coords) + (ct.scalar, ricci_max,
                                       expected if expected is not None else "",
                                       res))
    cols = tuple(scn.coordinates) + ("ricci_scalar", "ricci_max_abs",
                                     "expected_scalar", "residual")
    return {"columns": cols, "rows": rows, "worst": worst, "tolerance": tol,
            "summary": {"points": len(rows)}}


def _run_geodesic(scn: Scenario, task: dict) -> dict:
    gm = scn.frame.metric()
    steps = int(task.get("steps", 1000))
    h = float(task.get("step_size", 0.01))
    traj = integrate_geodesic(gm, task["start"], task["velocity"],
                              t_max=steps * h, steps=steps)
    tol = float(task.get("tolerance", 1e-6))
    worst = traj.norm_drift
    summary = {"status": traj.status, "norm_drift": traj.norm_drift,
               "steps": steps}
    if "orbit" in task:
        mass = float(task["orbit"]["mass"])
        radius = float(task["orbit"]["radius"])
        omega_sq_ref = mass / radius ** 3
        dt = traj.xs[-1, 0] - traj.xs[0, 0]
        dphi = traj.xs[-1, 3] - traj.xs[0, 3]
        omega_sq = (dphi / dt) ** 2
        orbit_res = abs(omega_sq - omega_sq_ref) / omega_sq_ref
        worst = max(worst, orbit_res * tol / float(task.get(
            "orbit_tolerance", 1e-4)))
        summary.update({"omega_sq": omega_sq, "omega_sq_ref": omega_sq_ref,
                        "orbit_rel_residual": orbit_res})
    stride = max(1, steps // int(task.get("csv_samples", 100)))
    rows = [(i, traj.ts[i]) + tuple(traj.xs[i]) + (traj.norms[i],)
            for i in range(0, len(traj.ts), stride)]
    cols = ("step", "t") + tuple(scn.coordinates) + ("velocity_norm",)
    if traj.status != "ok":
        worst = max(worst, np.inf)
    return {"columns": cols, "rows": rows, "worst": worst, "tolerance": tol,
            "summary": summary}


def _run_action(scn: Scenario, task: dict) -> dict:
    m = moments(scn.cutoff)
    tol = float(task.get("tolerance", 1e-10))
    form = task.get("form", "spectral")
    consts = scn.constants
    if form == "riemannian-limit":
        rep = riemannian_limit_action(
            scn.frame, scn.region, scn.grid, m, connection=scn.connection,
            n_r=float(consts.get("n_r", 1.0)), n_h=float(consts.get("n_h", 1.0)))
    else:
        data = HeatKernelData(metric=scn.frame.metric(),
                              connection=scn.connection,
                              aa_mode=task.get("aa_mode", "metric"),
                              sigma_sq=task.get("sigma_sq"))
        coeffs = heat_kernel_coefficients(data, scn.region, scn.grid)
        rep = spectral_action(
            m, coeffs, sigma_sq=task.get("sigma_sq"),
            connection_constants=(scn.connection.constants
                                  if scn.connection else None),
            higgs_c=(scn.connection.higgs.c if scn.connection else None))
    worst = rep.sum_residual()
    summary = {"total": rep.total, **{k: v for k, v in rep.constants.items()}}
    if "expect_only" in task:
        keep = task["expect_only"]
        stray = max((abs(v[2]) for k, v in rep.terms.items() if k != keep),
                    default=0.0)
        worst = max(worst, stray)
        summary["largest_unexpected_term"] = stray
    rows = [(name,) + tuple(rep.terms[name]) for name in sorted(rep.terms)]
    return {"columns": ("term", "coefficient", "integral", "value"),
            "rows": rows, "worst": worst, "tolerance": tol, "summary": summary}


def _run_field_equations(scn: Scenario, task: dict) -> dict:
    tol = float(task.get("tolerance", 1e-6))
    consts = scn.constants
    inp = FieldEquationInput(
        metric=scn.frame.metric(),
        connection=scn.connection if task.get("sm") else None,
        kappa0=float(task.get("kappa0", 1.0)),
        tau0=float(task.get("tau0", 0.0)),
        f0=float(consts.get("f0", 1.0)),
        n_r=float(consts.get("n_r", 1.0)),
        n_h=float(consts.get("n_h", 1.0)))
    rows, worst = [], 0.0
    for p in _default_points(scn, task):
        res = field_equation_residual(inp, p)
        fd_var = res.fd_report["full_vs_variational"]
        fd_rr = res.fd_report["rr_frozen_vol"]
        sm_fd = res.sm["fd_vs_algebraic"] if res.sm else 0.0
        worst = max(worst, fd_var, fd_rr, sm_fd, res.symmetry_residual)
        rows.append(tuple(p.coords) + (
            fd_rr, fd_var, res.fd_report["full_vs_display"],
            float(np.abs(res.residual_variational).max()),
            float(np.abs(res.residual_display).max()),
            res.symmetry_residual, sm_fd))
    cols = tuple(scn.coordinates) + (
        "fd_rr_frozen_vol", "fd_full_vs_variational", "fd_full_vs_display",
        "residual_variational_max", "residual_display_max",
        "symmetry_residual", "sm_fd_residual")
    if task.get("expect_zero_residual"):
        worst = max(worst, max(max(r[-4], r[-3]) for r in rows))
    return {"columns": cols, "rows": rows, "worst": worst, "tolerance": tol,
            "summary": {"points": len(rows), "sm": bool(res.sm)}}


def _run_axioms(scn: Scenario, task: dict, rng: np.random.Generator) -> dict:
    t = scn.triple
    tol = float(task.get("tolerance", 1e-12))
    report = check_axioms(t)
    rows = [(name, res, True) for name, res in report.residual_items()]
    worst = report.worst()
    summary = {"label": t.label, "dim": t.dim,
               "first_order_claimed": t.first_order_claimed}
    if not t.first_order_claimed:
        rows.append(("first_order", report.first_order, False))
        summary["first_order_unclaimed_residual"] = report.first_order
    if task.get("fluctuations", True) and t.k is not None:
        dim_omega, basis = fluctuation_space(t)
        summary["omega1_dimension"] = dim_omega
        if t.dim in (2,):
            a = rng.standard_normal(2)
            pairs = [(np.diag([a[0], 0]).astype(complex),
                      np.diag([0, a[1]]).astype(complex))]
        else:
            pairs = [(g.astype(complex), h.astype(complex))
                     for g, h in zip(t.algebra_generators,
                                     t.algebra_generators[::-1])]
        fl = inner_fluctuations(t, pairs)
        flucted = fluctuate(t, fl)
        herm = float(np.abs(flucted.d - flucted.d.conj().T).max())
        rows.append(("fluctuated_dirac_hermitian", herm, True))
        proj = unimodular_projection(fl.hermitian())
        trace_res = abs(complex(np.trace(proj.matrix())))
        rows.append(("unimodular_trace", trace_res, True))
        worst = max(worst, herm, trace_res)
    return {"columns": ("axiom", "residual", "claimed"), "rows": rows,
            "worst": worst, "tolerance": tol, "summary": summary}


def _run_limit_check(scn: Scenario, task: dict) -> dict:
    gm = scn.frame.metric()
    gamma_tol = float(task.get("gamma_tolerance", 1e-12))
    riemann_tol = float(task.get("tolerance", 1e-8))
    ref = None
    if "reference" in task:
        from .exprs import compile_expression
        exprs = [[compile_expression(src, scn.coordinates)
                  for src in row] for row in task["reference"]["matrix"]]
        n = scn.dim

        def gfun(c):
            out = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    out[i][j] = exprs[i][j](c)
            return out

        ref = GeneralizedMetric(dim=n, gamma_field=ChartField(
            dim=n, shape=(n, n), func=gfun))
    conn = scn.connection or assemble_connection(
        scn.frame, SMGaugeConfig.zero(scn.dim), HiggsField.zero(scn.dim, c=0.0),
        ConnectionConstants())
    rows, worst = [], 0.0
    for p in _default_points(scn, task):
        f = curvature(conn, p)
        spin_route = f.frame_check
        g_res, r_res = 0.0, 0.0
        if ref is not None:
            g_res = float(np.abs(gm.value(p) - ref.value(p)).max())
            r_res = float(np.abs(gm.curvature(p).riemann
                                 - ref.curvature(p).riemann).max())
        # gamma comparison has its own tighter tolerance; scale it onto the
        # shared residual axis so one pass/fail threshold covers the task
        worst = max(worst, spin_route, r_res,
                    g_res * (riemann_tol / gamma_tol))
        rows.append(tuple(p.coords) + (g_res, r_res, spin_route))
    cols = tuple(scn.coordinates) + ("gamma_vs_reference",
                                     "riemann_vs_reference",
                                     "spin_route_residual")
    return {"columns": cols, "rows": rows, "worst": worst,
            "tolerance": riemann_tol,
            "summary": {"points": len(rows),
                        "gamma_tolerance": gamma_tol}}


def _run_trace_oracle(scn: Scenario, task: dict) -> dict:
    tol = float(task.get("tolerance", 1e-12))
    rows, worst = [], 0.0
    display_worst = 0.0
    for p in _default_points(scn, task):
        f = curvature(scn.connection, p)
        rep = gauge_square_report(f)
        worst = max(worst, rep.q_identity_residual, rep.trace_max)
        display_worst = max(display_worst, rep.v_display_residual,
                            rep.display_residual)
        rows.append(tuple(p.coords) + (
            float(np.real(rep.s_q)), rep.w_sq, rep.q_identity_residual,
            float(np.real(rep.raw_v)), rep.v_display_residual,
            rep.weighted_total, rep.display_total, rep.display_residual,
            rep.trace_max))
    cols = tuple(scn.coordinates) + (
        "q_trace_scalar", "w_component_square", "q_identity_residual",
        "v_trace_scalar", "v_display_residual", "weighted_total",
        "display_total", "display_residual", "unimodular_trace_max")
    return {"columns": cols, "rows": rows, "worst": worst, "tolerance": tol,
            "summary": {"display_agreement_max": display_worst,
                        "verdict": ("display matches the brute-force traces"
                                    if display_worst < 1e-8 else
                                    "display disagrees; trusting the traces")}}


_RUNNERS = {
    "curvature-at-points": _run_curvature,
    "geodesic": _run_geodesic,
    "action": _run_action,
    "field-equations": _run_field_equations,
    "limit-check": _run_limit_check,
    "trace-oracle": _run_trace_oracle,
}


def run_scenario(obj: dict, name: str = "custom", seed: int = 0,
                 grid_override: int | None = None,
                 workers: int = 1) -> RunReport:
    """Validate, build, run every task in config order."""
    diags = validate_config(obj)
    if diags:
        raise ValueError("invalid config:\n" + "\n".join(str(d) for d in diags))
    if grid_override is not None:
        obj = json.loads(json.dumps(obj))
        obj["chart"]["grid"] = [int(grid_override)] * obj["chart"]["dimension"]
    scn = build_scenario(obj)
    started = time.perf_counter()

    def exec_task(item):
        idx, task = item
        t0 = time.perf_counter()
        rng = np.random.default_rng(seed + idx)
        if task["type"] == "axioms":
            out = _run_axioms(scn, task, rng)
        else:
            out = _RUNNERS[task["type"]](scn, task)
        status = "pass" if out["worst"] <= out["tolerance"] else "fail"
        return TaskResult(index=idx, task_type=task["type"], status=status,
                          tolerance=out["tolerance"],
                          worst_residual=float(out["worst"]),
                          columns=out["columns"], rows=out["rows"],
                          summary=out.get("summary", {}),
                          duration=time.perf_counter() - t0)

    items = list(enumerate(scn.tasks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(exec_task, items))
    else:
        results = [exec_task(it) for it in items]
    return RunReport(name=name, seed=seed, results=results,
                     duration=time.perf_counter() - started)


# -- builtin scenarios --------------------------------------------------------------


def _flat_empty() -> dict:
    return {
        "schema": "geodyn-config-v1",
        "chart": {"dimension": 4, "signature": "lorentzian",
                  "box": {"lo": [0, 0, 0, 0], "hi": [1, 1, 1, 1]},
                  "grid": [3, 3, 3, 3],
                  "periodic": [False, False, False, False]},
        "frame": {"builtin": "flat"},
        "cutoff": {"builtin": "sharp-cutoff", "scale_sq": 1.0},
        "tasks": [
            {"type": "curvature-at-points",
             "points": [[0.1, 0.2, 0.3, 0.4], [0.9, 0.5, 0.1, 0.7]],
             "expected_scalar": 0.0, "expect_vacuum": True,
             "tolerance": 1e-12},
            {"type": "action", "form": "riemannian-limit",
             "expect_only": "delta0_volume", "tolerance": 1e-12},
            {"type": "field-equations", "expect_zero_residual": True,
             "points": [[0.5, 0.5, 0.5, 0.5]], "tolerance": 1e-12},
        ],
    }


def _sphere2() -> dict:
    return {
        "schema": "geodyn-config-v1",
        "chart": {"dimension": 2, "signature": "euclidean",
                  "coordinates": ["theta", "phi"],
                  "box": {"lo": [0.05, 0.0],
                          "hi": [3.0915926535897933, 6.283185307179586]},
                  "grid": [33, 17], "periodic": [False, True]},
        "frame": {"builtin": "sphere2", "parameters": {"radius": 1.0}},
        "cutoff": {"builtin": "exponential", "scale_sq": 1.0},
        "tasks": [
            {"type": "curvature-at-points",
             "points": [[0.6, 0.0], [1.0, 1.0], [1.5707963267948966, 2.0],
                        [2.2, 4.0], [2.9, 5.5]],
             "expected_scalar": 2.0, "tolerance": 1e-6},
            {"type": "geodesic",
             "start": [1.5707963267948966, 0.0], "velocity": [0.0, 1.0],
             "steps": 2000, "step_size": 0.005, "tolerance": 1e-6},
            {"type": "limit-check",
             "points": [[0.7, 0.3], [1.2, 2.5], [2.0, 5.0]],
             "reference": {"matrix": [["1", "0"], ["0", "sin(theta)^2"]]},
             "tolerance": 1e-8, "gamma_tolerance": 1e-12},
        ],
    }


def _sm_trace_check() -> dict:
    return {
        "schema": "geodyn-config-v1",
        "chart": {"dimension": 4, "signature": "lorentzian",
                  "coordinates": ["t", "x", "y", "z"],
                  "box": {"lo": [0, 0, 0, 0], "hi": [1, 1, 1, 1]},
                  "grid": [3, 3, 3, 3]},
        "frame": {"builtin": "flat"},
        "gauge": {
            "b": ["0.3*x", "0.1*y^2", "-0.2*t", "0.05*x*z"],
            "w": [["0", "0.2*y", "0", "0"],
                  ["0", "0", "-0.15*t", "0.1*x"],
                  ["0.05*z", "0", "0", "0.1*x^2"]],
            "g": [["0.1*z", "0", "0", "0"], ["0", "0.2*y", "0", "0"],
                  ["0", "0", "0", "0.1*t"], ["0", "0.15*x", "0", "0"],
                  ["0", "0", "0.05*y", "0"], ["0.1*x", "0", "0", "0"],
                  ["0", "0", "-0.1*t*x", "0"], ["0", "0", "0", "0.2*z"]],
            "couplings": {"g1": 0.8, "g2": 1.1, "g3": 1.3},
        },
        "higgs": {"x": "0.4 + 0.1*t", "y": "0.2*x", "c": 0.9, "alpha": 1.0},
        "tasks": [
            {"type": "trace-oracle",
             "points": [[0.3, 0.7, -0.2, 0.5], [0.0, 0.1, 0.2, 0.3],
                        [0.8, -0.4, 0.6, -0.1]],
             "tolerance": 1e-12},
            {"type": "field-equations", "sm": True,
             "points": [[0.3, 0.7, -0.2, 0.5]], "tolerance": 1e-6},
        ],
    }


def _schwarzschild_geodesic() -> dict:
    # circular orbit at r = 6m: u^t = 1/sqrt(1 - 3m/r), u^phi = u^t sqrt(m/r^3)
    ut = 1.4142135623730951
    uphi = 0.09622504486493764
    return {
        "schema": "geodyn-config-v1",
        "chart": {"dimension": 4, "signature": "lorentzian",
                  "coordinates": ["t", "r", "theta", "phi"],
                  "box": {"lo": [0.0, 4.0, 0.5, 0.0],
                          "hi": [10.0, 10.0, 2.6, 6.283185307179586]},
                  "grid": [3, 5, 5, 5]},
        "frame": {"builtin": "schwarzschild", "parameters": {"mass": 1.0}},
        "tasks": [
            {"type": "curvature-at-points",
             "points": [[0.0, 5.0, 1.2, 0.3], [1.0, 7.5, 0.8, 2.0],
                        [2.0, 6.0, 1.5707963267948966, 4.0]],
             "expected_scalar": 0.0, "expect_vacuum": True,
             "tolerance": 1e-6},
            {"type": "geodesic",
             "start": [0.0, 6.0, 1.5707963267948966, 0.0],
             "velocity": [ut, 0.0, 0.0, uphi],
             "steps": 10000, "step_size": 0.01,
             "orbit": {"mass": 1.0, "radius": 6.0},
             "tolerance": 1e-6, "orbit_tolerance": 1e-4},
        ],
    }


def _riemannian_limit() -> dict:
    return {
        "schema": "geodyn-config-v1",
        "chart": {"dimension": 4, "signature": "lorentzian",
                  "coordinates": ["t", "r", "theta", "phi"],
                  "box": {"lo": [0.0, 4.0, 0.6, 0.0],
                          "hi": [1.0, 9.0, 2.5, 6.28]},
                  "grid": [3, 5, 5, 5]},
        "frame": {"builtin": "schwarzschild", "parameters": {"mass": 1.0}},
        "tasks": [
            {"type": "limit-check",
             "points": [[0.0, 5.0, 1.1, 0.3], [0.5, 6.5, 1.9, 2.0],
                        [1.0, 8.0, 0.8, 5.0]],
             "reference": {"matrix": [
                 ["-(1 - 2/r)", "0", "0", "0"],
                 ["0", "1/(1 - 2/r)", "0", "0"],
                 ["0", "0", "r^2", "0"],
                 ["0", "0", "0", "r^2 * sin(theta)^2"]]},
             "tolerance": 1e-8, "gamma_tolerance": 1e-12},
        ],
    }


def _two_point_axioms() -> dict:
    return {
        "schema": "geodyn-config-v1",
        "chart": {"dimension": 2, "signature": "euclidean",
                  "box": {"lo": [0, 0], "hi": [1, 1]}, "grid": [3, 3]},
        "frame": {"builtin": "polar"},
        "finite_triple": {"builtin": "two-point", "parameters": {"m": 1.3}},
        "tasks": [
            {"type": "axioms", "fluctuations": True, "tolerance": 1e-12},
        ],
    }


BUILTIN_SCENARIOS = {
    "flat-empty": _flat_empty,
    "sphere2": _sphere2,
    "sm-trace-check": _sm_trace_check,
    "schwarzschild-geodesic": _schwarzschild_geodesic,
    "riemannian-limit": _riemannian_limit,
    "two-point-axioms": _two_point_axioms,
}


def builtin_config(name: str) -> dict:
    if name not in BUILTIN_SCENARIOS:
        raise KeyError(f"unknown builtin scenario {name!r}; known: "
                       f"{', '.join(sorted(BUILTIN_SCENARIOS))}")
    return BUILTIN_SCENARIOS[name]()
