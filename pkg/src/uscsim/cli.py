"""Command-line interface: subcommands, figure presets, CSV/JSON emission.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure, 4 I/O
failure.  Failures print a machine-readable JSON object to stderr.  A given
configuration always produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import pi, sqrt

import numpy as np

from . import approx, decoherence, dynamics, nonclassical, serialize, spectrum
from .hilbert import (HBAR, FockTruncation, SystemParams, TruncationError,
                      build_hamiltonian, choose_truncation)
from .presets import FIGURE_PRESETS
from .spectrum import EigensolverError, diagonalize

NUMERICAL_ERRORS = (EigensolverError, TruncationError, approx.RegimeError,
                    dynamics.PropagationError, FloatingPointError,
                    np.linalg.LinAlgError)

EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 2, 3, 4


class ConfigError(ValueError):
    pass


# -- config assembly -----------------------------------------------------------

def _params_from(config: dict) -> SystemParams:
    pr = config["params"]
    return SystemParams(delta=pr["delta"], eps=pr.get("eps", 0.0),
                        omega0=pr.get("omega0", 1.0), lam=pr.get("lam", 0.0),
                        mass=pr.get("mass", 1.0))


def _truncation(config: dict, p: SystemParams, levels: int) -> FockTruncation:
    tr = config.get("truncation") or {}
    tol = tr.get("tol", 1e-10)
    if tr.get("n_max"):
        return FockTruncation(n_max=int(tr["n_max"]), convergence_tol=tol)
    return choose_truncation(p, levels, convergence_tol=tol)


def _lambda_grid(scan: dict) -> np.ndarray:
    steps = int(scan.get("lam_steps", 61))
    if steps < 2:
        raise ConfigError("scan needs at least 2 steps")
    lo, hi = float(scan["lam_min"]), float(scan["lam_max"])
    if not lo < hi:
        raise ConfigError("scan requires lam_min < lam_max")
    return np.linspace(lo, hi, steps)


def _base_meta(config: dict, p: SystemParams | None = None) -> dict:
    meta = {"generator": "uscsim " + config["subcommand"]}
    if config.get("figure"):
        meta["figure"] = config["figure"]
    if p is not None:
        meta["theta"] = p.theta
        meta["omega0_over_eq"] = p.omega0 / p.e_q
    return meta


# -- subcommand handlers (config -> (text, default_extension)) -----------------

def _cmd_spectrum(config: dict):
    p = _params_from(config)
    scan = config["scan"]
    levels = int(scan.get("levels", 10))
    grid = _lambda_grid(scan)
    trunc = _truncation(config, p.with_lam(float(grid[-1])), levels)
    table = spectrum.level_curves(p, grid, levels=levels,
                                  unit=scan.get("unit", "omega0"), trunc=trunc,
                                  threads=config.get("_threads", 1))
    meta = _base_meta(config, p)
    meta.update({"unit": table.metadata["unit"], "n_max": table.metadata["n_max"],
                 "config": config})
    columns = ["lambda"] + [f"E{i}" for i in table.level_index]
    rows = [(lam, *table.energy_matrix[i]) for i, lam in enumerate(table.lambda_grid)]
    return serialize.csv_text(meta, columns, rows), "csv"


def _cmd_splitting(config: dict):
    scan = config["scan"]
    grid = _lambda_grid(scan)
    unit = scan.get("unit", "omega0")
    threads = config.get("_threads", 1)
    pr = config["params"]
    if "thetas" in pr:
        e_q = pr.get("e_q", 1.0)
        pair = int(scan.get("pair", 0))
        columns = ["theta", "lambda", "splitting", "floored"]
        rows = []
        meta_p = None
        for theta in pr["thetas"]:
            p = SystemParams(delta=e_q * np.cos(theta), eps=e_q * np.sin(theta),
                             omega0=pr.get("omega0", 1.0))
            meta_p = meta_p or p
            split = spectrum.pair_splitting(p, grid, pair, unit=unit, threads=threads)
            rows.extend((theta, lam, s, s == 0.0) for lam, s in zip(grid, split))
        meta = _base_meta(config, meta_p)
    elif "pairs" in scan:
        p = _params_from(config)
        pairs = [int(n) for n in scan["pairs"]]
        splits = [spectrum.pair_splitting(p, grid, n, unit=unit, threads=threads)
                  for n in pairs]
        columns = ["lambda"] + [f"s_n{n}" for n in pairs]
        rows = [(lam, *[s[i] for s in splits]) for i, lam in enumerate(grid)]
        meta = _base_meta(config, p)
    else:
        p = _params_from(config)
        pair = int(scan.get("pair", 0))
        split = spectrum.pair_splitting(p, grid, pair, unit=unit, threads=threads)
        columns = ["lambda", "splitting", "floored"]
        rows = [(lam, s, s == 0.0) for lam, s in zip(grid, split)]
        meta = _base_meta(config, p)
    meta.update({"unit": unit, "config": config})
    return serialize.csv_text(meta, columns, rows), "csv"


def _phase_space(config: dict, kind: str):
    p = _params_from(config)
    scan = config.get("scan") or {}
    points = int(scan.get("grid_points", 201))
    trunc = _truncation(config, p, 2)
    state = nonclassical.ground_state(p, trunc)
    rho = nonclassical.reduce(state, "oscillator")
    if "grid_half" in scan:
        half = float(scan["grid_half"])
        x = np.linspace(-half, half, points)
        pg = x.copy()
    else:
        x, pg = nonclassical.default_grid(p, points)
    if kind == "Q":
        fld = nonclassical.q_function(rho, x, pg)
    else:
        fld = nonclassical.wigner_function(rho, x, pg)
    if config.get("format") == "json":
        report = {
            "config": config,
            "kind": fld.kind,
            "n_max": trunc.n_max,
            "integral": fld.integral(),
            "x_grid": x.tolist(),
            "p_grid": pg.tolist(),
            "values": fld.values.tolist(),
        }
        return serialize.dumps_json(report), "json"
    meta = _base_meta(config, p)
    meta.update({"kind": fld.kind, "n_max": trunc.n_max,
                 "grid_points": points, "integral": fld.integral(),
                 "config": config})
    rows = ((x[i], pg[j], fld.values[i, j])
            for i in range(x.size) for j in range(pg.size))
    return serialize.csv_text(meta, ["X", "P", "value"], rows), "csv"


def _cmd_qfunc(config: dict):
    return _phase_space(config, "Q")


def _cmd_wigner(config: dict):
    return _phase_space(config, "Wigner")


def _scan_rows(p_base: SystemParams, eps_values, grid, threads: int):
    """Rows (eps_over_delta, lambda, s_x, s_p, K, S) over a coupling grid."""
    jobs = [(eps, float(lam)) for eps in eps_values for lam in grid]

    def solve(job):
        eps, lam = job
        p = p_base.with_eps(eps).with_lam(lam)
        state = nonclassical.ground_state(p)
        rho = nonclassical.reduce(state, "oscillator")
        rep = nonclassical.squeezing(rho, p)
        s_ent = nonclassical.entanglement_entropy(state)
        return (eps / p_base.delta, lam, rep.s_x, rep.s_p, rep.k_product, s_ent)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(solve, jobs))
    return [solve(job) for job in jobs]


def _squeeze_entropy_scan(config: dict):
    p = _params_from(config)
    pr = config["params"]
    eps_fracs = pr.get("eps_fracs")
    eps_values = ([f * p.delta for f in eps_fracs] if eps_fracs is not None
                  else [p.eps])
    grid = _lambda_grid(config["scan"])
    rows = _scan_rows(p, eps_values, grid, config.get("_threads", 1))
    meta = _base_meta(config, p)
    meta.update({"config": config})
    columns = ["eps_over_delta", "lambda", "s_x", "s_p", "K", "S"]
    return serialize.csv_text(meta, columns, rows), "csv"


def _cmd_squeezing(config: dict):
    return _squeeze_entropy_scan(config)


def _cmd_entropy(config: dict):
    if config.get("scan"):
        return _squeeze_entropy_scan(config)
    p = _params_from(config)
    trunc = _truncation(config, p, 2)
    sol = diagonalize(build_hamiltonian(p, trunc), 2, params=p)
    state = nonclassical.ground_state(p, trunc)
    report = {
        "config": config,
        "S": nonclassical.entanglement_entropy(state),
        "E1": float(sol.energies[0]),
        "E2": float(sol.energies[1]),
        "E2_minus_E1": float(sol.energies[1] - sol.energies[0]),
        "n_max": trunc.n_max,
    }
    return serialize.dumps_json(report), "json"


def _cmd_onset(config: dict):
    pr = config["params"]
    scan = config.get("scan") or {}
    if "ratio_min" in scan:
        ratios = np.geomspace(float(scan["ratio_min"]), float(scan["ratio_max"]),
                              int(scan.get("ratio_points", 9)))
        targets = pr.get("targets", [0.1, 0.5])
        rows = []
        for ratio in ratios:
            delta = 1.0 / ratio
            p = SystemParams(delta=delta, omega0=1.0)
            for target in targets:
                lam = nonclassical.onset_coupling(p, float(target))
                rows.append((ratio, target, lam, lam / delta,
                             0.5 * sqrt(HBAR * 1.0 * p.e_q) / delta, 1.0 / delta))
        meta = _base_meta(config)
        meta.update({"config": config})
        columns = ["omega0_over_delta", "target", "lam_onset", "lam_over_delta",
                   "line_sqrt_over_delta", "line_omega0_over_delta"]
        return serialize.csv_text(meta, columns, rows), "csv"
    p = _params_from(config)
    target = float(pr.get("target", 0.5))
    lam = nonclassical.onset_coupling(p, target)
    report = {
        "config": config,
        "target": target,
        "lam_onset": lam,
        "prediction_sqrt": 0.5 * sqrt(HBAR * p.omega0 * p.e_q),
        "critical_coupling": approx.critical_coupling(p),
    }
    return serialize.dumps_json(report), "json"


def _cmd_semiclassical(config: dict):
    p = _params_from(config)
    sols = approx.semiclassical_stationary_points(p)
    report = {
        "config": config,
        "solutions": [{
            "sigma_z": s.sigma_z, "sigma_x": s.sigma_x, "x": s.x, "p": s.p,
            "energy": s.energy, "stability": s.stability,
            "branch_sign": s.branch_sign, "is_ground_branch": s.is_ground_branch,
        } for s in sols],
    }
    return serialize.dumps_json(report), "json"


def _cmd_adiabatic_qubit(config: dict):
    p = _params_from(config)
    report = {"config": config}
    for branch in ("ground", "excited"):
        rep = approx.adiabatic_qubit_analysis(p, branch=branch)
        report[branch] = {
            "omega_tilde_sq": rep.omega_tilde_sq,
            "is_supercritical": rep.is_supercritical,
            "lambda_c": rep.lambda_c,
            "regime_ok": rep.regime_ok,
            "shifted_minimum": rep.shifted_minimum,
            "x0": rep.x0,
            "v_min": rep.v_min,
            "curvature_at_min": rep.curvature_at_min,
            "wkb_splitting": rep.wkb_splitting,
            "epsilon_localization_threshold": rep.epsilon_localization_threshold,
        }
    return serialize.dumps_json(report), "json"


def _cmd_renorm_gap(config: dict):
    p = _params_from(config)
    n = int(config["params"].get("n", 0))
    scan = config.get("scan")
    if scan:
        grid = _lambda_grid(scan)
        rows = [(lam, approx.renormalized_gap(p.with_lam(float(lam)), n))
                for lam in grid]
        meta = _base_meta(config, p)
        meta.update({"n": n, "config": config})
        return serialize.csv_text(meta, ["lambda", "delta_tilde"], rows), "csv"
    report = {"config": config, "n": n,
              "delta_tilde": approx.renormalized_gap(p, n)}
    return serialize.dumps_json(report), "json"


def _cmd_wkb(config: dict):
    p = _params_from(config)
    rep = approx.adiabatic_qubit_analysis(p, branch="ground")
    if not rep.is_supercritical:
        raise approx.RegimeError("WKB splitting requested below the critical point")
    report = {
        "config": config,
        "x0": rep.x0,
        "v_min": rep.v_min,
        "curvature_at_min": rep.curvature_at_min,
        "omega_well": sqrt(max(rep.curvature_at_min, 0.0) / p.mass),
        "wkb_splitting": rep.wkb_splitting,
        "lambda_c": rep.lambda_c,
    }
    return serialize.dumps_json(report), "json"


def _cmd_rates(config: dict):
    p = _params_from(config)
    pr = config["params"]
    channel = pr.get("channel", "sigma_z")
    s0 = float(pr.get("s0", 1.0))
    i, j = int(pr.get("i", 1)), int(pr.get("j", 0))
    trunc = _truncation(config, p, max(i, j) + 1)
    eigs = diagonalize(build_hamiltonian(p, trunc), max(i, j) + 1, params=p)
    ch = decoherence.NoiseChannel(channel, s0)
    pair = decoherence.rates(eigs, ch, i, j)
    report = {
        "config": config,
        "channel": channel, "i": i, "j": j,
        "relaxation": pair.relaxation,
        "dephasing": pair.dephasing,
        "element_sq": pair.matrix_element_sq,
        "diag_difference_sq": pair.diag_difference_sq,
        "S_at_gap": pair.s_at_gap,
        "S0": pair.s_zero,
    }
    return serialize.dumps_json(report), "json"


def _cmd_sweep(config: dict):
    p = _params_from(config)
    sw = config["sweep"]
    schedule = dynamics.SweepSchedule(
        eps_start=float(sw.get("eps_start", 0.0)),
        eps_end=float(sw["eps_end"]),
        duration=float(sw["duration"]),
        shape=sw.get("shape", "linear"),
        steps=int(sw.get("steps", 128)),
    )
    trunc = _truncation(config, p.with_eps(schedule.eps_start), 2)
    traj = dynamics.sweep_trajectory(p, schedule, trunc,
                                     samples=int(sw.get("samples", 41)))
    meta = _base_meta(config, p)
    meta.update({"n_max": trunc.n_max, "config": config})
    columns = ["t", "eps", "ground_fidelity", "qubit_purity", "mean_X"]
    rows = zip(traj["t"], traj["eps"], traj["ground_fidelity"],
               traj["qubit_purity"], traj["mean_x"])
    csv = serialize.csv_text(meta, columns, rows), "csv"
    if not config.get("report"):
        return csv
    result = dynamics.run_protocol(p, schedule, trunc=trunc)
    report = {
        "config": config,
        "fidelity_to_instantaneous_ground": result.fidelity_to_instantaneous_ground,
        "oscillator_state_class": result.oscillator_state_class,
        "classification_scores": result.classification_scores,
        "qubit_purity": result.qubit_purity,
        "cat_fit_alpha": complex(result.cat_fit_alpha),
        "note": result.note,
    }
    return csv[0], "csv", serialize.dumps_json(report)


def _cmd_appendix_a(config: dict):
    p = _params_from(config)
    rep = approx.kinetic_correction_ratio(p)
    report = {
        "config": config,
        "kinetic_relative": rep.kinetic_relative,
        "potential_relative": rep.potential_relative,
        "ratio": rep.ratio,
        "ratio_is_omega0_over_eq": True,
    }
    return serialize.dumps_json(report), "json"


def _cmd_list_figures(config: dict):
    lines = [f"{'figure':8s}  {'subcommand':12s}  caption parameters"]
    for fid, preset in FIGURE_PRESETS.items():
        lines.append(f"{fid:8s}  {preset.subcommand:12s}  {preset.caption}")
    return "\n".join(lines) + "\n", "txt"


HANDLERS = {
    "spectrum": _cmd_spectrum,
    "splitting": _cmd_splitting,
    "qfunc": _cmd_qfunc,
    "wigner": _cmd_wigner,
    "squeezing": _cmd_squeezing,
    "entropy": _cmd_entropy,
    "onset": _cmd_onset,
    "semiclassical": _cmd_semiclassical,
    "adiabatic-qubit": _cmd_adiabatic_qubit,
    "renorm-gap": _cmd_renorm_gap,
    "wkb": _cmd_wkb,
    "rates": _cmd_rates,
    "sweep": _cmd_sweep,
    "appendix-a": _cmd_appendix_a,
    "list-figures": _cmd_list_figures,
}


def run(config: dict, out: str | None = None, report_path: str | None = None) -> str:
    """Execute one validated configuration; returns the primary output text."""
    handler = HANDLERS[config["subcommand"]]
    result = handler(config)
    text = result[0]
    extra = result[2] if len(result) > 2 else None
    if out:
        serialize.atomic_write(out, text)
    else:
        sys.stdout.write(text)
    if extra is not None:
        if report_path:
            serialize.atomic_write(report_path, extra)
        else:
            sys.stdout.write(extra)
    return text


# -- argparse wiring ------------------------------------------------------------

def _add_param_flags(sub, lam_default=None):
    sub.add_argument("--delta-ratio", "--delta", dest="delta", type=float,
                     help="qubit gap Delta in units of the canonical energy")
    sub.add_argument("--eps", "--eps-ratio", dest="eps", type=float, default=0.0,
                     help="qubit bias epsilon")
    sub.add_argument("--omega0-ratio", "--omega0", dest="omega0", type=float,
                     default=1.0, help="oscillator frequency omega0 (default 1)")
    sub.add_argument("--lambda", "--lam", dest="lam", type=float,
                     default=lam_default, help="coupling lambda")


def _add_common_flags(sub, fmt_choices=("csv", "json")):
    sub.add_argument("--out", help="output file (stdout when omitted)")
    sub.add_argument("--format", choices=fmt_choices, default=None,
                     help="output format (defaults to the subcommand's native one)")
    sub.add_argument("--threads", type=int, default=None,
                     help="parallel workers for grid sweeps"
                          " (default: USCSIM_THREADS or 1)")
    sub.add_argument("--nmax", type=int, default=None,
                     help="override the Fock truncation")
    sub.add_argument("--tol", type=float, default=None,
                     help="truncation convergence tolerance")


def _add_scan_flags(sub):
    sub.add_argument("--lam-min", type=float, default=None)
    sub.add_argument("--lam-max", type=float, default=None)
    sub.add_argument("--lam-steps", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uscsim",
        description="Ultrastrong-coupling qubit-oscillator simulator")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    for name in ("spectrum", "splitting", "qfunc", "wigner", "squeezing",
                 "entropy", "onset"):
        sub = subs.add_parser(name)
        sub.add_argument("--figure", choices=sorted(FIGURE_PRESETS), default=None,
                         help="use a figure preset's parameter bundle")
        _add_param_flags(sub)
        _add_common_flags(sub)
        _add_scan_flags(sub)
        if name == "spectrum":
            sub.add_argument("--levels", type=int, default=10)
            sub.add_argument("--unit", choices=("omega0", "eq"), default="omega0")
        if name == "splitting":
            sub.add_argument("--pair", type=int, default=0)
            sub.add_argument("--unit", choices=("omega0", "eq"), default="omega0")
        if name in ("qfunc", "wigner"):
            sub.add_argument("--grid-points", type=int, default=None)
            sub.add_argument("--grid-half", type=float, default=None)
        if name == "onset":
            sub.add_argument("--target", type=float, default=0.5)
            sub.add_argument("--ratio-points", type=int, default=None)

    for name in ("semiclassical", "adiabatic-qubit", "renorm-gap", "wkb",
                 "appendix-a"):
        sub = subs.add_parser(name)
        _add_param_flags(sub, lam_default=0.0)
        _add_common_flags(sub, fmt_choices=("json",))
        if name == "renorm-gap":
            sub.add_argument("--n", type=int, default=0)
            _add_scan_flags(sub)

    sub = subs.add_parser("rates")
    _add_param_flags(sub, lam_default=0.0)
    _add_common_flags(sub, fmt_choices=("json",))
    sub.add_argument("--channel", choices=("sigma_z", "oscillator_x"),
                     default="sigma_z")
    sub.add_argument("--s0", type=float, default=1.0)
    sub.add_argument("--i", type=int, default=1)
    sub.add_argument("--j", type=int, default=0)

    sub = subs.add_parser("sweep")
    _add_param_flags(sub, lam_default=0.0)
    _add_common_flags(sub)
    sub.add_argument("--eps-start", type=float, default=0.0)
    sub.add_argument("--eps-end", type=float, required=True)
    sub.add_argument("--duration", type=float, required=True)
    sub.add_argument("--shape", choices=("linear", "smoothstep"), default="linear")
    sub.add_argument("--steps", type=int, default=128)
    sub.add_argument("--samples", type=int, default=41)
    sub.add_argument("--report", help="also write the protocol report JSON here")

    subs.add_parser("list-figures")
    return parser


def _config_from_args(args) -> dict:
    """Fold CLI flags (and any preset) into the canonical config dict."""
    sub = args.subcommand
    config: dict = {"subcommand": sub, "figure": getattr(args, "figure", None)}
    preset = FIGURE_PRESETS.get(config["figure"]) if config["figure"] else None
    if preset is not None and preset.subcommand != sub:
        raise ConfigError(
            f"figure {preset.figure_id} belongs to subcommand {preset.subcommand!r}")
    params = dict(preset.params) if preset else {}
    scan = dict(preset.scan) if preset else {}

    for key in ("delta", "eps", "omega0", "lam"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if getattr(args, "n", None) is not None and sub == "renorm-gap":
        params["n"] = args.n
    if sub == "rates":
        params.update(channel=args.channel, s0=args.s0, i=args.i, j=args.j)
    if sub == "onset" and not scan:
        params.setdefault("target", getattr(args, "target", 0.5))

    for key in ("lam_min", "lam_max", "lam_steps"):
        val = getattr(args, key, None)
        if val is not None:
            scan[key] = val
    for key in ("grid_points", "grid_half", "ratio_points"):
        val = getattr(args, key, None)
        if val is not None:
            scan[key] = val
    if sub == "spectrum":
        scan.setdefault("levels", args.levels)
        scan.setdefault("unit", args.unit)
    if sub == "splitting":
        scan.setdefault("pair", args.pair)
        scan.setdefault("unit", args.unit)

    if sub not in ("list-figures",):
        if "delta" not in params and sub != "onset":
            if "thetas" not in params:
                raise ConfigError("missing required parameter --delta-ratio")
        if "delta" not in params and sub == "onset" and "ratio_min" not in scan:
            raise ConfigError("missing required parameter --delta-ratio")
    if sub in ("spectrum", "splitting", "squeezing") and not scan.get("lam_max") \
            and scan.get("lam_max") != 0:
        if "lam_min" not in scan or "lam_max" not in scan:
            raise ConfigError(f"{sub} needs --lam-min/--lam-max or a --figure preset")

    config["params"] = params
    if scan:
        config["scan"] = scan
    if sub == "sweep":
        config["sweep"] = {
            "eps_start": args.eps_start, "eps_end": args.eps_end,
            "duration": args.duration, "shape": args.shape,
            "steps": args.steps, "samples": args.samples,
        }
        config["report"] = bool(args.report)

    trunc = {}
    if getattr(args, "nmax", None) is not None:
        trunc["n_max"] = args.nmax
    if getattr(args, "tol", None) is not None:
        trunc["tol"] = args.tol
    if trunc:
        config["truncation"] = trunc

    fmt = getattr(args, "format", None)
    if fmt is not None:
        if fmt == "json" and sub in ("spectrum", "splitting", "squeezing", "sweep"):
            raise ConfigError(f"{sub} emits CSV; JSON output is not supported")
        config["format"] = fmt

    threads = getattr(args, "threads", None)
    if threads is None:
        threads = int(os.environ.get("USCSIM_THREADS", "1"))
    if threads > 1:
        config["_threads"] = threads   # execution detail, not recorded in outputs
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except ConfigError as err:
        _emit_error("config", err)
        return EXIT_CONFIG
    try:
        run(config, out=getattr(args, "out", None),
            report_path=getattr(args, "report", None))
    except (ConfigError, ValueError) as err:
        if isinstance(err, NUMERICAL_ERRORS):
            _emit_error("numerical", err)
            return EXIT_NUMERICAL
        _emit_error("config", err)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as err:
        _emit_error("numerical", err)
        return EXIT_NUMERICAL
    except OSError as err:
        _emit_error("io", err)
        return EXIT_IO
    return 0


def _emit_error(kind: str, err: Exception):
    sys.stderr.write(json.dumps(
        {"error": {"kind": kind, "type": type(err).__name__, "message": str(err)}})
        + "\n")


if __name__ == "__main__":
    sys.exit(main())
