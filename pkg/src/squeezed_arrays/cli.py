"""
Command-line entry point: run one configured task and write CSV tables plus
a JSON summary into the output directory.

Outputs are deterministic: the same config produces byte-identical files
(floats are written in shortest round-trip form, no timestamps).  Exit
codes: 0 success, 1 configuration problem, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, arrays, reservoir, steady
from .config import RunConfig, parse_config
from .errors import ConfigError, SimulationError, ThresholdError
from .gaussian import normalized_en


def _fmt(value) -> str:
    """Shortest round-trip text for a float; plain text otherwise."""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _base_summary(cfg: RunConfig) -> dict:
    p = cfg.system
    a_plus, a_minus = reservoir.decay_rates(p.po)
    en0 = float(reservoir.reservoir_en(p.po, 0.0))
    return {
        "task": cfg.task,
        "label": cfg.label,
        "unit": cfg.unit,
        "system": {
            "n_cavities": p.n_cavities,
            "eta": list(p.eta),
            "kappa": list(p.kappa),
            "zeta_a": p.zeta_a,
            "alpha": p.po.alpha,
            "zeta_b": p.po.zeta_b,
            "kappa_0": p.po.kappa_0,
        },
        "alpha_bar_plus": a_plus,
        "alpha_bar_minus": a_minus,
        "broadband_margin": arrays.broadband_margin(p),
        "reservoir_en0": en0,
        "reservoir_en0_normalized": normalized_en(en0),
    }


def _steady_state(cfg: RunConfig) -> tuple[steady.CorrMatrix, dict]:
    route = cfg.options.get("route", "reduced")
    p = cfg.system
    if route == "cascade":
        system = steady.cascade_system(p)
        full = steady.lyapunov_steady(system)
        residual = steady.lyapunov_residual(system.drift, system.diffusion, full.entries)
        return steady.extract_array_block(full), {"route": route, "lyapunov_residual": residual}
    m = arrays.build_drift(p)
    n0 = arrays.source_n0(p)
    c = steady.solve_lyapunov(m, n0)
    corr = steady.CorrMatrix(entries=c, ordering=steady.ORDER_ARRAYS, n_cavities=p.n_cavities)
    return corr, {"route": route, "lyapunov_residual": steady.lyapunov_residual(m, n0, c)}


def _map_rows(values: np.ndarray):
    n = values.shape[0]
    for i in range(n):
        for j in range(n):
            yield (i + 1, j + 1, float(values[i, j]))


def _run_steady(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[str]]:
    corr, extra = _steady_state(cfg)
    path = out_dir / f"{cfg.label}_corr.csv"
    rows = (
        (j + 1, k + 1, float(corr.entries[j, k].real), float(corr.entries[j, k].imag))
        for j in range(corr.entries.shape[0])
        for k in range(corr.entries.shape[1])
    )
    _write_csv(path, ["j", "k", "re", "im"], rows)
    summary = _base_summary(cfg) | extra
    return summary, [path.name]


def _run_pair_map(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[str]]:
    corr, extra = _steady_state(cfg)
    pmap = analysis.pair_map(corr)
    path = out_dir / f"{cfg.label}_pair_map.csv"
    _write_csv(path, ["j_I", "j_II", "value"], _map_rows(pmap.values))
    summary = _base_summary(cfg) | extra
    summary["map_max"] = float(np.max(pmap.values))
    summary["map_min"] = float(np.min(pmap.values))
    return summary, [path.name]


def _run_normal_map(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[str]]:
    corr, extra = _steady_state(cfg)
    modes = arrays.normal_modes(cfg.system, basis=cfg.options.get("basis", "hamiltonian"))
    nmap = analysis.normal_mode_pair_map(corr, modes)
    path = out_dir / f"{cfg.label}_normal_map.csv"
    _write_csv(path, ["k_I", "k_II", "value"], _map_rows(nmap.values))
    summary = _base_summary(cfg) | extra
    summary["basis"] = cfg.options.get("basis", "hamiltonian")
    summary["normal_mode_frequencies"] = [float(x) for x in modes.frequencies]
    summary["mode_frequencies"] = [float(x) for x in modes.mode_frequencies]
    return summary, [path.name]


def _run_spectrum(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[str]]:
    p = cfg.system.po
    a_plus, _ = reservoir.decay_rates(p)
    omega_min = cfg.options.get("omega_min", -2.0 * a_plus)
    omega_max = cfg.options.get("omega_max", 2.0 * a_plus)
    if omega_min >= omega_max:
        raise ConfigError("spectrum grid is empty: omega_min must be below omega_max")
    grid = np.linspace(omega_min, omega_max, cfg.options.get("n_points", 801))
    s_curve = reservoir.squeezing_spectrum(p, grid)
    t_curve = reservoir.antisqueezing_spectrum(p, grid)
    en_curve = reservoir.reservoir_en(p, grid)
    path = out_dir / f"{cfg.label}_spectrum.csv"
    _write_csv(
        path,
        ["omega", "S", "T", "E_N"],
        zip(
            (float(x) for x in grid),
            (float(x) for x in s_curve),
            (float(x) for x in t_curve),
            (float(x) for x in en_curve),
        ),
    )
    summary = _base_summary(cfg)
    summary["omega_min"] = float(grid[0])
    summary["omega_max"] = float(grid[-1])
    summary["n_points"] = int(grid.size)
    modes = arrays.normal_modes(cfg.system)
    summary["normal_mode_frequencies"] = [float(x) for x in modes.frequencies]
    return summary, [path.name]


def _run_sweep(cfg: RunConfig, out_dir: Path, workers: int | None) -> tuple[dict, list[str]]:
    result = analysis.sweep(
        cfg.system,
        cfg.options["axis"],
        cfg.options["values"],
        ties=cfg.options.get("ties", ()),
        workers=workers,
    )
    path = out_dir / f"{cfg.label}_sweep.csv"

    def rows():
        for i, x in enumerate(result.values):
            yield (float(x), analysis.REFERENCE_INDEX, float(result.reference[i]))
            for j in range(result.curves.shape[1]):
                yield (float(x), j + 1, float(result.curves[i, j]))

    _write_csv(path, ["axis_value", "pair_index", "value"], rows())
    summary = _base_summary(cfg)
    summary["axis"] = result.axis
    summary["n_points"] = int(result.values.size)
    summary["failures"] = [[int(i), msg] for i, msg in result.failures]
    return summary, [path.name]


def _run_transient(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[str]]:
    p = cfg.system
    _, a_minus = reservoir.decay_rates(p.po)
    if "times" in cfg.options:
        t_grid = np.asarray(cfg.options["times"], dtype=float)
    else:
        slowest = min(x for x in (p.zeta_a, a_minus) if x > 0)
        t_max = cfg.options.get("t_max", 60.0 / slowest)
        t_grid = np.linspace(0.0, t_max, cfg.options.get("n_times", 61))
    states = steady.transient(
        p,
        t_grid,
        step=cfg.options.get("step"),
        source_age=cfg.options.get("source_age", 0.0),
    )
    target = steady.reduced_steady(p)
    scale = max(float(np.max(np.abs(target.entries))), 1e-300)
    path = out_dir / f"{cfg.label}_transient.csv"

    def rows():
        for t, state in zip(t_grid, states):
            distance = float(np.max(np.abs(state.entries - target.entries))) / scale
            yield (float(t), 0, distance)
            for j in range(1, p.n_cavities + 1):
                yield (float(t), j, analysis.pair_value(state, j, j))

    _write_csv(path, ["t", "pair_index", "value"], rows())
    final_distance = float(np.max(np.abs(states[-1].entries - target.entries))) / scale
    summary = _base_summary(cfg)
    summary["t_max"] = float(t_grid[-1])
    summary["n_times"] = int(t_grid.size)
    summary["source_age"] = float(cfg.options.get("source_age", 0.0))
    summary["final_relative_distance"] = final_distance
    return summary, [path.name]


def _run_broadband_check(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[str]]:
    po = cfg.system.po
    moments = arrays.broadband_moments(po)
    analytic = arrays.broadband_pair_en(po)
    summary = _base_summary(cfg)
    summary["nbar"] = moments.nbar
    summary["mbar"] = moments.mbar
    summary["n_thermal"] = moments.n_thermal
    summary["squeeze_param"] = moments.squeeze_param
    summary["broadband_pair_en"] = analytic
    summary["broadband_pair_en_normalized"] = normalized_en(analytic)
    summary["agreement_with_reservoir_en0"] = abs(analytic - summary["reservoir_en0"])
    return summary, []


def run(cfg: RunConfig, out_dir, workers: int | None = 1) -> tuple[dict, list[str]]:
    """
    Execute one configured task.  Returns the summary dict (also written to
    ``<label>_summary.json``) and the list of files written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.task == "steady":
        summary, files = _run_steady(cfg, out_dir)
    elif cfg.task == "pair-map":
        summary, files = _run_pair_map(cfg, out_dir)
    elif cfg.task == "normal-map":
        summary, files = _run_normal_map(cfg, out_dir)
    elif cfg.task == "spectrum":
        summary, files = _run_spectrum(cfg, out_dir)
    elif cfg.task == "sweep":
        summary, files = _run_sweep(cfg, out_dir, workers)
    elif cfg.task == "transient":
        summary, files = _run_transient(cfg, out_dir)
    elif cfg.task == "broadband-check":
        summary, files = _run_broadband_check(cfg, out_dir)
    else:  # unreachable after parse_config
        raise ConfigError(f"unknown task {cfg.task!r}")
    summary_path = out_dir / f"{cfg.label}_summary.json"
    _write_json(summary_path, summary)
    files = files + [summary_path.name]
    return summary, files


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description=(
            "Steady-state and transient entanglement of cavity arrays driven "
            "by a two-mode squeezed reservoir."
        ),
    )
    parser.add_argument("config", help="path to a JSON run configuration")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="process count for sweep points (default: available CPUs)",
    )
    parser.add_argument(
        "--strict", action="store_true", help="reject unknown config keys instead of warning"
    )
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(json.dumps({"status": "error", "kind": "config", "message": str(exc)}))
        return 1
    try:
        cfg = parse_config(text, strict=args.strict)
        summary, files = run(cfg, args.out, workers=args.workers)
    except (ConfigError, ThresholdError) as exc:
        print(json.dumps({"status": "error", "kind": "config", "message": str(exc)}))
        return 1
    except SimulationError as exc:
        print(json.dumps({"status": "error", "kind": "numerical", "message": str(exc)}))
        return 2
    print(json.dumps({"status": "ok", "label": cfg.label, "files": files}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
