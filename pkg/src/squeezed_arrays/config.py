"""
Run configuration: a JSON document naming the physical system, one task,
and task options.  All rates share one unit, by convention the array
coupling zeta_a unless the config names an absolute scale (e.g. "GHz");
the unit string is echoed into every output file.

Top-level keys: system, task, and optionally options, unit, label.
Unknown keys anywhere are rejected in strict mode and warned about
otherwise.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

from .analysis import Lock, TiedRatio
from .arrays import SystemParams
from .errors import ConfigError, MalformedInputError, ThresholdError
from .reservoir import PoParams

TASKS = (
    "steady",
    "pair-map",
    "normal-map",
    "spectrum",
    "sweep",
    "transient",
    "broadband-check",
)

_TOP_KEYS = {"unit", "label", "system", "task", "options"}
_SYSTEM_KEYS = {"n_cavities", "eta", "kappa", "zeta_a", "alpha", "zeta_b", "kappa_0"}
_OPTION_KEYS = {
    "steady": {"route"},
    "pair-map": {"route"},
    "normal-map": {"route", "basis"},
    "spectrum": {"omega_min", "omega_max", "n_points"},
    "sweep": {"axis", "values", "ties"},
    "transient": {"times", "t_max", "n_times", "step", "source_age"},
    "broadband-check": set(),
}

_SWEEP_PARAMS = {"zeta_a", "alpha", "zeta_b", "kappa_0", "eta", "kappa", "kappa_N"}
_SWEEP_AXES = _SWEEP_PARAMS | {"alpha_bar_plus"}


@dataclass(frozen=True)
class RunConfig:
    """A validated simulation run: the system, one task, and its options."""

    system: SystemParams
    task: str
    options: dict = field(default_factory=dict)
    unit: str = "zeta_a"
    label: str = ""


def _check_keys(obj: dict, allowed: set[str], where: str, strict: bool) -> None:
    unknown = sorted(set(obj) - allowed)
    if not unknown:
        return
    message = f"unknown key(s) {unknown} in {where or 'top level'}"
    if strict:
        raise ConfigError(message)
    warnings.warn(message, stacklevel=3)


def _number(obj: dict, key: str, where: str, default=None) -> float:
    if key not in obj:
        if default is None:
            raise ConfigError(f"{where}.{key}: required number is missing")
        return float(default)
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _rate_list(obj: dict, key: str, where: str, length: int, default=None) -> tuple[float, ...]:
    if key not in obj:
        if default is None:
            raise ConfigError(f"{where}.{key}: required rate(s) missing")
        return (float(default),) * length
    value = obj[key]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (float(value),) * length
    if isinstance(value, list):
        if len(value) != length:
            raise ConfigError(f"{where}.{key}: expected {length} entries, got {len(value)}")
        out = []
        for i, x in enumerate(value):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ConfigError(f"{where}.{key}[{i}]: expected a number, got {x!r}")
            out.append(float(x))
        return tuple(out)
    raise ConfigError(f"{where}.{key}: expected a number or list of numbers, got {value!r}")


def _parse_system(raw: dict, strict: bool) -> SystemParams:
    if not isinstance(raw, dict):
        raise ConfigError(f"system: expected an object, got {type(raw).__name__}")
    _check_keys(raw, _SYSTEM_KEYS, "system", strict)
    n = raw.get("n_cavities")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConfigError(f"system.n_cavities: expected a positive integer, got {n!r}")
    po = PoParams(
        alpha=_number(raw, "alpha", "system"),
        zeta_b=_number(raw, "zeta_b", "system"),
        kappa_0=_number(raw, "kappa_0", "system", default=0.0),
    )
    try:
        return SystemParams(
            n_cavities=n,
            eta=_rate_list(raw, "eta", "system", n - 1, default=None if n > 1 else 0.0),
            kappa=_rate_list(raw, "kappa", "system", n),
            zeta_a=_number(raw, "zeta_a", "system", default=1.0),
            po=po,
        )
    except MalformedInputError as exc:
        raise ConfigError(f"system: {exc}") from exc


def _parse_ties(raw, where: str) -> tuple:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: expected a list of constraints")
    ties = []
    for i, item in enumerate(raw):
        spot = f"{where}[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(f"{spot}: expected an object")
        target = item.get("target")
        if not isinstance(target, str):
            raise ConfigError(f"{spot}.target: expected a parameter name")
        if target not in _SWEEP_PARAMS | {"alpha_bar_minus"}:
            raise ConfigError(f"{spot}.target: unknown parameter {target!r}")
        if "ratio" in item:
            source = item.get("source")
            if not isinstance(source, str) or source not in _SWEEP_PARAMS:
                raise ConfigError(f"{spot}.source: unknown parameter {source!r}")
            extra = set(item) - {"target", "source", "ratio"}
            if extra:
                raise ConfigError(f"{spot}: unexpected key(s) {sorted(extra)}")
            ties.append(TiedRatio(target=target, source=source, ratio=_number(item, "ratio", spot)))
        elif "value" in item:
            extra = set(item) - {"target", "value"}
            if extra:
                raise ConfigError(f"{spot}: unexpected key(s) {sorted(extra)}")
            ties.append(Lock(target=target, value=_number(item, "value", spot)))
        else:
            raise ConfigError(f"{spot}: constraint needs either 'ratio' with 'source', or 'value'")
    return tuple(ties)


def _parse_options(task: str, raw, strict: bool) -> dict:
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"options: expected an object, got {type(raw).__name__}")
    _check_keys(raw, _OPTION_KEYS[task], "options", strict)
    out: dict = {}
    if task in ("steady", "pair-map", "normal-map"):
        route = raw.get("route", "reduced")
        if route not in ("reduced", "cascade"):
            raise ConfigError(f"options.route: expected 'reduced' or 'cascade', got {route!r}")
        out["route"] = route
    if task == "normal-map":
        basis = raw.get("basis", "hamiltonian")
        if basis not in ("hamiltonian", "dissipative"):
            raise ConfigError(
                f"options.basis: expected 'hamiltonian' or 'dissipative', got {basis!r}"
            )
        out["basis"] = basis
    if task == "spectrum":
        n_points = raw.get("n_points", 801)
        if isinstance(n_points, bool) or not isinstance(n_points, int) or n_points < 2:
            raise ConfigError(f"options.n_points: expected an integer >= 2, got {n_points!r}")
        out["n_points"] = n_points
        for key in ("omega_min", "omega_max"):
            if key in raw:
                out[key] = _number(raw, key, "options")
        if "omega_min" in out and "omega_max" in out and out["omega_min"] >= out["omega_max"]:
            raise ConfigError("options: omega_min must be below omega_max")
    if task == "sweep":
        axis = raw.get("axis")
        if not isinstance(axis, str) or axis not in _SWEEP_AXES:
            raise ConfigError(
                f"options.axis: expected one of {sorted(_SWEEP_AXES)}, got {axis!r}"
            )
        values = raw.get("values")
        if not isinstance(values, list) or not values:
            raise ConfigError("options.values: expected a nonempty list of numbers")
        parsed = []
        for i, x in enumerate(values):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ConfigError(f"options.values[{i}]: expected a number, got {x!r}")
            parsed.append(float(x))
        out["axis"] = axis
        out["values"] = parsed
        out["ties"] = _parse_ties(raw.get("ties"), "options.ties")
    if task == "transient":
        if "times" in raw and ("t_max" in raw or "n_times" in raw):
            raise ConfigError("options: give either an explicit times list or t_max/n_times")
        if "times" in raw:
            times = raw["times"]
            if not isinstance(times, list) or not times:
                raise ConfigError("options.times: expected a nonempty list of times")
            parsed = []
            for i, x in enumerate(times):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ConfigError(f"options.times[{i}]: expected a number, got {x!r}")
                parsed.append(float(x))
            out["times"] = parsed
        else:
            if "t_max" in raw:
                out["t_max"] = _number(raw, "t_max", "options")
                if out["t_max"] <= 0:
                    raise ConfigError("options.t_max: must be positive")
            n_times = raw.get("n_times", 61)
            if isinstance(n_times, bool) or not isinstance(n_times, int) or n_times < 2:
                raise ConfigError(f"options.n_times: expected an integer >= 2, got {n_times!r}")
            out["n_times"] = n_times
        if "step" in raw:
            out["step"] = _number(raw, "step", "options")
        age = raw.get("source_age", 0.0)
        if age == "inf":
            age = math.inf
        elif isinstance(age, bool) or not isinstance(age, (int, float)):
            raise ConfigError(f"options.source_age: expected a number or 'inf', got {age!r}")
        out["source_age"] = float(age)
    return out


def parse_config(text: str, strict: bool = False) -> RunConfig:
    """
    Parse and validate a JSON run configuration.  Raises
    :class:`ConfigError` with the offending key path (or JSON line/column
    for syntax errors); an above-threshold oscillator propagates as
    :class:`ThresholdError` naming the decay-rate violation.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config top level must be an object, got {type(raw).__name__}")
    _check_keys(raw, _TOP_KEYS, "", strict)

    task = raw.get("task")
    if not isinstance(task, str) or task not in TASKS:
        raise ConfigError(f"task: expected one of {list(TASKS)}, got {task!r}")
    if "system" not in raw:
        raise ConfigError("system: required section is missing")

    try:
        system = _parse_system(raw["system"], strict)
    except ThresholdError:
        raise  # already carries the decay-rate diagnostics
    options = _parse_options(task, raw.get("options"), strict)

    unit = raw.get("unit", "zeta_a")
    if not isinstance(unit, str) or not unit:
        raise ConfigError(f"unit: expected a nonempty string, got {unit!r}")
    label = raw.get("label", task.replace("-", "_"))
    if not isinstance(label, str) or not label:
        raise ConfigError(f"label: expected a nonempty string, got {label!r}")

    return RunConfig(system=system, task=task, options=options, unit=unit, label=label)
