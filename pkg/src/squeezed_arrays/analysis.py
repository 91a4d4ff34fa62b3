"""
Observables built on array correlation matrices: inter-array pair
entanglement maps in the cavity and normal-mode bases, and parameter sweeps
with tied-ratio constraints between rates.

All map values are normalized log-negativities E/(E+1) in [0, 1), so maps
from different parameter regimes share one color scale.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .arrays import NormalModes, SystemParams
from .errors import ConfigError, MalformedInputError, SimulationError
from .gaussian import log_negativity, normalized_en
from .reservoir import PoParams, reservoir_en
from .steady import ORDER_ARRAYS, CorrMatrix, reduced_steady

#: Sweep curve index reserved for the zero-frequency reservoir reference.
REFERENCE_INDEX = 0


def two_mode_reduction(c: CorrMatrix, site_first: int, site_second: int) -> np.ndarray:
    """
    4x4 second-moment matrix of the pair (a_I,site_first, a_II,site_second),
    sites 1-based, in (a1, a2, a1+, a2+) order.
    """
    if c.ordering != ORDER_ARRAYS:
        raise MalformedInputError(
            f"two_mode_reduction expects arrays ordering, got {c.ordering!r}"
        )
    n = c.n_cavities
    for name, site in (("site_first", site_first), ("site_second", site_second)):
        if not 1 <= site <= n:
            raise MalformedInputError(f"{name} must lie in 1..{n}, got {site!r}")
    idx = [
        site_first - 1,
        n + site_second - 1,
        2 * n + site_first - 1,
        3 * n + site_second - 1,
    ]
    return c.entries[np.ix_(idx, idx)]


@dataclass(frozen=True)
class PairEntanglementMap:
    """Normalized pair entanglement over all (first-array, second-array) indices."""

    values: np.ndarray
    basis: str  # "cavity" or "normal-mode"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise MalformedInputError(f"map must be square, got shape {values.shape}")
        object.__setattr__(self, "values", values)


def pair_map(c: CorrMatrix) -> PairEntanglementMap:
    """Normalized log-negativity of every cavity pair (j_I, j_II)."""
    n = c.n_cavities
    values = np.zeros((n, n), dtype=float)
    for j_first in range(1, n + 1):
        for j_second in range(1, n + 1):
            red = two_mode_reduction(c, j_first, j_second)
            values[j_first - 1, j_second - 1] = normalized_en(log_negativity(red))
    return PairEntanglementMap(values=values, basis="cavity")


def rotate_to_modes(c: CorrMatrix, modes: NormalModes) -> CorrMatrix:
    """
    Congruence transform of the correlations to the normal-mode basis,
    applying the same single-array transform to both arrays.
    """
    if c.ordering != ORDER_ARRAYS:
        raise MalformedInputError(f"rotate_to_modes expects arrays ordering, got {c.ordering!r}")
    n = c.n_cavities
    v = np.asarray(modes.transform, dtype=complex)
    if v.shape != (n, n):
        raise MalformedInputError(
            f"transform must be {n}x{n} for N={n} cavities, got {v.shape}"
        )
    unitary_defect = float(np.max(np.abs(v.conj().T @ v - np.eye(n))))
    if unitary_defect > 1e-9:
        raise MalformedInputError(
            f"mode transform is not unitary: defect {unitary_defect:.3e}"
        )
    rot = np.zeros((4 * n, 4 * n), dtype=complex)
    rot[0:n, 0:n] = v.conj().T
    rot[n : 2 * n, n : 2 * n] = v.conj().T
    rot[2 * n : 3 * n, 2 * n : 3 * n] = v.T
    rot[3 * n : 4 * n, 3 * n : 4 * n] = v.T
    return CorrMatrix(entries=rot @ c.entries @ rot.T, ordering=ORDER_ARRAYS, n_cavities=n)


def normal_mode_pair_map(c: CorrMatrix, modes: NormalModes) -> PairEntanglementMap:
    """Normalized log-negativity of every normal-mode pair (k_I, k_II)."""
    rotated = rotate_to_modes(c, modes)
    values = pair_map(rotated).values
    return PairEntanglementMap(values=values, basis="normal-mode")


@dataclass(frozen=True)
class TiedRatio:
    """Constraint target = ratio * source, re-applied at every sweep point."""

    target: str
    source: str
    ratio: float


@dataclass(frozen=True)
class Lock:
    """Constraint target = value, re-applied at every sweep point."""

    target: str
    value: float


@dataclass(frozen=True)
class SweepResult:
    """
    Diagonal-pair entanglement along a parameter axis.  ``curves[i, j]`` is
    the normalized value of pair j+1 at ``values[i]``; ``reference[i]`` is
    the normalized zero-frequency reservoir entanglement at that point.
    Failed points carry NaN rows and an entry in ``failures``.
    """

    axis: str
    values: np.ndarray
    curves: np.ndarray
    reference: np.ndarray
    failures: tuple[tuple[int, str], ...]


def _raw_set(raw: dict, n: int, name: str, value: float) -> None:
    value = float(value)
    if name == "eta":
        raw["eta"] = (value,) * (n - 1)
    elif name == "kappa":
        raw["kappa"] = (value,) * n
    elif name == "kappa_N":
        raw["kappa"] = raw["kappa"][:-1] + (value,)
    elif name in ("zeta_a", "alpha", "zeta_b", "kappa_0"):
        raw[name] = value
    else:
        raise MalformedInputError(f"unknown parameter name {name!r}")


def _raw_get(raw: dict, name: str) -> float:
    if name in ("eta", "kappa"):
        rates = raw[name]
        if not rates:
            raise MalformedInputError("eta is undefined for a single-cavity chain")
        if len(set(rates)) != 1:
            raise MalformedInputError(f"{name} is not uniform; cannot read a single value")
        return rates[0]
    if name == "kappa_N":
        return raw["kappa"][-1]
    if name in ("zeta_a", "alpha", "zeta_b", "kappa_0"):
        return raw[name]
    raise MalformedInputError(f"unknown parameter name {name!r}")


def point_params(
    base: SystemParams, axis: str, value: float, ties: tuple = ()
) -> SystemParams:
    """
    Parameters at one sweep point: set the axis rate, then re-apply the tie
    constraints in order.  The synthetic axis "alpha_bar_plus" requires an
    alpha_bar_minus lock; together they pin alpha and zeta_b + kappa_0,
    with an optional kappa_0/zeta_b tie splitting the total oscillator loss.

    All edits are staged on plain numbers and the parameter set is built
    once at the end, so only the finished point is threshold-checked; a tie
    may rescue an axis value that would be above threshold on its own.
    """
    n = base.n_cavities
    raw = {
        "zeta_a": base.zeta_a,
        "alpha": base.po.alpha,
        "zeta_b": base.po.zeta_b,
        "kappa_0": base.po.kappa_0,
        "eta": base.eta,
        "kappa": base.kappa,
    }
    remaining = list(ties)
    if axis == "alpha_bar_plus":
        locks = [t for t in remaining if isinstance(t, Lock) and t.target == "alpha_bar_minus"]
        if not locks:
            raise ConfigError("axis alpha_bar_plus requires a lock on alpha_bar_minus")
        a_minus = float(locks[0].value)
        remaining.remove(locks[0])
        if value <= a_minus:
            raise MalformedInputError(
                f"alpha_bar_plus = {value!r} must exceed alpha_bar_minus = {a_minus!r}"
            )
        total = 0.5 * (value + a_minus)
        raw["alpha"] = 0.5 * (value - a_minus)
        split = [
            t
            for t in remaining
            if isinstance(t, TiedRatio) and t.target == "kappa_0" and t.source == "zeta_b"
        ]
        if split:
            raw["zeta_b"] = total / (1.0 + split[0].ratio)
            raw["kappa_0"] = split[0].ratio * raw["zeta_b"]
            remaining.remove(split[0])
        else:
            raw["zeta_b"] = total - raw["kappa_0"]
    else:
        _raw_set(raw, n, axis, value)
    for tie in remaining:
        if isinstance(tie, Lock):
            _raw_set(raw, n, tie.target, tie.value)
        elif isinstance(tie, TiedRatio):
            _raw_set(raw, n, tie.target, tie.ratio * _raw_get(raw, tie.source))
        else:
            raise ConfigError(f"unknown sweep constraint {tie!r}")
    p = replace(
        base,
        zeta_a=raw["zeta_a"],
        eta=raw["eta"],
        kappa=raw["kappa"],
        po=PoParams(alpha=raw["alpha"], zeta_b=raw["zeta_b"], kappa_0=raw["kappa_0"]),
    )
    return p


def _solve_point(args: tuple) -> tuple[np.ndarray | None, float | None, str | None]:
    base, axis, value, ties = args
    try:
        p = point_params(base, axis, value, ties)
        c = reduced_steady(p)
        diag = np.array(
            [pair_value(c, j, j) for j in range(1, p.n_cavities + 1)], dtype=float
        )
        reference = normalized_en(float(reservoir_en(p.po, 0.0)))
        return diag, reference, None
    except SimulationError as exc:
        return None, None, f"{type(exc).__name__}: {exc}"


def pair_value(c: CorrMatrix, site_first: int, site_second: int) -> float:
    """Normalized log-negativity of one cavity pair."""
    return normalized_en(log_negativity(two_mode_reduction(c, site_first, site_second)))


def sweep(
    base: SystemParams,
    axis: str,
    values,
    ties: tuple = (),
    workers: int | None = 1,
) -> SweepResult:
    """
    Solve the steady state along ``values`` of ``axis`` and collect the
    diagonal-pair curves plus the reservoir reference.  ``workers`` above 1
    distributes points over processes (``None`` uses the available CPUs);
    results are identical and ordered either way.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ConfigError("sweep values must be a nonempty 1-d array")
    ties = tuple(ties)
    jobs = [(base, axis, float(v), ties) for v in values]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_solve_point, jobs))
    else:
        outcomes = [_solve_point(job) for job in jobs]

    n = base.n_cavities
    curves = np.full((values.size, n), np.nan)
    reference = np.full(values.size, np.nan)
    failures: list[tuple[int, str]] = []
    for i, (diag, ref, err) in enumerate(outcomes):
        if err is not None:
            failures.append((i, err))
            continue
        curves[i] = diag
        reference[i] = ref
    return SweepResult(
        axis=axis,
        values=values,
        curves=curves,
        reference=reference,
        failures=tuple(failures),
    )
