"""
Steady-state and transient second moments of the driven arrays.

Two independent routes yield the array correlations.  The reduced route
solves the Lyapunov problem M C + C M^T + N0 = 0 for the arrays alone,
with the oscillator folded into the source N0.  The joint route keeps the
oscillator modes explicitly in a cascaded drift-diffusion system of size
4N + 4 and reads the array block off its steady state.  Agreement of the
two routes cross-validates the memory source against the cascade
normalization.

Transients integrate dC/dt = M C + C M^T + N(t) with classical fourth-order
Runge-Kutta.  The matrix exponentials inside N(t) are advanced by one
half-step propagator multiply per stage, so the integration costs a fixed
number of 4N x 4N multiplies per step regardless of horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .arrays import (
    SystemParams,
    _source_from_propagators,
    _source_parts,
    build_drift,
    build_injection,
    source_n0,
)
from .errors import (
    ConfigError,
    MalformedInputError,
    NoSteadyStateError,
    NumericalError,
)
from .reservoir import decay_rates

#: Relative residual budget for accepted Lyapunov solutions.
LYAPUNOV_RTOL = 1e-10

ORDER_ARRAYS = "arrays"
ORDER_CASCADE = "cascade"


@dataclass(frozen=True)
class CorrMatrix:
    """
    Equal-time second moments <v_j v_k> over an operator vector tagged by
    ``ordering``: "arrays" for the 4N array operators, "cascade" for the
    4N + 4 array-plus-oscillator operators.
    """

    entries: np.ndarray
    ordering: str
    n_cavities: int

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=complex)
        expected = expected_dim(self.ordering, self.n_cavities)
        if entries.shape != (expected, expected):
            raise MalformedInputError(
                f"ordering {self.ordering!r} with N={self.n_cavities} requires a "
                f"{expected}x{expected} matrix, got {entries.shape}"
            )
        object.__setattr__(self, "entries", entries)


@dataclass(frozen=True)
class DriftDiffusion:
    """A linear quantum system: drift A and noise matrix N of dC/dt = A C + C A^T + N."""

    drift: np.ndarray
    diffusion: np.ndarray
    ordering: str
    n_cavities: int

    def __post_init__(self) -> None:
        drift = np.asarray(self.drift, dtype=complex)
        diffusion = np.asarray(self.diffusion, dtype=complex)
        expected = expected_dim(self.ordering, self.n_cavities)
        for name, m in (("drift", drift), ("diffusion", diffusion)):
            if m.shape != (expected, expected):
                raise MalformedInputError(
                    f"{name} must be {expected}x{expected} for ordering "
                    f"{self.ordering!r} with N={self.n_cavities}, got {m.shape}"
                )
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "diffusion", diffusion)


def expected_dim(ordering: str, n_cavities: int) -> int:
    """Operator-vector length for an ordering tag."""
    if ordering == ORDER_ARRAYS:
        return 4 * n_cavities
    if ordering == ORDER_CASCADE:
        return 4 * n_cavities + 4
    raise MalformedInputError(f"unknown ordering tag {ordering!r}")


def vacuum_corr(n_cavities: int) -> CorrMatrix:
    """Array vacuum: only the <a a+> = 1 commutator entries are nonzero."""
    dim = 4 * n_cavities
    c = np.zeros((dim, dim), dtype=complex)
    for j in range(2 * n_cavities):
        c[j, j + 2 * n_cavities] = 1.0
    return CorrMatrix(entries=c, ordering=ORDER_ARRAYS, n_cavities=n_cavities)


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def require_hurwitz(drift: np.ndarray) -> np.ndarray:
    """Eigenvalues of the drift; raises unless all real parts are negative."""
    eigs = np.linalg.eigvals(drift)
    worst = float(np.max(eigs.real))
    if worst >= 0.0:
        raise NoSteadyStateError(
            f"drift matrix is not Hurwitz: max eigenvalue real part {worst:.6g} >= 0"
        )
    return eigs


def lyapunov_residual(drift: np.ndarray, diffusion: np.ndarray, c: np.ndarray) -> float:
    """Max-abs residual of A C + C A^T + N = 0."""
    return _max_abs(drift @ c + c @ drift.T + diffusion)


def solve_lyapunov(drift: np.ndarray, diffusion: np.ndarray) -> np.ndarray:
    """
    Solve A C + C A^T + N = 0 (plain transpose, complex A allowed) via the
    Schur-based Sylvester solver, guarding stability and the residual.
    """
    require_hurwitz(drift)
    try:
        c = scipy.linalg.solve_sylvester(drift, drift.T, -diffusion)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Lyapunov solve failed: {exc}") from exc
    scale = max(_max_abs(diffusion), 1e-300)
    residual = lyapunov_residual(drift, diffusion, c)
    if residual > LYAPUNOV_RTOL * scale:
        raise NumericalError(
            f"Lyapunov residual {residual:.3e} exceeds budget "
            f"{LYAPUNOV_RTOL:g} * {scale:.3e}"
        )
    return c


def lyapunov_steady(dd: DriftDiffusion) -> CorrMatrix:
    """Steady state of a drift-diffusion system, keeping its ordering tag."""
    c = solve_lyapunov(dd.drift, dd.diffusion)
    return CorrMatrix(entries=c, ordering=dd.ordering, n_cavities=dd.n_cavities)


def reduced_steady(p: SystemParams) -> CorrMatrix:
    """Array steady state from the reduced Lyapunov problem with source N0."""
    m = build_drift(p)
    c = solve_lyapunov(m, source_n0(p))
    return CorrMatrix(entries=c, ordering=ORDER_ARRAYS, n_cavities=p.n_cavities)


def cascade_system(p: SystemParams) -> DriftDiffusion:
    """
    Joint drift-diffusion system of both arrays and the oscillator modes,
    ordered (a_I,1..N, a_II,1..N, b_I, b_II, creation partners).  The
    cascade coupling feeds b into the first cavities only; the correlated
    part of the joint noise sits in the (a_1, b+) and (b, a_1+) slots.
    """
    n = p.n_cavities
    dim = 4 * n + 4
    half = 2 * n + 2
    m_a = build_drift(p)
    drift = np.zeros((dim, dim), dtype=complex)
    drift[: 2 * n, : 2 * n] = m_a[: 2 * n, : 2 * n]
    drift[half : half + 2 * n, half : half + 2 * n] = m_a[2 * n :, 2 * n :]

    gamma_b = p.po.kappa_0 + p.po.zeta_b
    b_i, b_ii = 2 * n, 2 * n + 1
    bc_i, bc_ii = half + 2 * n, half + 2 * n + 1
    for b in (b_i, b_ii, bc_i, bc_ii):
        drift[b, b] = -gamma_b
    drift[b_i, bc_ii] = p.po.alpha
    drift[b_ii, bc_i] = p.po.alpha
    drift[bc_i, b_ii] = p.po.alpha
    drift[bc_ii, b_i] = p.po.alpha

    # One-way cascade: the oscillator output drives the first cavities and
    # never hears back.
    g = 2.0 * math.sqrt(p.zeta_a * p.po.zeta_b)
    first_i, first_ii = 0, n
    drift[first_i, b_i] = -g
    drift[first_ii, b_ii] = -g
    drift[half + first_i, bc_i] = -g
    drift[half + first_ii, bc_ii] = -g

    diffusion = np.zeros((dim, dim), dtype=complex)
    q, _ = build_injection(p)
    diffusion[: 2 * n, half : half + 2 * n] = q[: 2 * n, 2 * n :]
    diffusion[first_i, half + first_i] += 2.0 * p.zeta_a
    diffusion[first_ii, half + first_ii] += 2.0 * p.zeta_a
    diffusion[b_i, bc_i] = 2.0 * gamma_b
    diffusion[b_ii, bc_ii] = 2.0 * gamma_b
    # Correlated vacuum shared by a first cavity and the mode driving it.
    diffusion[first_i, bc_i] = g
    diffusion[first_ii, bc_ii] = g
    diffusion[b_i, half + first_i] = g
    diffusion[b_ii, half + first_ii] = g

    return DriftDiffusion(drift=drift, diffusion=diffusion, ordering=ORDER_CASCADE, n_cavities=n)


def extract_array_block(c: CorrMatrix) -> CorrMatrix:
    """Array sub-block of a cascade correlation matrix, re-tagged "arrays"."""
    if c.ordering != ORDER_CASCADE:
        raise MalformedInputError(
            f"extract_array_block expects cascade ordering, got {c.ordering!r}"
        )
    n = c.n_cavities
    half = 2 * n + 2
    idx = list(range(2 * n)) + list(range(half, half + 2 * n))
    sub = c.entries[np.ix_(idx, idx)]
    return CorrMatrix(entries=sub, ordering=ORDER_ARRAYS, n_cavities=n)


def cascade_steady(p: SystemParams) -> CorrMatrix:
    """Array steady state via the joint system, for cross-validation."""
    return extract_array_block(lyapunov_steady(cascade_system(p)))


def transient(
    p: SystemParams,
    t_grid,
    c0: CorrMatrix | None = None,
    *,
    step: float | None = None,
    source_age: float = 0.0,
) -> list[CorrMatrix]:
    """
    Integrate the reduced moment equation dC/dt = M C + C M^T + N(t) from
    t = 0 and return the correlation matrix at each requested time.

    ``t_grid`` must be nondecreasing and nonnegative.  ``c0`` is the state
    at t = 0 and defaults to the array vacuum.  ``source_age`` shifts the
    source clock: the integration uses N(t + source_age), so
    ``source_age=inf`` drives with the settled source N0 throughout (the
    steady state is then an exact fixed point), while the default 0 starts
    from a freshly connected, still uncorrelated oscillator.  ``step`` may
    lower (never raise) the automatic bound 0.01 / max(|eig M|, abar_plus).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ConfigError("t_grid must be a nonempty 1-d array of times")
    if t_grid[0] < 0.0 or np.any(np.diff(t_grid) < 0.0):
        raise ConfigError("t_grid must be nondecreasing and nonnegative")
    if not source_age >= 0.0:
        raise ConfigError(f"source_age must be nonnegative, got {source_age!r}")

    n = p.n_cavities
    if c0 is None:
        c0 = vacuum_corr(n)
    if c0.ordering != ORDER_ARRAYS or c0.n_cavities != n:
        raise MalformedInputError(
            "initial state must use arrays ordering with matching cavity count"
        )

    m = build_drift(p)
    a_plus, _ = decay_rates(p.po)
    eig_scale = float(np.max(np.abs(np.linalg.eigvals(m))))
    h_bound = 0.01 / max(eig_scale, a_plus)
    if step is not None:
        if step <= 0.0:
            raise ConfigError(f"step must be positive, got {step!r}")
        if step > h_bound * (1.0 + 1e-12):
            raise ConfigError(
                f"step {step:.6g} exceeds the stability bound {h_bound:.6g} "
                "= 0.01 / max(|eig M|, abar_plus)"
            )
        h_bound = step

    settled = not np.isfinite(source_age)
    if settled:
        n_const = source_n0(p)
        parts = None
        props = None
    else:
        parts = _source_parts(p, m)
        eye = np.eye(m.shape[0])
        props = tuple(
            scipy.linalg.expm((m - abar * eye) * source_age) for abar in parts.rates
        )
        n_const = None
        half_cache: dict[float, tuple[np.ndarray, ...]] = {}

    def rhs(c_val: np.ndarray, n_val: np.ndarray) -> np.ndarray:
        return m @ c_val + c_val @ m.T + n_val

    c = c0.entries.copy()
    t_now = 0.0
    results: list[CorrMatrix] = []
    for t_target in t_grid:
        gap = float(t_target) - t_now
        if gap > 0.0:
            n_sub = max(1, math.ceil(gap / h_bound))
            h = gap / n_sub
            if not settled and h not in half_cache:
                half_cache[h] = tuple(
                    scipy.linalg.expm((m - abar * eye) * (0.5 * h)) for abar in parts.rates
                )
            for _ in range(n_sub):
                if settled:
                    n_t = n_half = n_full = n_const
                else:
                    half_props = half_cache[h]
                    n_t = _source_from_propagators(parts, props)
                    props_mid = tuple(e @ pr for e, pr in zip(half_props, props))
                    n_half = _source_from_propagators(parts, props_mid)
                    props = tuple(e @ pr for e, pr in zip(half_props, props_mid))
                    n_full = _source_from_propagators(parts, props)
                k1 = rhs(c, n_t)
                k2 = rhs(c + 0.5 * h * k1, n_half)
                k3 = rhs(c + 0.5 * h * k2, n_half)
                k4 = rhs(c + h * k3, n_full)
                c = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t_now = float(t_target)
            if not np.all(np.isfinite(c)):
                raise NumericalError(f"transient integration diverged by t = {t_now:.6g}")
        results.append(CorrMatrix(entries=c.copy(), ordering=ORDER_ARRAYS, n_cavities=n))
    return results
