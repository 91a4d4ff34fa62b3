"""
Tests for the steady-state solvers and the transient integrator.

Oracles: the Lyapunov solution is checked against direct quadrature of
its integral representation, the oscillator block of the joint system
against its textbook closed form, and the integrator against exact
matrix-exponential propagation of the joint system.
"""

import numpy as np
import pytest
import scipy.linalg
from scipy.integrate import simpson

from squeezed_arrays import (
    ConfigError,
    CorrMatrix,
    MalformedInputError,
    NoSteadyStateError,
    PoParams,
    SystemParams,
    cascade_steady,
    cascade_system,
    decay_rates,
    extract_array_block,
    lyapunov_steady,
    reduced_steady,
    transient,
    vacuum_corr,
)
from squeezed_arrays.steady import (
    ORDER_ARRAYS,
    ORDER_CASCADE,
    DriftDiffusion,
    lyapunov_residual,
    require_hurwitz,
    solve_lyapunov,
)

PO = PoParams(alpha=0.8, zeta_b=1.3, kappa_0=0.1)


def chain(n=2, eta=0.7, kappa=0.25, zeta_a=0.5, po=PO):
    return SystemParams.uniform(n, eta=eta, kappa=kappa, zeta_a=zeta_a, po=po)


def joint_steady_full(p):
    return lyapunov_steady(cascade_system(p))


def test_corr_matrix_shape_validation():
    with pytest.raises(MalformedInputError):
        CorrMatrix(entries=np.zeros((7, 7)), ordering=ORDER_ARRAYS, n_cavities=2)
    with pytest.raises(MalformedInputError):
        CorrMatrix(entries=np.zeros((8, 8)), ordering=ORDER_CASCADE, n_cavities=2)
    with pytest.raises(MalformedInputError):
        CorrMatrix(entries=np.zeros((8, 8)), ordering="modes", n_cavities=2)


def test_drift_diffusion_shape_validation():
    with pytest.raises(MalformedInputError):
        DriftDiffusion(
            drift=np.zeros((8, 8)),
            diffusion=np.zeros((4, 4)),
            ordering=ORDER_ARRAYS,
            n_cavities=2,
        )


def test_vacuum_corr_layout():
    c = vacuum_corr(2).entries
    expected = np.zeros((8, 8), dtype=complex)
    for j in range(4):
        expected[j, j + 4] = 1.0
    assert np.array_equal(c, expected)


def test_require_hurwitz_rejects_marginal_and_unstable():
    with pytest.raises(NoSteadyStateError):
        require_hurwitz(np.array([[1.0]]))
    with pytest.raises(NoSteadyStateError):
        require_hurwitz(np.zeros((2, 2)))
    require_hurwitz(np.array([[-0.1]]))


def test_lyapunov_solution_matches_integral_form(rng):
    """C = integral of e^{Ms} N e^{M^T s} over s >= 0, by dense quadrature."""
    d = 6
    raw = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    drift = raw - (np.max(raw.real) + 2.0) * np.eye(d)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    diffusion = g @ g.conj().T
    c = solve_lyapunov(drift, diffusion)
    # slowest decay sets the integration horizon
    slowest = -np.max(np.linalg.eigvals(drift).real)
    grid = np.linspace(0.0, 40.0 / slowest, 4001)
    nodes = np.array(
        [scipy.linalg.expm(drift * s) @ diffusion @ scipy.linalg.expm(drift.T * s) for s in grid]
    )
    integral = simpson(nodes, x=grid, axis=0)
    # tolerance is set by the quadrature, not the solver
    assert np.max(np.abs(c - integral)) < 1e-5 * np.max(np.abs(c))


def test_lyapunov_residual_is_tiny():
    p = chain()
    dd = cascade_system(p)
    c = solve_lyapunov(dd.drift, dd.diffusion)
    assert lyapunov_residual(dd.drift, dd.diffusion, c) < 1e-12 * np.max(np.abs(dd.diffusion))


def test_solve_lyapunov_rejects_unstable_drift():
    with pytest.raises(NoSteadyStateError):
        solve_lyapunov(np.array([[0.5]]), np.array([[1.0]]))


def test_unpumped_steady_state_is_vacuum():
    p = chain(po=PoParams(alpha=0.0, zeta_b=1.0))
    for c in (reduced_steady(p), cascade_steady(p)):
        assert np.max(np.abs(c.entries - vacuum_corr(2).entries)) < 1e-12


def test_oscillator_block_closed_form():
    """Joint steady state reproduces n_b and m_b of the lone oscillator."""
    p = chain(n=3)
    c = joint_steady_full(p).entries
    n = p.n_cavities
    half = 2 * n + 2
    b_i, b_ii = 2 * n, 2 * n + 1
    bc_i, bc_ii = half + 2 * n, half + 2 * n + 1
    gamma = p.po.zeta_b + p.po.kappa_0
    a_plus, a_minus = decay_rates(p.po)
    n_b = p.po.alpha**2 / (2.0 * a_plus * a_minus)
    m_b = p.po.alpha * gamma / (2.0 * a_plus * a_minus)
    assert c[bc_i, b_i] == pytest.approx(n_b, abs=1e-13)
    assert c[bc_ii, b_ii] == pytest.approx(n_b, abs=1e-13)
    assert c[b_i, b_ii] == pytest.approx(m_b, abs=1e-13)
    assert c[b_i, bc_i] == pytest.approx(n_b + 1.0, abs=1e-13)
    # the oscillator never hears the arrays: no same-array b-a correlations
    assert abs(c[b_i, bc_ii]) < 1e-14


def test_reduced_and_cascade_routes_agree():
    for n in (1, 2, 3):
        p = chain(n=n)
        c_red = reduced_steady(p).entries
        c_cas = cascade_steady(p).entries
        assert np.max(np.abs(c_red - c_cas)) < 1e-10


def test_extract_array_block_requires_cascade_ordering():
    with pytest.raises(MalformedInputError):
        extract_array_block(vacuum_corr(2))


def test_transient_grid_and_step_validation():
    p = chain()
    with pytest.raises(ConfigError):
        transient(p, [])
    with pytest.raises(ConfigError):
        transient(p, [-1.0, 0.0])
    with pytest.raises(ConfigError):
        transient(p, [1.0, 0.5])
    with pytest.raises(ConfigError):
        transient(p, [1.0], step=1.0)  # far above the stability bound
    with pytest.raises(ConfigError):
        transient(p, [1.0], step=-0.001)
    with pytest.raises(ConfigError):
        transient(p, [1.0], source_age=-2.0)
    with pytest.raises(MalformedInputError):
        transient(p, [1.0], c0=joint_steady_full(p))


def test_transient_starts_at_initial_state():
    p = chain()
    out = transient(p, [0.0, 0.4])
    assert np.array_equal(out[0].entries, vacuum_corr(2).entries)
    assert np.max(np.abs(out[1].entries - vacuum_corr(2).entries)) > 1e-4


def test_steady_state_is_fixed_point_of_settled_source():
    p = chain()
    c_st = reduced_steady(p)
    out = transient(p, [0.0, 3.0, 9.0], c0=c_st, source_age=float("inf"))
    scale = np.max(np.abs(c_st.entries))
    for c in out:
        assert np.max(np.abs(c.entries - c_st.entries)) < 1e-9 * scale


def test_huge_source_age_matches_settled_source():
    p = chain()
    a = transient(p, [1.2], source_age=1e9)[0].entries
    b = transient(p, [1.2], source_age=float("inf"))[0].entries
    assert np.max(np.abs(a - b)) < 1e-13


def test_unpumped_vacuum_stays_vacuum():
    p = chain(po=PoParams(alpha=0.0, zeta_b=1.0))
    out = transient(p, [0.0, 2.0, 8.0])
    for c in out:
        assert np.max(np.abs(c.entries - vacuum_corr(2).entries)) < 1e-12


def test_transient_matches_exact_joint_propagation():
    """
    Freshly connected oscillator: the joint system starts in
    blockdiag(array vacuum, oscillator steady state) and evolves linearly,
    so C(t) = C_st + e^{At} (C0 - C_st) e^{A^T t} exactly.
    """
    p = chain()
    n = p.n_cavities
    dd = cascade_system(p)
    c_st = solve_lyapunov(dd.drift, dd.diffusion)

    dim = 4 * n + 4
    half = 2 * n + 2
    c0 = np.zeros((dim, dim), dtype=complex)
    for j in range(2 * n):
        c0[j, half + j] = 1.0  # array vacuum
    b_idx = [2 * n, 2 * n + 1, half + 2 * n, half + 2 * n + 1]
    gamma = p.po.zeta_b + p.po.kappa_0
    a_plus, a_minus = decay_rates(p.po)
    n_b = p.po.alpha**2 / (2.0 * a_plus * a_minus)
    m_b = p.po.alpha * gamma / (2.0 * a_plus * a_minus)
    b_block = np.array(
        [
            [0.0, m_b, n_b + 1.0, 0.0],
            [m_b, 0.0, 0.0, n_b + 1.0],
            [n_b, 0.0, 0.0, m_b],
            [0.0, n_b, m_b, 0.0],
        ]
    )
    c0[np.ix_(b_idx, b_idx)] = b_block

    for t in (0.3, 1.7):
        e = scipy.linalg.expm(dd.drift * t)
        exact_full = c_st + e @ (c0 - c_st) @ e.T
        idx = list(range(2 * n)) + list(range(half, half + 2 * n))
        exact = exact_full[np.ix_(idx, idx)]
        got = transient(p, [t])[0].entries
        assert np.max(np.abs(got - exact)) < 1e-8


def test_smaller_step_changes_nothing():
    p = chain()
    coarse = transient(p, [1.0])[0].entries
    fine = transient(p, [1.0], step=0.0005)[0].entries
    assert np.max(np.abs(coarse - fine)) < 1e-9
