"""Tests for pair-entanglement maps, mode rotations, and parameter sweeps."""

import numpy as np
import pytest

from squeezed_arrays import (
    ConfigError,
    Lock,
    MalformedInputError,
    PoParams,
    SystemParams,
    ThresholdError,
    TiedRatio,
    broadband_moments,
    broadband_pair_en,
    normal_mode_pair_map,
    normal_modes,
    normalized_en,
    pair_map,
    pair_value,
    reduced_steady,
    rotate_to_modes,
    sweep,
    two_mode_reduction,
    vacuum_corr,
)
from squeezed_arrays.analysis import point_params
from squeezed_arrays.steady import ORDER_ARRAYS, CorrMatrix

PO = PoParams(alpha=0.8, zeta_b=1.3, kappa_0=0.1)


def chain(n=3, eta=0.7, kappa=0.25, zeta_a=0.5, po=PO):
    return SystemParams.uniform(n, eta=eta, kappa=kappa, zeta_a=zeta_a, po=po)


def test_two_mode_reduction_extracts_planted_block():
    # plant a correlated pair at (site 2, site 2) on top of vacuum elsewhere
    n, r = 3, 0.6
    nb, mb = np.sinh(r) ** 2, np.sinh(r) * np.cosh(r)
    planted = np.zeros((4, 4), dtype=complex)
    planted[0, 2] = planted[1, 3] = nb + 1.0
    planted[2, 0] = planted[3, 1] = nb
    planted[0, 1] = planted[1, 0] = mb
    planted[2, 3] = planted[3, 2] = mb
    full = vacuum_corr(n).entries.copy()
    idx = [1, n + 1, 2 * n + 1, 3 * n + 1]
    full[np.ix_(idx, idx)] = planted
    c = CorrMatrix(entries=full, ordering=ORDER_ARRAYS, n_cavities=n)
    assert np.array_equal(two_mode_reduction(c, 2, 2), planted)
    # an uncorrelated pair extracts plain vacuum
    vac = np.zeros((4, 4), dtype=complex)
    vac[0, 2] = vac[1, 3] = 1.0
    assert np.array_equal(two_mode_reduction(c, 1, 3), vac)


def test_vacuum_pair_map_is_zero():
    values = pair_map(vacuum_corr(3)).values
    assert values == pytest.approx(np.zeros((3, 3)), abs=1e-12)


def test_pair_map_matches_pair_value():
    p = chain()
    c = reduced_steady(p)
    values = pair_map(c).values
    for j in range(1, 4):
        for k in range(1, 4):
            assert values[j - 1, k - 1] == pair_value(c, j, k)


def test_broadband_pair_map_is_diagonal():
    po = PoParams(alpha=648.0, zeta_b=1000.0)
    p = SystemParams.uniform(4, eta=1.0, kappa=0.0, zeta_a=1.0, po=po)
    c = reduced_steady(p)
    values = pair_map(c).values
    target = normalized_en(broadband_pair_en(po))
    assert np.diag(values) == pytest.approx(np.full(4, target), rel=0.01)
    off = values[~np.eye(4, dtype=bool)]
    assert np.max(off) < 1e-3
    # alternating-sign pair correlations of the same-index cavities
    mbar = broadband_moments(po).mbar
    for j in range(1, 5):
        red = two_mode_reduction(c, j, j)
        assert red[0, 1].real == pytest.approx((-1) ** (j + 1) * mbar, rel=0.01)


def test_normal_mode_map_pairs_opposite_frequencies():
    po = PoParams(alpha=6.48, zeta_b=10.0)
    p = SystemParams.uniform(5, eta=1.0, kappa=0.0, zeta_a=1.0, po=po)
    c = reduced_steady(p)
    modes = normal_modes(p)
    values = normal_mode_pair_map(c, modes).values
    # dominant partner of mode k sits at the mirrored index (frequency -w_k)
    for k in range(5):
        assert np.argmax(values[k]) == 4 - k


def test_rotation_preserves_commutators_and_total_population():
    p = chain()
    c = reduced_steady(p)
    rotated = rotate_to_modes(c, normal_modes(p))
    n = p.n_cavities
    # commutator block stays the identity
    comm = rotated.entries[:2 * n, 2 * n:] - rotated.entries[2 * n:, :2 * n].T
    assert comm == pytest.approx(np.eye(2 * n), abs=1e-10)
    pop = np.trace(c.entries[2 * n:, :2 * n]).real
    pop_rot = np.trace(rotated.entries[2 * n:, :2 * n]).real
    assert pop_rot == pytest.approx(pop, abs=1e-10)


def test_point_params_applies_axis_then_ties():
    base = chain()
    p = point_params(base, "zeta_a", 2.0)
    assert p.zeta_a == 2.0 and p.po == base.po
    p = point_params(base, "zeta_b", 10.0, ties=(TiedRatio("alpha", "zeta_b", 0.648),))
    assert p.po.zeta_b == 10.0 and p.po.alpha == 6.48
    p = point_params(base, "eta", 1.5, ties=(Lock("kappa", 0.0),))
    assert p.eta == (1.5, 1.5) and p.kappa == (0.0, 0.0, 0.0)


def test_point_params_threshold_checks_only_the_finished_point():
    # the axis value alone would sit far above threshold; the tie rescues it
    base = chain()
    p = point_params(base, "zeta_b", 0.01, ties=(TiedRatio("alpha", "zeta_b", 0.648),))
    assert p.po.alpha == pytest.approx(0.00648)
    with pytest.raises(ThresholdError):
        point_params(base, "zeta_b", 0.01)


def test_point_params_synthetic_memory_rate_axis():
    base = chain()
    p = point_params(base, "alpha_bar_plus", 4.0, ties=(Lock("alpha_bar_minus", 1.0),))
    assert p.po.alpha == pytest.approx(1.5)
    assert p.po.zeta_b + p.po.kappa_0 == pytest.approx(2.5)
    assert p.po.kappa_0 == base.po.kappa_0  # split inherited from the base point
    p = point_params(
        base,
        "alpha_bar_plus",
        4.0,
        ties=(Lock("alpha_bar_minus", 1.0), TiedRatio("kappa_0", "zeta_b", 0.25)),
    )
    assert p.po.kappa_0 == pytest.approx(0.25 * p.po.zeta_b)
    assert p.po.zeta_b + p.po.kappa_0 == pytest.approx(2.5)
    with pytest.raises(ConfigError):
        point_params(base, "alpha_bar_plus", 4.0)
    with pytest.raises(MalformedInputError):
        point_params(base, "alpha_bar_plus", 1.0, ties=(Lock("alpha_bar_minus", 2.0),))


def test_point_params_rejects_unknown_names():
    with pytest.raises(MalformedInputError):
        point_params(chain(), "detuning", 1.0)
    with pytest.raises(MalformedInputError):
        point_params(chain(), "zeta_a", 1.0, ties=(Lock("detuning", 0.0),))


def test_sweep_single_point_matches_pair_map():
    base = chain()
    res = sweep(base, "zeta_a", [0.5])
    c = reduced_steady(base)
    expected = np.array([pair_value(c, j, j) for j in (1, 2, 3)])
    assert np.array_equal(res.curves[0], expected)
    assert res.axis == "zeta_a"
    assert res.failures == ()


def test_sweep_worker_count_does_not_change_results():
    base = chain()
    values = [0.3, 0.5, 0.9, 1.4]
    serial = sweep(base, "zeta_a", values, workers=1)
    parallel = sweep(base, "zeta_a", values, workers=2)
    assert np.array_equal(serial.curves, parallel.curves)
    assert np.array_equal(serial.reference, parallel.reference)
    assert serial.failures == parallel.failures


def test_sweep_records_failures_as_nan_rows():
    base = chain()
    # middle point pushes alpha above threshold with no rescuing tie
    res = sweep(base, "zeta_b", [1.3, 0.1, 1.5])
    assert np.all(np.isnan(res.curves[1]))
    assert np.isnan(res.reference[1])
    assert not np.any(np.isnan(res.curves[[0, 2]]))
    assert len(res.failures) == 1
    index, message = res.failures[0]
    assert index == 1
    assert "threshold" in message.lower()


def test_sweep_validates_values():
    with pytest.raises(ConfigError):
        sweep(chain(), "zeta_a", [])
    with pytest.raises(ConfigError):
        sweep(chain(), "zeta_a", [[0.1, 0.2]])
