import math

import numpy as np
import pytest

from qinvasion.errors import DomainError
from qinvasion.games import pd_payoffs, sd_payoffs, sh_payoffs
from qinvasion.quantum import (
    HALF_PI, C, D, H, Q,
    OutcomeDistribution,
    as_strategy,
    build_pair_table,
    entangler,
    expected_payoff,
    final_state,
    general,
    outcome_distribution,
    strategy_unitary,
)

from oracles import brute_force_distribution

NAMED = [C, D, H, Q]
OMEGA_GRID = np.linspace(0, HALF_PI, 11)


def same_up_to_phase(a, b, tol=1e-12):
    k = int(np.argmax(np.abs(b)))
    phase = a[k] / b[k]
    return abs(abs(phase) - 1) < tol and np.max(np.abs(a - phase * b)) < tol


def test_entangler_identity_at_zero():
    np.testing.assert_array_equal(entangler(0.0).matrix, np.eye(4))


def test_entangler_maximal_entries():
    m = entangler(HALF_PI).matrix
    assert m[0, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert m[3, 0] == pytest.approx(1j / math.sqrt(2), abs=1e-15)
    np.testing.assert_allclose(m @ [1, 0, 0, 0], [1 / math.sqrt(2), 0, 0, 1j / math.sqrt(2)], atol=1e-15)


@pytest.mark.parametrize("omega", [-0.1, HALF_PI + 1e-9, math.pi])
def test_entangler_rejects_out_of_range(omega):
    with pytest.raises(DomainError):
        entangler(omega)


@pytest.mark.parametrize("omega", OMEGA_GRID)
def test_entangler_unitary(omega):
    j = entangler(omega)
    assert np.max(np.abs(j.adjoint @ j.matrix - np.eye(4))) < 1e-12


def test_named_unitaries():
    np.testing.assert_array_equal(strategy_unitary(C), np.eye(2))
    np.testing.assert_array_equal(strategy_unitary(D), [[0, 1], [1, 0]])
    np.testing.assert_allclose(strategy_unitary(H), np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    np.testing.assert_array_equal(strategy_unitary(Q), [[1j, 0], [0, -1j]])


def test_general_at_gamma0_phi_half_pi_is_q():
    np.testing.assert_allclose(strategy_unitary(general(0.0, HALF_PI)), strategy_unitary(Q), atol=1e-15)


@pytest.mark.parametrize("gamma,phi", [(-0.01, 0.0), (math.pi + 0.01, 0.0), (1.0, -0.1), (1.0, 1.6)])
def test_general_domain(gamma, phi):
    with pytest.raises(DomainError):
        general(gamma, phi)


def test_unknown_label():
    with pytest.raises(DomainError):
        as_strategy("X")


def test_all_unitaries_unitary():
    rng = np.random.default_rng(5)
    labels = NAMED + [general(g, p) for g, p in zip(rng.uniform(0, math.pi, 50), rng.uniform(0, HALF_PI, 50))]
    for s in labels:
        u = strategy_unitary(s)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12


def test_final_state_examples():
    s = 1 / math.sqrt(2)
    assert same_up_to_phase(final_state(C, C), np.array([1, 0, 0, 0], complex))
    assert same_up_to_phase(final_state(D, D), np.array([0, 0, 0, 1], complex))
    assert same_up_to_phase(final_state(H, D), np.array([0, 0, -1j * s, s]))


def test_final_state_normalized_random():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        a = general(rng.uniform(0, math.pi), rng.uniform(0, HALF_PI))
        b = general(rng.uniform(0, math.pi), rng.uniform(0, HALF_PI))
        psi = final_state(a, b, rng.uniform(0, HALF_PI))
        assert abs(np.sum(np.abs(psi) ** 2) - 1) < 1e-12


@pytest.mark.parametrize("pair,expected", [
    ((C, C), (1, 0, 0, 0)),
    ((Q, D), (0, 0, 1, 0)),
    ((H, H), (0.25, 0.25, 0.25, 0.25)),
    ((H, D), (0, 0, 0.5, 0.5)),
    ((C, Q), (0, 0, 0, 1)),
    ((H, Q), (0.5, 0.5, 0, 0)),
    ((D, D), (0, 0, 0, 1)),
])
def test_outcome_distribution_examples(pair, expected):
    np.testing.assert_allclose(outcome_distribution(*pair), expected, atol=1e-12)


@pytest.mark.parametrize("a", "CDHQ")
@pytest.mark.parametrize("b", "CDHQ")
def test_matches_brute_force_oracle(a, b):
    np.testing.assert_allclose(outcome_distribution(a, b), brute_force_distribution(a, b), atol=1e-10)


def test_general_strategies_match_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        g1, g2 = rng.uniform(0, math.pi, 2)
        p1, p2 = rng.uniform(0, HALF_PI, 2)
        omega = rng.uniform(0, HALF_PI)
        got = outcome_distribution(general(g1, p1), general(g2, p2), omega)
        np.testing.assert_allclose(got, brute_force_distribution((g1, p1), (g2, p2), omega), atol=1e-10)


@pytest.mark.parametrize("a", NAMED)
@pytest.mark.parametrize("b", NAMED)
def test_separable_when_unentangled(a, b):
    pa = np.abs(strategy_unitary(a) @ [1, 0]) ** 2
    pb = np.abs(strategy_unitary(b) @ [1, 0]) ** 2
    np.testing.assert_allclose(outcome_distribution(a, b, 0.0), np.outer(pa, pb).ravel(), atol=1e-12)


def test_expected_payoff_examples():
    v = pd_payoffs(2.0)
    assert expected_payoff(OutcomeDistribution(1, 0, 0, 0), v) == 1
    assert expected_payoff(OutcomeDistribution(0, 0, 1, 0), v) == 2
    assert expected_payoff(OutcomeDistribution(0.25, 0.25, 0.25, 0.25), v) == 0.75


def test_pair_table_classical_pd():
    t = build_pair_table([C, D], pd_payoffs(2.0))
    np.testing.assert_allclose(t.row, [[1, 0], [2, 0]], atol=1e-12)
    np.testing.assert_allclose(t.col, [[1, 2], [0, 0]], atol=1e-12)
    assert t[C, D] == pytest.approx((0, 2), abs=1e-12)


def test_pair_table_qq():
    t = build_pair_table([Q], pd_payoffs(2.0))
    assert t[Q, Q] == pytest.approx((1, 1), abs=1e-12)


@pytest.mark.parametrize("v", [pd_payoffs(1.3), sd_payoffs(0.4), sh_payoffs(0.6)])
def test_pair_table_unentangled_is_product(v):
    t = build_pair_table(NAMED, v, 0.0)
    for i, a in enumerate(NAMED):
        for j, b in enumerate(NAMED):
            pa = np.abs(strategy_unitary(a) @ [1, 0]) ** 2
            pb = np.abs(strategy_unitary(b) @ [1, 0]) ** 2
            p = np.outer(pa, pb).ravel()
            assert t.row[i, j] == pytest.approx(v.R * p[0] + v.S * p[1] + v.T * p[2] + v.P * p[3], abs=1e-12)


@pytest.mark.parametrize("v", [pd_payoffs(1.05), pd_payoffs(2.0), sd_payoffs(0.05), sd_payoffs(1.0),
                               sh_payoffs(0.05), sh_payoffs(0.95)])
def test_pair_table_symmetry_and_bounds(v):
    t = build_pair_table(NAMED, v)
    n = len(NAMED)
    lo, hi = v.spread
    for i in range(n):
        for j in range(n):
            assert t.row[i, j] == t.col[j, i]
            assert lo <= t.row[i, j] <= hi
    # the column player's payoff equals the row payoff computed with roles swapped
    for i, a in enumerate(NAMED):
        for j, b in enumerate(NAMED):
            swapped = expected_payoff(outcome_distribution(b, a), v)
            assert abs(t.col[i, j] - swapped) < 1e-12


@pytest.mark.parametrize("b", [1.01, 1.2, 1.5, 1.8, 2.0])
def test_nash_pd(b):
    t = build_pair_table(NAMED, pd_payoffs(b))
    assert abs(t[Q, Q][0] - 1) < 1e-12
    for s in (C, D, H):
        assert t[Q, Q][0] >= t[s, Q][0] - 1e-12
    for s in (C, D):
        assert t[H, H][0] >= t[s, H][0] - 1e-12


def test_table_is_read_only():
    t = build_pair_table(NAMED, pd_payoffs(1.5))
    with pytest.raises(ValueError):
        t.row[0, 0] = 3.0
