import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import hopfield_params, temperatures
from hopboltz.errors import NotStochastic, NotUnique, SizeGuardError
from hopboltz.hopfield import HopfieldParams, energy
from hopboltz.network import NetworkSpec, NetworkState, Params
from hopboltz.oracle import (
    all_states,
    boltzmann,
    boltzmann_distribution,
    brute_force_stationary,
    check_column_stochastic,
    check_probability_vector,
    decode,
    detailed_balance_check,
    distribution_to_json,
    encode,
    energies,
    invariance_check,
    total_variation,
    transition_matrix_random_scan,
)

real_params = hopfield_params(max_n=6, wmax=1, tmax=1, integer=False)


def loop_kernel(p, T):
    """Random-scan kernel assembled state by state from energy differences."""
    k = 2**p.n
    A = np.zeros((k, k))
    for j in range(k):
        s = decode(j, p.n)
        for u in range(p.n):
            up, down = s.with_act(u, 1.0), s.with_act(u, -1.0)
            dE = energy(p, up) - energy(p, down)
            p_up = 1.0 / (1.0 + math.exp(dE / T))
            A[encode(up), j] += p_up / p.n
            A[encode(down), j] += (1.0 - p_up) / p.n
    return A


@given(st.integers(0, 12), st.data())
def test_encode_decode_bijection(n, data):
    idx = data.draw(st.integers(0, 2**n - 1))
    assert encode(decode(idx, n)) == idx
    if n <= 8:
        rows = all_states(n)
        assert [encode(NetworkState(r)) for r in rows] == list(range(2**n))


def test_encoding_is_little_endian():
    assert tuple(decode(1, 3).act) == (1, -1, -1)
    assert encode(NetworkState([-1, -1, 1])) == 4
    with pytest.raises(ValueError):
        decode(8, 3)


@given(real_params)
def test_vectorised_energies(p):
    assert energies(p) == pytest.approx([energy(p, decode(i, p.n)) for i in range(2**p.n)], abs=1e-12)


def test_zero_network_is_uniform():
    p = HopfieldParams.from_weights(np.zeros((3, 3)))
    assert np.allclose(boltzmann_distribution(p, 0.7), 1 / 8, atol=0, rtol=1e-15)
    assert boltzmann(p, 0.7).c == pytest.approx(8)


@pytest.mark.parametrize("t,T", [(0.5, 1.0), (-2.0, 0.3), (3.0, 7.0)])
def test_single_neuron_partition(t, T):
    p = Params(NetworkSpec.complete(1), np.zeros((1, 1)), [t])
    pi = boltzmann_distribution(p, T)
    assert pi[1] == pytest.approx(1 / (1 + math.exp(2 * t / T)), rel=1e-14)


@given(real_params, st.floats(1e3, 1e8))
def test_infinite_temperature_limit(p, T):
    # TV to uniform is at most the energy range over T
    e = energies(p)
    uniform = np.full(2**p.n, 2.0**-p.n)
    assert total_variation(boltzmann_distribution(p, T), uniform) <= (e.max() - e.min()) / T + 1e-15
    small = HopfieldParams.from_weights(p.w / (1 + np.ptp(e)), p.theta / (1 + np.ptp(e)))
    assert total_variation(boltzmann_distribution(small, 1e6), uniform) <= 1e-6


def test_low_temperature_no_overflow():
    p = HopfieldParams.from_weights(np.array([[0, 50], [50, 0]], float))
    pi = boltzmann_distribution(p, 1e-3)
    assert np.isfinite(pi).all() and pi.sum() == pytest.approx(1)
    assert pi[0] == pytest.approx(0.5) and pi[3] == pytest.approx(0.5)


@settings(max_examples=40, deadline=None)
@given(hopfield_params(max_n=5, wmax=1, tmax=1, integer=False), temperatures)
def test_kernel_matches_loop_construction(p, T):
    A = transition_matrix_random_scan(p, T)
    check_column_stochastic(A)
    assert np.abs(A - loop_kernel(p, T)).max() <= 1e-14


@settings(max_examples=40, deadline=None)
@given(real_params, temperatures)
def test_detailed_balance_implies_invariance(p, T):
    A = transition_matrix_random_scan(p, T)
    pi = boltzmann_distribution(p, T)
    check_probability_vector(pi)
    db = detailed_balance_check(pi, A)
    assert db.passed
    assert invariance_check(pi, A, tol=pi.size * db.tol).passed


@settings(max_examples=40, deadline=None)
@given(real_params, st.floats(0.5, 4.0))
def test_brute_force_recovers_boltzmann(p, T):
    v = brute_force_stationary(transition_matrix_random_scan(p, T))
    assert total_variation(v, boltzmann_distribution(p, T)) <= 1e-8


def test_temperature_mismatch_breaks_balance():
    p = HopfieldParams.from_weights([[0, 1, -1], [1, 0, 0.5], [-1, 0.5, 0]], [0.3, -0.2, 0])
    pi = boltzmann_distribution(p, 1.0)
    assert not detailed_balance_check(pi, transition_matrix_random_scan(p, 2.0))


def test_symmetric_matrix_balances_uniform():
    A = np.array([[0.5, 0.2, 0.3], [0.2, 0.8, 0.0], [0.3, 0.0, 0.7]])
    assert detailed_balance_check(np.full(3, 1 / 3), A).residual == 0
    assert invariance_check(np.array([0.2, 0.8]), np.eye(2)).residual == 0


def test_biased_chain_does_not_fix_uniform():
    A = np.array([[0.9, 0.5], [0.1, 0.5]])
    assert not invariance_check([0.5, 0.5], A)


def test_total_variation_hand_values():
    assert total_variation([0.3, 0.7], [0.3, 0.7]) == 0
    assert total_variation([1, 0], [0, 1]) == 1
    assert total_variation([0.6, 0.4], [0.5, 0.5]) == pytest.approx(0.1)


def test_stationary_hand_solution():
    a, b = 0.3, 0.1
    A = np.array([[1 - a, b], [a, 1 - b]])
    assert brute_force_stationary(A) == pytest.approx(np.array([b, a]) / (a + b))
    with pytest.raises(NotUnique):
        brute_force_stationary(np.eye(2))


def test_validators():
    with pytest.raises(NotStochastic):
        check_column_stochastic([[0.5, 0.5], [0.4, 0.5]])
    with pytest.raises(NotStochastic):
        check_column_stochastic([[1.5, 0], [-0.5, 1]])
    with pytest.raises(ValueError):
        check_probability_vector([0.5, 0.6])


def test_size_guards():
    big = HopfieldParams.from_weights(np.zeros((21, 21)))
    with pytest.raises(SizeGuardError):
        boltzmann_distribution(big, 1.0)
    mid = HopfieldParams.from_weights(np.zeros((13, 13)))
    with pytest.raises(SizeGuardError):
        transition_matrix_random_scan(mid, 1.0)


def test_distribution_json():
    out = distribution_to_json(np.full(4, 0.25))
    assert out["n"] == 2 and "little-endian" in out["encoding"]
