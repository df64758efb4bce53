import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P1, P2, params_and_state, temperatures
from hopboltz.errors import SizeGuardError, TieSite
from hopboltz.gibbs import (
    SiteDistribution,
    conditional_prob_plus,
    gibbs_site_update,
    local_field,
    random_scan_step,
    sample_chain,
    trajectory_hash,
    zero_temp_limit_check,
    zero_temp_update,
)
from hopboltz.hopfield import HopfieldParams, energy, hebbian
from hopboltz.network import NetworkSpec, NetworkState, Params, update
from hopboltz.oracle import decode, encode, total_variation, transition_matrix_random_scan
from hopboltz.rng import RngStream


def single_site(theta):
    return Params(NetworkSpec.complete(1), np.zeros((1, 1)), [theta])


def test_local_field_examples(hebb):
    z = HopfieldParams.from_weights(np.zeros((3, 3)))
    assert local_field(z, NetworkState([1, 1, -1]), 1) == 0
    s = NetworkState(P2)
    assert [local_field(hebb, s, u) for u in range(4)] == [2 * a for a in P2]
    two = Params(NetworkSpec.from_weights([[0, 1], [0, 0]], domain=(-1, 1)), [[0, 1], [0, 0]], [0, 0])
    assert local_field(two, NetworkState([-1, 1]), 0) == 1


def test_tie_and_hot_limit(hebb):
    z = HopfieldParams.from_weights(np.zeros((2, 2)))
    assert conditional_prob_plus(z, NetworkState([1, -1]), 0, 0.3).p_plus == 0.5
    p = conditional_prob_plus(hebb, NetworkState(P1), 0, 1e9).p_plus
    assert abs(p - 0.5) < 1e-8


def test_site_distribution_normalised():
    d = SiteDistribution(0.3)
    assert d.p_plus + d.p_minus == 1.0
    with pytest.raises(ValueError):
        SiteDistribution(1.5)
    with pytest.raises(ValueError):
        conditional_prob_plus(single_site(0.0), NetworkState([1]), 0, 0.0)


@settings(max_examples=300)
@given(params_and_state(max_n=8, wmax=4), temperatures, st.data())
def test_conditional_is_energy_ratio(ps, T, data):
    p, s = ps
    u = data.draw(st.integers(0, p.n - 1))
    e_plus = energy(p, s.with_act(u, 1.0))
    e_minus = energy(p, s.with_act(u, -1.0))
    a, b = -e_plus / T, -e_minus / T
    m = max(a, b)
    want = math.exp(a - m) / (math.exp(a - m) + math.exp(b - m))
    got = conditional_prob_plus(p, s, u, T).p_plus
    assert 0.0 <= got <= 1.0
    assert got == pytest.approx(want, rel=1e-12, abs=0)


def test_saturated_site_always_plus():
    p = single_site(-1000.0)
    assert conditional_prob_plus(p, NetworkState([-1]), 0, 1.0).p_plus == 1.0
    for seed in range(50):
        assert gibbs_site_update(p, NetworkState([-1]), 0, 1.0, RngStream(seed))[0].act[0] == 1


def test_gibbs_site_update_golden(fixtures_dir, hebb):
    g = json.loads((fixtures_dir / "golden.json").read_text())["gibbs_site_update"]
    init = NetworkState(g["init"])
    got = [encode(gibbs_site_update(hebb, init, g["site"], g["T"], RngStream(s))[0])
           for s in range(len(g["final_index_by_seed"]))]
    assert got == g["final_index_by_seed"]


def test_fair_coin_frequency():
    p = single_site(0.0)
    rng = RngStream(7)
    hits = 0
    draws = 10**5
    for _ in range(draws):
        s, rng = gibbs_site_update(p, NetworkState([-1]), 0, 1.0, rng)
        hits += s.act[0] == 1
    assert abs(hits / draws - 0.5) <= 3 * math.sqrt(0.25 / draws)


@given(st.floats(-3, 3), st.integers(0, 2**64 - 1))
def test_single_site_scan_is_site_update(theta, seed):
    p = single_site(theta)
    s = NetworkState([1])
    a, ra = random_scan_step(p, s, 1.0, RngStream(seed))
    # the site draw is consumed first, then the acceptance draw
    b, rb = gibbs_site_update(p, s, 0, 1.0, RngStream(seed, 1))
    assert a == b and ra == rb


@given(params_and_state(integer=False), temperatures, st.integers(0, 2**64 - 1))
def test_scan_changes_at_most_one_site(ps, T, seed):
    p, s = ps
    t, _ = random_scan_step(p, s, T, RngStream(seed))
    assert np.sum(t.act != s.act) <= 1


@settings(max_examples=25, deadline=None)
@given(params_and_state(max_n=5, integer=False), temperatures, st.integers(0, 2**64 - 1))
def test_chain_matches_repeated_steps(ps, T, seed):
    p, s = ps
    steps = 300
    res = sample_chain(p, s, T, steps, burn_in=0, rng=RngStream(seed), record=True)
    rng, cur, idx = RngStream(seed), s, []
    for _ in range(steps):
        cur, rng = random_scan_step(p, cur, T, rng)
        idx.append(encode(cur))
    assert res.trajectory.tolist() == idx
    assert res.final == cur and res.rng == rng


def test_chain_reproducible_and_tally(hebb):
    a = sample_chain(hebb, NetworkState(P1), 1.0, 5000, rng=RngStream(3))
    b = sample_chain(hebb, NetworkState(P1), 1.0, 5000, rng=RngStream(3))
    assert np.array_equal(a.counts, b.counts) and a.final == b.final
    assert a.tallied == 5000 - 500
    thin = sample_chain(hebb, NetworkState(P1), 1.0, 5000, burn_in=100, thin=7, rng=RngStream(3))
    assert thin.tallied == (5000 - 100) // 7


def test_chain_misuse(hebb):
    with pytest.raises(ValueError):
        sample_chain(hebb, NetworkState(P1), 1.0, 100, burn_in=100)
    big = HopfieldParams.from_weights(np.zeros((21, 21)))
    with pytest.raises(SizeGuardError):
        sample_chain(big, NetworkState([1] * 21), 1.0, 10)
    res = sample_chain(big, NetworkState([1] * 21), 1.0, 10, tally=False)
    assert res.distribution is None and res.final.n == 21


def test_hot_chain_is_near_uniform(hebb):
    res = sample_chain(hebb, NetworkState(P1), 100.0, 200_000, rng=RngStream(5))
    assert total_variation(res.distribution, np.full(16, 1 / 16)) <= 0.05


def test_empirical_kernel_matches_exact_matrix():
    p = HopfieldParams.from_weights([[0, 1, -0.5], [1, 0, 0.3], [-0.5, 0.3, 0]], [0.2, 0, -0.1])
    T = 1.5
    res = sample_chain(p, NetworkState([1, 1, 1]), T, 200_000, burn_in=0, rng=RngStream(9), record=True)
    A = transition_matrix_random_scan(p, T)
    path = np.concatenate([[encode(NetworkState([1, 1, 1]))], res.trajectory])
    counts = np.zeros((8, 8))
    np.add.at(counts, (path[1:], path[:-1]), 1)
    visits = counts.sum(axis=0)
    emp = counts / visits
    sigma = np.sqrt(A * (1 - A) / visits)
    assert np.all(np.abs(emp - A) <= 5 * sigma + 1e-12)


def test_trajectory_hash_is_stable():
    assert trajectory_hash([0, 1, 2]) == trajectory_hash(np.array([0, 1, 2], dtype=np.int64))
    assert trajectory_hash([0, 1, 2]) != trajectory_hash([0, 2, 1])


def test_zero_temperature_kernel(hebb):
    s = NetworkState(P1)
    assert all(zero_temp_update(hebb, s, u) == s for u in range(4))
    p = single_site(1.0)
    assert zero_temp_update(p, NetworkState([1]), 0).act[0] == -1


@given(params_and_state(integer=False), st.data())
def test_zero_temperature_is_threshold_rule(ps, data):
    p, s = ps
    u = data.draw(st.integers(0, p.n - 1))
    assert zero_temp_update(p, s, u) == update(p, s, u)


def test_zero_temperature_limit_values():
    rec = zero_temp_limit_check(single_site(-1.0), NetworkState([1]), 0, [1, 0.5, 0.1])
    want = [1 / (1 + math.exp(-2)), 1 / (1 + math.exp(-4)), 1 / (1 + math.exp(-20))]
    assert rec.p_plus == pytest.approx(want, rel=1e-15)
    assert rec.limit == 1.0 and rec.monotone
    rec = zero_temp_limit_check(single_site(1.0), NetworkState([1]), 0, [0.1])
    assert rec.limit == 0.0
    assert rec.p_plus[0] == pytest.approx(1 / (1 + math.exp(20)), rel=1e-12)
    with pytest.raises(TieSite):
        zero_temp_limit_check(single_site(0.0), NetworkState([1]), 0, [1.0])
    with pytest.raises(ValueError):
        zero_temp_limit_check(single_site(1.0), NetworkState([1]), 0, [0.5, 1.0])


@given(params_and_state(), st.floats(1e-2, 50), st.lists(st.floats(1.01, 4), min_size=1, max_size=8),
       st.data())
def test_zero_temperature_gap_shrinks(ps, T0, ratios, data):
    p, s = ps
    u = data.draw(st.integers(0, p.n - 1))
    if local_field(p, s, u) == 0:
        return
    temps = [T0]
    for r in ratios:
        temps.append(temps[-1] / r)
    rec = zero_temp_limit_check(p, s, u, temps)
    assert rec.monotone
    assert rec.gaps == pytest.approx([abs(q - rec.limit) for q in rec.p_plus], abs=1e-15)


def test_stored_pattern_stays_at_low_temperature():
    hebb = hebbian([P1, P2])
    res = sample_chain(hebb, NetworkState(P1), 0.05, 2000, rng=RngStream(1), record=True)
    assert set(res.trajectory.tolist()) == {encode(NetworkState(P1))}
    assert decode(int(res.trajectory[-1]), 4) == NetworkState(P1)
