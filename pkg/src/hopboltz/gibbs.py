"""Single-site Gibbs dynamics for Boltzmann machines on {-1, +1}^n.

The conditional probability of a site taking +1 is the exact Gibbs
conditional of the energy ``E = -1/2 act^T W act + theta^T act``::

    P(act_u = +1 | rest) = 1 / (1 + exp((E+ - E-) / T)),  E+ - E- = -2 (net_u - theta_u)

Random-scan stepping consumes two uniforms per step, in this order: the site
``floor(u1 * n)``, then the acceptance draw ``u2``; the site becomes +1 iff
``u2 <= P(+1)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit

from hopboltz.errors import SizeGuardError, TieSite
from hopboltz.network import NetworkState, Params, net_input
from hopboltz.oracle import MAX_VECTOR_N, decode, encode
from hopboltz.rng import RngStream


def _check_T(T):
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")


def local_field(params: Params, state: NetworkState, u: int) -> float:
    return net_input(params, state, u) - float(params.theta[u])


@dataclass(frozen=True)
class SiteDistribution:
    p_plus: float

    def __post_init__(self):
        if not 0.0 <= self.p_plus <= 1.0:
            raise ValueError(f"probability out of range: {self.p_plus}")

    @property
    def p_minus(self) -> float:
        return 1.0 - self.p_plus


def conditional_prob_plus(params: Params, state: NetworkState, u: int, T: float) -> SiteDistribution:
    _check_T(T)
    return SiteDistribution(float(expit(2.0 * local_field(params, state, u) / T)))


def gibbs_site_update(params: Params, state: NetworkState, u: int, T: float,
                      rng: RngStream) -> tuple[NetworkState, RngStream]:
    p = conditional_prob_plus(params, state, u, T).p_plus
    x, rng = rng.uniform()
    new = 1.0 if x <= p else -1.0
    if new == state.act[u]:
        return state, rng
    return state.with_act(u, new), rng


def random_scan_step(params: Params, state: NetworkState, T: float,
                     rng: RngStream) -> tuple[NetworkState, RngStream]:
    u, rng = rng.below(params.n)
    return gibbs_site_update(params, state, u, T, rng)


@dataclass(frozen=True)
class ChainResult:
    distribution: np.ndarray | None
    counts: np.ndarray | None
    final: NetworkState
    rng: RngStream
    trajectory: np.ndarray | None = None

    @property
    def tallied(self) -> int:
        return 0 if self.counts is None else int(self.counts.sum())


def trajectory_hash(trajectory) -> str:
    """SHA-256 over the state indices as little-endian uint32."""
    return hashlib.sha256(np.asarray(trajectory, dtype="<u4").tobytes()).hexdigest()


def sample_chain(params: Params, init: NetworkState, T: float, steps: int,
                 burn_in: int | None = None, thin: int = 1, rng: RngStream | None = None,
                 *, tally: bool = True, record: bool = False, chunk: int = 1 << 16) -> ChainResult:
    """Run ``steps`` random-scan steps and tally visited states.

    After step ``t`` (1-based) the state is tallied when ``t > burn_in`` and
    ``(t - burn_in) % thin == 0``. ``burn_in`` defaults to ``steps // 10``.
    With ``record`` the state index after every step is kept.
    """
    _check_T(T)
    if rng is None:
        rng = RngStream(0)
    if burn_in is None:
        burn_in = steps // 10
    if burn_in < 0 or thin < 1:
        raise ValueError("need burn_in >= 0 and thin >= 1")
    n = params.n
    if tally:
        if steps <= burn_in:
            raise ValueError(f"nothing to tally: steps={steps} <= burn_in={burn_in}")
        if n > MAX_VECTOR_N:
            raise SizeGuardError(f"tallying needs n <= {MAX_VECTOR_N}; got n={n} (use tally=False)")
    if record and n > 32:
        raise SizeGuardError("trajectory indices are stored as uint32; n must be <= 32")

    # p(+1) per (state index, site), filled lazily with the scalar formula so the
    # chain matches repeated random_scan_step calls bit for bit
    cache: dict[int, float] = {}
    idx = encode(init)

    def p_plus(idx, u):
        key = idx * n + u
        p = cache.get(key)
        if p is None:
            p = conditional_prob_plus(params, decode(idx, n), u, T).p_plus
            cache[key] = p
        return p

    counts = np.zeros(2**n, dtype=np.int64) if tally else None
    traj = np.empty(steps, dtype=np.uint32) if record else None
    tallies = {} if tally else None
    t = 0
    while t < steps:
        m = min(chunk, steps - t)
        draws, rng = rng.uniforms(2 * m)
        draws = draws.tolist()
        for k in range(m):
            u = min(int(draws[2 * k] * n), n - 1)
            bit = 1 << u
            if draws[2 * k + 1] <= p_plus(idx, u):
                idx |= bit
            else:
                idx &= ~bit
            t += 1
            if record:
                traj[t - 1] = idx
            if tally and t > burn_in and (t - burn_in) % thin == 0:
                tallies[idx] = tallies.get(idx, 0) + 1
    if tally:
        for i, c in tallies.items():
            counts[i] = c
        dist = counts / counts.sum()
    else:
        dist = None
    return ChainResult(dist, counts, decode(idx, n), rng, traj)


def zero_temp_update(params: Params, state: NetworkState, u: int) -> NetworkState:
    """Deterministic limit kernel: +1 iff the local field is >= 0."""
    new = 1.0 if local_field(params, state, u) >= 0 else -1.0
    if new == state.act[u]:
        return state
    return state.with_act(u, new)


@dataclass(frozen=True)
class ZeroTempRecord:
    temperatures: tuple
    p_plus: tuple
    limit: float
    gaps: tuple
    log_gaps: tuple

    @property
    def monotone(self) -> bool:
        """Gaps non-increasing and log-gaps strictly decreasing (gaps underflow to 0 at tiny T)."""
        g, lg = self.gaps, self.log_gaps
        return (all(b <= a for a, b in zip(g, g[1:]))
                and all(b < a for a, b in zip(lg, lg[1:])))


def zero_temp_limit_check(params: Params, state: NetworkState, u: int, temperatures) -> ZeroTempRecord:
    temps = tuple(float(T) for T in temperatures)
    if not temps or any(not T > 0 for T in temps):
        raise ValueError("temperatures must be positive")
    if any(b >= a for a, b in zip(temps, temps[1:])):
        raise ValueError("temperatures must be strictly decreasing")
    h = local_field(params, state, u)
    if h == 0:
        raise TieSite(f"local field at site {u} is zero; the Gibbs limit there is 1/2")
    limit = 1.0 if h > 0 else 0.0
    z = np.array([2.0 * abs(h) / T for T in temps])
    # |p(T) - limit| = 1 / (1 + exp(2|h|/T)) in both cases
    gaps = expit(-z)
    return ZeroTempRecord(
        temps,
        tuple(float(expit(2.0 * h / T)) for T in temps),
        limit,
        tuple(gaps.tolist()),
        tuple(log_expit(-z).tolist()),
    )
