"""Exhaustive enumeration of {-1, +1}^n.

State index ``idx`` encodes activations little-endian: bit ``i`` is set iff
neuron ``i`` is +1. Transition matrices are column-stochastic,
``A[i, j] = P(j -> i)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

from hopboltz.errors import NotStochastic, NotUnique, SizeGuardError
from hopboltz.network import NetworkState, Params

MAX_VECTOR_N = 20
MAX_MATRIX_N = 12
ENCODING = "little-endian: bit i of the index is set iff neuron i is +1"


def _guard(n: int, cap: int, what: str):
    if n > cap:
        raise SizeGuardError(f"{what} needs n <= {cap} (2^n entries); got n={n}")


def encode(state: NetworkState) -> int:
    return int(sum(1 << i for i, a in enumerate(state.act) if a == 1))


def decode(idx: int, n: int) -> NetworkState:
    if not 0 <= idx < 2**n:
        raise ValueError(f"index {idx} outside [0, 2^{n})")
    return NetworkState([1.0 if idx >> i & 1 else -1.0 for i in range(n)])


def all_states(n: int) -> np.ndarray:
    """(2^n, n) array whose row ``idx`` is ``decode(idx, n).act``."""
    bits = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    return 2.0 * bits - 1.0


def energies(params: Params) -> np.ndarray:
    S = all_states(params.n)
    return -0.5 * np.einsum("ki,ij,kj->k", S, params.w_off, S) + S @ params.theta


@dataclass(frozen=True)
class Boltzmann:
    pi: np.ndarray
    log_c: float

    @property
    def c(self) -> float:
        """Partition constant; may overflow to inf, ``log_c`` is always finite."""
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_c))


def boltzmann(params: Params, T: float) -> Boltzmann:
    if not T > 0:
        raise ValueError("temperature must be positive")
    _guard(params.n, MAX_VECTOR_N, "the Boltzmann distribution")
    x = -energies(params) / T
    log_c = float(logsumexp(x))
    # shift by the minimum energy before exponentiating
    p = np.exp(x - x.max())
    p /= p.sum()
    return Boltzmann(p, log_c)


def boltzmann_distribution(params: Params, T: float) -> np.ndarray:
    return boltzmann(params, T).pi


def local_fields_all(params: Params) -> np.ndarray:
    """(2^n, n) array of ``net_u - theta_u`` for every state and site."""
    return all_states(params.n) @ params.w_off.T - params.theta


def transition_matrix_random_scan(params: Params, T: float) -> np.ndarray:
    """Exact one-step matrix of the random-scan Gibbs kernel ``(1/n) sum_u K_u``."""
    if not T > 0:
        raise ValueError("temperature must be positive")
    n = params.n
    _guard(n, MAX_MATRIX_N, "the transition matrix")
    N = 2**n
    z = 2.0 * local_fields_all(params) / T
    p_plus = expit(z)
    p_minus = expit(-z)
    A = np.zeros((N, N))
    cols = np.arange(N)
    for u in range(n):
        bit = 1 << u
        up = cols | bit
        down = cols & ~bit
        np.add.at(A, (up, cols), p_plus[:, u] / n)
        np.add.at(A, (down, cols), p_minus[:, u] / n)
    return A


def check_column_stochastic(A, tol: float = 1e-12) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("need a square matrix")
    if np.any(A < 0):
        raise NotStochastic("matrix has negative entries")
    dev = np.max(np.abs(A.sum(axis=0) - 1.0))
    if dev > tol:
        raise NotStochastic(f"column sums deviate from 1 by {dev:.3e}")
    return A


def check_probability_vector(p, tol: float = 1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < 0) or abs(p.sum() - 1.0) > tol:
        raise ValueError("not a probability vector")
    return p


@dataclass(frozen=True)
class CheckReport:
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def __bool__(self):
        return self.passed


def _dims(pi, A):
    pi = np.asarray(pi, dtype=float)
    A = np.asarray(A, dtype=float)
    if A.shape != (pi.size, pi.size):
        raise ValueError(f"dimension mismatch: pi has {pi.size} entries, A is {A.shape}")
    return pi, A


def detailed_balance_check(pi, A, tol: float = 1e-12) -> CheckReport:
    """max_{i,j} |pi_j A_ij - pi_i A_ji|; flow j->i against flow i->j."""
    pi, A = _dims(pi, A)
    flow = A * pi[None, :]
    return CheckReport(float(np.max(np.abs(flow - flow.T))), tol)


def invariance_check(pi, A, tol: float = 1e-12) -> CheckReport:
    pi, A = _dims(pi, A)
    return CheckReport(float(np.max(np.abs(A @ pi - pi))), tol)


def total_variation(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions have different lengths")
    return float(0.5 * np.abs(p - q).sum())


def brute_force_stationary(A, rank_tol: float = 1e-11, residual_tol: float = 1e-10) -> np.ndarray:
    """Normalised null vector of ``A - I`` by SVD; raises NotUnique if the null space is not 1-d."""
    A = check_column_stochastic(A, tol=1e-9)
    k = A.shape[0]
    _guard(int(np.ceil(np.log2(max(k, 1)))), MAX_MATRIX_N, "the stationary solve")
    _, s, vh = np.linalg.svd(A - np.eye(k))
    null = int(np.count_nonzero(s <= rank_tol))
    if null != 1:
        raise NotUnique(f"kernel of A - I has dimension {null}")
    v = vh[-1]
    v = v / v.sum()
    if np.any(v < -1e-12):
        raise NotUnique("null vector has mixed signs")
    v = np.clip(v, 0.0, None)
    v /= v.sum()
    res = float(np.max(np.abs(A @ v - v)))
    if res > residual_tol:
        raise NotUnique(f"stationary residual {res:.3e} exceeds {residual_tol:.1e}")
    return v


def distribution_to_json(p) -> dict:
    p = np.asarray(p, dtype=float)
    n = int(round(np.log2(p.size)))
    return {"encoding": ENCODING, "n": n, "p": p.tolist()}
