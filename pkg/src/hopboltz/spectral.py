"""Perron-Frobenius toolkit for non-negative matrices.

Graphs use the orientation ``i -> j`` iff ``A[i, j] > 0``. With that pairing,
``(A^k)[i, j] > 0`` iff there is a walk of length k from i to j.

Perron roots are computed by power iteration on ``A + I`` (primitive whenever
A is irreducible, same eigenvectors) and returned with a Collatz-Wielandt
bracket ``min_i (Av)_i / v_i <= r <= max_i (Av)_i / v_i``; the bracket is
the correctness claim, not the iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from hopboltz.errors import NoConvergence, NotIrreducible, NotStochastic
from hopboltz.oracle import total_variation


def as_nonneg(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"need a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if np.any(A < 0):
        raise ValueError("matrix has negative entries")
    return A


def to_graph(A) -> nx.DiGraph:
    A = np.asarray(A, dtype=float)
    g = nx.DiGraph()
    g.add_nodes_from(range(A.shape[0]))
    rows, cols = np.nonzero(A > 0)
    g.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return g


def is_strongly_connected(graph: nx.DiGraph) -> bool:
    if graph.number_of_nodes() == 0:
        return False
    return nx.number_strongly_connected_components(graph) == 1


def is_irreducible(A) -> bool:
    A = np.asarray(A, dtype=float)
    return bool(np.all(A >= 0)) and is_strongly_connected(to_graph(A))


def walk_exists(graph: nx.DiGraph, i: int, j: int, k: int) -> bool:
    """Is there a walk of exactly k edges from i to j? Frontier propagation, no matrix algebra."""
    frontier = {i}
    for _ in range(k):
        frontier = {w for v in frontier for w in graph.successors(v)}
        if not frontier:
            return False
    return j in frontier


def pow_positivity_oracle(A, i: int, j: int, k: int) -> tuple[bool, bool]:
    """(``(A^k)[i, j] > 0``, walk of length k from i to j exists). The two must agree."""
    A = as_nonneg(A)
    if k < 0:
        raise ValueError("k must be non-negative")
    power = np.linalg.matrix_power(A, k)
    return bool(power[i, j] > 0), walk_exists(to_graph(A), i, j, k)


def collatz_wielandt_value(A, x) -> float:
    """min over the support of x of (Ax)_i / x_i."""
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    supp = x > 0
    if not supp.any():
        raise ValueError("x must be nonzero")
    return float(np.min((A @ x)[supp] / x[supp]))


@dataclass(frozen=True)
class PerronCertificate:
    root: float
    vector: np.ndarray
    lower: float
    upper: float
    residual: float
    iterations: int = 0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def check(self, tol: float) -> bool:
        return (self.lower <= self.root <= self.upper and self.width <= tol
                and self.residual <= tol and bool(np.all(self.vector > 0)))

    def to_json(self) -> dict:
        return {"root": self.root, "lower": self.lower, "upper": self.upper,
                "residual": self.residual, "v": self.vector.tolist()}


def _bracket(A, v):
    Av = A @ v
    ratios = Av / v
    # weighted mean of the ratios with weights v, so it sits inside the bracket
    root = float(Av.sum() / v.sum())
    lo, hi = float(ratios.min()), float(ratios.max())
    return min(max(root, lo), hi), lo, hi, Av


SQUARING_MAX_DIM = 1024
POLISH_SQUARINGS = 2


def _certificate(A, v, tol, it):
    if np.any(v <= 0):
        return None, np.inf
    root, lo, hi, Av = _bracket(A, v)
    if hi - lo > tol:
        return None, hi - lo
    residual = float(np.max(np.abs(Av - root * v)))
    if residual > tol:
        return None, hi - lo
    v = v.copy()
    v.setflags(write=False)
    return PerronCertificate(root, v, lo, hi, residual, it), hi - lo


def perron_root(A, tol: float = 1e-10, max_iter: int = 10**6, method: str = "auto",
                check_every: int = 16) -> PerronCertificate:
    """Certified Perron root and vector of an irreducible non-negative matrix.

    ``method="plain"`` multiplies the iterate by ``A + I`` once per step.
    ``method="squaring"`` visits the iterates ``1, 2, 4, 8, ...`` of the same
    sequence by squaring ``A + I``, which handles tiny spectral gaps (slowly
    mixing chains); ``"auto"`` picks it for dimensions up to 1024.
    ``max_iter`` bounds the number of matrix-vector products or squarings.
    """
    A = as_nonneg(A)
    if not is_irreducible(A):
        raise NotIrreducible("matrix is not irreducible")
    k = A.shape[0]
    if method == "auto":
        method = "squaring" if k <= SQUARING_MAX_DIM else "plain"
    B = A + np.eye(k)
    v0 = np.full(k, 1.0 / k)
    width = np.inf
    if method == "squaring":
        # after the bracket first closes, square a few more times and keep the
        # tightest certificate; the first hit can still be far from the limit
        # when the spectral gap is tiny
        M = B / B.sum(axis=0).max()
        best = None
        extra = 0
        for it in range(1, max_iter + 1):
            v = M @ v0
            v /= v.sum()
            cert, width = _certificate(A, v, tol, it)
            if cert is not None and (best is None or cert.width < best.width):
                best = cert
            if best is not None:
                extra += 1
                if extra > POLISH_SQUARINGS:
                    return best
            M = M @ M
            M /= M.sum(axis=0).max()
        if best is not None:
            return best
        raise NoConvergence(max_iter, width)
    if method != "plain":
        raise ValueError(f"unknown method {method!r}")
    v = v0
    for it in range(1, max_iter + 1):
        v = B @ v
        v /= v.sum()
        if it % check_every == 0 or it == max_iter:
            cert, width = _certificate(A, v, tol, it)
            if cert is not None:
                return cert
    raise NoConvergence(max_iter, width)


def stationary_distribution(A, tol: float = 1e-12, max_iter: int = 10**6) -> np.ndarray:
    A = as_nonneg(A)
    dev = float(np.max(np.abs(A.sum(axis=0) - 1.0)))
    if dev > 1e-9:
        raise NotStochastic(f"column sums deviate from 1 by {dev:.3e}")
    cert = perron_root(A, tol=tol, max_iter=max_iter)
    v = np.array(cert.vector)
    v /= v.sum()
    res = float(np.max(np.abs(A @ v - v)))
    if res > max(tol, 1e-15):
        raise NoConvergence(max_iter, res)
    return v


def aperiodicity_by_positive_diagonal(A) -> bool:
    """Sufficient test only: False means inconclusive, not periodic."""
    return bool(np.any(np.diag(np.asarray(A, dtype=float)) > 0))


@dataclass(frozen=True)
class UniquenessReport:
    limits: tuple
    converged: tuple
    max_pairwise_tv: float
    tol: float

    @property
    def passed(self) -> bool:
        return all(self.converged) and self.max_pairwise_tv <= self.tol


def _bracket_width(A, x):
    if not np.all(x > 0):
        return np.inf
    r = (A @ x) / x
    return float(r.max() - r.min())


def uniqueness_stress(A, tol: float = 1e-8, trials: int = 20, seed: int = 0,
                      iter_tol: float = 1e-12, max_squarings: int = 64) -> UniquenessReport:
    """Unshifted power iteration ``x <- A^t x`` from ``trials`` random simplex starts.

    The iterates ``t = 1, 2, 4, ...`` are reached by squaring ``A``. A start has
    converged once the Collatz-Wielandt bracket of A at its iterate is within
    ``iter_tol``. An irreducible column-stochastic matrix with a positive
    diagonal sends every start to the same limit; periodic matrices oscillate
    and are reported as not converged.
    """
    A = as_nonneg(A)
    dev = float(np.max(np.abs(A.sum(axis=0) - 1.0)))
    if dev > 1e-9:
        raise NotStochastic(f"column sums deviate from 1 by {dev:.3e}")
    rng = np.random.default_rng(seed)
    starts = [x / x.sum() for x in (rng.random(A.shape[0]) + 1e-3 for _ in range(trials))]
    limits = list(starts)
    widths = [np.inf] * trials
    M = A.copy()
    extra = 0
    for _ in range(max_squarings):
        for t, x0 in enumerate(starts):
            x = M @ x0
            x /= x.sum()
            w = _bracket_width(A, x)
            if w < widths[t]:
                limits[t], widths[t] = x, w
        if all(w <= iter_tol for w in widths):
            extra += 1
            if extra > POLISH_SQUARINGS:
                break
        M = M @ M
        M /= M.sum(axis=0)
    done = [w <= iter_tol for w in widths]
    worst = max((total_variation(p, q) for p, q in combinations(limits, 2)), default=0.0)
    return UniquenessReport(tuple(limits), tuple(done), worst, tol)


def load_matrix_json(obj: dict) -> np.ndarray:
    try:
        k = int(obj["dim"])
        a = np.asarray(obj["a"], dtype=float)
    except KeyError as e:
        raise ValueError(f"matrix JSON missing field {e}") from None
    if a.size != k * k:
        raise ValueError(f"expected {k * k} entries, got {a.size}")
    return a.reshape(k, k)
