"""Hopfield networks: energy, convergence runners and Hebbian storage."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from hopboltz.errors import ConvergenceBoundViolation, MaxStepsExceeded, ScopeRejection
from hopboltz.network import (
    SYMMETRIC_BINARY,
    NetworkSpec,
    NetworkState,
    Params,
    Schedule,
    is_stable,
    net_input,
    update,
)


@dataclass(frozen=True, eq=False)
class HopfieldParams(Params):
    """Params on the complete graph without loops: symmetric, zero diagonal, {-1, +1}."""

    def __post_init__(self):
        super().__post_init__()
        if self.spec.n < 2:
            raise ValueError("a Hopfield network needs n >= 2")
        if self.spec.domain != SYMMETRIC_BINARY:
            raise ValueError("Hopfield activations are {-1, +1}")
        if not np.array_equal(self.w, self.w.T):
            raise ValueError("Hopfield weights must be symmetric")
        if np.any(np.diag(self.w) != 0):
            raise ValueError("Hopfield weights must have a zero diagonal")

    @classmethod
    def from_weights(cls, w, theta=None) -> HopfieldParams:
        w = np.asarray(w, dtype=float)
        n = w.shape[0]
        theta = np.zeros(n) if theta is None else theta
        return cls(NetworkSpec.complete(n), w, theta)


def energy_weights(params: Params, state: NetworkState) -> float:
    a = state.act
    return float(-0.5 * (a @ (params.w_off @ a)))


def energy_thresholds(params: Params, state: NetworkState) -> float:
    return float(params.theta @ state.act)


def energy(params: Params, state: NetworkState) -> float:
    return energy_weights(params, state) + energy_thresholds(params, state)


def delta_energy(params: Params, state: NetworkState, u: int) -> float:
    """Energy change of updating ``u``: ``(act_old - act_new) * (net_u - theta_u)``.

    Equals ``energy(update(s, u)) - energy(s)`` for symmetric weights.
    """
    new = update(params, state, u)
    return float((state.act[u] - new.act[u]) * (net_input(params, state, u) - params.theta[u]))


def pluses(state: NetworkState) -> int:
    return int(np.count_nonzero(state.act == 1))


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of a convergence run.

    ``steps`` is the smallest N such that the state after N single-neuron
    updates is stable; ``cycles`` is the same count in full passes over the
    n neurons (``ceil(steps / n)``); ``updates`` is the total number of updates
    executed, including the no-change pass that confirmed stability.
    Traces have ``steps + 1`` entries, one per visited state.
    """

    steps: int
    cycles: int
    updates: int
    final: NetworkState
    energy_trace: tuple = field(repr=False)
    pluses_trace: tuple = field(repr=False)

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "cycles": self.cycles,
            "updates": self.updates,
            "final": [_num(a) for a in self.final.act],
            "energy": [_num(e) for e in self.energy_trace],
            "pluses": list(self.pluses_trace),
        }


def _num(x):
    x = float(x)
    return int(x) if x.is_integer() else x


def _run(params: Params, init: NetworkState, schedule: Schedule, max_steps: int) -> ConvergenceReport:
    # Stable once every neuron has been updated since the last change.
    n = params.n
    s = init
    energies = [energy(params, s)]
    plus = [pluses(s)]
    quiet = set()
    steps = 0
    for i in range(max_steps):
        u = schedule(i)
        nxt = update(params, s, u)
        if nxt is s:
            quiet.add(u)
        else:
            s = nxt
            quiet = {u}
            steps = i + 1
            energies.append(energy(params, s))
            plus.append(pluses(s))
        if len(quiet) == n:
            return ConvergenceReport(steps, -(-steps // n), i + 1, s, tuple(energies), tuple(plus))
    raise MaxStepsExceeded(max_steps, s)


def run_to_convergence_fair(params: Params, init: NetworkState, schedule: Schedule,
                            max_steps: int) -> ConvergenceReport:
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if schedule.n != params.n:
        raise ValueError("schedule and network sizes differ")
    return _run(params, init, schedule, max_steps)


def run_to_convergence_cyclic(params: HopfieldParams, init: NetworkState,
                              order: Sequence[int] | None = None) -> ConvergenceReport:
    """Asynchronous updates in a fixed cyclic order; at most ``n * 2**n`` updates are needed."""
    n = params.n
    order = range(n) if order is None else order
    bound = n * 2**n
    try:
        # the extra pass confirms stability of a state reached at the bound
        report = _run(params, init, Schedule.cyclic(order), bound + n)
    except MaxStepsExceeded:
        raise ConvergenceBoundViolation(f"no stable state after {bound + n} cyclic updates") from None
    if report.steps > bound:
        raise ConvergenceBoundViolation(f"stabilised after {report.steps} > n*2^n = {bound} updates")
    return report


# ---- Hebbian learning ------------------------------------------------------


def _pattern_matrix(patterns) -> np.ndarray:
    rows = [p.act if isinstance(p, NetworkState) else np.asarray(p, dtype=float) for p in patterns]
    if not rows:
        raise ValueError("need at least one pattern")
    if len({r.shape for r in rows}) != 1 or rows[0].ndim != 1:
        raise ValueError("patterns must be vectors of equal length")
    P = np.vstack(rows)
    if not np.all(np.abs(P) == 1):
        raise ValueError("pattern entries must be +1 or -1")
    return P


def hebbian(patterns, n: int | None = None, m: int | None = None) -> HopfieldParams:
    """``W = sum_i p_i p_i^T - m I`` with zero thresholds."""
    P = _pattern_matrix(patterns)
    if n is not None and P.shape[1] != n:
        raise ValueError(f"patterns have length {P.shape[1]}, expected n={n}")
    if m is not None and P.shape[0] != m:
        raise ValueError(f"got {P.shape[0]} patterns, expected m={m}")
    m_, n_ = P.shape
    if n_ < 2:
        raise ValueError("Hebbian storage needs n >= 2")
    return HopfieldParams.from_weights(P.T @ P - m_ * np.eye(n_))


def pattern_dots(patterns) -> np.ndarray:
    P = _pattern_matrix(patterns)
    return P @ P.T


def check_pairwise_orthogonal(patterns) -> bool:
    if len(patterns) < 2:
        return True
    G = pattern_dots(patterns)
    off = G[~np.eye(len(G), dtype=bool)]
    return bool(np.all(off == 0))


def require_orthogonal(patterns) -> None:
    G = pattern_dots(patterns)
    bad = [(i, j, G[i, j]) for i in range(len(G)) for j in range(i + 1, len(G)) if G[i, j] != 0]
    if bad:
        i, j, d = bad[0]
        raise ScopeRejection(f"patterns {i} and {j} are not orthogonal (dot product {_num(d)}); "
                             "only pairwise-orthogonal patterns are supported")


def verify_pattern_stable(params: Params, pattern) -> bool:
    if not isinstance(pattern, NetworkState):
        pattern = NetworkState(pattern, params.spec.domain)
    return is_stable(params, pattern)


def load_patterns(path) -> list[NetworkState]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(NetworkState([float(tok) for tok in line.split()]))
        except ValueError as e:
            raise ValueError(f"{path}:{lineno}: {e}") from None
    if not out:
        raise ValueError(f"{path}: no patterns found")
    if len({p.n for p in out}) != 1:
        raise ValueError(f"{path}: patterns have different lengths")
    return out


def dump_report(report: ConvergenceReport) -> str:
    return json.dumps(report.to_json())
