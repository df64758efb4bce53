"""General two-state neural networks.

Weights follow the row-then-column convention: ``w[u, v]`` is the weight of the
connection from ``v`` into ``u``. Only the identity output function is
supported, so ``out_v == act_v`` everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from hopboltz.rng import splitmix64

SYMMETRIC_BINARY = (-1.0, 1.0)
ZERO_ONE = (0.0, 1.0)


def _frozen(a, dtype=np.float64):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """Topology and activation convention.

    ``adjacency[v, u]`` is True when there is an edge ``v -> u``.
    """

    n: int
    adjacency: np.ndarray
    domain: tuple[float, float] = SYMMETRIC_BINARY
    inputs: frozenset = frozenset()
    outputs: frozenset = frozenset()
    hidden: frozenset = frozenset()
    output_kind: str = "identity"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one neuron")
        object.__setattr__(self, "adjacency", _frozen(self.adjacency, dtype=bool))
        if self.adjacency.shape != (self.n, self.n):
            raise ValueError(f"adjacency must be {self.n}x{self.n}")
        lo, hi = (float(x) for x in self.domain)
        if not lo < hi:
            raise ValueError("two-state domain needs lo < hi")
        object.__setattr__(self, "domain", (lo, hi))
        for name in ("inputs", "outputs", "hidden"):
            s = frozenset(int(u) for u in getattr(self, name))
            if any(not 0 <= u < self.n for u in s):
                raise ValueError(f"{name} contains an index outside 0..{self.n - 1}")
            object.__setattr__(self, name, s)
        if not self.inputs or not self.outputs:
            raise ValueError("input and output neuron sets must be nonempty")
        if self.hidden & (self.inputs | self.outputs):
            raise ValueError("hidden neurons must be disjoint from inputs and outputs")
        if self.output_kind != "identity":
            raise ValueError("only the identity output function is supported")

    @property
    def lo(self) -> float:
        return self.domain[0]

    @property
    def hi(self) -> float:
        return self.domain[1]

    def pact(self, a) -> bool:
        return a == self.domain[0] or a == self.domain[1]

    @classmethod
    def complete(cls, n: int, domain=SYMMETRIC_BINARY) -> NetworkSpec:
        """All-to-all without self-loops; every neuron is input and output (Hopfield layout)."""
        everyone = frozenset(range(n))
        return cls(n, ~np.eye(n, dtype=bool), domain, everyone, everyone)

    @classmethod
    def from_weights(cls, w, domain=ZERO_ONE, inputs=None, outputs=None) -> NetworkSpec:
        """Edges exactly where ``w`` is nonzero off the diagonal."""
        w = np.asarray(w, dtype=float)
        n = w.shape[0]
        adj = (w.T != 0) & ~np.eye(n, dtype=bool)
        everyone = frozenset(range(n))
        return cls(n, adj, domain,
                   everyone if inputs is None else inputs,
                   everyone if outputs is None else outputs)


@dataclass(frozen=True, eq=False)
class Params:
    """Weights ``w`` (n x n), thresholds ``theta`` and optional per-neuron ``sigma`` vectors.

    ``sigma`` is carried for completeness; no implemented input function reads it.
    """

    spec: NetworkSpec
    w: np.ndarray
    theta: np.ndarray
    sigma: tuple = field(default=())

    def __post_init__(self):
        n = self.spec.n
        object.__setattr__(self, "w", _frozen(self.w))
        object.__setattr__(self, "theta", _frozen(self.theta))
        object.__setattr__(self, "sigma", tuple(_frozen(s) for s in self.sigma))
        if self.w.shape != (n, n):
            raise ValueError(f"weights must be {n}x{n}, got {self.w.shape}")
        if self.theta.shape != (n,):
            raise ValueError(f"theta must have length {n}, got {self.theta.shape}")
        if self.sigma and len(self.sigma) != n:
            raise ValueError("sigma needs one vector per neuron")
        if not (np.all(np.isfinite(self.w)) and np.all(np.isfinite(self.theta))):
            raise ValueError("weights and thresholds must be finite")
        if np.any(self.w[~self.spec.adjacency.T] != 0):
            raise ValueError("nonzero weight between non-adjacent neurons")
        w_off = self.w.copy()
        np.fill_diagonal(w_off, 0.0)
        w_off.setflags(write=False)
        object.__setattr__(self, "_w_off", w_off)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def w_off(self) -> np.ndarray:
        """Weights with the diagonal removed, so ``w_off[u] @ act`` sums over v != u."""
        return self._w_off

    def state(self, acts) -> NetworkState:
        return NetworkState(acts, self.spec.domain)


@dataclass(frozen=True, eq=False)
class NetworkState:
    act: np.ndarray
    domain: tuple[float, float] = SYMMETRIC_BINARY

    def __post_init__(self):
        object.__setattr__(self, "act", _frozen(self.act))
        if self.act.ndim != 1:
            raise ValueError("activations must be a vector")
        lo, hi = self.domain
        if not np.all((self.act == lo) | (self.act == hi)):
            raise ValueError(f"activations must lie in {{{lo:g}, {hi:g}}}: {self.act}")

    @property
    def n(self) -> int:
        return self.act.shape[0]

    def with_act(self, u: int, value: float) -> NetworkState:
        a = self.act.copy()
        a[u] = value
        return NetworkState(a, self.domain)

    def key(self) -> tuple:
        return tuple(self.act.tolist())

    def __eq__(self, other):
        if not isinstance(other, NetworkState):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.act, other.act)

    def __hash__(self):
        return hash((self.key(), self.domain))

    def __repr__(self):
        return f"NetworkState({[_fmt(a) for a in self.act]})"


def _fmt(a: float):
    return int(a) if float(a).is_integer() else a


@dataclass(frozen=True)
class Schedule:
    """Infinite neuron-update sequence ``useq``; call it with a time index.

    cyclic: ``order[i mod n]`` for a permutation ``order``.
    explicit: the given list, repeated.
    random: ``floor(u_i * n)`` with ``u_i`` the i-th SplitMix64 uniform of ``seed``.
    """

    kind: str
    n: int
    order: tuple[int, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("cyclic", "explicit", "random"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("schedule needs n >= 1")
        if self.kind == "cyclic" and sorted(self.order) != list(range(self.n)):
            raise ValueError("cyclic order must be a permutation of 0..n-1")
        if self.kind == "explicit":
            if not self.order:
                raise ValueError("explicit schedule needs a nonempty list")
            if any(not 0 <= u < self.n for u in self.order):
                raise ValueError("explicit schedule index out of range")

    @classmethod
    def cyclic(cls, order: Sequence[int]) -> Schedule:
        return cls("cyclic", len(order), tuple(int(u) for u in order))

    @classmethod
    def explicit(cls, seq: Sequence[int], n: int) -> Schedule:
        return cls("explicit", n, tuple(int(u) for u in seq))

    @classmethod
    def seeded_random(cls, seed: int, n: int) -> Schedule:
        return cls("random", n, seed=seed)

    def __call__(self, i: int) -> int:
        if self.kind == "random":
            u = (splitmix64(self.seed, i) >> 11) * 2.0**-53
            return min(int(u * self.n), self.n - 1)
        return self.order[i % len(self.order)]

    def take(self, start: int, count: int) -> list[int]:
        return [self(i) for i in range(start, start + count)]


def net_input(params: Params, state: NetworkState, u: int) -> float:
    """Weighted sum of the other neurons' outputs, ``sum_{v != u} w[u, v] * act[v]``."""
    return float(params.w_off[u] @ state.act)


def threshold_activation(domain, net: float, theta: float) -> float:
    # tie goes to hi
    return domain[1] if net >= theta else domain[0]


def update(params: Params, state: NetworkState, u: int) -> NetworkState:
    new = threshold_activation(params.spec.domain, net_input(params, state, u), params.theta[u])
    if new == state.act[u]:
        return state
    return state.with_act(u, new)


def seq_states(params: Params, init: NetworkState, schedule: Schedule, k: int) -> NetworkState:
    s = init
    for i in range(k):
        s = update(params, s, schedule(i))
    return s


def work_phase(params: Params, ext: NetworkState, order: Iterable[int]) -> NetworkState:
    s = ext
    for u in order:
        s = update(params, s, u)
    return s


def nets(params: Params, state: NetworkState) -> np.ndarray:
    return params.w_off @ state.act


def is_stable(params: Params, state: NetworkState) -> bool:
    lo, hi = params.spec.domain
    want = np.where(nets(params, state) >= params.theta, hi, lo)
    return bool(np.array_equal(want, state.act))


def covers_all_within(schedule: Schedule, start: int, window: int) -> bool:
    if window < 1:
        raise ValueError("window must be >= 1")
    return len(set(schedule.take(start, window))) == schedule.n


# ---- I/O -----------------------------------------------------------------


def params_to_json(params: Params) -> dict:
    return {
        "n": params.n,
        "w": params.w.ravel().tolist(),
        "theta": params.theta.tolist(),
        "domain": list(params.spec.domain),
    }


def params_from_json(obj: dict) -> Params:
    """Build Params from ``{"n", "w" (row-major), "theta"[, "domain"]}``.

    Domain defaults to {-1, +1}. Symmetric zero-diagonal {-1, +1} weights come
    back as HopfieldParams.
    """
    from hopboltz.hopfield import HopfieldParams

    try:
        n = int(obj["n"])
        w = np.asarray(obj["w"], dtype=float)
        theta = np.asarray(obj["theta"], dtype=float)
    except KeyError as e:
        raise ValueError(f"params JSON missing field {e}") from None
    if w.size != n * n:
        raise ValueError(f"expected {n * n} weights, got {w.size}")
    w = w.reshape(n, n)
    domain = tuple(obj.get("domain", SYMMETRIC_BINARY))
    if (domain == SYMMETRIC_BINARY and n >= 2 and np.array_equal(w, w.T)
            and not np.any(np.diag(w))):
        return HopfieldParams.from_weights(w, theta)
    spec = NetworkSpec.from_weights(w, domain=domain)
    return Params(spec, w, theta)


def load_params(path) -> Params:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from None
    try:
        return params_from_json(obj)
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def format_state(state: NetworkState) -> str:
    return " ".join(str(_fmt(a)) for a in state.act)


def parse_state(text: str, domain=SYMMETRIC_BINARY) -> NetworkState:
    return NetworkState([float(tok) for tok in text.split()], tuple(domain))


def load_state(path, domain=SYMMETRIC_BINARY) -> NetworkState:
    lines = [(i, ln) for i, ln in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 1:
        raise ValueError(f"{path}: expected one line of activations, found {len(lines)}")
    lineno, line = lines[0]
    try:
        return parse_state(line, domain)
    except ValueError as e:
        raise ValueError(f"{path}:{lineno}: {e}") from None
