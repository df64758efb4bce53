"""Recover the unstated values behind the two worked-example fixtures.

1. Thresholds of the 3-neuron {0,1} network: scan integer vectors and keep
   those reproducing both reference work-phase traces.
2. Initial state of the Hebbian example: scan all 16 states and keep those whose
   cyclic run (order 0,1,2,3) ends in (-1,1,-1,1) after a count of 2.
"""

import itertools

import numpy as np

from hopboltz.hopfield import hebbian, run_to_convergence_cyclic, run_to_convergence_fair
from hopboltz.network import ZERO_ONE, NetworkSpec, NetworkState, Params, Schedule, nets, work_phase
from hopboltz.oracle import encode

W3 = np.array([[0, 0, 4], [1, 0, 0], [-2, 3, 0]], dtype=float)
TRACES = [
    ([2, 0, 1, 2, 0, 1, 2], (0, 0, 0), (0, 0, 0)),
    ([2, 1, 0, 2, 1, 0, 2], (1, 0, 0), (0, 1, -2)),
]


def consistent_thresholds(grid=range(-5, 6)):
    spec = NetworkSpec.from_weights(W3, domain=ZERO_ONE)
    init = NetworkState([1, 0, 0], ZERO_ONE)
    found = []
    for theta in itertools.product(grid, repeat=3):
        p = Params(spec, W3, theta)
        ok = True
        for order, acts, want_nets in TRACES:
            s = work_phase(p, init, order)
            if tuple(s.act) != acts or tuple(nets(p, s)) != want_nets:
                ok = False
                break
        if ok:
            found.append(theta)
    return found


def hebbian_initial_states(final=(-1, 1, -1, 1), count=2):
    params = hebbian([(1, 1, -1, -1), (-1, 1, -1, 1)])
    rows = []
    for bits in itertools.product([-1, 1], repeat=4):
        s = NetworkState(bits)
        cyc = run_to_convergence_cyclic(params, s, [0, 1, 2, 3])
        fair = run_to_convergence_fair(params, s, Schedule.cyclic([0, 1, 2, 3]), 1000)
        rows.append((encode(s), bits, cyc.steps, cyc.cycles, tuple(int(a) for a in fair.final.act)))
    by_updates = [r for r in rows if r[2] == count and r[4] == final]
    by_cycles = [r for r in rows if r[3] == count and r[4] == final]
    return rows, by_updates, by_cycles


if __name__ == "__main__":
    found = consistent_thresholds()
    print(f"{len(found)} integer threshold vectors in [-5,5]^3 reproduce both traces")
    for axis in range(3):
        print(f"  theta_{axis} values: {sorted({t[axis] for t in found})}")
    print(f"  (1, 1, 1) consistent: {(1, 1, 1) in found}")

    rows, by_updates, by_cycles = hebbian_initial_states()
    print("\nHebbian example, cyclic order 0,1,2,3")
    print(" idx  state            updates  cycles  final")
    for idx, bits, steps, cycles, fin in rows:
        print(f" {idx:3d}  {str(bits):16s} {steps:7d} {cycles:7d}  {fin}")
    print(f"consistent counting single updates: {[r[1] for r in by_updates]}")
    print(f"consistent counting full cycles:    {[r[1] for r in by_cycles]}")
