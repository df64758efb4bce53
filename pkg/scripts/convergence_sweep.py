"""How close do cyclic Hopfield runs get to the n * 2^n update bound?

Random symmetric zero-diagonal integer networks, every initial state,
one random cyclic order per network. Prints per-n statistics of the
number of single-neuron updates until the last change.

    python3 scripts/convergence_sweep.py --sizes 2 3 4 5 6 7 8 --instances 50
"""

import argparse

import numpy as np

from hopboltz.acceptance import random_hopfield
from hopboltz.hopfield import run_to_convergence_cyclic
from hopboltz.oracle import decode


def sweep(n, instances, rng, wmax, tmax):
    steps = []
    for _ in range(instances):
        params = random_hopfield(rng, n, wmax=wmax, tmax=tmax)
        order = rng.permutation(n).tolist()
        steps.extend(run_to_convergence_cyclic(params, decode(i, n), order).steps for i in range(2**n))
    return np.array(steps)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=list(range(2, 9)))
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--wmax", type=int, default=5)
    ap.add_argument("--tmax", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'runs':>7} {'mean':>7} {'p99':>6} {'max':>5} {'n*2^n':>7} {'max/bound':>10}")
    for n in args.sizes:
        s = sweep(n, args.instances, rng, args.wmax, args.tmax)
        bound = n * 2**n
        print(f"{n:>3} {s.size:>7} {s.mean():>7.2f} {np.percentile(s, 99):>6.0f} {s.max():>5} "
              f"{bound:>7} {s.max() / bound:>10.4f}")


if __name__ == "__main__":
    main()
