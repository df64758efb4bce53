"""Random-scan Gibbs sampling against the exact Boltzmann distribution.

For each temperature: the spectral gap of the random-scan kernel, the
certified stationary vector's distance to the Boltzmann distribution, and
the TV error of the empirical distribution after increasing chain lengths.
Low temperatures show slow mixing between the stored patterns.

    python3 scripts/ergodicity_demo.py --temperatures 0.5 1 2 4
    python3 scripts/ergodicity_demo.py --params net.json
"""

import argparse

import numpy as np

from hopboltz.gibbs import sample_chain
from hopboltz.hopfield import hebbian
from hopboltz.network import load_params
from hopboltz.oracle import boltzmann_distribution, decode, total_variation, transition_matrix_random_scan
from hopboltz.rng import RngStream
from hopboltz.spectral import stationary_distribution


def spectral_gap(A):
    mods = np.sort(np.abs(np.linalg.eigvals(A)))[::-1]
    return 1.0 - mods[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--params", help="params JSON; default is the 4-neuron two-pattern Hebbian net")
    ap.add_argument("--temperatures", type=float, nargs="+", default=[0.5, 1.0, 2.0, 4.0])
    ap.add_argument("--lengths", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    params = load_params(args.params) if args.params else hebbian([(1, 1, -1, -1), (-1, 1, -1, 1)])
    head = " ".join(f"{'TV@' + format(k, '.0e'):>10}" for k in args.lengths)
    print(f"{'T':>6} {'gap':>10} {'TV(pi,exact)':>13} {head}")
    for T in args.temperatures:
        A = transition_matrix_random_scan(params, T)
        exact = boltzmann_distribution(params, T)
        pi = stationary_distribution(A)
        tvs = []
        for k in args.lengths:
            res = sample_chain(params, decode(0, params.n), T, k, rng=RngStream(args.seed))
            tvs.append(total_variation(res.distribution, exact))
        cols = " ".join(f"{tv:>10.4f}" for tv in tvs)
        print(f"{T:>6g} {spectral_gap(A):>10.3e} {total_variation(pi, exact):>13.1e} {cols}")


if __name__ == "__main__":
    main()
