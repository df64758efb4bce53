"""Regenerate fixtures/golden.json.

Run only when the RNG consumption order or the trajectory encoding changes
deliberately; the acceptance suite compares against the frozen file.
"""

import json

from hopboltz.acceptance import FIXTURES, SAMPLING_SEED, SAMPLING_STEPS, sampled_chains
from hopboltz.gibbs import gibbs_site_update, trajectory_hash
from hopboltz.hopfield import hebbian
from hopboltz.network import NetworkState
from hopboltz.oracle import encode
from hopboltz.rng import RngStream, splitmix64


def main():
    gold = {
        "splitmix64": {
            str(seed): [f"{splitmix64(seed, i):#018x}" for i in range(5)] for seed in (0, 1, SAMPLING_SEED)
        },
        "uniforms_seed1": [RngStream(1, i).uniform()[0] for i in range(5)],
    }
    params = hebbian([(1, 1, -1, -1), (-1, 1, -1, 1)])
    state = NetworkState([-1, -1, -1, 1])
    # T=4 puts p(+1) at expit(-1) ~ 0.27, so the outcome depends on the seed
    finals = [encode(gibbs_site_update(params, state, 0, 4.0, RngStream(seed))[0]) for seed in range(16)]
    gold["gibbs_site_update"] = {"init": [-1, -1, -1, 1], "site": 0, "T": 4.0,
                                 "final_index_by_seed": finals}
    gold["trajectories"] = {}
    for name, (_, res) in sampled_chains().items():
        gold["trajectories"][name] = {
            "seed": SAMPLING_SEED,
            "steps": SAMPLING_STEPS,
            "T": 1.0,
            "init_index": 0,
            "final_index": encode(res.final),
            "sha256": trajectory_hash(res.trajectory),
        }
    path = FIXTURES / "golden.json"
    path.write_text(json.dumps(gold, indent=2) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
