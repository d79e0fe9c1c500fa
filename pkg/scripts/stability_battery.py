"""Seeded stability battery; prints how tight each lower bound is against the GH distance."""

import argparse

import numpy as np

from perstopy.distances import bottleneck, interleaving_interval_groups, interval_group_of
from perstopy.gromov_hausdorff import gh_exact, gh_pointed_exact
from perstopy.homology import mu0_ultrametric, ph0_diagram, ph1_diagram
from perstopy.metric import random_metric
from perstopy.vietoris_rips import persistent_pi1

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--pairs", type=int, default=200)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--max-points", type=int, default=5)
args = parser.parse_args()

rng = np.random.default_rng(args.seed)
ratios = {"dgm0": [], "dgm1": [], "mu0": [], "pi1": []}
violations = 0
for _ in range(args.pairs):
    X, Y = (random_metric(int(rng.integers(2, args.max_points + 1)), int(rng.integers(10**6)),
                          "grid" if rng.random() < 0.5 else "graph") for _ in range(2))
    d, dpt = gh_exact(X, Y), gh_pointed_exact(X.pointed(), Y.pointed())
    IX, IY = interval_group_of(persistent_pi1(X)), interval_group_of(persistent_pi1(Y))
    bounds = {
        "dgm0": (0.5 * bottleneck(ph0_diagram(X), ph0_diagram(Y)), d),
        "dgm1": (0.5 * bottleneck(ph1_diagram(X), ph1_diagram(Y)), d),
        "mu0": (gh_exact(mu0_ultrametric(X), mu0_ultrametric(Y)), d),
    }
    if IX is not None and IY is not None:
        bounds["pi1"] = (0.5 * interleaving_interval_groups(IX, IY), dpt)
    for key, (low, high) in bounds.items():
        violations += low > high + 1e-9
        if high > 0:
            ratios[key].append(low / high)

print(f"{args.pairs} pairs, seed {args.seed}: {violations} violations")
for key, r in ratios.items():
    if r:
        r = np.array(r)
        print(f"  {key:<5} bound/GH  mean {r.mean():.3f}  max {r.max():.3f}  tight in {np.sum(r > 1 - 1e-9)}/{len(r)}")
