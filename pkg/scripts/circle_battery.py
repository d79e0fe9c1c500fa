"""Distances between equally spaced samples of the unit circle (geodesic metric)."""

import argparse
import math

from perstopy.distances import bottleneck, interleaving_interval_groups, interval_group_of
from perstopy.gromov_hausdorff import gh_exact
from perstopy.homology import mu0_ultrametric, ph1_diagram
from perstopy.loops import enumerate_L, mu1_matrix
from perstopy.metric import circle_sample
from perstopy.vietoris_rips import persistent_pi1

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("n", type=int, nargs="?", default=3)
parser.add_argument("m", type=int, nargs="?", default=4)
args = parser.parse_args()

A, B = circle_sample(args.n), circle_sample(args.m)
LA, LB = enumerate_L(A), enumerate_L(B)
rows = {
    "GH": gh_exact(A, B),
    "GH of mu0 spaces": gh_exact(mu0_ultrametric(A), mu0_ultrametric(B)),
    "GH of loop spaces": gh_exact(mu1_matrix(LA, A), mu1_matrix(LB, B), limit=10**40),
    "1/2 d_I of pi_1": 0.5 * interleaving_interval_groups(interval_group_of(persistent_pi1(A)),
                                                           interval_group_of(persistent_pi1(B))),
    "1/2 d_B of dgm1": 0.5 * bottleneck(ph1_diagram(A), ph1_diagram(B)),
}
print(f"{args.n} vs {args.m} points; loop classes {len(LA)} and {len(LB)}")
for name, v in rows.items():
    print(f"  {name:<20} {v:.12g}  ({v / math.pi:.6g} pi)")
