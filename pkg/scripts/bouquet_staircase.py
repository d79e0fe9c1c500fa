"""Persistent pi_1 of wedges of cycle graphs: one free generator per cycle still alive."""

import argparse
from functools import reduce

from perstopy.metric import cycle_graph, wedge_sum
from perstopy.vietoris_rips import persistent_pi1

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("sizes", nargs="*", type=int, default=[4, 7, 10])
args = parser.parse_args()

W = reduce(wedge_sum, (cycle_graph(n).pointed() for n in args.sizes))
PP = persistent_pi1(W)
print(f"wedge of cycles {args.sizes}: {len(W)} points")
for s, g in zip(PP.scales, PP.classes()):
    alive = sum(1 <= s < (n + 2) // 3 for n in args.sizes)
    print(f"  scale {s:g}: {g}  (cycles alive: {alive})")
