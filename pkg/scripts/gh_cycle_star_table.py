"""Print GH(C_m, S_n) next to the closed-form value for a range of sizes."""

import argparse
import time

from perstopy.gromov_hausdorff import gh_exact
from perstopy.metric import cycle_graph, star_graph
from perstopy.verify import gh_cycle_star_formula

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--max", type=int, default=7, help="largest m and n")
args = parser.parse_args()

print(f"{'m':>3} {'n':>3} {'exact':>8} {'formula':>8} {'sec':>7}")
for m in range(3, args.max + 1):
    for n in range(3, args.max + 1):
        t = time.perf_counter()
        got = gh_exact(cycle_graph(m), star_graph(n).space)
        mark = "" if got == gh_cycle_star_formula(m, n) else "  <- differs"
        print(f"{m:>3} {n:>3} {got:>8.3f} {gh_cycle_star_formula(m, n):>8.3f} {time.perf_counter() - t:>7.3f}{mark}")
