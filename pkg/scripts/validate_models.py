#!/usr/bin/env python3
"""Side-by-side table: analytic models vs simulation across a uniformity grid.

Prints, for each grid point, the lost-traffic fraction from the cleared
pair (product form vs simulation) and the overflow pair (Poisson binomial
vs simulation), with 95% half-widths. A quick way to eyeball that the
four implementations agree before trusting a long sweep.
"""

import argparse

from opsloss import (SimSpec, default_tui_grid, engset_lcc, engset_ofl,
                     make_load_vector, simulate)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=8)
    parser.add_argument("--w", type=int, default=1)
    parser.add_argument("--load", type=float, default=0.5, help="per-wavelength load")
    parser.add_argument("--horizon", type=float, default=2e4)
    parser.add_argument("--reps", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    total = args.load * args.w
    print(f"M={args.m} W={args.w} total load {total:g}")
    print(f"{'tui':>6} {'lcc':>10} {'sim-cleared':>22} {'ofl':>10} {'sim-held':>22}")
    for t in default_tui_grid(args.m, total):
        loads = make_load_vector(args.m, total, t)
        lcc = engset_lcc(loads, args.w).traffic_congestion
        ofl = engset_ofl(loads, args.w).traffic_congestion
        cleared = simulate(SimSpec(loads=loads, w=args.w, mode="cleared",
                                   horizon=args.horizon, replications=args.reps,
                                   base_seed=args.seed)).traffic_congestion
        held = simulate(SimSpec(loads=loads, w=args.w, mode="held",
                                horizon=args.horizon, replications=args.reps,
                                base_seed=args.seed)).traffic_congestion
        print(f"{t:6.3f} {lcc:10.6f} {cleared.value:10.6f} +- {cleared.half_width:.2e}"
              f" {ofl:10.6f} {held.value:10.6f} +- {held.half_width:.2e}")


if __name__ == "__main__":
    main()
