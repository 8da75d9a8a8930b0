#!/usr/bin/env python3
"""Tabulate pair entanglement of the single-excitation W states.

For each party count M the intact state carries identical pair components,
while tracing out the other M-2 parties leaves a mixed pair whose
concurrence is smaller.  The table shows both, their closed forms, and the
measured-vs-discarded ratio M/2.
"""

import argparse
import math

from etensor import (
    SubsetSelector,
    component,
    concurrence_mixed_2qubit,
    dur_average,
    trace_to_pair,
    w_state,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m", type=int, default=8,
                        help="largest party count (default 8, limit 10)")
    args = parser.parse_args()

    header = (f"{'M':>2}  {'pair comp':>12}  {'sqrt(2/M)':>12}  "
              f"{'traced C':>12}  {'2/M':>8}  {'mean C^2':>10}  "
              f"{'4/M^2':>8}  {'ratio':>6}")
    print(header)
    print("-" * len(header))
    for m in range(3, args.max_m + 1):
        state = w_state(m)
        pair_value = component(state, SubsetSelector((0, 1)))
        traced = concurrence_mixed_2qubit(trace_to_pair(state, (0, 1)))
        mean_sq = dur_average(m)
        ratio = pair_value**2 / traced**2
        print(f"{m:>2}  {pair_value:>12.9f}  {math.sqrt(2 / m):>12.9f}  "
              f"{traced:>12.9f}  {2 / m:>8.5f}  {mean_sq:>10.7f}  "
              f"{4 / m**2:>8.5f}  {ratio:>6.2f}")


if __name__ == "__main__":
    main()
