#!/usr/bin/env python3
"""Cost matrix of every algorithm across arrangements and sizes.

This is the complexity picture the battle view teaches: quadratic sorts
fall apart on reversed inputs, insertion is unbeatable on sorted ones,
radix pays a flat three passes at n=100 no matter what.

Usage: python scripts/cost_table.py [--sizes 20,100,500] [--seed 7]
"""

from __future__ import annotations

import argparse

from sortlab import Arrangement, generate_trace, list_algorithms, make_arrangement


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,100,500")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    arrangements = [
        ("sorted", Arrangement("sorted")),
        ("reversed", Arrangement("reversed")),
        ("random", Arrangement("random", args.seed)),
    ]
    algos = [spec.id for spec in list_algorithms()]

    for size in sizes:
        print(f"\ntotal trace cost, n={size} (seed {args.seed} for random)")
        print(f"{'algorithm':<12}" + "".join(f"{label:>12}" for label, _ in arrangements))
        for algo in algos:
            row = [f"{algo:<12}"]
            for _, arrangement in arrangements:
                values = make_arrangement(arrangement, size)
                row.append(f"{generate_trace(algo, values).total_cost:>12}")
            print("".join(row))


if __name__ == "__main__":
    main()
