"""Scaling sweeps for the bounded and exact DPs.

Three tables, each normalized by its expected growth:

* relevant F1 subforests of the exact run, divided by n log2 n
* widest F2 slice of a bounded run (max_f2_per_f1), divided by k^2
* bounded states expanded, divided by n k^2 log2 n, with wall times

Usage::

    python3 scripts/scaling.py                 # default sweep, a few minutes
    python3 scripts/scaling.py --quick         # smaller sizes
    python3 scripts/scaling.py --out run.json  # also dump the raw rows
"""
import argparse
import json
import math
import time

from treedist import (
    StatsReport,
    gen_edited_pair,
    gen_random_tree,
    klein_relevant_subforests,
    ted_bounded,
)


def relevant_sweep(sizes, seeds):
    rows = []
    for n in sizes:
        counts = [len(klein_relevant_subforests(gen_random_tree(s, n))) for s in range(seeds)]
        mean = sum(counts) / len(counts)
        rows.append({"n": n, "mean_relevant": mean, "ratio": mean / (n * math.log2(n))})
    return rows


def bounded_sweep(n, ks, seeds):
    rows = []
    for k in ks:
        for seed in range(seeds):
            t1, t2, _ = gen_edited_pair(seed, n, k)
            stats = StatsReport()
            start = time.perf_counter()
            res = ted_bounded(t1, t2, k, stats)
            wall = time.perf_counter() - start
            rows.append({
                "n": n, "k": k, "seed": seed, "distance": res.distance,
                "states": stats.states_expanded, "max_f2_per_f1": stats.max_f2_per_f1,
                "f2_ratio": stats.max_f2_per_f1 / k ** 2,
                "states_ratio": stats.states_expanded / (n * k ** 2 * math.log2(n)),
                "wall_s": wall,
            })
    return rows


def mean_by(rows, key, field):
    groups = {}
    for row in rows:
        groups.setdefault(row[key], []).append(row[field])
    return {g: sum(v) / len(v) for g, v in groups.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--out", help="write raw rows as JSON")
    args = ap.parse_args()

    sizes = [128, 256, 512, 1024] if args.quick else [256, 512, 1024, 2048, 4096]
    ks = [2, 4, 8] if args.quick else [2, 4, 8, 16]
    ns = [500, 1000, 2000] if args.quick else [1000, 2000, 4000, 8000]

    # compile before anything is timed
    ted_bounded(*gen_edited_pair(0, 30, 3)[:2], 3)

    relevant = relevant_sweep(sizes, args.seeds)
    print("relevant F1 subforests / (n log2 n)")
    for row in relevant:
        print(f"  n={row['n']:6d}  mean={row['mean_relevant']:10.0f}  ratio={row['ratio']:.3f}")

    width = bounded_sweep(2000 if not args.quick else 500, ks, args.seeds)
    print("max_f2_per_f1 / k^2")
    for k, v in mean_by(width, "k", "f2_ratio").items():
        print(f"  k={k:3d}  ratio={v:.3f}")

    states = [row for n in ns for row in bounded_sweep(n, [8], args.seeds)]
    ratio = mean_by(states, "n", "states_ratio")
    wall = mean_by(states, "n", "wall_s")
    print("states_expanded / (n k^2 log2 n), k=8")
    for n in ns:
        print(f"  n={n:6d}  ratio={ratio[n]:.3f}  wall={wall[n]:.2f}s")

    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"relevant": relevant, "width": width, "states": states}, fh, indent=1)


if __name__ == "__main__":
    main()
