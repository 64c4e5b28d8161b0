"""``ted`` command line: compute, gen and bench.

Exit codes for ``compute``: 0 when a distance is printed, 2 when a bounded
run reports "exceeds k", 1 on any input error.  JSON output is a single
document on stdout.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .distance import (
    StatsReport,
    auto_bound,
    klein_relevant_subforests,
    ted_bounded,
    ted_klein,
)
from .generate import SplitMix64, gen_edited_pair, gen_random_tree
from .oracle import ted_oracle_search, ted_zs
from .tree import TreeSyntaxError, parse_tree, serialize_tree

ALGORITHMS = ("oracle", "zs", "klein", "bounded", "auto")
# counters only the subforest DP produces; null for oracle and zs
DP_COUNTERS = ("states_expanded", "memo_hits", "pruned_size_rule", "pruned_lu_rule",
               "pruned_ru_rule", "distinct_f1_keys", "max_f2_per_f1")

_int_or_null = {"type": ["integer", "null"], "minimum": 0}
STATS_SCHEMA = {
    "type": "object",
    "required": ["alg", "n1", "n2", "k", "distance", "exceeds", *DP_COUNTERS,
                 "wall_time_ns", "seed"],
    "additionalProperties": False,
    "properties": {
        "alg": {"enum": list(ALGORITHMS)},
        "n1": {"type": "integer", "minimum": 1},
        "n2": {"type": "integer", "minimum": 1},
        "k": _int_or_null,
        "distance": _int_or_null,
        "exceeds": {"type": "boolean"},
        **{name: _int_or_null for name in DP_COUNTERS},
        "wall_time_ns": {"type": "integer", "minimum": 0},
        "seed": _int_or_null,
    },
}

_ratio = {"type": ["number", "null"]}
_summary = {
    "type": "object",
    "required": ["min", "max", "mean", "spread"],
    "properties": {key: _ratio for key in ("min", "max", "mean", "spread")},
}
BENCH_SCHEMA = {
    "type": "object",
    "required": ["config", "rows", "aggregate"],
    "properties": {
        "config": {"type": "object"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "k", "rep", "seed", "edits_applied", "bounded", "klein",
                             "klein_relevant_f1", "agree", "states_ratio", "f1_ratio",
                             "f2_ratio"],
                "properties": {
                    "bounded": STATS_SCHEMA,
                    "klein": {"oneOf": [STATS_SCHEMA, {"type": "null"}]},
                    "agree": {"type": ["boolean", "null"]},
                    "states_ratio": {"type": "number"},
                    "f1_ratio": {"type": "number"},
                    "f2_ratio": {"type": "number"},
                },
            },
        },
        "aggregate": {
            "type": "object",
            "required": ["states_ratio", "f1_ratio", "f2_ratio"],
            "properties": {key: _summary for key in ("states_ratio", "f1_ratio", "f2_ratio")},
        },
    },
}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); exit 2 means "exceeds k"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    alg: str = "auto"
    k: int | None = None
    seed: int | None = None
    json: bool = False
    files: bool = False

    def __post_init__(self):
        if self.alg not in ALGORITHMS:
            raise InputError(f"unknown algorithm {self.alg!r}")
        if self.alg == "bounded" and self.k is None:
            raise InputError("--alg bounded needs --k")
        if self.k is not None and self.k < 0:
            raise InputError("k must be non-negative")


def load_tree(arg: str, files: bool, which: str):
    """Read a tree given inline or as a path.

    Without ``--files`` an argument that parses is taken as an inline tree and
    anything else as a path; with ``--files`` it is always a path.
    """
    if not files:
        try:
            t = parse_tree(arg)
        except TreeSyntaxError as inline_err:
            if not os.path.isfile(arg):
                raise InputError(f"{which} (inline): {inline_err}") from None
        else:
            if os.path.isfile(arg):
                print(f"note: {which} {arg!r} read as an inline tree; "
                      "use --files to read the file", file=sys.stderr)
            return t
    try:
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise InputError(f"{which}: cannot read {arg}: {err.strerror}") from None
    except UnicodeDecodeError as err:
        raise InputError(f"{which}: {arg} is not UTF-8 (byte {err.start})") from None
    try:
        return parse_tree(text)
    except TreeSyntaxError as err:
        raise InputError(f"{which}: {arg}: {err}") from None


def stats_document(alg, t1, t2, k, distance, stats, seed=None, wall_time_ns=0):
    """One JSON object in the :data:`STATS_SCHEMA` layout."""
    doc = {"alg": alg, "n1": t1.n, "n2": t2.n, "k": k, "distance": distance,
           "exceeds": distance is None}
    if stats is None:
        doc.update(dict.fromkeys(DP_COUNTERS))
        doc["wall_time_ns"] = wall_time_ns
    else:
        doc.update({name: getattr(stats, name) for name in DP_COUNTERS})
        doc["wall_time_ns"] = stats.wall_time_ns
    doc["seed"] = seed
    return doc


def compute(cfg: RunConfig, t1, t2):
    """Run ``cfg.alg``; returns ``(distance or None, k used, stats or None, ns)``."""
    if cfg.alg in ("oracle", "zs"):
        fn = ted_oracle_search if cfg.alg == "oracle" else ted_zs
        start = time.perf_counter_ns()
        try:
            d = fn(t1, t2)
        except ValueError as err:
            raise InputError(str(err)) from None
        return d, cfg.k, None, time.perf_counter_ns() - start
    stats = StatsReport()
    if cfg.alg == "klein":
        return ted_klein(t1, t2, stats), cfg.k, stats, stats.wall_time_ns
    if cfg.alg == "bounded":
        res = ted_bounded(t1, t2, cfg.k, stats)
        return res.distance, cfg.k, stats, stats.wall_time_ns
    res = auto_bound(t1, t2, stats)
    return res.distance, res.k, stats, stats.wall_time_ns


def cmd_compute(args) -> int:
    try:
        cfg = RunConfig(alg=args.alg, k=args.k, seed=args.seed, json=args.json,
                        files=args.files)
        t1 = load_tree(args.t1, cfg.files, "T1")
        t2 = load_tree(args.t2, cfg.files, "T2")
        d, k, stats, ns = compute(cfg, t1, t2)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if cfg.json:
        print(json.dumps(stats_document(cfg.alg, t1, t2, k, d, stats, cfg.seed, ns)))
    else:
        print(d if d is not None else f"exceeds {k}")
    return 0 if d is not None else 2


def cmd_gen(args) -> int:
    try:
        if args.edits is None:
            t1 = gen_random_tree(args.seed, args.n, args.labels)
            t2, applied = None, None
        else:
            t1, t2, applied = gen_edited_pair(args.seed, args.n, args.edits, args.labels)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.json:
        doc = {"seed": args.seed, "n": args.n, "labels": args.labels, "edits": args.edits,
               "edits_applied": applied, "t1": serialize_tree(t1),
               "t2": serialize_tree(t2) if t2 is not None else None}
        print(json.dumps(doc))
    else:
        print(serialize_tree(t1))
        if t2 is not None:
            print(serialize_tree(t2))
    return 0


def _log2(n):
    return math.log2(max(n, 2))


def bench_cell(n, k, rep, seed, klein_max_n):
    """One (n, k, rep) cell: an edited pair at budget k, bounded and maybe
    exact runs, and the three normalized ratios."""
    t1, t2, applied = gen_edited_pair(seed, n, min(k, n - 1))
    bstats = StatsReport()
    res = ted_bounded(t1, t2, k, bstats)
    bounded = stats_document("bounded", t1, t2, k, res.distance, bstats, seed)
    klein = None
    agree = None
    if n <= klein_max_n:
        kstats = StatsReport()
        d = ted_klein(t1, t2, kstats)
        klein = stats_document("klein", t1, t2, None, d, kstats, seed)
        agree = d == res.distance
    relevant = len(klein_relevant_subforests(t1))
    kk = max(k, 1) ** 2
    return {
        "n": n, "k": k, "rep": rep, "seed": seed, "edits_applied": applied,
        "bounded": bounded, "klein": klein, "klein_relevant_f1": relevant, "agree": agree,
        "states_ratio": bstats.states_expanded / (n * kk * _log2(n)),
        "f1_ratio": relevant / (n * _log2(n)),
        "f2_ratio": bstats.max_f2_per_f1 / kk,
    }


def _summary_of(values):
    if not values:
        return {"min": None, "max": None, "mean": None, "spread": None}
    lo, hi = min(values), max(values)
    return {"min": lo, "max": hi, "mean": sum(values) / len(values),
            "spread": hi / lo if lo > 0 else None}


def run_bench(sizes, ks, reps, seed, jobs=1, klein_max_n=300):
    """Benchmark report as a dict (see :data:`BENCH_SCHEMA`).

    Cell seeds are drawn up front in (n, k, rep) order, so the report does
    not depend on ``jobs`` apart from wall times.
    """
    rng = SplitMix64(seed)
    cells = [(n, k, rep, rng.next_u64(), klein_max_n)
             for n in sizes for k in ks for rep in range(reps)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(bench_cell, *zip(*cells)))
    else:
        rows = [bench_cell(*cell) for cell in cells]
    aggregate = {key: _summary_of([row[key] for row in rows])
                 for key in ("states_ratio", "f1_ratio", "f2_ratio")}
    config = {"sizes": list(sizes), "ks": list(ks), "reps": reps, "seed": seed,
              "klein_max_n": klein_max_n}
    return {"config": config, "rows": rows, "aggregate": aggregate}


def cmd_bench(args) -> int:
    if any(n < 1 for n in args.sizes) or any(k < 0 for k in args.ks) or args.reps < 1:
        print("error: sizes and reps must be positive, ks non-negative", file=sys.stderr)
        return 1
    report = run_bench(args.sizes, args.ks, args.reps, args.seed, args.jobs, args.klein_max_n)
    print(json.dumps(report))
    return 0


def build_parser():
    parser = _Parser(prog="ted", description="Unit-cost tree edit distance.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="distance between two trees")
    p.add_argument("--alg", choices=ALGORITHMS, default="auto")
    p.add_argument("--k", type=int, help="bound for --alg bounded")
    p.add_argument("--json", action="store_true", help="print a JSON stats document")
    p.add_argument("--files", action="store_true", help="treat T1 and T2 as file paths")
    p.add_argument("--seed", type=int, help="recorded in the JSON output")
    p.add_argument("t1", metavar="T1")
    p.add_argument("t2", metavar="T2")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("gen", help="random tree, or an edited pair with --edits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--labels", type=int, default=4)
    p.add_argument("--edits", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="bounded vs exact sweep, JSON report")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--ks", type=int, nargs="+", required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--klein-max-n", type=int, default=300,
                   help="skip the exact run above this size (reported as null)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
