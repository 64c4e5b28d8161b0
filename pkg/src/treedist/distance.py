"""Exact and bounded unit-cost tree edit distance over subforest pairs.

The recursion picks its direction from the first forest only: it peels the
rightmost root when the leftmost tree of F1 is strictly larger than the
rightmost one, and the leftmost root otherwise.  That keeps the number of
distinct F1 operands at O(n log n).  The bounded variant additionally refuses
to expand any child state whose forest sizes, left upper parts or right upper
parts differ by more than ``k``; such states are charged ``k + 1``.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernel
from .subforest import (
    EMPTY,
    Move,
    SubforestKey,
    derived_sizes,
    transition,
    whole_tree_key,
)
from .tree import LabeledTree


@dataclass(frozen=True, order=True)
class Cost:
    """Non-negative edit cost saturating at ``cap`` ("more than the bound")."""

    value: int
    cap: int = field(compare=False)

    def __post_init__(self):
        if self.value < 0 or self.cap < 0:
            raise ValueError("costs are non-negative")
        if self.value > self.cap:
            object.__setattr__(self, "value", self.cap)

    def __add__(self, other):
        other_value = other.value if isinstance(other, Cost) else other
        return Cost(min(self.value + other_value, self.cap), self.cap)

    __radd__ = __add__

    @property
    def saturated(self):
        return self.value >= self.cap


@dataclass
class StatsReport:
    """Counters filled in by one distance computation.

    Every generated DP state (the root included) bumps exactly one of
    ``states_expanded``, ``memo_hits`` or a ``pruned_*`` counter.  States with
    an empty side are evaluated in place and count as expanded.
    """

    states_expanded: int = 0
    memo_hits: int = 0
    pruned_size_rule: int = 0
    pruned_lu_rule: int = 0
    pruned_ru_rule: int = 0
    distinct_f1_keys: int = 0
    max_f2_per_f1: int = 0
    wall_time_ns: int = 0

    @property
    def generated(self):
        return (self.states_expanded + self.memo_hits + self.pruned_size_rule
                + self.pruned_lu_rule + self.pruned_ru_rule)

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class BoundedResult:
    """Outcome of a bounded run: ``distance`` is exact, or None when it
    exceeds ``k``."""

    k: int
    distance: int | None = None

    @property
    def exceeds(self):
        return self.distance is None

    def __str__(self):
        return f"exceeds {self.k}" if self.exceeds else str(self.distance)


def _joint_labels(t1, t2):
    ids = {}
    lab1 = np.array([ids.setdefault(s, len(ids)) for s in t1.labels], dtype=np.int64)
    lab2 = np.array([ids.setdefault(s, len(ids)) for s in t2.labels], dtype=np.int64)
    return lab1[t1.label], lab2[t2.label]


# exact runs memoize in a dense (F1 row, F2 key) array when it fits here
DENSE_MEMO_BYTES = 1 << 28


def _dense_memo(t1, t2, k):
    """Row index and cell arrays for a dense memo, or empty arrays when the
    run is bounded or the table would exceed :data:`DENSE_MEMO_BYTES`.

    Cells are int16 holding ``value + 1``, so the cap ``n1 + n2 + 1`` must
    stay below 2**15 - 1."""
    row_bytes = 2 * (t2.n + 1) ** 2
    if k < 0 and t1.n + t2.n < 2 ** 15 - 1 and 2 * row_bytes <= DENSE_MEMO_BYTES:
        rows = len(klein_relevant_subforests(t1))
        if rows * row_bytes <= DENSE_MEMO_BYTES:
            return (np.full((t1.n + 1) ** 2, -1, dtype=np.int64),
                    np.zeros((rows, (t2.n + 1) ** 2), dtype=np.int16))
    return np.empty(0, dtype=np.int64), np.empty((0, 0), dtype=np.int16)


def _memo_shape(layout, table, rows_used, dense):
    """(distinct F1 keys, widest F1 row) of the memo after a run."""
    if dense.shape[0]:
        if rows_used == 0:
            return 0, 0
        per_f1 = np.count_nonzero(dense[:rows_used], axis=1)
    else:
        f1 = _kernel.memo_rows(table, layout[0], layout[1])[:, 0]
        if not len(f1):
            return 0, 0
        _, per_f1 = np.unique(f1, return_counts=True)
    return len(per_f1), int(per_f1.max())


def _run(t1, t2, k, cap, stats):
    lab1, lab2 = _joint_labels(t1, t2)
    a1 = t1.arrays(lab1)
    a2 = t2.arrays(lab2)
    counters = np.zeros(5, dtype=np.int64)
    start = time.perf_counter_ns()
    layout = _kernel.layout(t1.n, t2.n, cap)
    row_of, dense = _dense_memo(t1, t2, k)
    value, table, rows_used = _kernel.run(a1, a2, k, cap, counters, *layout, row_of, dense)
    elapsed = time.perf_counter_ns() - start
    if stats is not None:
        distinct, widest = _memo_shape(layout, table, rows_used, dense)
        stats.states_expanded += int(counters[_kernel.EXPANDED])
        stats.memo_hits += int(counters[_kernel.MEMO_HITS])
        stats.pruned_size_rule += int(counters[_kernel.PRUNED_SIZE])
        stats.pruned_lu_rule += int(counters[_kernel.PRUNED_LU])
        stats.pruned_ru_rule += int(counters[_kernel.PRUNED_RU])
        stats.distinct_f1_keys = distinct
        stats.max_f2_per_f1 = widest
        stats.wall_time_ns += elapsed
    return int(value)


def ted_klein(t1: LabeledTree, t2: LabeledTree, stats: StatsReport | None = None) -> int:
    """Exact distance by the heavy-side memoized recursion, no pruning."""
    return _run(t1, t2, -1, t1.n + t2.n + 1, stats)


def ted_bounded(t1: LabeledTree, t2: LabeledTree, k: int,
                stats: StatsReport | None = None) -> BoundedResult:
    """Exact distance if it is at most ``k``, else ``exceeds k``.

    Pruned states are charged ``k + 1``, which can only overestimate, so a
    root value ``<= k`` is exact.  Each call uses a fresh memo.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    d = _run(t1, t2, k, k + 1, stats)
    return BoundedResult(k, d if d <= k else None)


def ted_auto(t1: LabeledTree, t2: LabeledTree, stats: StatsReport | None = None) -> int:
    """Run :func:`ted_bounded` with k = max(1, |n1 - n2|), 2k, 4k, ... until exact.

    Counters and wall time accumulate over all rounds; the two per-F1 figures
    describe the last round.
    """
    return auto_bound(t1, t2, stats).distance


def auto_bound(t1, t2, stats=None):
    """The doubling loop behind :func:`ted_auto`; returns the final round's
    :class:`BoundedResult` so callers can see which ``k`` succeeded."""
    k = max(1, abs(t1.n - t2.n))
    while True:
        res = ted_bounded(t1, t2, k, stats)
        if not res.exceeds:
            return res
        k *= 2


def is_useful(t1: LabeledTree, t2: LabeledTree, key1: SubforestKey,
              key2: SubforestKey, k: int) -> bool:
    """True unless the sizes, left upper parts or right upper parts of the two
    forests differ by more than ``k``.  States with an empty side are base
    cases and always useful."""
    if key1.is_empty or key2.is_empty:
        return True
    d1 = derived_sizes(t1, key1)
    d2 = derived_sizes(t2, key2)
    return (abs(d1.size - d2.size) <= k
            and abs(d1.size_lu - d2.size_lu) <= k
            and abs(d1.size_ru - d2.size_ru) <= k)


def takes_right_branch(t: LabeledTree, key: SubforestKey) -> bool:
    """Direction rule: peel rightmost roots iff size(L_F) > size(R_F)."""
    return t.size[key.p] > t.size[t.post_node[key.q]]


def klein_relevant_subforests(t: LabeledTree) -> set:
    """All non-empty F1 keys the recursion can pose as operands.

    The first-tree side of every transition depends on F1 alone, so this
    closure is the F1 projection of the full state graph and an upper bound
    on ``distinct_f1_keys`` of any :func:`ted_klein` run with ``t`` first.
    """
    start = whole_tree_key(t)
    seen = {start}
    queue = deque([start])
    while queue:
        key = queue.popleft()
        if takes_right_branch(t, key):
            moves = (Move.REMOVE_RIGHT_ROOT, Move.SELECT_RIGHT_SUBTREE, Move.REMOVE_RIGHT_TREE)
        else:
            moves = (Move.REMOVE_LEFT_ROOT, Move.SELECT_LEFT_SUBTREE, Move.REMOVE_LEFT_TREE)
        for move in moves:
            nxt = transition(t, key, move)
            if nxt != EMPTY and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen
