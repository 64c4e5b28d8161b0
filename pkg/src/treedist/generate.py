"""Seeded random trees and bounded-distance pairs.

All randomness comes from :class:`SplitMix64`, a fixed 64-bit recurrence, so a
seed yields the same trees on every platform and in any language that
implements the same steps.
"""
from __future__ import annotations

from .tree import LabeledTree, from_children

_MASK = (1 << 64) - 1


class SplitMix64:
    """state += 0x9E3779B97F4A7C15; z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
    z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31 (all mod 2^64)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


def label_name(i: int) -> str:
    """0 -> 'a', 25 -> 'z', 26 -> 'ba', ... (base-26 digits)."""
    out = []
    while True:
        out.append(chr(ord("a") + i % 26))
        i //= 26
        if i == 0:
            return "".join(reversed(out))


def from_parents(parents, labels) -> LabeledTree:
    """Build a tree from parent pointers (node 0 is the root, children keep
    index order), renumbering nodes to preorder."""
    return _rebuild(_child_lists(parents), labels)


def _child_lists(parents):
    kids = [[] for _ in parents]
    for v in range(1, len(parents)):
        kids[parents[v]].append(v)
    return kids


def _random_shape(rng, n, labels):
    parents = [-1] + [rng.below(v) for v in range(1, n)]
    lab = [label_name(rng.below(labels)) for _ in range(n)]
    return parents, lab


def gen_random_tree(seed: int, n: int, labels: int = 4) -> LabeledTree:
    """Random recursive tree: node v attaches to a uniform earlier node and
    becomes its last child.  Labels are uniform over ``labels`` symbols."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if labels < 1:
        raise ValueError("need at least one label")
    return from_parents(*_random_shape(SplitMix64(seed), n, labels))


def gen_edited_pair(seed: int, n: int, r: int, labels: int = 4):
    """``(t1, t2, applied)`` where t2 is t1 after ``applied <= r`` random edits.

    Each edit deletes a random non-root node (its children take its place in
    order) or relabels a random node to a different symbol, so the distance
    is at most ``applied``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if r < 0:
        raise ValueError("edit budget must be non-negative")
    if r >= n:
        raise ValueError(f"edit budget {r} exceeds the {n - 1} deletable nodes")
    rng = SplitMix64(seed)
    parents, lab = _random_shape(rng, n, labels)
    t1 = from_parents(parents, lab)

    kids = _child_lists(parents)
    alive = list(range(n))
    lab = list(lab)
    applied = 0
    for _ in range(r):
        can_relabel = labels > 1
        if len(alive) > 1 and (not can_relabel or rng.below(2) == 0):
            v = alive.pop(1 + rng.below(len(alive) - 1))
            par = parents[v]
            i = kids[par].index(v)
            kids[par][i:i + 1] = kids[v]
            for c in kids[v]:
                parents[c] = par
            applied += 1
        elif can_relabel:
            v = alive[rng.below(len(alive))]
            others = [s for s in map(label_name, range(labels)) if s != lab[v]]
            lab[v] = others[rng.below(len(others))]
            applied += 1
    return t1, _rebuild(kids, lab), applied


def _rebuild(kids, lab):
    # sibling order after deletions lives in the kids lists, not in node indices
    order = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(kids[v]))
    pre = {v: i + 1 for i, v in enumerate(order)}
    children = [[]] + [[pre[c] for c in kids[v]] for v in order]
    names = [None] + [lab[v] for v in order]
    return from_children(children, names)


def _forests(m, memo={}):
    # every ordered forest with m nodes, as tuples of child-forests
    if m not in memo:
        if m == 0:
            memo[m] = [()]
        else:
            out = []
            for first in range(1, m + 1):
                for inner in _forests(first - 1):
                    for rest in _forests(m - first):
                        out.append((inner,) + rest)
            memo[m] = out
    return memo[m]


def enumerate_shapes(n: int):
    """All ordered tree shapes with ``n`` nodes (Catalan(n-1) of them), as
    preorder child lists suitable for :func:`from_children`."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for forest in _forests(n - 1):
        children = [[] for _ in range(n + 1)]
        stack = [(1, forest)]
        while stack:
            v, kids = stack.pop()
            nxt = v + 1  # each child follows its left siblings' whole subtrees
            for kid in kids:
                children[v].append(nxt)
                stack.append((nxt, kid))
                nxt += _count(kid) + 1
        yield children


def _count(forest):
    return sum(1 + _count(kid) for kid in forest)


def shape_tree(children, names=None) -> LabeledTree:
    """Tree from :func:`enumerate_shapes` output; ``names[v-1]`` labels node v
    (default: every node labeled 'a')."""
    n = len(children) - 1
    if names is None:
        names = ["a"] * n
    return from_children(children, [None] + list(names))
