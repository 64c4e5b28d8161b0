"""Reference distances that share no code with the subforest DP.

``ted_oracle_search`` works straight from the definition (delete nodes on both
sides, relabel, compare forests) and is exponential; ``ted_zs`` is the
classic keyroot tabulation of the always-rightmost recursion.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import count

from .tree import LabeledTree, parse_tree, serialize_tree

ORACLE_MAX_NODES = 14


@lru_cache(maxsize=1 << 14)
def _kept_forests_cached(text):
    # exhaustive families revisit the same trees many times
    return _kept_forests(parse_tree(text))


def _kept_forests(t):
    """Map kept-node count -> {shape: [label tuples]} over all 2^n deletion sets.

    A forest is a nested tuple of children; labels are listed in preorder.
    """
    n = t.n
    names = [None] + [t.label_of(v) for v in range(1, n + 1)]
    by_size = {}
    for mask in range(1 << n):
        kept = [False] + [bool(mask >> (v - 1) & 1) for v in range(1, n + 1)]
        shape = [None] * (n + 1)
        labels = [None] * (n + 1)
        for v in range(n, 0, -1):
            sub_shape = []
            sub_labels = []
            for c in t.children[v]:
                sub_shape.extend(shape[c])
                sub_labels.extend(labels[c])
            if kept[v]:
                shape[v] = (tuple(sub_shape),)
                labels[v] = [names[v]] + sub_labels
            else:
                shape[v] = tuple(sub_shape)
                labels[v] = sub_labels
        size = sum(kept)
        by_size.setdefault(size, {}).setdefault(tuple(shape[1]), set()).add(tuple(labels[1]))
    return by_size


def _fewest_relabels(groups1, groups2):
    best = None
    for shape, labels1 in groups1.items():
        labels2 = groups2.get(shape)
        if not labels2:
            continue
        for a in labels1:
            for b in labels2:
                m = sum(x != y for x, y in zip(a, b))
                if best is None or m < best:
                    best = m
    return best


def ted_oracle_search(t1: LabeledTree, t2: LabeledTree) -> int:
    """Exact distance by iterative deepening over edit scripts.

    Deletions commute, so a script is a pair of deletion sets followed by
    relabelings of the surviving nodes.  For budget d = 0, 1, 2, ... we look
    for deletion sets of total size <= d leaving identically shaped forests
    that need at most the remaining budget in relabels.
    """
    if t1.n + t2.n > ORACLE_MAX_NODES:
        raise ValueError(f"search oracle limited to {ORACLE_MAX_NODES} nodes in total")
    forests1 = _kept_forests_cached(serialize_tree(t1))
    forests2 = _kept_forests_cached(serialize_tree(t2))
    relabels = {}
    for kept in range(min(t1.n, t2.n) + 1):
        m = _fewest_relabels(forests1[kept], forests2[kept])
        if m is not None:
            relabels[kept] = m
    for budget in count():
        for kept, m in relabels.items():
            deletions = (t1.n - kept) + (t2.n - kept)
            if deletions + m <= budget:
                return budget


def ted_zs(t1: LabeledTree, t2: LabeledTree) -> int:
    """Zhang-Shasha keyroot DP (always peels the rightmost root).

    Works in postorder numbering, where the leftmost leaf of node i is
    ``i - size + 1`` and keyroots are the root plus every non-first child.
    """
    def postorder_view(t):
        n = t.n
        lml = [0] * (n + 1)
        lab = [None] * (n + 1)
        keyroots = []
        for v in range(1, n + 1):
            i = int(t.post[v])
            lml[i] = i - int(t.size[v]) + 1
            lab[i] = t.label_of(v)
            par = int(t.parent[v])
            if par == 0 or t.children[par][0] != v:
                keyroots.append(i)
        keyroots.sort()
        return n, lml, lab, keyroots

    n1, l1, lab1, kr1 = postorder_view(t1)
    n2, l2, lab2, kr2 = postorder_view(t2)
    treedist = [[0] * (n2 + 1) for _ in range(n1 + 1)]

    for i in kr1:
        for j in kr2:
            li, lj = l1[i], l2[j]
            rows = i - li + 2
            cols = j - lj + 2
            fd = [[0] * cols for _ in range(rows)]
            for x in range(1, rows):
                fd[x][0] = x
            for y in range(1, cols):
                fd[0][y] = y
            for x in range(1, rows):
                a = li + x - 1
                row, prev = fd[x], fd[x - 1]
                for y in range(1, cols):
                    b = lj + y - 1
                    if l1[a] == li and l2[b] == lj:
                        cost = prev[y - 1] + (lab1[a] != lab2[b])
                        cost = min(cost, prev[y] + 1, row[y - 1] + 1)
                        row[y] = cost
                        treedist[a][b] = cost
                    else:
                        p = l1[a] - li
                        q = l2[b] - lj
                        row[y] = min(prev[y] + 1, row[y - 1] + 1, fd[p][q] + treedist[a][b])
    return treedist[n1][n2]
