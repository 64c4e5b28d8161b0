"""Subforests of an annotated tree as threshold pairs.

A key ``(p, q)`` denotes ``{v : pre[v] >= p and post[v] <= q}``.  Keys are
kept canonical: node ``p`` and the node with postorder index ``q`` are both in
the set, so equal forests always get equal keys.  ``(0, 0)`` is the empty
forest.

The ``_nb_*`` functions are the compiled versions the DP kernel calls; they
take the raw annotation arrays and return ``(p, q)`` pairs.
"""
from __future__ import annotations

import enum
from collections import deque
from typing import NamedTuple

import numpy as np
from numba import njit

from . import _primitives as prim
from .tree import LabeledTree, lca_query

class SubforestKey(NamedTuple):
    p: int
    q: int

    @property
    def is_empty(self):
        return self.p == 0

    def __str__(self):
        return "F(∅)" if self.p == 0 else f"F({self.p},{self.q})"


EMPTY = SubforestKey(0, 0)


class Move(enum.Enum):
    REMOVE_LEFT_ROOT = 0
    REMOVE_RIGHT_ROOT = 1
    REMOVE_LEFT_TREE = 2
    REMOVE_RIGHT_TREE = 3
    SELECT_LEFT_SUBTREE = 4
    SELECT_RIGHT_SUBTREE = 5


class DerivedSizes(NamedTuple):
    size: int
    size_lu: int
    size_ru: int
    size_mu: int


@njit(cache=True, _nrt=False)
def _nb_snap_pre(post, seg_min, p, q):
    if p < len(post) - 1 and post[p] <= q:
        return p
    return prim.seg_first_le(seg_min, p, q)


@njit(cache=True, _nrt=False)
def _nb_snap_post(post_node, seg_max, q, p):
    if q >= 1 and post_node[q] >= p:
        return q
    return prim.seg_last_ge(seg_max, q, p)


@njit(cache=True, _nrt=False)
def _nb_remove_left_root(post, size, seg_min, p, q):
    if post[p] == q:
        if size[p] == 1:
            return 0, 0
        return p + 1, q - 1
    if size[p] > 1:
        return p + 1, q
    return _nb_snap_pre(post, seg_min, p + 1, q), q


@njit(cache=True, _nrt=False)
def _nb_remove_right_root(post_node, size, seg_max, p, q):
    r = post_node[q]
    if r == p:
        if size[p] == 1:
            return 0, 0
        return p + 1, q - 1
    if size[r] > 1:
        return p, q - 1
    return p, _nb_snap_post(post_node, seg_max, q - 1, p)


@njit(cache=True, _nrt=False)
def _nb_remove_left_tree(post, size, seg_min, p, q):
    if post[p] == q:
        return 0, 0
    return _nb_snap_pre(post, seg_min, p + size[p], q), q


@njit(cache=True, _nrt=False)
def _nb_remove_right_tree(post_node, size, seg_max, p, q):
    r = post_node[q]
    if r == p:
        return 0, 0
    return p, _nb_snap_post(post_node, seg_max, q - size[r], p)


@njit(cache=True, _nrt=False)
def _nb_select_left(post, size, p, q):
    if size[p] == 1:
        return 0, 0
    return p + 1, post[p] - 1


@njit(cache=True, _nrt=False)
def _nb_select_right(post_node, size, p, q):
    r = post_node[q]
    if size[r] == 1:
        return 0, 0
    return r + 1, q - 1


@njit(cache=True, _nrt=False)
def _nb_derived(post, post_node, depth, euler, euler_depth, first, table, log2, p, q):
    """(size, size_lu, size_ru, size_mu) of a non-empty key."""
    n = len(post) - 2
    w = prim.sparse_lca(euler, euler_depth, first, table, log2, p, post_node[q])
    mu = depth[w]
    if not (w >= p and post[w] <= q):
        mu += 1
    lu = p - 1 - mu
    ru = n - q - mu
    return n - lu - ru - mu, lu, ru, mu


def _key(pq):
    p, q = pq
    return EMPTY if p == 0 else SubforestKey(int(p), int(q))


def _check(t, key):
    if key.is_empty:
        raise ValueError("operation undefined on the empty forest")
    if not (1 <= key.p <= t.n and 1 <= key.q <= t.n):
        raise ValueError(f"{key} out of range for n={t.n}")


def whole_tree_key(t: LabeledTree) -> SubforestKey:
    return SubforestKey(1, t.n)


def transition(t: LabeledTree, key: SubforestKey, kind: Move) -> SubforestKey:
    """Apply one of the six DP moves and return the canonical result key.

    ``REMOVE_LEFT_TREE`` leaves ``F - L_F`` and ``REMOVE_RIGHT_TREE`` leaves
    ``F - R_F``; the ``SELECT_*`` moves keep the subtree under the leftmost or
    rightmost root, without that root.
    """
    _check(t, key)
    p, q = key
    seg_min, seg_max = t._succ
    if kind is Move.REMOVE_LEFT_ROOT:
        out = _nb_remove_left_root(t.post, t.size, seg_min, p, q)
    elif kind is Move.REMOVE_RIGHT_ROOT:
        out = _nb_remove_right_root(t.post_node, t.size, seg_max, p, q)
    elif kind is Move.REMOVE_LEFT_TREE:
        out = _nb_remove_left_tree(t.post, t.size, seg_min, p, q)
    elif kind is Move.REMOVE_RIGHT_TREE:
        out = _nb_remove_right_tree(t.post_node, t.size, seg_max, p, q)
    elif kind is Move.SELECT_LEFT_SUBTREE:
        out = _nb_select_left(t.post, t.size, p, q)
    else:
        out = _nb_select_right(t.post_node, t.size, p, q)
    return _key(out)


def roots(t: LabeledTree, key: SubforestKey):
    """``(leftmost root, rightmost root, single_root)`` of a non-empty key."""
    _check(t, key)
    return key.p, int(t.post_node[key.q]), int(t.post[key.p]) == key.q


def derived_sizes(t: LabeledTree, key: SubforestKey) -> DerivedSizes:
    """Sizes of F and of its left/right/middle upper parts, in O(1).

    The empty forest is assigned ``(0, 0, 0, n)`` so the four parts still sum
    to ``n``; the DP never prunes on it.
    """
    if key.is_empty:
        return DerivedSizes(0, 0, 0, t.n)
    p, q = key
    r = int(t.post_node[q])
    w = lca_query(t, p, r)
    mu = int(t.depth[w]) + (0 if w >= p and t.post[w] <= q else 1)
    lu = p - 1 - mu
    ru = t.n - q - mu
    return DerivedSizes(t.n - lu - ru - mu, lu, ru, mu)


def node_set(t: LabeledTree, key: SubforestKey) -> set:
    if key.is_empty:
        return set()
    return {v for v in range(key.p, t.n + 1) if t.post[v] <= key.q}


def canonical_key(t: LabeledTree, nodes) -> SubforestKey:
    """Key of an explicit node set that is a subforest; inverse of node_set."""
    nodes = set(nodes)
    if not nodes:
        return EMPTY
    return SubforestKey(min(nodes), max(int(t.post[v]) for v in nodes))


def enumerate_subforests(t: LabeledTree) -> list:
    """Every key reachable from the whole tree by leftmost/rightmost root
    removals, the empty forest included, in BFS order."""
    start = whole_tree_key(t)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        key = queue.popleft()
        if key.is_empty:
            continue
        for move in (Move.REMOVE_LEFT_ROOT, Move.REMOVE_RIGHT_ROOT):
            nxt = transition(t, key, move)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order


def count_constrained_subforests(t: LabeledTree, a: int, b: int, c: int, k: int) -> int:
    """Number of subforests whose (LU, RU, size) are each within k of (a, b, c).

    Brute force over :func:`enumerate_subforests`; meant for tests.
    """
    count = 0
    for key in enumerate_subforests(t):
        ds = derived_sizes(t, key)
        if abs(ds.size_lu - a) <= k and abs(ds.size_ru - b) <= k and abs(ds.size - c) <= k:
            count += 1
    return count


def subforest_table(t: LabeledTree):
    """Every non-empty subforest with its derived sizes, vectorized.

    A pair (p, q) is a canonical key exactly when ``post[p] <= q`` and
    ``post_node[q] >= p``: drop preorder ranks below p one leftmost root at a
    time, then postorder ranks above q one rightmost root at a time.  Returns
    int64 arrays ``(p, q, size, size_lu, size_ru, size_mu)``; O(n^2) memory.
    """
    n = t.n
    ids = np.arange(1, n + 1)
    ok = (t.post[1:n + 1, None] <= ids[None, :]) & (t.post_node[None, 1:n + 1] >= ids[:, None])
    p, q = np.nonzero(ok)
    p += 1
    q += 1
    euler, euler_depth, first, table, log2 = t._euler
    lo = first[p]
    hi = first[t.post_node[q]]
    lo, hi = np.minimum(lo, hi), np.maximum(lo, hi)
    j = log2[hi - lo + 1]
    left = table[j, lo]
    right = table[j, hi - (1 << j) + 1]
    w = euler[np.where(euler_depth[left] <= euler_depth[right], left, right)]
    mu = t.depth[w] + 1 - ((w >= p) & (t.post[w] <= q))
    lu = p - 1 - mu
    ru = n - q - mu
    return p, q, n - lu - ru - mu, lu, ru, mu


def pack_key(t: LabeledTree, key: SubforestKey) -> int:
    return key.p * (t.n + 1) + key.q


def pack_state(t1: LabeledTree, t2: LabeledTree, key1: SubforestKey, key2: SubforestKey) -> int:
    """One integer per DP state; fits 64 bits while (n1+1)^2 (n2+1)^2 < 2^63."""
    return pack_key(t1, key1) * (t2.n + 1) ** 2 + pack_key(t2, key2)
