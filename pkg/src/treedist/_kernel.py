"""Compiled memoized DP over subforest pairs with heavy-side direction choice.

One routine serves both the exact run (``k < 0``: nothing is pruned) and the
bounded run (child states failing the size/upper-part test take ``cap``).
Recursion is an explicit frame stack; the memo is an open-addressing table
keyed by the two packed subforest keys.
"""
import numpy as np
from numba import njit

from .subforest import (
    _nb_derived,
    _nb_remove_left_root,
    _nb_remove_left_tree,
    _nb_remove_right_root,
    _nb_remove_right_tree,
    _nb_select_left,
    _nb_select_right,
)

# counter slots
EXPANDED, MEMO_HITS, PRUNED_SIZE, PRUNED_LU, PRUNED_RU = range(5)

_FREE = np.int64(-1)
_MULT_A = np.uint64(0x9E3779B97F4A7C15)
_MULT_B = np.uint64(0xC2B2AE3D27D4EB4F)

# The memo is a 2-D int64 array.  Narrow form (one column): each slot holds
# ``(a * kb_range + b) << vbits | value``.  Wide form (three columns): rows are
# ``(a, b, value)``.  The narrow form is used whenever it fits in 63 bits.


@njit(cache=True, _nrt=False)
def _slot(a, b, mask):
    h = np.uint64(a) * _MULT_A ^ np.uint64(b) * _MULT_B
    return np.int64((h >> np.uint64(20)) ^ h) & mask


@njit(cache=True, _nrt=False)
def _lookup(table, a, b, b_range, vbits):
    """Value stored for key (a, b), or -1."""
    mask = len(table) - 1
    if table.shape[1] == 1:
        key = a * b_range + b
        i = _slot(key, 0, mask)
        while table[i, 0] != _FREE:
            if table[i, 0] >> vbits == key:
                return table[i, 0] & ((1 << vbits) - 1)
            i = (i + 1) & mask
        return -1
    i = _slot(a, b, mask)
    while table[i, 0] != _FREE:
        if table[i, 0] == a and table[i, 1] == b:
            return table[i, 2]
        i = (i + 1) & mask
    return -1


@njit(cache=True, _nrt=False)
def _insert(table, a, b, v, b_range, vbits):
    mask = len(table) - 1
    if table.shape[1] == 1:
        key = a * b_range + b
        i = _slot(key, 0, mask)
        while table[i, 0] != _FREE:
            i = (i + 1) & mask
        table[i, 0] = key << vbits | v
        return
    i = _slot(a, b, mask)
    while table[i, 0] != _FREE:
        i = (i + 1) & mask
    table[i, 0] = a
    table[i, 1] = b
    table[i, 2] = v


@njit(cache=True)
def _grow(table, b_range, vbits):
    bigger = np.full((2 * len(table), table.shape[1]), _FREE, dtype=np.int64)
    for i in range(len(table)):
        if table[i, 0] != _FREE:
            a, b, v = _unpack_row(table, i, b_range, vbits)
            _insert(bigger, a, b, v, b_range, vbits)
    return bigger


@njit(cache=True, _nrt=False)
def _unpack_row(table, i, b_range, vbits):
    if table.shape[1] == 1:
        key = table[i, 0] >> vbits
        return key // b_range, key % b_range, table[i, 0] & ((1 << vbits) - 1)
    return table[i, 0], table[i, 1], table[i, 2]


@njit(cache=True)
def memo_rows(table, b_range, vbits):
    """``(n, 3)`` array of the stored ``(a, b, value)`` triples."""
    count = 0
    for i in range(len(table)):
        if table[i, 0] != _FREE:
            count += 1
    out = np.empty((count, 3), dtype=np.int64)
    j = 0
    for i in range(len(table)):
        if table[i, 0] != _FREE:
            a, b, v = _unpack_row(table, i, b_range, vbits)
            out[j, 0] = a
            out[j, 1] = b
            out[j, 2] = v
            j += 1
    return out


def layout(n1, n2, cap):
    """``(b_range, vbits, columns)`` for the memo of an (n1, n2) run."""
    b_range = (n2 + 1) ** 2
    vbits = max(1, int(cap).bit_length())
    a_range = (n1 + 1) ** 2
    narrow = (a_range * b_range - 1).bit_length() + vbits <= 63
    return b_range, vbits, 1 if narrow else 3


@njit(cache=True, _nrt=False)
def _child(post1, pn1, size1, smin1, smax1, post2, pn2, size2, smin2, smax2,
           p1, q1, p2, q2, right, which):
    """Keys of child ``which`` (0..3) of a state, in the recursion's order:
    drop a root of F1, drop a root of F2, the matched-root subtrees, the
    remaining forests."""
    if which == 0:
        if right:
            a, b = _nb_remove_right_root(pn1, size1, smax1, p1, q1)
        else:
            a, b = _nb_remove_left_root(post1, size1, smin1, p1, q1)
        return a, b, p2, q2
    if which == 1:
        if right:
            c, d = _nb_remove_right_root(pn2, size2, smax2, p2, q2)
        else:
            c, d = _nb_remove_left_root(post2, size2, smin2, p2, q2)
        return p1, q1, c, d
    if which == 2:
        if right:
            a, b = _nb_select_right(pn1, size1, p1, q1)
            c, d = _nb_select_right(pn2, size2, p2, q2)
        else:
            a, b = _nb_select_left(post1, size1, p1, q1)
            c, d = _nb_select_left(post2, size2, p2, q2)
        return a, b, c, d
    if right:
        a, b = _nb_remove_right_tree(pn1, size1, smax1, p1, q1)
        c, d = _nb_remove_right_tree(pn2, size2, smax2, p2, q2)
    else:
        a, b = _nb_remove_left_tree(post1, size1, smin1, p1, q1)
        c, d = _nb_remove_left_tree(post2, size2, smin2, p2, q2)
    return a, b, c, d


@njit(cache=True, _nrt=False)
def prune_reason(sizes1, sizes2, k):
    """0 if the state is useful, else the counter slot of the failing rule.

    ``sizes*`` are ``(size, size_lu, size_ru, size_mu)`` tuples."""
    if abs(sizes1[0] - sizes2[0]) > k:
        return PRUNED_SIZE
    if abs(sizes1[1] - sizes2[1]) > k:
        return PRUNED_LU
    if abs(sizes1[2] - sizes2[2]) > k:
        return PRUNED_RU
    return 0


@njit(cache=True)
def run(t1, t2, k, cap, counters, b_range, vbits, columns, row_of, dense):
    """Edit distance of the whole trees, saturated at ``cap``.

    ``t1``/``t2`` are :meth:`LabeledTree.arrays` tuples; ``b_range``,
    ``vbits`` and ``columns`` come from :func:`layout`.  If ``dense`` has
    rows, states are memoized there instead of in the hash table: each F1 key
    gets the next free row (recorded in ``row_of``, indexed by packed F1 key)
    and the packed F2 key is the column.  Cells hold ``value + 1`` so that a
    zero-filled array starts out empty.

    Returns ``(value, table, rows_used)``; :func:`memo_rows` turns a hash
    table into ``(packed F1 key, packed F2 key, value)`` rows.
    """
    post1, pn1, size1, depth1, label1, smin1, smax1, eu1, eud1, first1, tab1, lg1 = t1
    post2, pn2, size2, depth2, label2, smin2, smax2, eu2, eud2, first2, tab2, lg2 = t2
    n1 = len(post1) - 2
    n2 = len(post2) - 2
    w1 = n1 + 1
    w2 = n2 + 1

    use_dense = dense.shape[0] > 0
    table = np.full((1 if use_dense else 1 << 12, columns), _FREE, dtype=np.int64)
    used = 0
    rows_used = 0

    if k >= 0:
        why = prune_reason(
            _nb_derived(post1, pn1, depth1, eu1, eud1, first1, tab1, lg1, 1, n1),
            _nb_derived(post2, pn2, depth2, eu2, eud2, first2, tab2, lg2, 1, n2), k)
        if why:
            counters[why] += 1
            return cap, table, rows_used
    counters[EXPANDED] += 1

    depth = n1 + n2 + 2
    fp1 = np.empty(depth, dtype=np.int64)
    fq1 = np.empty(depth, dtype=np.int64)
    fp2 = np.empty(depth, dtype=np.int64)
    fq2 = np.empty(depth, dtype=np.int64)
    phase = np.empty(depth, dtype=np.int64)
    right = np.empty(depth, dtype=np.bool_)
    delta = np.empty(depth, dtype=np.int64)
    got = np.empty((depth, 4), dtype=np.int64)

    top = 0
    a, b, c, d = 1, n1, 1, n2
    result = cap
    while True:
        # (a, b, c, d) is a freshly expanded state: set up its frame
        fp1[top] = a
        fq1[top] = b
        fp2[top] = c
        fq2[top] = d
        phase[top] = 0
        # rightmost decomposition only when the leftmost tree is strictly larger
        rt = size1[a] > size1[pn1[b]]
        right[top] = rt
        if rt:
            delta[top] = label1[pn1[b]] != label2[pn2[d]]
        else:
            delta[top] = label1[a] != label2[c]

        pushed = False
        while top >= 0 and not pushed:
            ph = phase[top]
            if ph == 4:
                v = min(got[top, 0] + 1, got[top, 1] + 1, got[top, 2] + got[top, 3] + delta[top])
                if v > cap:
                    v = cap
                ka = fp1[top] * w1 + fq1[top]
                kb = fp2[top] * w2 + fq2[top]
                if use_dense:
                    row = row_of[ka]
                    if row < 0:
                        if rows_used == dense.shape[0]:
                            raise RuntimeError("dense memo has too few rows")
                        row = rows_used
                        row_of[ka] = row
                        rows_used += 1
                    dense[row, kb] = v + 1
                else:
                    if 2 * (used + 1) > len(table):
                        table = _grow(table, b_range, vbits)
                    _insert(table, ka, kb, v, b_range, vbits)
                    used += 1
                top -= 1
                if top < 0:
                    result = v
                else:
                    got[top, phase[top]] = v
                    phase[top] += 1
                continue

            a, b, c, d = _child(post1, pn1, size1, smin1, smax1, post2, pn2, size2, smin2, smax2,
                                fp1[top], fq1[top], fp2[top], fq2[top], right[top], ph)
            if a == 0 or c == 0:
                # a forest against the empty forest costs its size
                if a == 0 and c == 0:
                    v = 0
                elif a == 0:
                    v = _nb_derived(post2, pn2, depth2, eu2, eud2, first2, tab2, lg2, c, d)[0]
                else:
                    v = _nb_derived(post1, pn1, depth1, eu1, eud1, first1, tab1, lg1, a, b)[0]
                counters[EXPANDED] += 1
                got[top, ph] = min(v, cap)
                phase[top] += 1
                continue
            if use_dense:
                row = row_of[a * w1 + b]
                v = -1 if row < 0 else dense[row, c * w2 + d] - 1
            else:
                v = _lookup(table, a * w1 + b, c * w2 + d, b_range, vbits)
            if v >= 0:
                counters[MEMO_HITS] += 1
                got[top, ph] = v
                phase[top] += 1
                continue
            if k >= 0:
                why = prune_reason(
                    _nb_derived(post1, pn1, depth1, eu1, eud1, first1, tab1, lg1, a, b),
                    _nb_derived(post2, pn2, depth2, eu2, eud2, first2, tab2, lg2, c, d), k)
                if why:
                    counters[why] += 1
                    got[top, ph] = cap
                    phase[top] += 1
                    continue
            counters[EXPANDED] += 1
            top += 1
            pushed = True
        if not pushed:
            return result, table, rows_used
