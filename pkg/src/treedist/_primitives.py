"""Compiled index structures shared by the tree and DP code.

Everything here works on plain int64 arrays so the DP kernel can call it
without leaving nopython mode.  Indices are 1-based; slot 0 is padding.
"""
import numpy as np
from numba import njit

BIG = np.int64(1) << 62


def build_min_tree(values):
    """Segment tree of minima over ``values`` (leaf i holds values[i])."""
    size = 1
    while size < len(values):
        size <<= 1
    seg = np.full(2 * size, BIG, dtype=np.int64)
    seg[size:size + len(values)] = values
    for i in range(size - 1, 0, -1):
        seg[i] = min(seg[2 * i], seg[2 * i + 1])
    return seg


def build_max_tree(values):
    size = 1
    while size < len(values):
        size <<= 1
    seg = np.full(2 * size, -BIG, dtype=np.int64)
    seg[size:size + len(values)] = values
    for i in range(size - 1, 0, -1):
        seg[i] = max(seg[2 * i], seg[2 * i + 1])
    return seg


@njit(cache=True, _nrt=False)
def seg_first_le(seg, lo, bound):
    """Smallest index i >= lo whose leaf value is <= bound, or 0."""
    size = len(seg) // 2
    if lo >= size:
        return 0
    i = lo + size
    while seg[i] > bound:
        while i & 1:
            i >>= 1
        if i == 0:
            return 0
        i += 1
    while i < size:
        i <<= 1
        if seg[i] > bound:
            i += 1
    return i - size


@njit(cache=True, _nrt=False)
def seg_last_ge(seg, hi, bound):
    """Largest index i <= hi whose leaf value is >= bound, or 0."""
    size = len(seg) // 2
    if hi < 0:
        return 0
    if hi >= size:
        hi = size - 1
    i = hi + size
    while seg[i] < bound:
        while not (i & 1):
            i >>= 1
        if i == 1:
            return 0
        i -= 1
    while i < size:
        i = 2 * i + 1
        if seg[i] < bound:
            i -= 1
    return i - size


def build_sparse_table(euler, euler_depth):
    """Sparse table of argmin-depth over an Euler tour; rows are levels."""
    m = len(euler)
    levels = max(1, int(m).bit_length())
    table = np.empty((levels, m), dtype=np.int64)
    table[0] = np.arange(m)
    for j in range(1, levels):
        half = 1 << (j - 1)
        prev = table[j - 1]
        span = m - (1 << j) + 1
        if span <= 0:
            table[j] = table[j - 1]
            continue
        left = prev[:span]
        right = prev[half:half + span]
        table[j, :span] = np.where(euler_depth[left] <= euler_depth[right], left, right)
        table[j, span:] = prev[span:]
    return table


def floor_log2_table(m):
    out = np.zeros(m + 1, dtype=np.int64)
    for i in range(2, m + 1):
        out[i] = out[i >> 1] + 1
    return out


@njit(cache=True, _nrt=False)
def sparse_lca(euler, euler_depth, first, table, log2, u, v):
    a = first[u]
    b = first[v]
    if a > b:
        a, b = b, a
    j = log2[b - a + 1]
    x = table[j, a]
    y = table[j, b - (1 << j) + 1]
    if euler_depth[x] <= euler_depth[y]:
        return euler[x]
    return euler[y]
