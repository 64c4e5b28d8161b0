"""Labeled ordered rooted trees in bracket notation.

Node ids are preorder ranks ``1..n``; every per-node array is int64 with a
padding slot at index 0 (and one after ``n`` where handy), so ``pre[v] == v``.

Grammar::

    tree     := label children?
    children := '(' tree (',' tree)* ')'
    label    := bare | quoted
    bare     := one or more chars other than ( ) , " and whitespace
    quoted   := '"' (any char but '"', with '""' as an escaped quote) '"'
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _primitives as prim

DEFAULT_MAX_DEPTH = 10**6
_RESERVED = set('(),"')


class TreeSyntaxError(ValueError):
    """Malformed bracket notation; ``offset`` is a UTF-8 byte offset."""

    def __init__(self, message, text, index):
        self.offset = len(text[:index].encode("utf-8"))
        self.message = message
        super().__init__(f"{message} at byte {self.offset}")


@dataclass(frozen=True, eq=False)
class LabeledTree:
    """Immutable annotated ordered tree.

    ``labels`` holds the distinct label strings in first-seen preorder, and
    ``label[v]`` indexes into it.  ``children[v]`` lists child ids in order.
    """

    labels: tuple
    label: np.ndarray
    parent: np.ndarray
    children: tuple
    post: np.ndarray
    post_node: np.ndarray
    size: np.ndarray
    depth: np.ndarray
    _euler: tuple = field(repr=False)

    @property
    def n(self):
        return len(self.children) - 1

    @property
    def pre(self):
        return np.arange(self.n + 1, dtype=np.int64)

    def label_of(self, v):
        return self.labels[self.label[v]]

    def __len__(self):
        return self.n

    def __repr__(self):
        text = serialize_tree(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"LabeledTree(n={self.n}, {text!r})"

    @cached_property
    def _succ(self):
        n = self.n
        post_by_pre = np.empty(n + 1, dtype=np.int64)
        post_by_pre[0] = prim.BIG
        post_by_pre[1:] = self.post[1:n + 1]
        pre_by_post = np.empty(n + 1, dtype=np.int64)
        pre_by_post[0] = -prim.BIG
        pre_by_post[1:] = self.post_node[1:n + 1]
        return prim.build_min_tree(post_by_pre), prim.build_max_tree(pre_by_post)

    def arrays(self, label=None):
        """Tuple layout consumed by the compiled subforest/DP routines."""
        seg_min, seg_max = self._succ
        euler, euler_depth, first, table, log2 = self._euler
        return (
            self.post,
            self.post_node,
            self.size,
            self.depth,
            self.label if label is None else label,
            seg_min,
            seg_max,
            euler,
            euler_depth,
            first,
            table,
            log2,
        )

    def check_node(self, v):
        if not 1 <= v <= self.n:
            raise ValueError(f"node id {v} out of range 1..{self.n}")


def from_children(children, names):
    """Annotate a tree given per-node child lists and label strings.

    ``children[0]`` is ignored; node ids must already be preorder ranks, i.e.
    each child list is increasing and a node's subtree is contiguous.
    """
    n = len(children) - 1
    if n < 1:
        raise ValueError("a tree needs at least one node")
    interned = {}
    label = np.zeros(n + 2, dtype=np.int64)
    for v in range(1, n + 1):
        label[v] = interned.setdefault(names[v], len(interned))
    parent = np.zeros(n + 2, dtype=np.int64)
    depth = np.zeros(n + 2, dtype=np.int64)
    for v in range(1, n + 1):
        for c in children[v]:
            parent[c] = v
            depth[c] = depth[v] + 1
    size = np.ones(n + 2, dtype=np.int64)
    size[0] = size[n + 1] = 0
    for v in range(n, 1, -1):
        size[parent[v]] += size[v]
    ids = np.arange(n + 2, dtype=np.int64)
    post = ids + size - 1 - depth
    post[0] = post[n + 1] = 0
    post_node = np.zeros(n + 2, dtype=np.int64)
    post_node[post[1:n + 1]] = ids[1:n + 1]
    tree = LabeledTree(
        labels=tuple(interned),
        label=label,
        parent=parent,
        children=tuple(tuple(c) for c in children),
        post=post,
        post_node=post_node,
        size=size,
        depth=depth,
        _euler=_euler_tables(children, depth, n),
    )
    return tree


def _euler_tables(children, depth, n):
    euler = []
    first = np.zeros(n + 2, dtype=np.int64)
    stack = [(1, 0)]
    while stack:
        v, i = stack.pop()
        if i == 0:
            first[v] = len(euler)
        euler.append(v)
        if i < len(children[v]):
            stack.append((v, i + 1))
            stack.append((children[v][i], 0))
    euler = np.asarray(euler, dtype=np.int64)
    euler_depth = depth[euler]
    table = prim.build_sparse_table(euler, euler_depth)
    return euler, euler_depth, first, table, prim.floor_log2_table(len(euler))


def _max_depth_default():
    env = os.environ.get("TED_MAX_DEPTH")
    return int(env) if env else DEFAULT_MAX_DEPTH


def parse_tree(text, max_depth=None):
    """Parse bracket notation into an annotated :class:`LabeledTree`.

    The descent keeps its own stack so path-shaped inputs cannot exhaust the
    interpreter stack; nesting deeper than ``max_depth`` is rejected
    (default 10**6, or ``$TED_MAX_DEPTH``).
    """
    if max_depth is None:
        max_depth = _max_depth_default()
    pos = 0
    end = len(text)
    children = [[]]
    names = [None]
    open_nodes = []

    def skip_ws(i):
        while i < end and text[i].isspace():
            i += 1
        return i

    def read_label(i):
        if i >= end:
            raise TreeSyntaxError("expected label, got end of input", text, i)
        if text[i] == '"':
            out = []
            j = i + 1
            while True:
                if j >= end:
                    raise TreeSyntaxError("unterminated quoted label", text, i)
                if text[j] == '"':
                    if j + 1 < end and text[j + 1] == '"':
                        out.append('"')
                        j += 2
                        continue
                    break
                out.append(text[j])
                j += 1
            if not out:
                raise TreeSyntaxError("empty label", text, i)
            return "".join(out), j + 1
        j = i
        while j < end and text[j] not in _RESERVED and not text[j].isspace():
            j += 1
        if j == i:
            what = repr(text[i])
            raise TreeSyntaxError(f"empty label before {what}", text, i)
        return text[i:j], j

    while True:
        # expect a tree
        pos = skip_ws(pos)
        name, pos = read_label(pos)
        v = len(names)
        names.append(name)
        children.append([])
        if open_nodes:
            children[open_nodes[-1]].append(v)
        pos = skip_ws(pos)
        if pos < end and text[pos] == "(":
            if len(open_nodes) + 1 > max_depth:
                raise TreeSyntaxError(f"nesting deeper than {max_depth}", text, pos)
            open_nodes.append(v)
            pos += 1
            continue
        # close finished subtrees until a sibling or the end
        while True:
            pos = skip_ws(pos)
            if not open_nodes:
                if pos != end:
                    raise TreeSyntaxError("trailing characters", text, pos)
                return from_children(children, names)
            if pos >= end:
                raise TreeSyntaxError("unbalanced parenthesis, got end of input", text, pos)
            ch = text[pos]
            if ch == ",":
                pos += 1
                break
            if ch == ")":
                open_nodes.pop()
                pos += 1
                continue
            raise TreeSyntaxError(f"expected ',' or ')', got {ch!r}", text, pos)


def _quote(name):
    if any(ch in _RESERVED or ch.isspace() for ch in name):
        return '"' + name.replace('"', '""') + '"'
    return name


def serialize_tree(t):
    """Canonical bracket notation: no whitespace, quotes only when needed."""
    out = []
    stack = [(1, 0)]
    while stack:
        v, i = stack.pop()
        kids = t.children[v]
        if i == 0:
            out.append(_quote(t.label_of(v)))
            if kids:
                out.append("(")
        elif i < len(kids):
            out.append(",")
        if i < len(kids):
            stack.append((v, i + 1))
            stack.append((kids[i], 0))
        elif kids:
            out.append(")")
    return "".join(out)


def lca_query(t, u, v):
    """Deepest common ancestor-or-self of ``u`` and ``v``; O(1)."""
    t.check_node(u)
    t.check_node(v)
    euler, euler_depth, first, table, log2 = t._euler
    return int(prim.sparse_lca(euler, euler_depth, first, table, log2, u, v))


def is_ancestor(t, u, v):
    """True if ``u`` is an ancestor of ``v`` or ``u == v``."""
    return u <= v and t.post[u] >= t.post[v]


def pre_successor(t, p, q):
    """Smallest preorder index >= p whose node has postorder index <= q."""
    if not (1 <= p <= t.n + 1 and 0 <= q <= t.n):
        raise ValueError(f"index out of range: p={p}, q={q}, n={t.n}")
    if p <= t.n and t.post[p] <= q:
        return p
    found = prim.seg_first_le(t._succ[0], p, q)
    return int(found) if found else None


def post_predecessor(t, q, p):
    """Largest postorder index <= q whose node has preorder index >= p."""
    if not (0 <= q <= t.n and 1 <= p <= t.n + 1):
        raise ValueError(f"index out of range: q={q}, p={p}, n={t.n}")
    if q >= 1 and t.post_node[q] >= p:
        return q
    found = prim.seg_last_ge(t._succ[1], q, p)
    return int(found) if found else None
