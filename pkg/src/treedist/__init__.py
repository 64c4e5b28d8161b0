"""Unit-cost tree edit distance via subforest keys, with a bounded variant.

Exact distances come from :func:`ted_klein` (heavy-side recursion) or the
reference :func:`ted_zs` / :func:`ted_oracle_search`; :func:`ted_bounded`
answers "distance, or more than k" and :func:`ted_auto` doubles k until exact.
"""
from .distance import (
    BoundedResult,
    Cost,
    StatsReport,
    auto_bound,
    is_useful,
    klein_relevant_subforests,
    takes_right_branch,
    ted_auto,
    ted_bounded,
    ted_klein,
)
from .generate import (
    SplitMix64,
    enumerate_shapes,
    from_parents,
    gen_edited_pair,
    gen_random_tree,
    shape_tree,
)
from .oracle import ORACLE_MAX_NODES, ted_oracle_search, ted_zs
from .subforest import (
    EMPTY,
    DerivedSizes,
    Move,
    SubforestKey,
    canonical_key,
    subforest_table,
    count_constrained_subforests,
    derived_sizes,
    enumerate_subforests,
    node_set,
    roots,
    transition,
    whole_tree_key,
)
from .tree import (
    LabeledTree,
    TreeSyntaxError,
    is_ancestor,
    lca_query,
    parse_tree,
    post_predecessor,
    pre_successor,
    serialize_tree,
)

__all__ = [
    "auto_bound",
    "BoundedResult",
    "canonical_key",
    "Cost",
    "count_constrained_subforests",
    "derived_sizes",
    "DerivedSizes",
    "EMPTY",
    "enumerate_shapes",
    "enumerate_subforests",
    "from_parents",
    "gen_edited_pair",
    "gen_random_tree",
    "is_ancestor",
    "is_useful",
    "klein_relevant_subforests",
    "LabeledTree",
    "lca_query",
    "Move",
    "node_set",
    "ORACLE_MAX_NODES",
    "parse_tree",
    "post_predecessor",
    "pre_successor",
    "roots",
    "serialize_tree",
    "shape_tree",
    "SplitMix64",
    "StatsReport",
    "subforest_table",
    "SubforestKey",
    "takes_right_branch",
    "ted_auto",
    "ted_bounded",
    "ted_klein",
    "ted_oracle_search",
    "ted_zs",
    "transition",
    "TreeSyntaxError",
    "whole_tree_key",
]
