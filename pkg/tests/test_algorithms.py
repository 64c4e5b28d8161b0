import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from conftest import trees
from treedist import (
    BoundedResult,
    Cost,
    Move,
    StatsReport,
    derived_sizes,
    gen_edited_pair,
    gen_random_tree,
    is_useful,
    klein_relevant_subforests,
    parse_tree,
    takes_right_branch,
    ted_auto,
    ted_bounded,
    ted_klein,
    ted_oracle_search,
    ted_zs,
    transition,
    whole_tree_key,
)
from treedist.generate import SplitMix64
from treedist.subforest import canonical_key

EXACT = [ted_zs, ted_klein, ted_auto]


def bounded_value(t1, t2, k):
    res = ted_bounded(t1, t2, k)
    return res.distance


# ---------------------------------------------------------------- examples

@pytest.mark.parametrize("fn", [ted_oracle_search, *EXACT])
@pytest.mark.parametrize("a, b, d", [
    ("a(b,c)", "a(b,c)", 0),
    ("a(b,c)", "a(b,d)", 1),
    ("a(b(c))", "a", 2),
    ("1(2(3),4,5(6))", "1(2(3),5(6))", 1),
    ("1(2(3),4,5(6))", "z", 6),
])
def test_small_examples(fn, a, b, d):
    assert fn(parse_tree(a), parse_tree(b)) == d


def test_fresh_single_node_costs_size():
    for seed in range(20):
        t = gen_random_tree(seed, 1 + seed * 3)
        fresh = parse_tree("fresh")
        assert ted_zs(t, fresh) == ted_auto(t, fresh) == ted_klein(t, fresh) == t.n


def test_empty_side_base_case():
    # after matching the roots only an empty forest remains on one side
    t = parse_tree("r(a,b(c),d)")
    assert ted_klein(t, parse_tree("r")) == t.n - 1


def test_klein_matches_zs_on_seeded_pairs():
    rng = SplitMix64(40)
    for _ in range(500):
        n1, n2 = 1 + rng.below(40), 1 + rng.below(40)
        t1 = gen_random_tree(rng.next_u64(), n1, labels=3)
        t2 = gen_random_tree(rng.next_u64(), n2, labels=3)
        assert ted_klein(t1, t2) == ted_zs(t1, t2) == ted_auto(t1, t2)


def test_path_tree_has_linear_relevant_forests():
    for n in (1, 2, 5, 17, 64, 200):
        path = parse_tree("x(" * (n - 1) + "x" + ")" * (n - 1))
        stats = StatsReport()
        assert ted_klein(path, path, stats) == 0
        assert stats.distinct_f1_keys <= 2 * n + 1


# --------------------------------------------------------------- is_useful

def test_is_useful_examples(six):
    w = whole_tree_key(six)
    small = parse_tree("1(2,3)")
    assert is_useful(six, six, w, w, 0)
    assert is_useful(six, small, w, whole_tree_key(small), 3)
    assert not is_useful(six, small, w, whole_tree_key(small), 2)
    f346 = canonical_key(six, {3, 4, 6})
    f2346 = canonical_key(six, {2, 3, 4, 6})
    assert not is_useful(six, six, f346, f2346, 0)
    assert is_useful(six, six, f346, f2346, 1)
    # only the size rule separates these two
    path10 = parse_tree("x(" * 9 + "x" + ")" * 9)
    path13 = parse_tree("x(" * 12 + "x" + ")" * 12)
    assert not is_useful(path10, path13, whole_tree_key(path10), whole_tree_key(path13), 2)


def test_direction_tie_goes_left():
    t = parse_tree("r(a(b),c(d))")
    assert not takes_right_branch(t, canonical_key(t, {2, 3, 4, 5}))
    t = parse_tree("r(a(b,c),d)")
    assert takes_right_branch(t, canonical_key(t, {2, 3, 4, 5}))


# ----------------------------------------------------------------- bounded

def test_bounded_identical_k0():
    t = gen_random_tree(3, 30)
    assert ted_bounded(t, t, 0) == BoundedResult(0, 0)


def test_bounded_size_gap_stops_at_root():
    stats = StatsReport()
    res = ted_bounded(parse_tree("a(b,c,d)"), parse_tree("a"), 2, stats)
    assert res.exceeds and str(res) == "exceeds 2"
    assert stats.states_expanded == 0 and stats.pruned_size_rule == 1 and stats.generated == 1


def test_bounded_matches_klein_on_edited_pairs():
    rng = SplitMix64(8)
    for _ in range(500):
        n = 9 + rng.below(32)
        t1, t2, applied = gen_edited_pair(rng.next_u64(), n, rng.below(9))
        d = ted_klein(t1, t2)
        assert d <= applied
        assert ted_bounded(t1, t2, 8) == BoundedResult(8, d)


def test_bounded_threshold_at_distance_five():
    rng = SplitMix64(5)
    while True:
        t1, t2, _ = gen_edited_pair(rng.next_u64(), 30, 6)
        if ted_klein(t1, t2) == 5:
            break
    assert ted_bounded(t1, t2, 4) == BoundedResult(4, None)
    assert ted_bounded(t1, t2, 5) == BoundedResult(5, 5)


def test_bounded_rejects_negative_k(six):
    with pytest.raises(ValueError):
        ted_bounded(six, six, -1)


@given(trees(max_n=10, labels="abc"), trees(max_n=10, labels="abc"), st.integers(0, 12))
def test_bounded_contract(t1, t2, k):
    d = ted_zs(t1, t2)
    assert bounded_value(t1, t2, k) == (d if d <= k else None)


def test_auto_reports_accumulated_work():
    t1, t2, _ = gen_edited_pair(12, 80, 10)
    stats = StatsReport()
    d = ted_auto(t1, t2, stats)
    assert d == ted_klein(t1, t2)
    single = StatsReport()
    ted_bounded(t1, t2, max(1, abs(t1.n - t2.n)), single)
    assert stats.generated >= single.generated


# ------------------------------------------------- reference state machine

def reference_run(t1, t2, k, cap):
    """Plain recursive version of the DP over the public key API, counting
    generation events the way the kernel does."""
    counts = Counter()
    memo = {}

    def generated(a, b):
        if a.is_empty or b.is_empty:
            counts["states_expanded"] += 1
            other = b if a.is_empty else a
            tree = t2 if a.is_empty else t1
            return min(derived_sizes(tree, other).size if not other.is_empty else 0, cap)
        if (a, b) in memo:
            counts["memo_hits"] += 1
            return memo[a, b]
        if k >= 0:
            d1, d2 = derived_sizes(t1, a), derived_sizes(t2, b)
            for rule, x, y in (("pruned_size_rule", d1.size, d2.size),
                               ("pruned_lu_rule", d1.size_lu, d2.size_lu),
                               ("pruned_ru_rule", d1.size_ru, d2.size_ru)):
                if abs(x - y) > k:
                    counts[rule] += 1
                    return cap
        counts["states_expanded"] += 1
        if takes_right_branch(t1, a):
            root, sel, tree = Move.REMOVE_RIGHT_ROOT, Move.SELECT_RIGHT_SUBTREE, Move.REMOVE_RIGHT_TREE
            r1, r2 = int(t1.post_node[a.q]), int(t2.post_node[b.q])
        else:
            root, sel, tree = Move.REMOVE_LEFT_ROOT, Move.SELECT_LEFT_SUBTREE, Move.REMOVE_LEFT_TREE
            r1, r2 = a.p, b.p
        delta = int(t1.label_of(r1) != t2.label_of(r2))
        x = generated(transition(t1, a, root), b)
        y = generated(a, transition(t2, b, root))
        z1 = generated(transition(t1, a, sel), transition(t2, b, sel))
        z2 = generated(transition(t1, a, tree), transition(t2, b, tree))
        v = min(x + 1, y + 1, z1 + z2 + delta, cap)
        memo[a, b] = v
        return v

    value = generated(whole_tree_key(t1), whole_tree_key(t2))
    per_f1 = Counter(a for a, _ in memo)
    counts["distinct_f1_keys"] = len(per_f1)
    counts["max_f2_per_f1"] = max(per_f1.values(), default=0)
    return value, counts, len(memo)


COUNTERS = ("states_expanded", "memo_hits", "pruned_size_rule", "pruned_lu_rule",
            "pruned_ru_rule", "distinct_f1_keys", "max_f2_per_f1")


@given(trees(max_n=11, labels="abc"), trees(max_n=11, labels="abc"), st.integers(-1, 5))
def test_kernel_counters_match_reference(t1, t2, k):
    stats = StatsReport()
    if k < 0:
        got = ted_klein(t1, t2, stats)
        cap = t1.n + t2.n + 1
    else:
        res = ted_bounded(t1, t2, k, stats)
        got = k + 1 if res.exceeds else res.distance
        cap = k + 1
    want, counts, memoized = reference_run(t1, t2, k, cap)
    assert got == want
    assert {c: getattr(stats, c) for c in COUNTERS} == {c: counts[c] for c in COUNTERS}
    # every expanded non-base state generates four children, plus the root event
    assert stats.generated == 1 + 4 * memoized


@given(trees(max_n=25))
def test_relevant_forests_bound_distinct_f1(t):
    stats = StatsReport()
    ted_klein(t, t, stats)
    assert stats.distinct_f1_keys <= len(klein_relevant_subforests(t))


# --------------------------------------------------- metric-style properties

@given(trees(max_n=30, labels="abc"))
def test_identity(t):
    for fn in EXACT:
        assert fn(t, t) == 0
    assert ted_bounded(t, t, 0).distance == 0


@given(trees(max_n=30, labels="abc"), trees(max_n=30, labels="abc"))
def test_symmetry_and_bounds(t1, t2):
    values = {fn(t1, t2) for fn in EXACT} | {fn(t2, t1) for fn in EXACT}
    assert len(values) == 1
    d = values.pop()
    assert abs(t1.n - t2.n) <= d <= t1.n + t2.n


@given(trees(max_n=7), trees(max_n=7))
def test_oracle_agrees(t1, t2):
    assert ted_oracle_search(t1, t2) == ted_zs(t1, t2) == ted_klein(t1, t2)


@given(trees(max_n=15, labels="abc"), trees(max_n=15, labels="abc"), trees(max_n=15, labels="abc"))
def test_triangle(t1, t2, t3):
    assert ted_zs(t1, t3) <= ted_zs(t1, t2) + ted_zs(t2, t3)


def test_one_edit_lipschitz():
    rng = SplitMix64(77)
    for _ in range(300):
        n = 2 + rng.below(25)
        t1, t1_edited, applied = gen_edited_pair(rng.next_u64(), n, 1, labels=3)
        t2 = gen_random_tree(rng.next_u64(), 1 + rng.below(25), labels=3)
        assert applied == 1
        assert abs(ted_zs(t1_edited, t2) - ted_zs(t1, t2)) <= 1


def test_oracle_size_guard():
    big = gen_random_tree(1, 10)
    with pytest.raises(ValueError):
        ted_oracle_search(big, big)


# ------------------------------------------------------------ value types

def test_cost_saturates():
    c = Cost(3, cap=5)
    assert (c + 1).value == 4 and (c + 4).value == 5 and (c + 4).saturated
    assert (2 + c).value == 5 and Cost(9, 5).value == 5
    assert min(Cost(2, 5), Cost(4, 5)).value == 2
    assert Cost(2, 5) < Cost(3, 5)
    with pytest.raises(ValueError):
        Cost(-1, 5)


def test_bounded_result_text():
    assert str(BoundedResult(3, 2)) == "2" and not BoundedResult(3, 2).exceeds
    assert str(BoundedResult(3)) == "exceeds 3" and BoundedResult(3).exceeds


def test_stats_report_dict():
    stats = StatsReport()
    ted_klein(parse_tree("a"), parse_tree("a"), stats)
    d = stats.as_dict()
    assert d["states_expanded"] == 5 and d["memo_hits"] == 0
    assert set(d) == {"states_expanded", "memo_hits", "pruned_size_rule", "pruned_lu_rule",
                      "pruned_ru_rule", "distinct_f1_keys", "max_f2_per_f1", "wall_time_ns"}


def test_stats_ratio_sanity():
    t1, t2, _ = gen_edited_pair(2, 300, 4)
    stats = StatsReport()
    ted_bounded(t1, t2, 4, stats)
    assert stats.states_expanded / (300 * 16 * math.log2(300)) < 5
