import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from treedist import from_parents, parse_tree

settings.register_profile(
    "default", deadline=None, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SIX_NODE = "1(2(3),4,5(6))"


@pytest.fixture
def six():
    return parse_tree(SIX_NODE)


@st.composite
def trees(draw, min_n=1, max_n=12, labels="ab"):
    """Random ordered tree: each node attaches to an earlier node as its last
    child, so parent lists cover every shape."""
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    names = [draw(st.sampled_from(labels)) for _ in range(n)]
    return from_parents([-1] + parents, names)
