import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpa_topo.generator import GeneratorConfig, GrowthState, sample_target
from mpa_topo.graph import NodeClass
from mpa_topo.sampler import EmptySampler, PreferentialSampler


def test_single_node_always_chosen():
    s = PreferentialSampler(4)
    s.set(2, 5)
    rng = random.Random(1)
    assert {sample_target(s, rng) for _ in range(200)} == {2}


def test_pick_ratio_one_to_three():
    s = PreferentialSampler()
    s.set(0, 1)
    s.set(1, 3)
    rng = random.Random(12345)
    n = 100_000
    hits = sum(sample_target(s, rng) == 1 for _ in range(n))
    p = 0.75
    sigma = math.sqrt(n * p * (1 - p))
    assert abs(hits - n * p) <= 3 * sigma


def test_empty_sampler():
    with pytest.raises(EmptySampler):
        PreferentialSampler().sample(random.Random(0))


def test_negative_weight_rejected():
    s = PreferentialSampler()
    s.set(0, 1)
    with pytest.raises(ValueError):
        s.add(0, -2)


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(0, 300), st.integers(0, 50)), min_size=1, max_size=80))
def test_find_matches_linear_scan(updates):
    s = PreferentialSampler(2)
    weights: dict[int, int] = {}
    for node, w in updates:
        s.set(node, w)
        weights[node] = w
    assert s.total == sum(weights.values())
    order = sorted(weights)
    cumulative = 0
    for node in order:
        for r in range(cumulative, cumulative + weights[node]):
            assert s.find(r) == node
        cumulative += weights[node]


def test_weights_track_degrees_during_growth():
    state = GrowthState(GeneratorConfig(target_isps=1200, target_non_isps=2800, rng_seed=3))
    for i in range(1000):
        state.step()
        if i % 250 == 0 or i == 999:
            g = state.graph
            for v in range(g.n_nodes):
                expected = g.degree(v) if g.classes[v] is NodeClass.ISP else 0
                assert state.sampler.weight(v) == expected
            assert state.sampler.total == sum(
                g.degree(v) for v in range(g.n_nodes) if g.classes[v] is NodeClass.ISP
            )
