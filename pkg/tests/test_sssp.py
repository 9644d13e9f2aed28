import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dldd.graph import build_graph
from dldd.sssp import FP_ONE, INF, Direction, Radius, ball, distances, grow_balls_ordered
from oracles import bellman_ford, small_graphs


def test_ball_examples(path3):
    assert ball(path3, [(0, 0)], "out", 1.5).members == {0, 1}
    assert ball(path3, [(2, 0)], Direction.IN, 2).members == {0, 1, 2}
    assert ball(path3, [(0, 0), (2, 0)], "out", 0).members == {0, 2}


def test_ball_offsets_and_restrict(path3):
    res = ball(path3, [(0, 1)], "out", 2)
    assert res.members == {0, 1} and res.dist == {0: 1, 1: 2}
    # restrict filters members but distances still run through vertex 1
    res = ball(path3, [(0, 0)], "out", 2, restrict={0, 2})
    assert res.members == {0, 2} and res.dist[2] == 2


def test_ball_rejects_bad_sources(path3):
    with pytest.raises(ValueError):
        ball(path3, [], "out", 1)
    with pytest.raises(ValueError):
        ball(path3, [(0, -1)], "out", 1)


def test_radius_grid():
    assert Radius.of(1.5).value == 3 * FP_ONE // 2
    assert Radius.of(2).bound == 2
    assert Radius.of(Radius(5)) == Radius(5)
    assert float(Radius.of("0.75")) == 0.75
    with pytest.raises(ValueError):
        Radius(-1)


@given(small_graphs(), st.data())
def test_distances_match_bellman_ford(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    edges = list(g.edges())
    for d, rev in ((Direction.OUT, False), (Direction.IN, True)):
        got = [x if x != INF else math.inf for x in distances(g, v, d).tolist()]
        assert got == bellman_ford(g.n, edges, v, reverse=rev)


@given(small_graphs(), st.data())
def test_multi_source_ball_definition(g, data):
    k = data.draw(st.integers(1, 3))
    srcs = [(data.draw(st.integers(0, g.n - 1)), data.draw(st.integers(0, 4))) for _ in range(k)]
    r = data.draw(st.integers(0, 12))
    direction = data.draw(st.sampled_from([Direction.OUT, Direction.IN]))
    edges = list(g.edges())
    best = [math.inf] * g.n
    for s, off in srcs:
        d = bellman_ford(g.n, edges, s, reverse=direction == Direction.IN)
        best = [min(b, off + x) for b, x in zip(best, d)]
    res = ball(g, srcs, direction, r)
    assert set(res.members) == {v for v in range(g.n) if best[v] <= r}
    assert all(res.dist[v] == best[v] for v in res.members)


@given(small_graphs(), st.data())
def test_ball_monotone_in_radius(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    r1 = data.draw(st.integers(0, 10))
    r2 = r1 + data.draw(st.integers(0, 10))
    small = ball(g, [(v, 0)], "out", r1).members
    big = ball(g, [(v, 0)], "out", r2).members
    assert set(small) <= set(big)


def test_grow_balls_examples():
    c4 = build_graph([(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)], 4)
    out = grow_balls_ordered(c4, None, [(0, "out"), (2, "out")], 1)
    assert [(c, set(s)) for c, s in out] == [(0, {0, 1}), (2, {2, 3})]
    out = grow_balls_ordered(c4, None, [(0, "out"), (1, "out")], 1)
    assert [(c, set(s)) for c, s in out] == [(0, {0, 1}), (1, {2})]


def _reference_grow(g, u, centers, r):
    """Claimed sets by definition: ball in G intersected with the shrinking U."""
    u = set(u)
    edges = list(g.edges())
    out = []
    for c, d in centers:
        dist = bellman_ford(g.n, edges, c, reverse=Direction.parse(d) == Direction.IN)
        claimed = {v for v in u if dist[v] <= r}
        u -= claimed
        out.append(claimed)
    return out


@given(small_graphs(max_n=14, max_m=40), st.data())
def test_grow_balls_speedup_equivalence(g, data):
    u = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    pool = sorted(u)
    centers = data.draw(st.lists(st.tuples(st.sampled_from(pool), st.sampled_from(["out", "in"])), max_size=10))
    r = data.draw(st.integers(0, 8))
    fast = grow_balls_ordered(g, u, centers, r, speedup=True)
    slow = grow_balls_ordered(g, u, centers, r, speedup=False)
    ref = _reference_grow(g, u, centers, r)
    assert [set(s) for _, s in fast] == [set(s) for _, s in slow] == ref


def test_grow_balls_speedup_random_n64():
    rs = np.random.default_rng(4)
    for trial in range(30):
        m = 256
        edges = list(zip(rs.integers(0, 64, m).tolist(), rs.integers(0, 64, m).tolist(),
                         rs.integers(0, 5, m).tolist()))
        g = build_graph(edges, 64)
        centers = [(int(c), "out" if rs.random() < 0.5 else "in") for c in rs.permutation(64)[:40]]
        a = grow_balls_ordered(g, None, centers, 3, speedup=True)
        b = grow_balls_ordered(g, None, centers, 3, speedup=False)
        assert [set(s) for _, s in a] == [set(s) for _, s in b]


def test_grow_balls_does_not_mutate_input():
    g = build_graph([(0, 1, 1)], 2)
    from dldd.graph import VertexSet
    u = VertexSet.full(2)
    grow_balls_ordered(g, u, [(0, "out")], 1)
    assert u == {0, 1}
