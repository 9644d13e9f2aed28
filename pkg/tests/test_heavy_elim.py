import numpy as np
import pytest

from dldd import gen
from dldd.graph import build_graph, induced_edge_count
from dldd.heavy_elim import (HeavyLabels, classify, cut_close_pair, cut_heavy_split, find_close_pair,
                             sample_size)
from dldd.rng import Stream
from dldd.sssp import Direction
from dldd.verify import ball_edge_count, weak_diameter
from oracles import brute_ball_edges


def _oracle_counts(g, delta):
    edges = list(g.edges())
    out = [brute_ball_edges(g.n, edges, v, False, delta // 8) for v in range(g.n)]
    inn = [brute_ball_edges(g.n, edges, v, True, delta // 8) for v in range(g.n)]
    return np.array(out), np.array(inn)


def _check_labels(g, labels, delta):
    out, inn = _oracle_counts(g, delta)
    for cnt, heavy in ((out, labels.out_heavy), (inn, labels.in_heavy)):
        assert not np.any((4 * cnt > 3 * g.m) & ~heavy)
        assert not np.any((2 * cnt < g.m) & heavy)


def test_sample_size():
    assert sample_size(3, 128.0) == int(np.ceil(128 * np.log(5)))


def test_classify_path(path3):
    lab = classify(path3, 16, Stream(1))
    assert lab.out_label(0) == "out-heavy"
    assert lab.out_label(2) == "out-light"
    _check_labels(path3, lab, 16)


def test_classify_k2(k2):
    lab = classify(k2, 8, Stream(2))
    assert lab.out_heavy.all() and lab.in_heavy.all()
    assert lab.in_label(1) == "in-heavy"


def test_classify_edgeless_is_light():
    lab = classify(build_graph([], 4), 8, Stream(0))
    assert not lab.out_heavy.any() and not lab.in_heavy.any()


@pytest.mark.parametrize("seed", range(12))
def test_classify_against_oracle(seed):
    g = gen.random_digraph(40, 120, 8, seed)
    delta = 32 * (1 + seed % 6)
    _check_labels(g, classify(g, delta, Stream(seed)), delta)


def test_find_close_pair_k2(k2):
    lab = classify(k2, 8, Stream(0))
    assert find_close_pair(k2, lab, 8) == (0, 0, 0)


def test_find_close_pair_needs_both_classes(k2):
    only_in = HeavyLabels(np.zeros(2, bool), np.ones(2, bool), 0)
    assert find_close_pair(k2, only_in, 8) is None


def test_find_close_pair_far():
    g = gen.heavy_gadget("far-pair", 6, 16)
    out, inn = _oracle_counts(g, 16)
    lab = HeavyLabels(4 * out > 3 * g.m, 4 * inn > 3 * g.m, 0)
    assert lab.out_heavy.tolist() == [True] + [False] * (g.n - 1)
    assert lab.in_heavy.tolist() == [False, True] + [False] * (g.n - 2)
    assert find_close_pair(g, lab, 16) is None
    # a much larger delta brings the pair within reach
    assert find_close_pair(g, lab, 40) == (1, 0, 5)


def test_find_close_pair_tie_breaks_by_id():
    # two in-heavy sources at distance 1 from out-heavy 2 and 3
    g = build_graph([(0, 2, 1), (1, 3, 1)], 4)
    lab = HeavyLabels(np.array([0, 0, 1, 1], bool), np.array([1, 1, 0, 0], bool), 0)
    assert find_close_pair(g, lab, 8) == (0, 2, 1)


def test_cut_close_pair_k2(k2):
    out = cut_close_pair(k2, 0, 0, 8, Stream(5))
    assert out.component == {0, 1}
    assert out.subinstances == []
    assert all(ev.deleted.size == 0 for ev in out.events)
    assert 1 <= float(out.radius) < 2


@pytest.mark.parametrize("seed", range(20))
def test_cut_close_pair_contract(seed):
    g = gen.random_digraph(48, 200, 6, seed)
    delta = 64
    lab = classify(g, delta, Stream(seed))
    pair = find_close_pair(g, lab, delta)
    if pair is None:
        pytest.skip("no close pair on this instance")
    s, t, _ = pair
    out = cut_close_pair(g, s, t, delta, Stream(seed + 1))
    assert weak_diameter(g, out.component) <= delta
    assert delta // 8 <= float(out.radius) < delta // 4
    parts = out.subinstances + [out.component]
    assert sorted(v for p in parts for v in p) == list(range(g.n))
    s_in = ball_edge_count(g, s, "in", delta // 8)
    t_out = ball_edge_count(g, t, "out", delta // 8)
    if 2 * s_in >= g.m and 2 * t_out >= g.m:
        for sub in out.subinstances:
            assert 2 * induced_edge_count(g, sub) <= g.m


def test_cut_heavy_split_far_pair():
    g = gen.heavy_gadget("far-pair", 16, 16)
    lab = classify(g, 16, Stream(3))
    assert lab.out_heavy[0] and lab.in_heavy[1]
    assert find_close_pair(g, lab, 16) is None
    out = cut_heavy_split(g, lab, 16, Stream(4))
    assert 1 in out.ball and not any(lab.out_heavy[v] for v in out.ball)
    # one deleted edge: s -> t leaves the ball
    assert out.events[0].deleted.tolist() == [g.m - 1]


def test_cut_heavy_split_without_heavy_vertices():
    g = gen.cycle(32)
    lab = HeavyLabels(np.zeros(32, bool), np.zeros(32, bool), 0)
    out = cut_heavy_split(g, lab, 8, Stream(0))
    assert len(out.ball) == 0 and out.events[0].deleted.size == 0
    assert out.one_sided_direction == Direction.IN
    assert len(out.small_side) == 0


def _far_pair_with_noise(size, delta, extra, seed):
    """Far-pair gadget plus long random edges that keep the pair far apart."""
    base = gen.heavy_gadget("far-pair", size, delta)
    rs = np.random.default_rng(seed)
    edges = list(base.edges())
    edges += [(int(a), int(b), int(w)) for a, b, w in zip(rs.integers(0, base.n, extra),
                                                           rs.integers(0, base.n, extra),
                                                           rs.integers(delta, 2 * delta, extra))]
    return build_graph(edges, base.n)


@pytest.mark.parametrize("seed", range(15))
def test_cut_heavy_split_audit(seed):
    delta = 16 + 8 * (seed % 3)
    g = _far_pair_with_noise(12 + seed, delta, 3 + seed % 4, seed)
    lab = classify(g, delta, Stream(seed))
    if find_close_pair(g, lab, delta) is not None:
        pytest.skip("close pair present")
    out = cut_heavy_split(g, lab, delta, Stream(seed))
    assert 2 * induced_edge_count(g, out.small_side) <= g.m
    assert set(out.small_side).isdisjoint(set(out.working_set))
    claimed = set().union(*(set(s) for s in out.subinstances))
    assert sorted(list(out.small_side) + list(claimed) + list(out.working_set)) == list(range(g.n))
    cnt_out, cnt_in = _oracle_counts(g, delta)
    for v in out.working_set:
        assert 4 * cnt_out[v] <= 3 * g.m and 4 * cnt_in[v] <= 3 * g.m
