"""Slow, obviously-correct reference implementations used by the tests."""
import itertools
import math

import numpy as np
from hypothesis import strategies as st

from dldd.graph import build_graph

INF = math.inf


def bellman_ford(n, edges, source, reverse=False):
    dist = [INF] * n
    dist[source] = 0
    for _ in range(n):
        changed = False
        for t, h, w in edges:
            if reverse:
                t, h = h, t
            if dist[t] + w < dist[h]:
                dist[h] = dist[t] + w
                changed = True
        if not changed:
            break
    return dist


def all_pairs(n, edges):
    d = [[INF] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = 0
    for t, h, w in edges:
        d[t][h] = min(d[t][h], w)
    for k, i, j in itertools.product(range(n), repeat=3):
        if d[i][k] + d[k][j] < d[i][j]:
            d[i][j] = d[i][k] + d[k][j]
    return d


def reachability(n, edges):
    reach = np.eye(n, dtype=bool)
    for t, h, _ in edges:
        reach[t, h] = True
    for k in range(n):
        reach |= reach[:, [k]] & reach[[k], :]
    return reach


def brute_scc(n, edges):
    """Vertices u, v share a component iff each reaches the other."""
    r = reachability(n, edges)
    both = r & r.T
    seen, comps = set(), []
    for v in range(n):
        if v not in seen:
            c = sorted(np.flatnonzero(both[v]).tolist())
            seen.update(c)
            comps.append(c)
    return sorted(comps)


def brute_weak_diameter(dist, s):
    s = list(s)
    return max((dist[u][v] for u in s for v in s), default=0)


def brute_ball_edges(n, edges, v, reverse, radius):
    d = bellman_ford(n, edges, v, reverse)
    inside = {x for x in range(n) if d[x] <= radius}
    return sum(1 for t, h, _ in edges if t in inside and h in inside)


# hypothesis strategies ------------------------------------------------------------


@st.composite
def small_graphs(draw, max_n=12, max_m=30, max_w=6):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, max_w)),
                          min_size=m, max_size=m))
    return build_graph(edges, n)
