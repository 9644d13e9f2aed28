"""Bounded Dijkstra searches, multi-source balls, and ordered ball growing.

All distances are exact integers.  Radii live on a fixed-point grid with
``FP_ONE`` units per weight unit; a vertex at integer distance ``d`` is inside
a ball of radius ``r`` iff ``d * FP_ONE <= r.value``, which is the same as
``d <= r.value >> FP_SHIFT``.  Kernels therefore only ever see the integer
bound and never multiply distances by the grid size.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._accel import kernel
from .graph import Graph, VertexSet, as_mask

FP_SHIFT = 16
FP_ONE = 1 << FP_SHIFT
INF = np.iinfo(np.int64).max

OUT = 0
IN = 1


class Direction(enum.IntEnum):
    OUT = OUT
    IN = IN

    @classmethod
    def parse(cls, d):
        if isinstance(d, cls):
            return d
        if isinstance(d, str):
            return cls[d.upper()]
        return cls(int(d))


@dataclass(frozen=True, order=True)
class Radius:
    """Non-negative fixed-point radius, ``value`` in units of ``1/FP_ONE``."""

    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("radius must be non-negative")

    @classmethod
    def of(cls, x) -> "Radius":
        if isinstance(x, Radius):
            return x
        return cls(int(Fraction(x) * FP_ONE))

    @property
    def bound(self) -> int:
        """Largest integer distance inside the ball."""
        return self.value >> FP_SHIFT

    def __float__(self):
        return self.value / FP_ONE


@dataclass
class BallResult:
    members: VertexSet
    dist: dict


# workspace ------------------------------------------------------------------
# One tuple of int64 arrays reused across many searches on the same graph.
# Stamps avoid clearing per-vertex arrays between searches.

W_DIST, W_SEEN, W_DONE, W_HK, W_HV, W_ORDER, W_CTR, W_BEST_O, W_BST_O, W_BEST_I, W_BST_I, W_ORIGIN = range(12)


@kernel
def make_workspace(n, m):
    cap = n + m + 1
    return (
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(cap, np.int64),
        np.zeros(cap, np.int64),
        np.zeros(n, np.int64),
        np.zeros(2, np.int64),
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
        np.zeros(n, np.int64),
    )


@kernel
def heap_push(hk, hv, size, k, v):
    i = size
    hk[i] = k
    hv[i] = v
    while i > 0:
        p = (i - 1) >> 1
        if hk[p] < hk[i] or (hk[p] == hk[i] and hv[p] <= hv[i]):
            break
        hk[p], hk[i] = hk[i], hk[p]
        hv[p], hv[i] = hv[i], hv[p]
        i = p
    return size + 1


@kernel
def heap_pop(hk, hv, size):
    k = hk[0]
    v = hv[0]
    size -= 1
    if size > 0:
        hk[0] = hk[size]
        hv[0] = hv[size]
        i = 0
        while True:
            c = 2 * i + 1
            if c >= size:
                break
            if c + 1 < size and (hk[c + 1] < hk[c] or (hk[c + 1] == hk[c] and hv[c + 1] < hv[c])):
                c += 1
            if hk[i] < hk[c] or (hk[i] == hk[c] and hv[i] <= hv[c]):
                break
            hk[c], hk[i] = hk[i], hk[c]
            hv[c], hv[i] = hv[i], hv[c]
            i = c
    return k, v, size


@kernel
def search(ptr, adj, wt, srcs, offs, bound, ws, track):
    """Multi-source Dijkstra limited to distance ``bound``.

    Returns the number of settled vertices; they are listed in settle order in
    ``ws[W_ORDER]`` and their distances are ``ws[W_DIST]`` entries.  With
    ``track`` set, ``ws[W_ORIGIN]`` holds the source each vertex was reached from.
    """
    dist = ws[W_DIST]
    seen = ws[W_SEEN]
    done = ws[W_DONE]
    hk = ws[W_HK]
    hv = ws[W_HV]
    order = ws[W_ORDER]
    origin = ws[W_ORIGIN]
    ctr = ws[W_CTR]
    ctr[0] += 1
    cur = ctr[0]
    size = 0
    for i in range(srcs.shape[0]):
        s = srcs[i]
        d = offs[i]
        if d > bound:
            continue
        if seen[s] != cur or d < dist[s] or (track and d == dist[s] and s < origin[s]):
            seen[s] = cur
            dist[s] = d
            if track:
                origin[s] = s
            size = heap_push(hk, hv, size, d, s)
    cnt = 0
    while size > 0:
        d, x, size = heap_pop(hk, hv, size)
        if done[x] == cur:
            continue
        done[x] = cur
        order[cnt] = x
        cnt += 1
        for j in range(ptr[x], ptr[x + 1]):
            y = adj[j]
            nd = d + wt[j]
            if nd > bound or done[y] == cur:
                continue
            if seen[y] != cur or nd < dist[y]:
                seen[y] = cur
                dist[y] = nd
                if track:
                    origin[y] = origin[x]
                size = heap_push(hk, hv, size, nd, y)
    return cnt


@kernel
def settled_mask(n, ws, cnt):
    out = np.zeros(n, np.bool_)
    order = ws[W_ORDER]
    for i in range(cnt):
        out[order[i]] = True
    return out


@kernel
def claim_ball(ptr, adj, wt, center, bound, ws, in_u, best, bstamp, sweep, speedup, claimed):
    """Dijkstra from ``center``; move every reached vertex of ``in_u`` into ``claimed``.

    Traversal runs through the whole graph, not only ``in_u``.  With
    ``speedup`` on, a popped vertex already settled at distance <= d by an
    earlier search of the same sweep is skipped: everything beyond it lies in
    that earlier ball and has left ``in_u`` already.
    """
    dist = ws[W_DIST]
    seen = ws[W_SEEN]
    done = ws[W_DONE]
    hk = ws[W_HK]
    hv = ws[W_HV]
    ctr = ws[W_CTR]
    ctr[0] += 1
    cur = ctr[0]
    seen[center] = cur
    dist[center] = 0
    size = heap_push(hk, hv, 0, 0, center)
    cnt = 0
    while size > 0:
        d, x, size = heap_pop(hk, hv, size)
        if done[x] == cur:
            continue
        done[x] = cur
        if speedup:
            if bstamp[x] == sweep and best[x] <= d:
                continue
            bstamp[x] = sweep
            best[x] = d
        if in_u[x]:
            in_u[x] = False
            claimed[cnt] = x
            cnt += 1
        for j in range(ptr[x], ptr[x + 1]):
            y = adj[j]
            nd = d + wt[j]
            if nd > bound or done[y] == cur:
                continue
            if seen[y] != cur or nd < dist[y]:
                seen[y] = cur
                dist[y] = nd
                size = heap_push(hk, hv, size, nd, y)
    return cnt


@kernel
def mark_cut(ptr, adj, eid, claimed, cnt, in_u, etag, tag):
    """Tag edges from the claimed set (in CSR direction) to the residual set."""
    for i in range(cnt):
        x = claimed[i]
        for j in range(ptr[x], ptr[x + 1]):
            if in_u[adj[j]]:
                etag[eid[j]] = tag


@kernel
def grow_sequence(fptr, fadj, fw, feid, rptr, radj, rw, reid,
                  centers, dirs, bound, ws, in_u, speedup,
                  grp, gctr, etag, tag_base, ev_group, claimed):
    """Cut balls of one shared radius around ``centers`` in the given order.

    Ball ``j`` claims ``B(centers[j], dirs[j]) & in_u``; a nonempty claim gets
    the next group id (written to ``grp`` and ``ev_group[j]``) and the edges it
    separates from the residual set are tagged ``tag_base + j`` in ``etag``.
    Returns the number of nonempty claims.
    """
    ctr = ws[W_CTR]
    ctr[1] += 1
    sweep = ctr[1]
    made = 0
    for j in range(centers.shape[0]):
        c = centers[j]
        if dirs[j] == OUT:
            cnt = claim_ball(fptr, fadj, fw, c, bound, ws, in_u,
                             ws[W_BEST_O], ws[W_BST_O], sweep, speedup, claimed)
        else:
            cnt = claim_ball(rptr, radj, rw, c, bound, ws, in_u,
                             ws[W_BEST_I], ws[W_BST_I], sweep, speedup, claimed)
        if cnt == 0:
            ev_group[j] = -1
            continue
        g = gctr[0]
        gctr[0] += 1
        made += 1
        ev_group[j] = g
        for i in range(cnt):
            grp[claimed[i]] = g
        if dirs[j] == OUT:
            mark_cut(fptr, fadj, feid, claimed, cnt, in_u, etag, tag_base + j)
        else:
            mark_cut(rptr, radj, reid, claimed, cnt, in_u, etag, tag_base + j)
    return made


# python surface -----------------------------------------------------------------

def _csr_for(g: Graph, direction):
    if Direction.parse(direction) == Direction.OUT:
        return g.fptr, g.fadj, g.fw
    return g.rptr, g.radj, g.rw


def ball(g: Graph, sources, direction, r, restrict=None) -> BallResult:
    """Vertices within ``r`` of the offset sources, in ``direction``.

    ``sources`` is a list of ``(vertex, offset)``.  Distances are computed in
    ``g``; ``restrict`` only filters the reported members.
    """
    r = Radius.of(r)
    srcs = np.array([s for s, _ in sources], dtype=np.int64)
    offs = np.array([o for _, o in sources], dtype=np.int64)
    if srcs.size == 0:
        raise ValueError("ball needs at least one source")
    if (offs < 0).any():
        raise ValueError("source offsets must be non-negative")
    ptr, adj, wt = _csr_for(g, direction)
    ws = make_workspace(g.n, g.m)
    cnt = search(ptr, adj, wt, srcs, offs, r.bound, ws, False)
    verts = ws[W_ORDER][:cnt].copy()
    if restrict is not None:
        verts = verts[as_mask(g, restrict)[verts]]
    dist = ws[W_DIST]
    return BallResult(VertexSet(g.n, verts), {int(v): int(dist[v]) for v in verts})


def distances(g: Graph, source, direction=Direction.OUT, bound=INF) -> np.ndarray:
    """Exact distance array from (OUT) or to (IN) ``source``; INF if unreachable."""
    ptr, adj, wt = _csr_for(g, direction)
    ws = make_workspace(g.n, g.m)
    cnt = search(ptr, adj, wt, np.array([source], np.int64), np.zeros(1, np.int64), bound, ws, False)
    out = np.full(g.n, INF, dtype=np.int64)
    verts = ws[W_ORDER][:cnt]
    out[verts] = ws[W_DIST][verts]
    return out


def grow_balls_ordered(g: Graph, u, centers, r, speedup=True):
    """Claim ``ball(c_j) & U`` for each ``(c_j, direction)`` in order, shrinking U.

    Returns ``[(center, claimed VertexSet), ...]`` aligned with ``centers``.
    The input set ``u`` is not modified.
    """
    r = Radius.of(r)
    in_u = as_mask(g, u).copy()
    cs = np.array([c for c, _ in centers], dtype=np.int64)
    ds = np.array([int(Direction.parse(d)) for _, d in centers], dtype=np.int64)
    ws = make_workspace(g.n, g.m)
    grp = np.full(g.n, -1, dtype=np.int64)
    etag = np.full(g.m, -1, dtype=np.int64)
    ev_group = np.empty(cs.size, dtype=np.int64)
    gctr = np.zeros(1, dtype=np.int64)
    grow_sequence(g.fptr, g.fadj, g.fw, g.feid, g.rptr, g.radj, g.rw, g.reid,
                  cs, ds, r.bound, ws, in_u, bool(speedup),
                  grp, gctr, etag, 0, ev_group, np.empty(g.n, np.int64))
    out = []
    for j, (c, _) in enumerate(centers):
        gid = ev_group[j]
        members = np.flatnonzero(grp == gid) if gid >= 0 else np.empty(0, np.int64)
        out.append((c, VertexSet(g.n, members)))
    return out
