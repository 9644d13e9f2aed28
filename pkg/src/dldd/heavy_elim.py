"""Heavy-vertex elimination.

A vertex is out-heavy when its out-ball of radius delta/8 induces a large
share of the instance's edges (in-heavy symmetrically).  Labels come from an
edge-sampling estimator.  If some in-heavy ``s`` reaches some out-heavy ``t``
within delta/4, the intersection of an in-ball around ``s`` and an out-ball
around ``t`` is declared finished (:func:`cut_close_pair`).  Otherwise a
multi-source out-ball around all in-heavy vertices separates the two heavy
classes (:func:`cut_heavy_split`) and one-sided ball cutting strips the
remaining heavy vertices from the kept side (:func:`one_sided_kernel`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from ._accel import kernel
from .graph import Graph, VertexSet
from .ldd_core import CutEvent, check_delta, sample_vertices
from .sssp import (FP_ONE, FP_SHIFT, OUT, W_DIST, W_ORDER, W_ORIGIN, Direction, Radius,
                   grow_sequence, make_workspace, search, settled_mask)

CLASSIFY_C = 128.0


@dataclass
class HeavyLabels:
    out_heavy: np.ndarray  # bool per vertex; False means out-light
    in_heavy: np.ndarray
    k: int

    def out_label(self, v):
        return "out-heavy" if self.out_heavy[v] else "out-light"

    def in_label(self, v):
        return "in-heavy" if self.in_heavy[v] else "in-light"


@kernel
def sample_size(n, c):
    return int(math.ceil(c * math.log(n + 2.0)))


@kernel
def classify_kernel(fptr, fadj, fw, rptr, radj, rw, tail, head, n, m, bound, k, state, ws):
    """Estimate, for every vertex, the share of ``k`` sampled edges inside its balls.

    A sampled edge (a, b) lies in the out-ball of v iff both endpoints are
    within ``bound`` of v, i.e. v is in the reverse balls of a and b.
    Duplicate samples are searched once and counted with multiplicity.
    """
    samp = np.empty(k, np.int64)
    for j in range(k):
        samp[j] = _rng.below(state, m)
    samp.sort()
    cnt_out = np.zeros(n, np.int64)
    cnt_in = np.zeros(n, np.int64)
    mark = np.zeros(n, np.int64)
    tok = 0
    src = np.zeros(1, np.int64)
    off = np.zeros(1, np.int64)
    order = ws[W_ORDER]
    j = 0
    while j < k:
        e = samp[j]
        mult = 1
        while j + mult < k and samp[j + mult] == e:
            mult += 1
        a = tail[e]
        b = head[e]
        for d in range(2):
            if d == OUT:
                ptr, adj, wt, acc = rptr, radj, rw, cnt_out
            else:
                ptr, adj, wt, acc = fptr, fadj, fw, cnt_in
            src[0] = a
            c1 = search(ptr, adj, wt, src, off, bound, ws, False)
            if a == b:
                for i in range(c1):
                    acc[order[i]] += mult
                continue
            tok += 1
            for i in range(c1):
                mark[order[i]] = tok
            src[0] = b
            c2 = search(ptr, adj, wt, src, off, bound, ws, False)
            for i in range(c2):
                x = order[i]
                if mark[x] == tok:
                    acc[x] += mult
        j += mult
    # heavy iff estimated share >= 5/8
    return 8 * cnt_out >= 5 * k, 8 * cnt_in >= 5 * k


@kernel
def close_pair_kernel(fptr, fadj, fw, in_heavy, out_heavy, bound, ws):
    """Closest (in-heavy s, out-heavy t) pair within ``bound``; (-1, -1, -1) if none."""
    srcs = np.flatnonzero(in_heavy)
    if srcs.shape[0] == 0 or not out_heavy.any():
        return -1, -1, -1
    cnt = search(fptr, fadj, fw, srcs, np.zeros(srcs.shape[0], np.int64), bound, ws, True)
    order = ws[W_ORDER]
    # settle order is lexicographic in (distance, vertex id)
    for i in range(cnt):
        t = order[i]
        if out_heavy[t]:
            return ws[W_ORIGIN][t], t, ws[W_DIST][t]
    return -1, -1, -1


@kernel
def draw_wide_radius(delta, state):
    """Uniform fixed-point radius in [delta/8, delta/4)."""
    lo = delta * (FP_ONE // 8)
    return lo + _rng.below(state, lo)


@kernel
def close_pair_cut_kernel(fptr, fadj, fw, rptr, radj, rw, tail, head, n, s, t, delta, state, ws, etag, tag_base):
    r = draw_wide_radius(delta, state)
    bound = r >> FP_SHIFT
    one = np.zeros(1, np.int64)
    src = np.zeros(1, np.int64)
    src[0] = s
    inb = settled_mask(n, ws, search(rptr, radj, rw, src, one, bound, ws, False))
    src[0] = t
    outb = settled_mask(n, ws, search(fptr, fadj, fw, src, one, bound, ws, False))
    for e in range(tail.shape[0]):
        x = tail[e]
        y = head[e]
        if inb[y] and not inb[x]:
            etag[e] = tag_base
        elif inb[x] and outb[x] and inb[y] and not outb[y]:
            etag[e] = tag_base + 1
    return r, inb, outb


@kernel
def split_kernel(fptr, fadj, fw, tail, head, n, in_heavy, delta, state, ws, etag, tag_base):
    r = draw_wide_radius(delta, state)
    srcs = np.flatnonzero(in_heavy)
    if srcs.shape[0] > 0:
        cnt = search(fptr, fadj, fw, srcs, np.zeros(srcs.shape[0], np.int64), r >> FP_SHIFT, ws, False)
        bplus = settled_mask(n, ws, cnt)
    else:
        bplus = np.zeros(n, np.bool_)
    e_in = 0
    e_out = 0
    for e in range(tail.shape[0]):
        x = tail[e]
        y = head[e]
        if bplus[x]:
            if bplus[y]:
                e_in += 1
            else:
                etag[e] = tag_base
        elif not bplus[y]:
            e_out += 1
    return r, bplus, e_in, e_out


@kernel
def one_sided_kernel(fptr, fadj, fw, feid, rptr, radj, rw, reid, deg, m, delta, state,
                     in_u, direction, speedup, ws, grp, gctr, etag, tag_base):
    """Sample ``in_u`` at the first-round rate and cut balls of one direction only."""
    verts = np.flatnonzero(in_u)
    coef = 16.0 * math.log(float(m) * float(delta))
    s = sample_vertices(verts, deg, coef, 2.0 * m, False, state)
    r = draw_wide_radius(delta, state)
    _rng.shuffle(state, s)
    ds = np.full(s.shape[0], direction, np.int64)
    ev_group = np.full(s.shape[0], -1, np.int64)
    grow_sequence(fptr, fadj, fw, feid, rptr, radj, rw, reid, s, ds, r >> FP_SHIFT, ws,
                  in_u, speedup, grp, gctr, etag, tag_base, ev_group,
                  np.empty(in_u.shape[0], np.int64))
    return r, s, ev_group


# python surface -----------------------------------------------------------------

@dataclass
class ClosePairOutcome:
    radius: Radius
    events: list
    subinstances: list  # [V - B_in, B_in - B_out], empty sets dropped
    component: VertexSet  # B_in & B_out, finished without recursion


@dataclass
class SplitOutcome:
    radius: Radius
    ball: VertexSet  # union of out-balls around in-heavy vertices
    events: list
    small_side: VertexSet
    working_set: VertexSet  # handed to the iterated cutting
    subinstances: list  # claims of the one-sided cut
    one_sided_direction: Direction


def classify(g: Graph, delta: int, rng, c=CLASSIFY_C) -> HeavyLabels:
    """Label each vertex out-light/out-heavy and in-light/in-heavy.

    Samples ``k = ceil(c * ln(n + 2))`` edges with replacement.  With the
    default ``c`` a vertex whose delta/8-ball holds more than 3/4 of the edges
    is labelled heavy, and one holding fewer than 1/2 light, except with
    probability at most ``(n+2)**-4`` each.
    """
    delta = check_delta(delta)
    if g.m == 0:
        z = np.zeros(g.n, np.bool_)
        return HeavyLabels(z, z.copy(), 0)
    k = sample_size(g.n, float(c))
    ws = make_workspace(g.n, g.m)
    out_h, in_h = classify_kernel(g.fptr, g.fadj, g.fw, g.rptr, g.radj, g.rw, g.tail, g.head,
                                  g.n, g.m, delta // 8, k, rng.state, ws)
    return HeavyLabels(out_h, in_h, k)


def find_close_pair(g: Graph, labels: HeavyLabels, delta: int):
    """``(s, t, d(s, t))`` minimising the in-heavy to out-heavy distance if <= delta/4, else None."""
    delta = check_delta(delta)
    ws = make_workspace(g.n, g.m)
    s, t, d = close_pair_kernel(g.fptr, g.fadj, g.fw, labels.in_heavy, labels.out_heavy, delta // 4, ws)
    if s < 0:
        return None
    return int(s), int(t), int(d)


def cut_close_pair(g: Graph, s: int, t: int, delta: int, rng) -> ClosePairOutcome:
    """Cut the in-ball of ``s`` and, inside it, the out-ball of ``t``."""
    delta = check_delta(delta)
    ws = make_workspace(g.n, g.m)
    etag = np.full(g.m, -1, np.int64)
    r, inb, outb = close_pair_cut_kernel(g.fptr, g.fadj, g.fw, g.rptr, g.radj, g.rw, g.tail, g.head,
                                         g.n, s, t, delta, rng.state, ws, etag, 0)
    radius = Radius(int(r))
    events = [
        CutEvent(s, Direction.IN, radius, VertexSet.from_mask(inb), np.flatnonzero(etag == 0), 0),
        CutEvent(t, Direction.OUT, radius, VertexSet.from_mask(inb & outb), np.flatnonzero(etag == 1), 0),
    ]
    subs = [VertexSet.from_mask(m) for m in (~inb, inb & ~outb) if m.any()]
    return ClosePairOutcome(radius, events, subs, VertexSet.from_mask(inb & outb))


def cut_heavy_split(g: Graph, labels: HeavyLabels, delta: int, rng, speedup=True) -> SplitOutcome:
    """Separate in-heavy from out-heavy vertices, then strip heavy ones from the kept side."""
    delta = check_delta(delta)
    ws = make_workspace(g.n, g.m)
    etag = np.full(g.m, -1, np.int64)
    r, bplus, e_in, e_out = split_kernel(g.fptr, g.fadj, g.fw, g.tail, g.head, g.n,
                                         labels.in_heavy, delta, rng.state, ws, etag, 0)
    radius = Radius(int(r))
    sources = np.flatnonzero(labels.in_heavy)
    events = [CutEvent(int(sources[0]) if sources.size else -1, Direction.OUT, radius,
                       VertexSet.from_mask(bplus), np.flatnonzero(etag == 0), 0)]
    if e_in <= e_out:
        small, work, direction = bplus, ~bplus, Direction.IN
    else:
        small, work, direction = ~bplus, bplus.copy(), Direction.OUT
    in_u = work.copy()
    grp = np.full(g.n, -1, np.int64)
    gctr = np.zeros(1, np.int64)
    r1, centers, ev_group = one_sided_kernel(g.fptr, g.fadj, g.fw, g.feid, g.rptr, g.radj, g.rw, g.reid,
                                             g.deg, g.m, delta, rng.state, in_u, int(direction),
                                             bool(speedup), ws, grp, gctr, etag, 1)
    r1 = Radius(int(r1))
    subs = []
    for j, c in enumerate(centers.tolist()):
        gid = ev_group[j]
        claimed = VertexSet.from_mask(grp == gid) if gid >= 0 else VertexSet(g.n)
        events.append(CutEvent(c, direction, r1, claimed, np.flatnonzero(etag == 1 + j), 1))
        if gid >= 0:
            subs.append(claimed)
    return SplitOutcome(radius, VertexSet.from_mask(bplus), events, VertexSet.from_mask(small),
                        VertexSet.from_mask(in_u), subs, direction)

