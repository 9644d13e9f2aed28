"""Iterated random-order ball cutting on a working set of light vertices.

One call to :func:`run_iterations` performs ``L`` rounds.  Round ``i`` samples
centers with probability growing doubly exponentially in ``i``, draws one
radius from a shrinking window, and cuts an out-ball then an in-ball around
each center in a uniformly random order.  Every nonempty claimed set becomes a
recursive subinstance; after the last round the working set is empty.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from ._accel import kernel
from .graph import Graph, VertexSet, as_mask
from .sssp import (FP_ONE, FP_SHIFT, IN, OUT, W_ORDER, Direction, Radius,
                   grow_sequence, make_workspace, search)

MAX_ITERATIONS = 6  # 2**(2**6) exceeds any int64 edge count
MAX_DELTA = 1 << 46  # keeps delta * FP_ONE / 4 well inside int64

# group kinds shared with the decomposer
CHILD = 0
SINGLETON = 1
FINISHED = 2


class ConfigError(ValueError):
    """Parameters outside what the decomposition supports."""


def check_delta(delta):
    if isinstance(delta, bool) or int(delta) != delta:
        raise ConfigError(f"delta must be an integer, got {delta!r}")
    if delta < 1:
        raise ConfigError(f"delta must be >= 1, got {delta}")
    if delta > MAX_DELTA:
        raise ConfigError(f"delta must be <= 2**46, got {delta}")
    return int(delta)


@dataclass(frozen=True)
class Schedule:
    L: int
    a: tuple  # Radius values a_0 > a_1 > ... > a_L >= 0
    delta: int


@dataclass
class CutEvent:
    center: int
    direction: Direction
    radius: Radius
    claimed: VertexSet
    deleted: np.ndarray
    iteration: int


@dataclass
class IterationOutcome:
    events: list
    subinstances: list
    singletons: list
    radii: list = field(default_factory=list)
    sample_sizes: list = field(default_factory=list)
    volume_violations: list = field(default_factory=list)


@kernel
def iteration_count(m):
    L = 0
    while L < MAX_ITERATIONS and (1 << (1 << L)) < m:
        L += 1
    return max(L, 1)


@kernel
def schedule_values(m, delta):
    L = iteration_count(m)
    a = np.empty(L + 1, np.int64)
    a[0] = delta * (FP_ONE // 8)
    for i in range(1, L + 1):
        width = min(L, 1 << i)
        step = (delta * (FP_ONE // 16)) // width
        a[i] = a[i - 1] - max(step, 1)
    return L, a


def schedule(m: int, delta: int) -> Schedule:
    """Iteration count and radius windows for an instance with ``m`` edges."""
    delta = check_delta(delta)
    if m < 0:
        raise ConfigError("m must be non-negative")
    L, a = schedule_values(int(m), delta)
    if delta * (FP_ONE // 8) < L:
        raise ConfigError(f"delta={delta} too small for the radius grid with L={L}")
    return Schedule(int(L), tuple(Radius(int(x)) for x in a), delta)


@kernel
def sample_vertices(verts, deg, coef, two_m, force, state):
    """Bernoulli-sample ``verts`` (ascending) with p = min(1, coef*deg/2m).

    One uniform draw is consumed per vertex.  ``force`` makes every vertex of
    positive degree certain.
    """
    out = np.empty(verts.shape[0], np.int64)
    cnt = 0
    for i in range(verts.shape[0]):
        v = verts[i]
        x = _rng.uniform(state)
        if deg[v] == 0:
            continue
        if force:
            p = 1.0
        else:
            p = min(1.0, coef * deg[v] / two_m)
        if x < p:
            out[cnt] = v
            cnt += 1
    return out[:cnt]


@kernel
def sample_coef(i, m, delta):
    return 4.0 * 2.0 ** (2 ** i) * math.log(float(m) * float(delta))


@kernel
def volume_violations(fptr, fadj, fw, rptr, radj, rw, deg, in_u, bound, limit, ws):
    """Vertices of ``in_u`` whose out- or in-ball (``bound``) has volume in ``in_u`` above ``limit``."""
    n = in_u.shape[0]
    flagged = np.empty(n, np.int64)
    nf = 0
    src = np.zeros(1, np.int64)
    off = np.zeros(1, np.int64)
    order = ws[W_ORDER]
    for u in range(n):
        if not in_u[u]:
            continue
        src[0] = u
        bad = False
        for d in range(2):
            if d == OUT:
                cnt = search(fptr, fadj, fw, src, off, bound, ws, False)
            else:
                cnt = search(rptr, radj, rw, src, off, bound, ws, False)
            vol = 0
            for j in range(cnt):
                x = order[j]
                if in_u[x]:
                    vol += deg[x]
            if vol > limit:
                bad = True
        if bad:
            flagged[nf] = u
            nf += 1
    return flagged[:nf]


@kernel
def iterate(fptr, fadj, fw, feid, rptr, radj, rw, reid, deg, m, delta, state,
            in_u, speedup, monitor, ws, grp, gkind, gctr, etag, tag_base):
    """Run all rounds on the working set ``in_u`` (emptied in place).

    Returns per-round records: flat permuted centers with round pointers,
    drawn radii (fixed point), sample sizes, monitor counts, and the group id
    of every (center, direction) event in order.
    """
    n = in_u.shape[0]
    # degree-0 vertices can never be sampled; they are finished singletons
    for v in range(n):
        if in_u[v] and deg[v] == 0:
            g = gctr[0]
            gctr[0] += 1
            grp[v] = g
            gkind[g] = SINGLETON
            in_u[v] = False
    L, a = schedule_values(m, delta)
    centers = np.empty(L * n, np.int64)
    iptr = np.zeros(L + 1, np.int64)
    radii = np.zeros(L, np.int64)
    sizes = np.zeros(L, np.int64)
    viol = np.zeros(L, np.int64)
    ev_group = np.full(2 * L * n, -1, np.int64)
    claimed = np.empty(n, np.int64)
    two_m = 2.0 * m
    for i in range(1, L + 1):
        if monitor and i > 1:
            limit = two_m / 2.0 ** (2 ** (i - 1))
            viol[i - 1] = volume_violations(fptr, fadj, fw, rptr, radj, rw, deg, in_u,
                                            a[i - 1] >> FP_SHIFT, limit, ws).shape[0]
        verts = np.flatnonzero(in_u)
        s = sample_vertices(verts, deg, sample_coef(i, m, delta), two_m, i == L, state)
        r = a[i] + _rng.below(state, a[i - 1] - a[i])
        _rng.shuffle(state, s)
        k = s.shape[0]
        base = iptr[i - 1]
        iptr[i] = base + k
        centers[base:base + k] = s
        radii[i - 1] = r
        sizes[i - 1] = k
        cs = np.empty(2 * k, np.int64)
        ds = np.empty(2 * k, np.int64)
        for j in range(k):
            cs[2 * j] = s[j]
            ds[2 * j] = OUT
            cs[2 * j + 1] = s[j]
            ds[2 * j + 1] = IN
        grow_sequence(fptr, fadj, fw, feid, rptr, radj, rw, reid, cs, ds, r >> FP_SHIFT, ws,
                      in_u, speedup, grp, gctr, etag, tag_base + 2 * base,
                      ev_group[2 * base:2 * base + 2 * k], claimed)
    return centers[:iptr[L]], iptr, radii, sizes, viol, ev_group[:2 * iptr[L]]


# python surface -----------------------------------------------------------------

def sample_set(g: Graph, u, i: int, m: int, delta: int, rng, force=False) -> VertexSet:
    """Sample each vertex of ``u`` with probability min(1, 4*2^(2^i)*ln(m*delta)*deg/2m)."""
    delta = check_delta(delta)
    verts = np.flatnonzero(as_mask(g, u))
    coef = sample_coef(int(i), int(m), delta)
    s = sample_vertices(verts, g.deg, coef, 2.0 * m, bool(force), rng.state)
    return VertexSet(g.n, s)


def volume_monitor(g: Graph, u, i: int, a_prev, m=None) -> list:
    """Vertices of ``u`` whose radius-``a_prev`` out/in-ball has volume in ``u`` above 2m/2^(2^(i-1))."""
    m = g.m if m is None else m
    ws = make_workspace(g.n, g.m)
    bound = Radius.of(a_prev).bound
    limit = 2.0 * m / 2.0 ** (2 ** (i - 1))
    flagged = volume_violations(g.fptr, g.fadj, g.fw, g.rptr, g.radj, g.rw, g.deg,
                                as_mask(g, u).copy(), bound, limit, ws)
    return flagged.tolist()


def run_iterations(g: Graph, u, delta: int, rng, monitor=False, speedup=True) -> IterationOutcome:
    """Cut ``u`` into claimed subinstances plus degree-0 singletons."""
    delta = check_delta(delta)
    in_u = as_mask(g, u).copy()
    if not in_u.any():
        return IterationOutcome([], [], [])
    sched = schedule(g.m, delta)  # validates the grid
    ws = make_workspace(g.n, g.m)
    grp = np.full(g.n, -1, np.int64)
    gkind = np.zeros(g.n + 1, np.int64)
    gctr = np.zeros(1, np.int64)
    etag = np.full(g.m, -1, np.int64)
    centers, iptr, radii, sizes, viol, ev_group = iterate(
        g.fptr, g.fadj, g.fw, g.feid, g.rptr, g.radj, g.rw, g.reid, g.deg, g.m, delta,
        rng.state, in_u, bool(speedup), bool(monitor), ws, grp, gkind, gctr, etag, 0)
    assert not in_u.any(), "working set must be empty after the last round"
    members = _group_members(grp, int(gctr[0]))
    events = []
    for i in range(1, sched.L + 1):
        for j in range(iptr[i - 1], iptr[i]):
            for d in (Direction.OUT, Direction.IN):
                ev = 2 * j + int(d)
                gid = ev_group[ev]
                claimed = members[gid] if gid >= 0 else np.empty(0, np.int64)
                events.append(CutEvent(int(centers[j]), d, Radius(int(radii[i - 1])),
                                       VertexSet(g.n, claimed), np.flatnonzero(etag == ev), i))
    subs = [VertexSet(g.n, members[k]) for k in range(int(gctr[0])) if gkind[k] == CHILD]
    singles = [int(members[k][0]) for k in range(int(gctr[0])) if gkind[k] == SINGLETON]
    return IterationOutcome(events, subs, singles, [Radius(int(r)) for r in radii],
                            sizes.tolist(), viol.tolist() if monitor else [])


def _group_members(grp, ngroups):
    order = np.argsort(grp, kind="stable")
    keys = grp[order]
    bounds = np.searchsorted(keys, np.arange(ngroups + 1))
    return [order[bounds[k]:bounds[k + 1]] for k in range(ngroups)]
