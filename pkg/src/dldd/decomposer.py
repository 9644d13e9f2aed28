"""Recursive decomposition driver.

Each recursive instance is an induced subgraph given by ascending arrays of
original vertex and edge ids.  :func:`solve_instance` runs one instance end to
end inside a single kernel (classification, heavy-vertex elimination, iterated
cutting) and returns its groups; the Python loop only keeps the work stack and
collects finished components.
"""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from ._accel import kernel
from .graph import Graph
from .heavy_elim import (CLASSIFY_C, classify_kernel, close_pair_cut_kernel, close_pair_kernel,
                         one_sided_kernel, sample_size, split_kernel)
from .ldd_core import (CHILD, FINISHED, MAX_ITERATIONS, SINGLETON, check_delta, iterate, schedule)
from .sssp import IN, OUT, make_workspace

log = logging.getLogger(__name__)

BASE = 3  # group kind used only on the Python side

CASE_CLOSE_PAIR = 1
CASE_SPLIT = 2

# diagnostic vector layout
D_CASE, D_K, D_OUT_HEAVY, D_IN_HEAVY, D_PAIR_S, D_PAIR_T, D_PAIR_D, D_R_CASE, D_BALL, \
    D_ONE_SIDED_DIR, D_ONE_SIDED_SAMPLES, D_R_ONE_SIDED, D_EVENTS, D_L = range(14)
D_ROUNDS = 14  # then (sampled, radius, volume violations) per round
DIAG_LEN = D_ROUNDS + 3 * MAX_ITERATIONS


@dataclass(frozen=True)
class LddConfig:
    speedup: bool = True
    monitor: bool = False
    classify_c: float = CLASSIFY_C
    diagnostics: bool = True
    timings: bool = False
    depth_limit: int = 100_000


@dataclass
class LddResult:
    delta: int
    seed: int
    deleted: np.ndarray  # sorted original edge ids
    components: list  # sorted vertex-id arrays, sorted by first vertex
    kinds: list  # per component: "finished", "singleton" or "base"
    diagnostics: list
    max_depth: int
    graph: Graph = field(repr=False, default=None)

    @property
    def finished(self):
        """Indices of components declared finished by a close-pair cut."""
        return [i for i, k in enumerate(self.kinds) if k == "finished"]

    def deleted_mask(self):
        mask = np.zeros(self.graph.m, np.bool_)
        mask[self.deleted] = True
        return mask

    def to_dict(self, include_diagnostics=False):
        from .verify import scc

        sccs = scc(self.graph, self.deleted)
        return {
            "delta": self.delta,
            "seed": self.seed,
            "deleted": self.deleted.tolist(),
            "components": [c.tolist() for c in self.components],
            "finished": self.finished,
            "sccs": [c.tolist() for c in sccs],
            "diagnostics": self.diagnostics if include_diagnostics else [],
            "max_depth": self.max_depth,
        }

    def to_json(self, include_diagnostics=False):
        return json.dumps(self.to_dict(include_diagnostics), separators=(",", ":"), sort_keys=True) + "\n"


@kernel
def build_csr(n, key, other, w):
    m = key.shape[0]
    ptr = np.zeros(n + 1, np.int64)
    for e in range(m):
        ptr[key[e] + 1] += 1
    for v in range(n):
        ptr[v + 1] += ptr[v]
    pos = ptr[:n].copy()
    adj = np.empty(m, np.int64)
    wt = np.empty(m, np.int64)
    eid = np.empty(m, np.int64)
    for e in range(m):
        p = pos[key[e]]
        adj[p] = other[e]
        wt[p] = w[e]
        eid[p] = e
        pos[key[e]] += 1
    return ptr, adj, wt, eid


@kernel
def _new_group(mask, grp, gkind, gctr, kind):
    if not mask.any():
        return
    g = gctr[0]
    gctr[0] += 1
    gkind[g] = kind
    for v in range(mask.shape[0]):
        if mask[v]:
            grp[v] = g


@kernel
def solve_instance(g_tail, g_head, g_w, verts, eids, gloc, delta, seed, cls_c, speedup, monitor, deleted):
    """Process one instance; mark its deleted edges and return its groups.

    Returns ``(group_verts, vptr, group_eids, eptr, kinds, diag)`` where group
    ``j`` owns original vertices ``group_verts[vptr[j]:vptr[j+1]]`` and the
    original edges induced on them.
    """
    n = verts.shape[0]
    m = eids.shape[0]
    for i in range(n):
        gloc[verts[i]] = i
    tail = np.empty(m, np.int64)
    head = np.empty(m, np.int64)
    w = np.empty(m, np.int64)
    for j in range(m):
        e = eids[j]
        tail[j] = gloc[g_tail[e]]
        head[j] = gloc[g_head[e]]
        w[j] = g_w[e]
    fptr, fadj, fw, feid = build_csr(n, tail, head, w)
    rptr, radj, rw, reid = build_csr(n, head, tail, w)
    deg = np.empty(n, np.int64)
    for v in range(n):
        deg[v] = fptr[v + 1] - fptr[v] + rptr[v + 1] - rptr[v]
    state = np.empty(1, np.uint64)
    state[0] = seed
    ws = make_workspace(n, m)
    grp = np.full(n, -1, np.int64)
    gkind = np.zeros(n + 1, np.int64)
    gctr = np.zeros(1, np.int64)
    etag = np.full(m, -1, np.int64)
    diag = np.zeros(DIAG_LEN, np.int64)

    k = sample_size(n, cls_c)
    out_h, in_h = classify_kernel(fptr, fadj, fw, rptr, radj, rw, tail, head, n, m, delta // 8, k, state, ws)
    diag[D_K] = k
    diag[D_OUT_HEAVY] = out_h.sum()
    diag[D_IN_HEAVY] = in_h.sum()
    s, t, dst = close_pair_kernel(fptr, fadj, fw, in_h, out_h, delta // 4, ws)
    if s >= 0:
        diag[D_CASE] = CASE_CLOSE_PAIR
        diag[D_PAIR_S] = verts[s]
        diag[D_PAIR_T] = verts[t]
        diag[D_PAIR_D] = dst
        r, inb, outb = close_pair_cut_kernel(fptr, fadj, fw, rptr, radj, rw, tail, head, n, s, t,
                                             delta, state, ws, etag, 0)
        diag[D_R_CASE] = r
        diag[D_BALL] = inb.sum()
        diag[D_EVENTS] = 2
        _new_group(~inb, grp, gkind, gctr, CHILD)
        _new_group(inb & ~outb, grp, gkind, gctr, CHILD)
        _new_group(inb & outb, grp, gkind, gctr, FINISHED)
    else:
        diag[D_CASE] = CASE_SPLIT
        r, bplus, e_in, e_out = split_kernel(fptr, fadj, fw, tail, head, n, in_h, delta, state, ws, etag, 0)
        diag[D_R_CASE] = r
        diag[D_BALL] = bplus.sum()
        if e_in <= e_out:
            _new_group(bplus, grp, gkind, gctr, CHILD)
            in_u = ~bplus
            direction = IN
        else:
            _new_group(~bplus, grp, gkind, gctr, CHILD)
            in_u = bplus.copy()
            direction = OUT
        made = gctr[0]
        r1, s1, _ = one_sided_kernel(fptr, fadj, fw, feid, rptr, radj, rw, reid, deg, m, delta, state,
                                     in_u, direction, speedup, ws, grp, gctr, etag, 1)
        diag[D_ONE_SIDED_DIR] = direction
        diag[D_ONE_SIDED_SAMPLES] = s1.shape[0]
        diag[D_R_ONE_SIDED] = r1
        before = gctr[0]
        _, iptr, radii, sizes, viol, _ = iterate(fptr, fadj, fw, feid, rptr, radj, rw, reid, deg, m, delta,
                                                 state, in_u, speedup, monitor, ws, grp, gkind, gctr,
                                                 etag, 1 + s1.shape[0])
        claims = 0
        for g in range(before, gctr[0]):
            if gkind[g] == CHILD:
                claims += 1
        diag[D_EVENTS] = 1 + (before - made) + claims
        L = radii.shape[0]
        diag[D_L] = L
        for i in range(L):
            diag[D_ROUNDS + 3 * i] = sizes[i]
            diag[D_ROUNDS + 3 * i + 1] = radii[i]
            diag[D_ROUNDS + 3 * i + 2] = viol[i]
        if in_u.any():
            raise RuntimeError("working set not exhausted")

    for j in range(m):
        if etag[j] >= 0:
            deleted[eids[j]] = True

    ng = gctr[0]
    vptr = np.zeros(ng + 1, np.int64)
    for v in range(n):
        if grp[v] < 0:
            raise RuntimeError("vertex left unassigned")
        vptr[grp[v] + 1] += 1
    for g in range(ng):
        vptr[g + 1] += vptr[g]
    pos = vptr[:ng].copy()
    gverts = np.empty(n, np.int64)
    for v in range(n):
        gverts[pos[grp[v]]] = verts[v]
        pos[grp[v]] += 1
    eptr = np.zeros(ng + 1, np.int64)
    for j in range(m):
        a = grp[tail[j]]
        if a == grp[head[j]]:
            eptr[a + 1] += 1
    for g in range(ng):
        eptr[g + 1] += eptr[g]
    pos = eptr[:ng].copy()
    geids = np.empty(eptr[ng], np.int64)
    for j in range(m):
        a = grp[tail[j]]
        if a == grp[head[j]]:
            geids[pos[a]] = eids[j]
            pos[a] += 1
    for i in range(n):
        gloc[verts[i]] = -1
    return gverts, vptr, geids, eptr, gkind[:ng].copy(), diag


def _diag_record(diag, depth, n, m, wall):
    case = int(diag[D_CASE])
    rec = {
        "depth": depth,
        "n": n,
        "m": m,
        "case": "close_pair" if case == CASE_CLOSE_PAIR else "split",
        "k": int(diag[D_K]),
        "out_heavy": int(diag[D_OUT_HEAVY]),
        "in_heavy": int(diag[D_IN_HEAVY]),
        "case_radius": int(diag[D_R_CASE]),
        "ball_size": int(diag[D_BALL]),
        "cut_events": int(diag[D_EVENTS]),
    }
    if case == CASE_CLOSE_PAIR:
        rec["pair"] = [int(diag[D_PAIR_S]), int(diag[D_PAIR_T]), int(diag[D_PAIR_D])]
    else:
        rec["one_sided"] = {
            "direction": "in" if diag[D_ONE_SIDED_DIR] == IN else "out",
            "sampled": int(diag[D_ONE_SIDED_SAMPLES]),
            "radius": int(diag[D_R_ONE_SIDED]),
        }
        L = int(diag[D_L])
        rec["rounds"] = [
            {
                "sampled": int(diag[D_ROUNDS + 3 * i]),
                "radius": int(diag[D_ROUNDS + 3 * i + 1]),
                "volume_violations": int(diag[D_ROUNDS + 3 * i + 2]),
            }
            for i in range(L)
        ]
    if wall is not None:
        rec["wall_ms"] = round(wall * 1e3, 3)
    return rec


def decompose(g: Graph, delta: int, seed: int = 0, config: LddConfig | None = None) -> LddResult:
    """Delete edges so every SCC of what remains has weak diameter <= ``delta``."""
    config = config or LddConfig()
    delta = check_delta(delta)
    schedule(g.m, delta)  # rejects radius grids too coarse for this instance size
    seed = int(seed)
    deleted = np.zeros(g.m, np.bool_)
    gloc = np.full(g.n, -1, np.int64)
    comps, kinds, diags = [], [], []
    max_depth = 0
    stack = [(np.arange(g.n, dtype=np.int64), np.arange(g.m, dtype=np.int64), seed & _rng.MASK64, 0)]
    while stack:
        verts, eids, s, depth = stack.pop()
        if depth > max_depth:
            max_depth = depth
        if verts.size <= 1:
            if verts.size:
                comps.append(verts)
                kinds.append("base")
            continue
        if eids.size == 0:
            comps.extend(verts[i:i + 1] for i in range(verts.size))
            kinds.extend(["base"] * verts.size)
            continue
        if depth > config.depth_limit:
            raise RuntimeError(f"recursion depth exceeded {config.depth_limit}")
        t0 = time.perf_counter() if config.timings else None
        gverts, vptr, geids, eptr, gkind, diag = solve_instance(
            g.tail, g.head, g.weight, verts, eids, gloc, delta, np.uint64(s),
            float(config.classify_c), config.speedup, config.monitor, deleted)
        if config.diagnostics:
            wall = time.perf_counter() - t0 if t0 is not None else None
            diags.append(_diag_record(diag, depth, int(verts.size), int(eids.size), wall))
        for j in range(gkind.shape[0]):
            vs = gverts[vptr[j]:vptr[j + 1]]
            kind = gkind[j]
            if kind == FINISHED:
                comps.append(vs)
                kinds.append("finished")
            elif kind == SINGLETON:
                comps.append(vs)
                kinds.append("singleton")
            else:
                stack.append((vs, geids[eptr[j]:eptr[j + 1]], _rng.derive_seed(s, j), depth + 1))
    order = sorted(range(len(comps)), key=lambda i: int(comps[i][0]))
    result = LddResult(
        delta=delta,
        seed=seed,
        deleted=np.flatnonzero(deleted),
        components=[comps[i] for i in order],
        kinds=[kinds[i] for i in order],
        diagnostics=diags,
        max_depth=max_depth,
        graph=g,
    )
    log.debug("decompose delta=%d seed=%d: %d deleted, %d components, depth %d",
              delta, seed, result.deleted.size, len(comps), max_depth)
    return result
