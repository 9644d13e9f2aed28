"""Exact checks for decomposition results and the cut-probability harness.

Nothing here shares code with the decomposition beyond the Dijkstra kernel in
:mod:`dldd.sssp`, which the tests validate separately against Bellman-Ford.
"""
from __future__ import annotations

import csv
import heapq
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from ._accel import kernel
from .graph import Graph, as_mask
from .sssp import INF, W_DIST, W_ORDER, Direction, Radius, ball, make_workspace, search

log = logging.getLogger(__name__)


# strongly connected components ------------------------------------------------

@kernel
def scc_labels(n, fptr, fadj, feid, alive):
    """Iterative Tarjan over the edges with ``alive[eid]`` set.

    Labels are assigned in the order components are completed.
    """
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    comp = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    onstack = np.zeros(n, np.bool_)
    cstack = np.empty(n, np.int64)  # call stack of vertices
    cpos = np.empty(n, np.int64)  # next adjacency slot per frame
    sp = 0
    nidx = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        depth = 0
        cstack[0] = root
        cpos[0] = fptr[root]
        index[root] = nidx
        low[root] = nidx
        nidx += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        while depth >= 0:
            v = cstack[depth]
            j = cpos[depth]
            if j < fptr[v + 1]:
                cpos[depth] = j + 1
                if not alive[feid[j]]:
                    continue
                w = fadj[j]
                if index[w] < 0:
                    index[w] = nidx
                    low[w] = nidx
                    nidx += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    depth += 1
                    cstack[depth] = w
                    cpos[depth] = fptr[w]
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            if low[v] == index[v]:
                while True:
                    sp -= 1
                    x = stack[sp]
                    onstack[x] = False
                    comp[x] = ncomp
                    if x == v:
                        break
                ncomp += 1
            depth -= 1
            if depth >= 0:
                p = cstack[depth]
                if low[v] < low[p]:
                    low[p] = low[v]
    return comp, ncomp


def _alive_mask(g: Graph, deleted):
    alive = np.ones(g.m, np.bool_)
    if deleted is None:
        return alive
    d = np.asarray(deleted)
    if d.dtype == np.bool_:
        alive &= ~d
    elif d.size:
        alive[d.astype(np.int64)] = False
    return alive


def group_by_label(labels, count):
    """Split vertex ids by label; each group ascending, groups ordered by first vertex."""
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(count + 1))
    groups = [order[bounds[k]:bounds[k + 1]] for k in range(count)]
    groups.sort(key=lambda a: int(a[0]))
    return groups


def scc(g: Graph, deleted=None) -> list:
    """SCCs of ``g`` without the ``deleted`` edges (ids or a boolean mask)."""
    if g.n == 0:
        return []
    comp, k = scc_labels(g.n, g.fptr, g.fadj, g.feid, _alive_mask(g, deleted))
    return group_by_label(comp, int(k))


# diameters and balls ----------------------------------------------------------

@kernel
def set_diameters(fptr, fadj, fw, flat, ptr, bound):
    """Weak diameters of the vertex sets ``flat[ptr[j]:ptr[j+1]]`` in the full graph.

    Row ``j`` of the result is ``(diam, u, v)``.  ``diam`` is INF when some
    pair of set ``j`` is farther apart than ``bound`` (then ``(u, v)`` is such
    a pair); otherwise ``(u, v)`` attains the maximum.  Each Dijkstra run
    stops as soon as every member of the set is settled.  The search uses its
    own heap so the checks do not share code with the decomposition.
    """
    n = fptr.shape[0] - 1
    dist = np.full(n, INF, np.int64)
    touched = np.empty(n, np.int64)
    mark = np.full(n, -1, np.int64)
    nsets = ptr.shape[0] - 1
    out = np.zeros((nsets, 3), np.int64)
    for j in range(nsets):
        lo = ptr[j]
        hi = ptr[j + 1]
        k = hi - lo
        out[j, 1] = flat[lo] if k else -1
        out[j, 2] = out[j, 1]
        if k <= 1:
            continue
        for i in range(lo, hi):
            mark[flat[i]] = j
        for i in range(lo, hi):
            u = flat[i]
            nt = 0
            dist[u] = 0
            touched[nt] = u
            nt += 1
            heap = [(0, u)]
            hit = 0
            far = -1
            fv = u
            while heap and hit < k:
                d, x = heapq.heappop(heap)
                if d > dist[x]:
                    continue
                if mark[x] == j:
                    hit += 1
                    if d > far:
                        far = d
                        fv = x
                for q in range(fptr[x], fptr[x + 1]):
                    y = fadj[q]
                    nd = d + fw[q]
                    if nd <= bound and nd < dist[y]:
                        if dist[y] == INF:
                            touched[nt] = y
                            nt += 1
                        dist[y] = nd
                        heapq.heappush(heap, (nd, y))
            if hit < k:
                for q in range(lo, hi):
                    if dist[flat[q]] == INF:
                        out[j, 0] = INF
                        out[j, 1] = u
                        out[j, 2] = flat[q]
                        break
            elif far > out[j, 0]:
                out[j, 0] = far
                out[j, 1] = u
                out[j, 2] = fv
            for q in range(nt):
                dist[touched[q]] = INF
            if out[j, 0] == INF:
                break
    return out


def _pack(g: Graph, sets):
    arrays = [np.flatnonzero(as_mask(g, s)) for s in sets]
    ptr = np.zeros(len(arrays) + 1, np.int64)
    ptr[1:] = np.cumsum([a.size for a in arrays])
    flat = np.concatenate(arrays) if arrays else np.empty(0, np.int64)
    return flat.astype(np.int64), ptr


def diameter_witnesses(g: Graph, sets, bound):
    """For each set: ``None`` if its weak diameter is at most ``bound``, else ``(u, v, d(u, v))``."""
    flat, ptr = _pack(g, sets)
    rows = set_diameters(g.fptr, g.fadj, g.fw, flat, ptr, int(bound))
    out = []
    for d, u, v in rows.tolist():
        out.append(None if d != INF else (u, v, search_distance(g, u, v)))
    return out


def weak_diameter(g: Graph, s):
    """Max over ordered pairs of ``s`` of their distance in ``g``; ``math.inf`` if some pair is unreachable."""
    flat, ptr = _pack(g, [s])
    d = int(set_diameters(g.fptr, g.fadj, g.fw, flat, ptr, INF)[0, 0])
    return math.inf if d == INF else d


def diameter_witness(g: Graph, s, bound):
    """``None`` if the weak diameter of ``s`` is at most ``bound``, else ``(u, v, d(u, v))``."""
    return diameter_witnesses(g, [s], bound)[0]


def search_distance(g: Graph, u, v):
    ws = make_workspace(g.n, g.m)
    cnt = search(g.fptr, g.fadj, g.fw, np.array([u], np.int64), np.zeros(1, np.int64), INF, ws, False)
    settled = ws[W_ORDER][:cnt]
    if v in set(settled.tolist()):
        return int(ws[W_DIST][v])
    return math.inf


def ball_edge_count(g: Graph, v, direction, radius) -> int:
    """Number of edges with both endpoints in the ``direction``-ball of radius ``radius`` around ``v``."""
    members = ball(g, [(int(v), 0)], Direction.parse(direction), Radius.of(radius)).members.mask
    return int(np.count_nonzero(members[g.tail] & members[g.head]))


# validation ---------------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool = True
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def fail(self, check, message):
        self.ok = False
        self.checks[check] = False
        self.failures.append(f"{check}: {message}")

    def to_dict(self):
        return {"ok": self.ok, "checks": self.checks, "failures": self.failures}


def validate(g: Graph, result) -> ValidationReport:
    """Check a decomposition result (an ``LddResult`` or its JSON dict) against ``g``."""
    if not isinstance(result, dict):
        result = {
            "delta": result.delta,
            "deleted": result.deleted.tolist(),
            "components": [c.tolist() for c in result.components],
            "finished": result.finished,
        }
    rep = ValidationReport()
    for name in ("deleted_ids", "partition", "scc_diameter", "scc_in_component", "finished_diameter"):
        rep.checks[name] = True
    delta = int(result["delta"])
    deleted = np.asarray(result["deleted"], dtype=np.int64)
    if deleted.size and (deleted.min() < 0 or deleted.max() >= g.m):
        rep.fail("deleted_ids", f"edge id out of range [0, {g.m})")
        deleted = deleted[(deleted >= 0) & (deleted < g.m)]
    if np.unique(deleted).size != deleted.size:
        rep.fail("deleted_ids", "duplicate edge ids")

    owner = np.full(g.n, -1, np.int64)
    comps = [np.asarray(c, dtype=np.int64) for c in result["components"]]
    for i, c in enumerate(comps):
        if c.size and (c.min() < 0 or c.max() >= g.n):
            rep.fail("partition", f"component {i} has a vertex out of range")
            continue
        dup = c[owner[c] >= 0]
        if dup.size or np.unique(c).size != c.size:
            v = int(dup[0]) if dup.size else int(c[0])
            rep.fail("partition", f"vertex {v} appears more than once")
        owner[c] = i
    missing = np.flatnonzero(owner < 0)
    if missing.size:
        rep.fail("partition", f"vertex {int(missing[0])} is in no component")

    sccs = [c for c in scc(g, deleted) if c.size > 1]
    for c, w in zip(sccs, diameter_witnesses(g, sccs, delta)):
        if w is not None:
            u, v, d = w
            rep.fail("scc_diameter", f"SCC containing {u} has d({u},{v}) = {d} > {delta}")
        owners = np.unique(owner[c])
        if owners.size > 1:
            rep.fail("scc_in_component", f"SCC containing {int(c[0])} spans components {owners.tolist()[:4]}")

    fin = [i for i in result.get("finished", []) if 0 <= i < len(comps)]
    for i, w in zip(fin, diameter_witnesses(g, [comps[i] for i in fin], delta)):
        if w is not None:
            u, v, d = w
            rep.fail("finished_diameter", f"component {i}: d({u},{v}) = {d} > {delta}")
    return rep


# cut-probability harness ----------------------------------------------------------

def lg(x):
    return math.log2(x)


def loss_reference(m, delta):
    """``lg m * lg lg (m * delta)``, the normalising shape of the cut-probability bound."""
    inner = lg(max(m * delta, 4))
    return lg(max(m, 2)) * lg(inner)


@dataclass
class CutStats:
    graph: Graph = field(repr=False)
    delta: int
    trials: int
    kappa: float
    counts: np.ndarray  # deletions per edge
    empty_trials: int  # trials that deleted nothing

    @property
    def p_hat(self):
        return self.counts / self.trials

    @property
    def rho(self):
        w = self.graph.weight
        out = np.zeros(self.graph.m)
        pos = w > 0
        out[pos] = self.p_hat[pos] * self.delta / w[pos]
        return out

    @property
    def l_hat(self):
        return float(self.rho.max()) if self.graph.m else 0.0

    @property
    def kappa_bound(self):
        return self.kappa * loss_reference(self.graph.m, self.delta)

    def confint(self, alpha=0.05):
        lo, hi = proportion_confint(self.counts, self.trials, alpha=alpha, method="wilson")
        return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)

    def summary(self):
        return {"l_hat": self.l_hat, "kappa_bound": self.kappa_bound, "trials": self.trials}

    def to_csv(self):
        g = self.graph
        lo, hi = self.confint()
        p, rho = self.p_hat, self.rho
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["edge_id", "tail", "head", "weight", "p_hat", "rho", "ci_low", "ci_high"])
        for e in range(g.m):
            wr.writerow([e, int(g.tail[e]), int(g.head[e]), int(g.weight[e]),
                         f"{p[e]:.6g}", f"{rho[e]:.6g}", f"{lo[e]:.6g}", f"{hi[e]:.6g}"])
        return buf.getvalue()


def _trial_block(args):
    g, delta, seeds, config = args
    from .decomposer import decompose

    counts = np.zeros(g.m, np.int64)
    empty = 0
    for s in seeds:
        res = decompose(g, delta, s, config)
        counts[res.deleted] += 1
        empty += res.deleted.size == 0
    return counts, empty


def estimate_cut_probs(g: Graph, delta, trials, base_seed=0, jobs=1, kappa=1.0, config=None) -> CutStats:
    """Per-edge deletion frequencies over seeds ``base_seed .. base_seed + trials - 1``."""
    from .decomposer import LddConfig

    if trials < 1:
        raise ValueError("trials must be >= 1")
    config = config or LddConfig(diagnostics=False)
    seeds = list(range(base_seed, base_seed + trials))
    jobs = max(1, min(int(jobs), trials))
    blocks = [seeds[i::jobs] for i in range(jobs)]
    args = [(g, delta, b, config) for b in blocks]
    if jobs == 1:
        parts = [_trial_block(args[0])]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_trial_block, args))
    counts = sum(p[0] for p in parts)
    empty = sum(p[1] for p in parts)
    log.info("estimated cut probabilities over %d trials", trials)
    return CutStats(g, int(delta), trials, float(kappa), counts, int(empty))
