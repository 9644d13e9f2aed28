"""Immutable weighted directed graphs stored as forward and reverse CSR."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

W_MAX = (1 << 31) - 1


class GraphError(ValueError):
    """Malformed graph input."""


class EdgeListError(GraphError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    m: int
    tail: np.ndarray
    head: np.ndarray
    weight: np.ndarray
    # forward CSR: out-edges of v live in slots fptr[v]:fptr[v+1]
    fptr: np.ndarray
    fadj: np.ndarray
    fw: np.ndarray
    feid: np.ndarray
    # reverse CSR: in-edges of v
    rptr: np.ndarray
    radj: np.ndarray
    rw: np.ndarray
    reid: np.ndarray
    deg: np.ndarray

    def edges(self):
        """Yield ``(tail, head, weight)`` in edge-id order."""
        for e in range(self.m):
            yield int(self.tail[e]), int(self.head[e]), int(self.weight[e])

    def out_edges(self, v):
        lo, hi = self.fptr[v], self.fptr[v + 1]
        return self.fadj[lo:hi], self.fw[lo:hi], self.feid[lo:hi]

    def in_edges(self, v):
        lo, hi = self.rptr[v], self.rptr[v + 1]
        return self.radj[lo:hi], self.rw[lo:hi], self.reid[lo:hi]

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _csr(n, key, other, weight):
    order = np.argsort(key, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(key, minlength=n), out=ptr[1:])
    return ptr, other[order], weight[order], order.astype(np.int64)


def from_arrays(n, tail, head, weight, w_max=W_MAX) -> Graph:
    """Build a graph from parallel endpoint/weight arrays (edge id = position)."""
    n = int(n)
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    tail = np.ascontiguousarray(tail, dtype=np.int64)
    head = np.ascontiguousarray(head, dtype=np.int64)
    weight = np.ascontiguousarray(weight, dtype=np.int64)
    if not (tail.shape == head.shape == weight.shape) or tail.ndim != 1:
        raise GraphError("tail, head and weight must be 1-d arrays of equal length")
    m = tail.shape[0]
    if m:
        bad = np.flatnonzero((tail < 0) | (tail >= n) | (head < 0) | (head >= n))
        if bad.size:
            e = int(bad[0])
            raise GraphError(f"edge {e}: endpoint out of range for n={n}")
        bad = np.flatnonzero(weight < 0)
        if bad.size:
            raise GraphError(f"edge {int(bad[0])}: negative weight {int(weight[bad[0]])}")
        bad = np.flatnonzero(weight > w_max)
        if bad.size:
            raise GraphError(f"edge {int(bad[0])}: weight exceeds W_max={w_max}")
    fptr, fadj, fw, feid = _csr(n, tail, head, weight)
    rptr, radj, rw, reid = _csr(n, head, tail, weight)
    deg = np.diff(fptr) + np.diff(rptr)
    for a in (tail, head, weight, fptr, fadj, fw, feid, rptr, radj, rw, reid, deg):
        a.flags.writeable = False
    return Graph(n, m, tail, head, weight, fptr, fadj, fw, feid, rptr, radj, rw, reid, deg)


def build_graph(edge_list: Iterable[tuple[int, int, int]], n: int, w_max=W_MAX) -> Graph:
    """Build a graph from ``(tail, head, weight)`` triples; ids follow input order."""
    edges = list(edge_list)
    for e, item in enumerate(edges):
        if len(item) != 3:
            raise GraphError(f"edge {e}: expected (tail, head, weight)")
        for x in item:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise GraphError(f"edge {e}: non-integer field {x!r}")
    arr = np.array(edges, dtype=np.int64).reshape(-1, 3)
    return from_arrays(n, arr[:, 0], arr[:, 1], arr[:, 2], w_max=w_max)


class VertexSet:
    """Membership bitmap over ``0..n-1`` with a cached cardinality."""

    __slots__ = ("mask", "_count")

    def __init__(self, n, members=()):
        self.mask = np.zeros(n, dtype=np.bool_)
        idx = np.fromiter(members, dtype=np.int64) if not isinstance(members, np.ndarray) else members
        if idx.size:
            self.mask[idx] = True
        self._count = int(self.mask.sum())

    @classmethod
    def from_mask(cls, mask):
        vs = cls.__new__(cls)
        vs.mask = np.array(mask, dtype=np.bool_)
        vs._count = int(vs.mask.sum())
        return vs

    @classmethod
    def full(cls, n):
        return cls.from_mask(np.ones(n, dtype=np.bool_))

    @property
    def universe(self):
        return self.mask.shape[0]

    def __len__(self):
        return self._count

    def __contains__(self, v):
        return 0 <= v < self.mask.shape[0] and bool(self.mask[v])

    def __iter__(self):
        return iter(np.flatnonzero(self.mask).tolist())

    def __eq__(self, other):
        if isinstance(other, VertexSet):
            return np.array_equal(self.mask, other.mask)
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def to_array(self):
        return np.flatnonzero(self.mask)

    def add(self, v):
        if not self.mask[v]:
            self.mask[v] = True
            self._count += 1

    def discard(self, v):
        if self.mask[v]:
            self.mask[v] = False
            self._count -= 1

    def difference_update(self, other: "VertexSet"):
        self.mask &= ~other.mask
        self._count = int(self.mask.sum())

    def copy(self):
        return VertexSet.from_mask(self.mask)

    def __repr__(self):
        shown = list(self)[:8]
        more = ", ..." if self._count > 8 else ""
        return f"VertexSet({shown}{more}; |S|={self._count})"


def as_mask(g: Graph, s) -> np.ndarray:
    if s is None:
        return np.ones(g.n, dtype=np.bool_)
    if isinstance(s, VertexSet):
        if s.universe != g.n:
            raise GraphError("vertex set universe does not match graph")
        return s.mask
    mask = np.zeros(g.n, dtype=np.bool_)
    idx = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    mask[idx] = True
    return mask


def volume(g: Graph, s) -> int:
    """Sum of degrees over ``s``."""
    return int(g.deg[as_mask(g, s)].sum())


def induced_edge_count(g: Graph, s) -> int:
    mask = as_mask(g, s)
    return int(np.count_nonzero(mask[g.tail] & mask[g.head]))


def induced_subgraph(g: Graph, s):
    """Return ``(sub, vmap, emap)``; ``vmap``/``emap`` send new ids to ids of ``g``."""
    mask = as_mask(g, s)
    vmap = np.flatnonzero(mask)
    local = np.full(g.n, -1, dtype=np.int64)
    local[vmap] = np.arange(vmap.size)
    emap = np.flatnonzero(mask[g.tail] & mask[g.head])
    sub = from_arrays(vmap.size, local[g.tail[emap]], local[g.head[emap]], g.weight[emap])
    return sub, vmap, emap


# edge-list text format --------------------------------------------------------

def parse_edge_list(text: str, w_max=W_MAX) -> Graph:
    lines = text.splitlines()
    lineno = 0
    header = None
    while lineno < len(lines):
        lineno += 1
        if lines[lineno - 1].strip():
            header = lines[lineno - 1].split()
            break
    if header is None:
        raise EdgeListError(1, "missing header 'n m'")
    if len(header) != 2:
        raise EdgeListError(lineno, "header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise EdgeListError(lineno, "header fields must be integers") from None
    if n < 0 or m < 0:
        raise EdgeListError(lineno, "n and m must be non-negative")
    data = np.empty((m, 3), dtype=np.int64)
    e = 0
    for raw in lines[lineno:]:
        lineno += 1
        parts = raw.split()
        if not parts:
            continue
        if e >= m:
            raise EdgeListError(lineno, f"more than m={m} edge lines")
        if len(parts) != 3:
            raise EdgeListError(lineno, "expected 'tail head weight'")
        try:
            t, h, w = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise EdgeListError(lineno, "fields must be decimal integers") from None
        if not (0 <= t < n and 0 <= h < n):
            raise EdgeListError(lineno, f"endpoint out of range for n={n}")
        if w < 0:
            raise EdgeListError(lineno, f"negative weight {w}")
        if w > w_max:
            raise EdgeListError(lineno, f"weight exceeds W_max={w_max}")
        data[e] = (t, h, w)
        e += 1
    if e != m:
        raise EdgeListError(lineno, f"expected {m} edges, found {e}")
    return from_arrays(n, data[:, 0], data[:, 1], data[:, 2], w_max=w_max)


def read_edge_list(path, w_max=W_MAX) -> Graph:
    return parse_edge_list(Path(path).read_text(), w_max=w_max)


def format_edge_list(g: Graph) -> str:
    body = np.column_stack([g.tail, g.head, g.weight])
    rows = "\n".join(f"{t} {h} {w}" for t, h, w in body.tolist())
    return f"{g.n} {g.m}\n" + (rows + "\n" if g.m else "")


def write_edge_list(g: Graph, path):
    Path(path).write_text(format_edge_list(g))
