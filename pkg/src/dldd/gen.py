"""Seeded graph generators for tests, benchmarks and the on-disk corpus."""
from __future__ import annotations

import numpy as np

from .graph import Graph, GraphError, from_arrays


def cycle(n: int, w: int = 1) -> Graph:
    """Directed cycle ``0 -> 1 -> ... -> n-1 -> 0`` with uniform weight ``w``."""
    if n < 1:
        raise GraphError("cycle needs n >= 1")
    v = np.arange(n, dtype=np.int64)
    return from_arrays(n, v, (v + 1) % n, np.full(n, w, np.int64))


def path(n: int, w: int = 1) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    v = np.arange(n - 1, dtype=np.int64)
    return from_arrays(n, v, v + 1, np.full(n - 1, w, np.int64))


def bidirected_cycle(n: int, w: int = 1) -> Graph:
    if n < 2:
        raise GraphError("bidirected cycle needs n >= 2")
    v = np.arange(n, dtype=np.int64)
    u = (v + 1) % n
    return from_arrays(n, np.concatenate([v, u]), np.concatenate([u, v]), np.full(2 * n, w, np.int64))


def grid(rows: int, cols: int, w_max: int, seed: int) -> Graph:
    """Bidirected grid with independent random weights per direction."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs positive dimensions")
    rng = np.random.default_rng(seed)
    idx = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    a = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    b = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    tail = np.concatenate([a, b])
    head = np.concatenate([b, a])
    w = rng.integers(0, w_max, size=tail.size, endpoint=True)
    return from_arrays(rows * cols, tail, head, w)


def random_digraph(n: int, m: int, w_max: int, seed: int) -> Graph:
    """``m`` edges with uniform endpoints (loops and repeats allowed), weights uniform in ``[0, w_max]``."""
    if n < 1:
        raise GraphError("random digraph needs n >= 1")
    if m < 0 or w_max < 0:
        raise GraphError("m and w_max must be non-negative")
    rng = np.random.default_rng(seed)
    tail = rng.integers(0, n, size=m)
    head = rng.integers(0, n, size=m)
    w = rng.integers(0, w_max, size=m, endpoint=True)
    return from_arrays(n, tail, head, w, w_max=max(w_max, 0))


def zero_weight_mix(n: int, m: int, w_max: int, zero_share: float, seed: int) -> Graph:
    """Random digraph where roughly ``zero_share`` of the edges weigh 0."""
    rng = np.random.default_rng(seed)
    tail = rng.integers(0, n, size=m)
    head = rng.integers(0, n, size=m)
    w = rng.integers(1, max(w_max, 1), size=m, endpoint=True)
    w[rng.random(m) < zero_share] = 0
    return from_arrays(n, tail, head, w)


def multigraph(n: int, m: int, w_max: int, seed: int) -> Graph:
    """Random digraph salted with parallel edges and self-loops."""
    if m < 2:
        raise GraphError("multigraph needs m >= 2")
    rng = np.random.default_rng(seed)
    base = m // 2
    tail = rng.integers(0, n, size=base)
    head = rng.integers(0, n, size=base)
    # the rest copy earlier edges, about a third of them collapsed to loops
    pick = rng.integers(0, base, size=m - base)
    ptail = tail[pick]
    phead = np.where(rng.random(m - base) < 0.3, ptail, head[pick])
    w = rng.integers(0, w_max, size=m, endpoint=True)
    return from_arrays(n, np.concatenate([tail, ptail]), np.concatenate([head, phead]), w)


def heavy_gadget(kind: str, size: int, delta: int) -> Graph:
    """Instances that steer heavy-vertex elimination into one branch.

    ``close-pair``: a bidirected star on ``size`` vertices with spoke weight
    ``delta // 8``, so the center's balls hold every edge and the center
    pairs with itself.

    ``far-pair``: for ``j < size`` the paths ``t -> a_j -> b_j -> s`` (weights
    1, 0, 1) plus one edge ``s -> t`` of weight ``delta // 4 + 1``.  The
    out-ball of ``t`` and the in-ball of ``s`` each hold all path edges, but
    ``s`` reaches ``t`` only beyond ``delta / 4``.  Needs ``delta >= 16``.
    Decomposed with a much larger delta than it was built for, the pair is
    close again.
    """
    if size < 4:
        raise GraphError("gadget size must be >= 4")
    kind = kind.replace("_", "-")
    if kind in ("close-pair", "close"):
        leaves = np.arange(1, size, dtype=np.int64)
        zero = np.zeros(size - 1, np.int64)
        tail = np.concatenate([zero, leaves])
        head = np.concatenate([leaves, zero])
        return from_arrays(size, tail, head, np.full(tail.size, delta // 8, np.int64))
    if kind in ("far-pair", "far"):
        if delta < 16:
            raise GraphError("far-pair gadget needs delta >= 16")
        t, s = 0, 1
        a = 2 + 2 * np.arange(size, dtype=np.int64)
        b = a + 1
        n = 2 + 2 * size
        tail = np.concatenate([np.full(size, t), a, b, [s]])
        head = np.concatenate([a, b, np.full(size, s), [t]])
        w = np.concatenate([np.ones(size, np.int64), np.zeros(size, np.int64),
                            np.ones(size, np.int64), [delta // 4 + 1]])
        return from_arrays(n, tail, head, w)
    raise GraphError(f"unknown gadget kind {kind!r}")
