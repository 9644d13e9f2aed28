"""Acceptance gate.  Each criterion prints one PASS/FAIL line; see the summary section."""
import math
import time

import numpy as np
import pytest

from dldd import gen
from dldd.decomposer import LddConfig, decompose
from dldd.heavy_elim import classify
from dldd.rng import Stream
from dldd.verify import ball_edge_count, estimate_cut_probs, loss_reference, validate, weak_diameter

pytestmark = pytest.mark.slow

SEEDS = range(50)

# (name, graph builder taking a seed, delta)
FAMILIES = [
    ("cycle-unit", lambda s: gen.cycle(4096, 1), 64),
    ("cycle-heavy", lambda s: gen.cycle(1000, 3), 100),
    ("path", lambda s: gen.path(4096, 2), 16),
    ("random-sparse", lambda s: gen.random_digraph(4096, 8192, 16, s), 32),
    ("random-medium", lambda s: gen.random_digraph(1024, 8192, 32, s), 128),
    ("random-dense", lambda s: gen.random_digraph(256, 8192, 100, s), 400),
    ("gadget-close", lambda s: gen.heavy_gadget("close-pair", 512, 64), 64),
    ("gadget-far", lambda s: gen.heavy_gadget("far-pair", 256, 64), 64),
    ("zero-weight-mix", lambda s: gen.zero_weight_mix(1024, 4096, 8, 0.6, s), 16),
    ("multigraph", lambda s: gen.multigraph(1024, 4096, 10, s), 24),
    ("grid", lambda s: gen.grid(64, 64, 4, s), 32),
    ("bidirected-cycle", lambda s: gen.bidirected_cycle(2048, 1), 64),
]


@pytest.fixture(scope="module")
def suite():
    """Decompose every family for every seed once; criteria 1, 6 and 7 read the same runs."""
    runs = []
    for name, build, delta in FAMILIES:
        for s in SEEDS:
            g = build(s)
            res = decompose(g, delta, s)
            runs.append((name, s, g, res, validate(g, res)))
    return runs


def test_criterion_1_validity(suite, report):
    bad = [(n, s, rep.failures[:1]) for n, s, _, _, rep in suite if not rep.ok]
    fams = len({n for n, *_ in suite})
    ok = not bad and fams >= 10
    report(1, ok, f"{len(suite) - len(bad)}/{len(suite)} runs valid over {fams} families x {len(SEEDS)} seeds"
           + (f"; first failure {bad[0]}" if bad else ""))
    assert ok


def test_criterion_6_close_pair_components(suite, report):
    checked = 0
    bad = []
    for name, s, g, res, _ in suite:
        for i in res.finished:
            checked += 1
            wd = weak_diameter(g, res.components[i])
            if wd > res.delta:
                bad.append((name, s, i, wd))
    # the suite must actually exercise the close-pair branch
    ok = not bad and checked > 0
    report(6, ok, f"{checked} close-pair components, {len(bad)} over delta (exact weak diameter)")
    assert ok


def test_criterion_7_recursion_depth(suite, report):
    worst = max(suite, key=lambda r: r[3].max_depth / math.log2(r[2].m + 2))
    name, s, g, res, _ = worst
    ratio = res.max_depth / math.log2(g.m + 2)
    ok = all(r[3].max_depth <= 8 * math.log2(r[2].m + 2) for r in suite)
    report(7, ok, f"worst depth/lg(m+2) = {ratio:.2f} ({name}, seed {s}, depth {res.max_depth}); limit 8")
    assert ok


def test_criterion_2_cut_probability_scaling(report):
    l_hat = {}
    env_ok = True
    worst = 0.0
    for n in (64, 256, 1024):
        g = gen.cycle(n, 1)
        delta = n // 4
        st = estimate_cut_probs(g, delta, 2000, base_seed=0)
        l_hat[n] = st.l_hat
        envelope = min(1.0, 64 * loss_reference(g.m, delta) / delta)
        worst = max(worst, float(st.p_hat.max() / envelope))
        env_ok &= bool(np.all(st.p_hat <= envelope))
    ratio = l_hat[1024] / l_hat[64]
    ok = all(math.isfinite(x) for x in l_hat.values()) and ratio <= 4 and env_ok
    shown = ", ".join(f"n={n}: {v:.3f}" for n, v in l_hat.items())
    report(2, ok, f"l_hat {shown}; ratio 1024/64 = {ratio:.3f} (<= 4); "
                  f"max p_hat/envelope = {worst:.3f} (<= 1)")
    assert ok


def test_criterion_3_speedup_equivalence(report):
    differ = []
    for s in range(100):
        g = gen.random_digraph(256, 2048, 64, s)
        delta = 16 << (s % 5)
        on = decompose(g, delta, s, LddConfig(speedup=True)).to_json(include_diagnostics=True)
        off = decompose(g, delta, s, LddConfig(speedup=False)).to_json(include_diagnostics=True)
        if on != off:
            differ.append(s)
    ok = not differ
    report(3, ok, f"{100 - len(differ)}/100 seeds byte-identical with skipping on and off")
    assert ok


def _classifier_errors(g, delta, seed):
    lab = classify(g, delta, Stream(seed))
    wrong = 0
    for v in range(g.n):
        for d, heavy in (("out", lab.out_heavy), ("in", lab.in_heavy)):
            c = ball_edge_count(g, v, d, delta // 8)
            wrong += (4 * c > 3 * g.m and not heavy[v]) or (2 * c < g.m and heavy[v])
    return wrong, int(lab.out_heavy.sum() + lab.in_heavy.sum())


def test_criterion_4_classifier(report):
    cases = [(gen.random_digraph(128, 512, 16, s), 64 * (1 + s % 8), s) for s in range(50)]
    cases.append((gen.heavy_gadget("close-pair", 128, 64), 64, 50))
    cases.append((gen.heavy_gadget("far-pair", 64, 64), 64, 51))
    wrong = heavy = 0
    for g, delta, s in cases:
        w, h = _classifier_errors(g, delta, s)
        wrong += w
        heavy += h
    ok = wrong == 0
    report(4, ok, f"{wrong} mislabels over {len(cases)} graphs ({heavy} heavy labels issued)")
    assert ok


def test_criterion_5_volume_monitor(report):
    runs = 500
    flagged = 0
    total = 0
    cfg = LddConfig(monitor=True)
    for s in range(runs):
        g = gen.random_digraph(512, 2048, 16, s)
        res = decompose(g, 32 << (s % 4), s, cfg)
        v = sum(r["volume_violations"] for rec in res.diagnostics for r in rec.get("rounds", []))
        total += v
        flagged += v > 0
    ok = flagged <= 0.01 * runs
    report(5, ok, f"{flagged}/{runs} runs with volume violations ({total} vertices flagged); limit 1%")
    assert ok


def test_criterion_8_scaling(report):
    delta = 10**6
    decompose(gen.random_digraph(64, 512, delta, 0), delta, 0)  # compile outside the clock
    times = {}
    for e in (18, 19, 20):
        m = 1 << e
        g = gen.random_digraph(m // 8, m, delta, 1)
        best = math.inf
        for _ in range(3):
            t0 = time.perf_counter()
            decompose(g, delta, 1, LddConfig(diagnostics=False))
            best = min(best, time.perf_counter() - t0)
        times[m] = best
    r1 = times[1 << 19] / times[1 << 18]
    r2 = times[1 << 20] / times[1 << 19]
    ok = r1 <= 2.6 and r2 <= 2.6 and times[1 << 20] <= 120
    shown = ", ".join(f"2^{int(math.log2(m))}: {t:.2f}s" for m, t in times.items())
    report(8, ok, f"best-of-3 {shown}; ratios {r1:.2f}, {r2:.2f} (<= 2.6); largest within 120 s")
    assert ok
