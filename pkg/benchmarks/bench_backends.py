"""Compare the compiled and interpreted kernel backends.

Each backend runs in its own interpreter (the switch is read at import time).
Both must produce byte-identical result JSON; the script reports wall times
and the speedup of the compiled path.

    python3 benchmarks/bench_backends.py --sizes 256:1024 512:2048
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from dldd import gen
from dldd.decomposer import LddConfig, decompose
n, m, wmax, delta, seed = map(int, sys.argv[1:6])
g = gen.random_digraph(n, m, wmax, seed)
decompose(gen.random_digraph(8, 16, 4, 0), 8, 0)  # compile before timing
t0 = time.perf_counter()
res = decompose(g, delta, seed, LddConfig(diagnostics=False))
dt = time.perf_counter() - t0
print(json.dumps({"seconds": dt, "result": res.to_json()}))
"""


def run(backend_flag, n, m, wmax, delta, seed):
    env = dict(os.environ, LDD_NUMBA=backend_flag)
    out = subprocess.run([sys.executable, "-c", WORKER, str(n), str(m), str(wmax), str(delta), str(seed)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", nargs="+", default=["128:512", "256:1024", "512:2048"], help="n:m pairs")
    ap.add_argument("--wmax", type=int, default=32)
    ap.add_argument("--delta", type=int, default=64)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args(argv)

    print("n\tm\tpython_s\tnumba_s\tspeedup\tidentical")
    ok = True
    for pair in args.sizes:
        n, m = (int(x) for x in pair.split(":"))
        slow = run("0", n, m, args.wmax, args.delta, args.seed)
        fast = run("1", n, m, args.wmax, args.delta, args.seed)
        same = slow["result"] == fast["result"]
        ok &= same
        ratio = slow["seconds"] / fast["seconds"] if fast["seconds"] > 0 else float("inf")
        print(f"{n}\t{m}\t{slow['seconds']:.3f}\t{fast['seconds']:.4f}\t{ratio:.1f}x\t{same}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
