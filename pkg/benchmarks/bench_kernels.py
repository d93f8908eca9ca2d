"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from kvtrace import _pykernels as py

try:
    from kvtrace import _ckernels as ck
except ImportError:
    ck = None


def workloads(rng):
    words = [tuple(rng.randrange(6) for _ in range(rng.randint(4, 12))) for _ in range(2000)]
    split_words = [tuple(rng.randrange(4) for _ in range(8)) for _ in range(60)]
    rows = {}
    for p in range(0, 400, 2):
        rows[p] = {p: Fraction(1), **{q: Fraction(rng.randint(-3, 3)) for q in rng.sample(range(p + 1, 500), 4)}}
    vecs = [{q: Fraction(rng.randint(1, 5)) for q in rng.sample(range(500), 12)} for _ in range(300)]
    return {
        "least_rotation x2000": lambda m: [m.least_rotation(w) for w in words],
        "trace_coproduct_splits x60 (len 8)": lambda m: [m.trace_coproduct_splits(w) for w in split_words],
        "reduce_vector x300": lambda m: [m.reduce_vector(v, rows) for v in vecs],
    }


END_TO_END = "from kvtrace.hopfkernel import kernel_reduced_coproduct as k; k(3, 4, 'omega')"


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["KVTRACE_PURE_PYTHON"] = "1"
    else:
        env.pop("KVTRACE_PURE_PYTHON", None)
    code = f"import time; t = time.perf_counter(); {END_TO_END}; print(time.perf_counter() - t)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if ck is None:
        print("compiled extension not available; build with pip install -e . --no-build-isolation")
        return 1
    rng = random.Random(0)
    print(f"{'kernel':40s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in workloads(rng).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(ck), number=1, repeat=args.repeat))
        print(f"{name:40s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    tp, tc = end_to_end(True), end_to_end(False)
    print(f"{'omega kernel g=3 d=4 (end to end)':40s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
