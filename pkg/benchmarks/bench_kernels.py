"""Compare the numba and pure-numpy kernel paths.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--corpus 30]

Part one times each dense kernel directly on representative shapes and checks
that both paths agree.  Part two runs the lifting solver end to end on a slice
of the random corpus once per backend (the backend is chosen at import time by
TROPCRIT_DISABLE_NUMBA, so each run is a separate process).  JIT compilation
is excluded by a warmup call before timing.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from tropcrit import kernels

SHAPES = {
    "conv_rows": (8, 400),
    "exp_rows": (8, 400),
    "logsumexp_parts": (64, 3),
    "trop_grid": (8, 125000),
}


def _inputs(rng):
    n, L = SHAPES["conv_rows"]
    A = rng.normal(size=(n, L)) / np.arange(1, L + 1)
    B = rng.normal(size=(n, L)) / np.arange(1, L + 1)
    m, r = SHAPES["logsumexp_parts"]
    ell, Vq, y = rng.normal(size=m), rng.normal(size=(m, r)), rng.normal(size=r)
    k, P = SHAPES["trop_grid"]
    C, V = rng.normal(size=k), rng.integers(-2, 3, size=(k, 3)).astype(float)
    pts = rng.uniform(-2, 2, size=(P, 3))
    return {
        "conv_rows": (A, B),
        "exp_rows": (A,),
        "logsumexp_parts": (ell, Vq, y),
        "trop_grid": (C, V, pts),
    }


def _best(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(repeat):
    if not kernels.HAVE_NUMBA:
        print("numba not importable; only the numpy path exists")
        return
    inputs = _inputs(np.random.default_rng(0))
    print(f"{'kernel':<18}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}  agree")
    for name, args in inputs.items():
        f_np = getattr(kernels, f"{name}_numpy")
        f_nb = getattr(kernels, f"{name}_numba")
        f_nb(*args)  # compile
        a, b = f_np(*args), f_nb(*args)
        a = a if isinstance(a, tuple) else (a,)
        b = b if isinstance(b, tuple) else (b,)
        agree = all(np.allclose(x, y, rtol=1e-10, atol=1e-12) for x, y in zip(a, b))
        t_np, t_nb = _best(f_np, args, repeat), _best(f_nb, args, repeat)
        print(f"{name:<18}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.1f}  {agree}")


SOLVE_SNIPPET = """
import json, sys, time
from tropcrit import kernels
from tropcrit.corpus import corpus
from tropcrit.lift import solve_critical
kernels.warmup()
C = corpus(seed=0, count={count})
t0 = time.perf_counter()
for W in C:
    solve_critical(W, 3)
print(json.dumps({{"backend": kernels.backend(), "seconds": time.perf_counter() - t0}}))
"""


def bench_solver(count):
    rows = []
    for disable in ("0", "1"):
        env = dict(os.environ, TROPCRIT_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(count=count)],
                             env=env, capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout.strip().splitlines()[-1]))
    print(f"\nsolve_critical(order 3) on {count} corpus instances")
    for row in rows:
        print(f"  {row['backend']:<6} {row['seconds']:.2f} s")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--corpus", type=int, default=30, help="instances for the end-to-end run (0 skips)")
    args = ap.parse_args()
    print(f"active backend: {kernels.backend()}")
    bench_kernels(args.repeat)
    if args.corpus:
        bench_solver(args.corpus)


if __name__ == "__main__":
    main()
