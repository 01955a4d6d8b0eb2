"""Benchmark the pole-sum kernels: numba @njit loop vs chunked numpy.

The backend is fixed at import time by RANK1_KERNELS, so this script
re-launches itself once per backend and compares the timings.

Usage: python3 benchmarks/bench_kernels.py [--terms 20000] [--points 4096]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def make_inputs(n_terms, n_points, seed=7):
    rng = np.random.default_rng(seed)
    lam = np.arange(-(n_terms // 2), n_terms - n_terms // 2, dtype=float)
    c = (rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)) / (
        1.0 + np.abs(lam)
    ) ** 2
    z = rng.uniform(-n_terms // 4, n_terms // 4, n_points) + 1j * rng.uniform(
        0.3, 2.0, n_points
    )
    return c.astype(np.complex128), lam, z.astype(np.complex128)


def bench_one(n_terms, n_points, repeats):
    from rank1spec import _kernels

    c, lam, z = make_inputs(n_terms, n_points)
    c, lam, z = _kernels.as_arrays(c, lam, z)
    # warm up (includes JIT compilation on the numba path)
    _kernels.pole_sum(c, lam, z)
    _kernels.pole_pow_sum(c, lam, z, 2)
    times = {"pole_sum": [], "pole_pow_sum": []}
    for _ in range(repeats):
        t0 = time.perf_counter()
        s1 = _kernels.pole_sum(c, lam, z)
        times["pole_sum"].append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        s2 = _kernels.pole_pow_sum(c, lam, z, 2)
        times["pole_pow_sum"].append(time.perf_counter() - t0)
    return {
        "backend": _kernels.BACKEND,
        "best_pole_sum_s": min(times["pole_sum"]),
        "best_pole_pow_sum_s": min(times["pole_pow_sum"]),
        "checksum": [float(np.abs(s1).sum()), float(np.abs(s2).sum())],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--terms", type=int, default=20000)
    parser.add_argument("--points", type=int, default=4096)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--single", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.single:
        print(json.dumps(bench_one(args.terms, args.points, args.repeats)))
        return

    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, RANK1_KERNELS=backend)
        out = subprocess.run(
            [
                sys.executable,
                os.path.abspath(__file__),
                "--single",
                "--terms",
                str(args.terms),
                "--points",
                str(args.points),
                "--repeats",
                str(args.repeats),
            ],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results[backend] = json.loads(out.stdout.strip().splitlines()[-1])

    nb, npy = results["numba"], results["numpy"]
    drift = max(
        abs(nb["checksum"][0] - npy["checksum"][0]),
        abs(nb["checksum"][1] - npy["checksum"][1]),
    )
    print(f"terms={args.terms} points={args.points} repeats={args.repeats}")
    for name in ("pole_sum", "pole_pow_sum"):
        key = f"best_{name}_s"
        ratio = npy[key] / nb[key]
        print(
            f"{name:>14}: numba {nb[key] * 1e3:8.2f} ms | numpy {npy[key] * 1e3:8.2f} ms"
            f" | speedup x{ratio:.2f}"
        )
    print(f"checksum drift between backends: {drift:.3e}")


if __name__ == "__main__":
    main()
