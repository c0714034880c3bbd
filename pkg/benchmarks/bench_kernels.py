"""Compare the numba and pure-numpy Jacobi backends.

Two parts:

* kernel: ``hermitian_eigen`` on random Hermitian matrices, both kernels in
  one process (numba compile time excluded by a warm-up call);
* end to end: ``qdiscord sweep`` and ``qdiscord check`` run in subprocesses,
  once as installed and once with ``QDISCORD_DISABLE_NUMBA=1``. The two sweep
  CSVs are compared row by row; the kernels use different pivot orders, so a
  value sitting on a 12-decimal rounding boundary can print differently.

Usage: python benchmarks/bench_kernels.py [--dims 2 4 8 16 32] [--repeat 200]
"""
import argparse
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from qdiscord import linalg
from qdiscord._jacobi import jacobi_numba, jacobi_numpy


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def time_kernel(kernel, mats, vectors):
    fn = linalg.hermitian_eigen if vectors else linalg.eigvalsh
    fn(mats[0], kernel=kernel)
    start = time.perf_counter()
    for m in mats:
        fn(m, kernel=kernel)
    return (time.perf_counter() - start) / len(mats)


def bench_kernels(dims, repeat, seed):
    rng = np.random.default_rng(seed)
    print(f"{'n':>4} {'vectors':>8} {'numba us':>10} {'numpy us':>10} {'ratio':>7} {'max |dw|':>10}")
    for n in dims:
        mats = [random_hermitian(n, rng) for _ in range(max(5, repeat // n))]
        for vectors in (False, True):
            t_nb = time_kernel(jacobi_numba, mats, vectors)
            t_np = time_kernel(jacobi_numpy, mats, vectors)
            dw = max(
                np.abs(linalg.eigvalsh(m, kernel=jacobi_numba) - linalg.eigvalsh(m, kernel=jacobi_numpy)).max()
                for m in mats[:5]
            )
            print(f"{n:>4} {str(vectors):>8} {t_nb * 1e6:>10.1f} {t_np * 1e6:>10.1f} {t_np / t_nb:>7.1f} {dw:>10.1e}")


def run_cli(args, disable):
    env = dict(os.environ)
    env.pop("QDISCORD_DISABLE_NUMBA", None)
    if disable:
        env["QDISCORD_DISABLE_NUMBA"] = "1"
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "qdiscord", *args], env=env, capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        raise SystemExit(f"qdiscord {' '.join(args)} failed ({proc.returncode}): {proc.stderr}")
    return elapsed


def bench_end_to_end(z_steps, theta_steps, trials):
    with tempfile.TemporaryDirectory() as tmp:
        outputs = {}
        print(f"\n{'task':<28} {'numba s':>9} {'numpy s':>9}")
        sweep = ["sweep", "--family", "cnot", "--z-steps", str(z_steps), "--theta-steps", str(theta_steps)]
        times = []
        for disable in (False, True):
            out = Path(tmp) / f"sweep_{int(disable)}.csv"
            times.append(run_cli([*sweep, "--out", str(out)], disable))
            outputs[disable] = out.read_text().splitlines()
        print(f"{f'sweep cnot {z_steps}x{theta_steps}':<28} {times[0]:>9.2f} {times[1]:>9.2f}")
        times = [run_cli(["check", "--trials", str(trials)], d) for d in (False, True)]
        print(f"{f'check --trials {trials}':<28} {times[0]:>9.2f} {times[1]:>9.2f}")
    differ = [(a, b) for a, b in zip(outputs[False], outputs[True]) if a != b]
    worst = max(
        (abs(float(x) - float(y)) for a, b in differ for x, y in zip(a.split(","), b.split(","))),
        default=0.0,
    )
    print(f"\nsweep CSV rows differing across backends: {len(differ)} of {len(outputs[False]) - 1}"
          f" (max |diff| {worst:.1e})")
    return differ


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8, 16, 32])
    parser.add_argument("--repeat", type=int, default=200, help="matrices per size (scaled down by n)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--z-steps", type=int, default=64)
    parser.add_argument("--theta-steps", type=int, default=64)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--skip-e2e", action="store_true", help="kernel timings only")
    args = parser.parse_args(argv)

    if jacobi_numba is None:
        raise SystemExit("numba is not installed; nothing to compare against")
    print(f"default backend: {linalg.BACKEND}\n")
    bench_kernels(args.dims, args.repeat, args.seed)
    if not args.skip_e2e:
        bench_end_to_end(args.z_steps, args.theta_steps, args.trials)


if __name__ == "__main__":
    main()
