"""Compare the compiled and pure-Python hinge-loss training kernels.

Usage: python benchmarks/bench_kernel.py [--rows N] [--features D] [--epochs E]

Both kernels run on the same random data and epoch orders; the script
checks that their weights are bitwise equal and prints the timings.
"""
import argparse
import time

import numpy as np

from cnlreduce.classifier.svm import BACKEND, epoch_orders, kernel_for


def timed(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=200)
    p.add_argument("--features", type=int, default=300)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    X = (rng.random((args.rows, args.features)) < 0.05).astype(np.float64)
    y = np.where(rng.random(args.rows) < 0.3, 1.0, -1.0)
    orders = epoch_orders(args.rows, args.epochs, args.seed)

    print(f"rows={args.rows} features={args.features} epochs={args.epochs}")
    t_py, (w_py, b_py) = timed(kernel_for("python"), X, y, orders, 0.1, 1e-3, repeat=1)
    print(f"python    {t_py * 1000:10.1f} ms")
    if BACKEND != "compiled":
        print("compiled  (extension not built)")
        return
    t_c, (w_c, b_c) = timed(kernel_for("compiled"), X, y, orders, 0.1, 1e-3)
    same = list(w_py) == list(w_c) and b_py == b_c
    print(f"compiled  {t_c * 1000:10.1f} ms")
    print(f"speedup   {t_py / t_c:10.1f}x")
    print(f"bitwise equal: {same}")


if __name__ == "__main__":
    main()
