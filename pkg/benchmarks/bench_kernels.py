"""Compare the compiled and pure-numpy Jacobi kernels on batches of small matrices.

Usage: python3 benchmarks/bench_kernels.py [--batch N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from anisoinv import _jacobi_py

try:
    from anisoinv import _jacobi_ext
except ImportError:
    _jacobi_ext = None


def random_hermitian(rng, batch, dim):
    x = rng.normal(size=(batch, dim, dim)) + 1j * rng.normal(size=(batch, dim, dim))
    return (x + np.conj(np.swapaxes(x, 1, 2))) / 2


def random_symmetric(rng, batch, dim):
    x = rng.normal(size=(batch, dim, dim))
    return (x + np.swapaxes(x, 1, 2)) / 2


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    backends = [("python", _jacobi_py)]
    if _jacobi_ext is not None:
        backends.append(("cython", _jacobi_ext))
    else:
        print("compiled extension not built; timing the python kernel only")

    cases = [
        ("symeig 3x3", "symeig_batch", random_symmetric(rng, args.batch, 3)),
        ("eigh 4x4", "eigh_batch", random_hermitian(rng, args.batch, 4)),
        ("eigh 8x8", "eigh_batch", random_hermitian(rng, args.batch, 8)),
    ]
    print(f"batch={args.batch} repeat={args.repeat} (best time per batch)")
    print(f"{'kernel':<12}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for label, fn_name, data in cases:
        times = []
        for _, mod in backends:
            fn = getattr(mod, fn_name)
            fn(data[:4])  # warm up
            times.append(best_of(lambda: fn(data), args.repeat))
        row = f"{label:<12}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)

    if len(backends) == 2:
        data = cases[2][2]
        w_py = np.sort(_jacobi_py.eigh_batch(data)[0], axis=1)
        w_cy = np.sort(_jacobi_ext.eigh_batch(data)[0], axis=1)
        print(f"max eigenvalue difference between backends (8x8): {np.abs(w_py - w_cy).max():.2e}")


if __name__ == "__main__":
    main()
