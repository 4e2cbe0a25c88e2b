"""Compare the compiled and pure-Python Gibbs kernels.

Runs one AB-Flat and one AB-Con chain of the same length through each
backend, checks the draws are identical, and reports wall time and speed-up.

    python benchmarks/bench_kernels.py [--sweeps 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from dualrecord import DrsData, kernels
from dualrecord.samplers import ab_con_hyperparameters

# a P3-like table: x11=280, x10=120, x01=58
X11, X10, X01 = 280, 120, 58


def _ab_flat(backend, sweeps):
    gen = np.random.Generator(np.random.PCG64(1))
    return backend.ab_flat_chain(gen, X11, X10, X01, 1.0, 2.0, kernels.JEFFREYS, 0.0,
                                 kernels.C_OVER_PHI, 520, 1.5, 0.8, sweeps)


def _ab_con(backend, sweeps):
    gen = np.random.Generator(np.random.PCG64(1))
    sa, sb = ab_con_hyperparameters(DrsData(X11, X10, X01), 20.0)
    return backend.ab_con_chain(gen, X11, X10, X01, sa, sb, kernels.JEFFREYS, 0.0,
                                520, 1.0 / 0.75, sweeps)


def _time(fn, backend, sweeps, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(backend, sweeps)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sweeps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    print(f"{'kernel':<8} {'sweeps':>7} {'python s':>10} {'compiled s':>11} {'speed-up':>9}  identical")
    for name, fn in (("ab-flat", _ab_flat), ("ab-con", _ab_con)):
        tp, outp = _time(fn, kernels.python_backend, args.sweeps, args.repeat)
        tc, outc = _time(fn, kernels.compiled_backend, args.sweeps, args.repeat)
        same = outp[0] == outc[0] and all(np.array_equal(a, b) for a, b in zip(outp[1:5], outc[1:5]))
        print(f"{name:<8} {args.sweeps:>7} {tp:>10.3f} {tc:>11.4f} {tp / tc:>8.1f}x  {same}")


if __name__ == "__main__":
    main()
