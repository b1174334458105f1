"""Time the compiled kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from monfg.equilibrium import simplex_grid
from monfg.kernels import _numba, _numpy
from monfg.utility import compile_program, parse_utility


def timed(fn, repeat):
    fn()  # warm-up, includes compilation for the numba backend
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    prog = compile_program(parse_utility("(+ (pow (- p1 0.5) 2) (* p1 p2) (max p1 p2))"))
    c, k = prog.code, prog.consts
    rng = np.random.default_rng(0)
    X = rng.normal(size=(200_000, 2))
    V = rng.normal(size=(4, 2))
    W = simplex_grid(4, 50)
    starts = np.ascontiguousarray(W[:8])
    G = simplex_grid(2, 400)
    P = rng.normal(size=(2, 2, 2))
    counts = np.array([6, 6, 6], dtype=np.int64)
    table = np.ascontiguousarray(rng.integers(-3, 4, size=(3, 216)).astype(float))
    return {
        "eval_program 200k points": lambda m: m.eval_program(c, k, X),
        "hull_values 4 actions g=50": lambda m: m.hull_values(c, k, W, V),
        "pattern_search 8 starts": lambda m: m.pattern_search(c, k, V, starts, 0.02, 1e-10, 2000),
        "pair_values 401x401": lambda m: m.pair_values(c, k, G, G, P),
        "psne_mask 6x6x6": lambda m: m.psne_mask(table, counts, 1e-9),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':32s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speed-up':>9s}")
    for name, fn in cases().items():
        tn = timed(lambda: fn(_numba), args.repeat)
        tp = timed(lambda: fn(_numpy), args.repeat)
        print(f"{name:32s} {tn * 1e3:12.3f} {tp * 1e3:12.3f} {tp / tn:9.1f}")


if __name__ == "__main__":
    main()
