#!/usr/bin/env python3
"""Benchmark the compiled raster kernels against the pure NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--size 512] [--repeats 3]

Times 8-connected labeling, the exact squared EDT, and Zhang-Suen thinning on
a synthetic building scene of the requested size, on both kernel lanes, and
verifies the outputs agree bit for bit while at it.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from promptseg import kernels
from promptseg.fixtures import make_scene


def timed(fn, arg, repeats: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(arg)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    # tile 96x96 fixture scenes into one dense raster of roughly the asked size
    k = max(1, args.size // 96)
    mask = np.block([[make_scene(rng, size=96)[1] for _ in range(k)] for _ in range(k)])
    mask_u8 = mask.astype(np.uint8)
    h, w = mask.shape
    print(f"scene {h}x{w}, {int(mask.sum())} building px, best of {args.repeats}")

    pure = kernels.get_backend("pure-python")
    if not kernels.compiled_available():
        print("compiled kernels not built; run `python setup.py build_ext --inplace`")
        for name in ("label_8", "edt_sq", "thin_zs"):
            secs, _ = timed(getattr(pure, name), mask_u8, args.repeats)
            print(f"{name:<10} pure {secs * 1000:10.1f} ms")
        return 0

    compiled = kernels.get_backend("compiled")
    header = f"{'kernel':<10} {'compiled':>12} {'pure':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name in ("label_8", "edt_sq", "thin_zs"):
        c_secs, c_out = timed(getattr(compiled, name), mask_u8, args.repeats)
        p_secs, p_out = timed(getattr(pure, name), mask_u8, args.repeats)
        if name == "label_8":
            agree = np.array_equal(c_out[0], p_out[0]) and c_out[1] == p_out[1]
        else:
            agree = np.array_equal(c_out, p_out)
        flag = "" if agree else "  MISMATCH!"
        print(
            f"{name:<10} {c_secs * 1000:10.1f} ms {p_secs * 1000:9.1f} ms "
            f"{p_secs / c_secs:8.1f}x{flag}"
        )
        if not agree:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
