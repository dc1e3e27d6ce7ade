#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times batch region labeling and the symmetric-KL loss on synthetic inputs
sized like a full pseudo-labeling run. Outputs one line per (kernel,
backend) plus the speedup, after checking both backends agree.

Usage: python benchmarks/bench_kernels.py [--n 500000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from c2a2 import calibrate_axes, AVPoint, BasicEmotion
from c2a2._kernels import available_backends
from c2a2.regions import _direction_arrays, _partition_arrays

CLUSTER_MEANS = {
    BasicEmotion.HAPPY: (0.80, 0.25),
    BasicEmotion.SURPRISED: (0.15, 0.85),
    BasicEmotion.FEARFUL: (-0.30, 0.78),
    BasicEmotion.ANGRY: (-0.62, 0.50),
    BasicEmotion.DISGUSTED: (-0.75, 0.22),
    BasicEmotion.SAD: (-0.70, -0.42),
}


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=500_000, help="rows per kernel call")
    parser.add_argument("--repeats", type=int, default=5, help="timed repeats (best kept)")
    args = parser.parse_args()

    frame = calibrate_axes([(b, AVPoint(*mean)) for b, mean in CLUSTER_MEANS.items()])
    azimuths, basic_codes, comp_codes = _partition_arrays(frame)
    dirs, dir_codes = _direction_arrays(frame)

    rng = np.random.default_rng(0)
    pts = rng.uniform(-0.57, 0.57, size=(args.n, 3))
    pts[rng.random(args.n) < 0.5, 2] = 0.0
    a, v, z = (np.ascontiguousarray(pts[:, i]) for i in range(3))
    pred = rng.uniform(1e-4, 1 - 1e-4, size=(args.n, 15))
    target = rng.uniform(1e-4, 1 - 1e-4, size=(args.n, 15))

    backends = available_backends()
    if len(backends) == 1:
        print("note: compiled extension not built; timing the fallback only")

    kernels = {
        "region_codes": lambda b: b.region_codes(
            a, v, z, azimuths, basic_codes, comp_codes, dirs, dir_codes, frame.neutral_rho
        ),
        "planar_region_codes": lambda b: b.planar_region_codes(
            a, v, azimuths, basic_codes, comp_codes, frame.neutral_rho
        ),
        "sym_kl": lambda b: b.sym_kl(pred, target),
    }

    print(f"rows: {args.n}, repeats: {args.repeats} (best shown)")
    for name, call in kernels.items():
        results = {}
        outputs = {}
        for backend in backends:
            outputs[backend.NAME] = call(backend)
            results[backend.NAME] = best_of(lambda: call(backend), args.repeats)
        if len(outputs) == 2:
            native_out, py_out = outputs["native"], outputs["python"]
            if name == "sym_kl":
                assert np.allclose(native_out[0], py_out[0], rtol=1e-12)
                assert np.allclose(native_out[1], py_out[1], rtol=1e-12)
            else:
                assert np.array_equal(native_out, py_out)
        for backend_name, seconds in results.items():
            rate = args.n / seconds / 1e6
            print(f"  {name:22s} {backend_name:7s} {seconds * 1e3:9.2f} ms   {rate:8.1f} Mrows/s")
        if len(results) == 2:
            print(f"  {name:22s} speedup {results['python'] / results['native']:.2f}x")


if __name__ == "__main__":
    main()
