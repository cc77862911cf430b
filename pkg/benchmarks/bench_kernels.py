"""Compare the compiled and pure-Python gate kernels on block extraction.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from lapqbe import _backend, simulator
from lapqbe.encoder import build_nd
from lapqbe.lattice import GridAxisSpec, LaplacianSpec

CASES = [
    ("neumann n=6", [(6, 1.0, "n")]),
    ("neumann n=9", [(9, 1.0, "n")]),
    ("dirichlet x neumann n=(4,4)", [(4, 1.0, "d"), (4, 0.5, "n")]),
    ("p x d x n n=(2,2,3)", [(2, 1.0, "p"), (2, 1.0, "d"), (3, 2.0, "n")]),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available()
    print(f"backends: {', '.join(backends)} (default {_backend.DEFAULT})")
    print(f"{'case':32s} {'qubits':>6s} " + " ".join(f"{b + ' [s]':>12s}" for b in backends) + "  speedup")
    for name, axes in CASES:
        desc = build_nd(LaplacianSpec(tuple(GridAxisSpec(*a) for a in axes)))
        timings, blocks = [], []
        for b in backends:
            t, block = best_of(lambda: simulator.extract_block(desc, backend=b), args.repeat)
            timings.append(t)
            blocks.append(block)
        for other in blocks[1:]:
            assert np.allclose(other, blocks[0], atol=1e-12)
        speed = f"{timings[-1] / timings[0]:7.1f}x" if len(timings) > 1 else "      -"
        print(f"{name:32s} {desc.total_qubits:6d} " + " ".join(f"{t:12.4f}" for t in timings) + "  " + speed)


if __name__ == "__main__":
    main()
