"""Time the brute-force XY8 propagator on the compiled and pure-Python kernels.

Usage: python3 benchmarks/bench_kernels.py [--blocks N] [--repeat R] [--step-divisor D]
"""
import argparse
import time

import numpy as np

from psdnv import _kernels
from psdnv.pulse import SequenceSpec, brute_force_sequence, field_timeline


def bench(backend, seq, timeline, max_step, repeat):
    previous = _kernels.set_backend(backend)
    try:
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            psi = brute_force_sequence(seq, timeline, max_step=max_step)
            times.append(time.perf_counter() - t0)
    finally:
        _kernels.set_backend(previous)
    return min(times), psi


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--blocks", type=int, default=6)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--step-divisor", type=float, default=1000.0,
                        help="integration step is tau_target / step_divisor")
    args = parser.parse_args(argv)

    seq = SequenceSpec(n_blocks=args.blocks)
    timeline = field_timeline(seq, 25e-9)
    max_step = seq.tau_target / args.step_divisor
    n_steps = int(np.ceil(seq.duration / max_step))
    print(f"XY8 x {args.blocks}, ~{n_steps} integration steps per run, best of {args.repeat}")
    results = {}
    for backend in _kernels.available_backends():
        best, psi = bench(backend, seq, timeline, max_step, args.repeat)
        results[backend] = (best, psi)
        print(f"  {backend:9s} {best * 1e3:9.3f} ms")
    if "compiled" in results:
        speedup = results["python"][0] / results["compiled"][0]
        diff = np.abs(results["python"][1] - results["compiled"][1]).max()
        print(f"  speedup {speedup:.1f}x, max state difference {diff:.1e}")
    else:
        print("  compiled extension not built; only the Python kernel is available")


if __name__ == "__main__":
    main()
