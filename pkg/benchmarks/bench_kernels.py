"""Time the numba and numpy variants of the hot kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  The numba
timings exclude compilation (one warm-up call per kernel).
"""

import argparse
import time

import numpy as np

from sgcoherent import _accel, _kernels, specfun, states


def _cases():
    state = states.sg_evolved(5, 20.0)
    axis = np.linspace(-8.0, 8.0, 257)
    alphas = (axis[None, :] + 1j * axis[:, None]).ravel()
    c0 = np.zeros(160, dtype=np.complex128)
    c0[5] = 1.0
    start = specfun.miller_start(400, 150.0)
    return {
        "miller_row (N=400, x=150)": lambda: _kernels.miller_row(400, 150.0, start),
        f"coherent_overlap (257^2 grid, N={state.truncation})": lambda: _kernels.coherent_overlap(
            state.coeffs, alphas
        ),
        "rk4_chain (160 sites, 4000 steps)": lambda: _kernels.rk4_chain(c0, 1.0, 0.005, 4000),
    }


def _best(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = [b for b in _accel.BACKENDS if b == "numpy" or _accel.HAVE_NUMBA]
    timings = {}
    for name in backends:
        previous = _accel.set_backend(name)
        try:
            for label, fn in _cases().items():
                timings.setdefault(label, {})[name] = _best(fn, args.repeat)
        finally:
            _accel.set_backend(previous)

    print(f"{'kernel':48s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speed-up':>10s}")
    for label, row in timings.items():
        cells = "".join(f"{row[b] * 1e3:10.2f}ms" for b in backends)
        ratio = row["numpy"] / row["numba"] if "numba" in row else float("nan")
        print(f"{label:48s}{cells}{ratio:9.1f}x")


if __name__ == "__main__":
    main()
