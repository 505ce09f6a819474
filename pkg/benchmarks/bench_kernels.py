"""Time the numba kernels against their pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both variants are called directly, so the ``OHMIC_PROBE_JIT`` flag does not
matter here. JIT compilation happens in a warm-up call outside the timing.
"""
import argparse
import time

import numpy as np

from ohmic_probe import kernels, specfun
from ohmic_probe.decoherence import BathSpec, _quad_edges

TAU = np.geomspace(1e-2, 1e2, 200)


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    s, wc, temp = 0.5, 1.0, 1.0
    edges, _ = _quad_edges(3.0, BathSpec(s, wc, temp), 1e-10, 2 * s + 45)
    quad = (kernels.KIND_GAMMA, 3.0, s, wc, temp, 1e-10, 10**6)
    heavy_edges, _ = _quad_edges(100.0, BathSpec(3.0, 100.0, 1.0), 1e-10, 51)
    heavy = (kernels.KIND_GAMMA, 100.0, 3.0, 100.0, 1.0, 1e-10, 10**7)
    q = np.linspace(0.1, 30, 2000) + 1j * np.linspace(-200, 200, 2000)
    return {
        "hurwitz_zeta x2000": (
            lambda: specfun._hurwitz_array_nb(0.5, q),
            lambda: specfun._hurwitz_np(0.5, q),
        ),
        "closed_form x200": (
            lambda: kernels.closed_form_nb(TAU, s, wc, temp),
            lambda: kernels.closed_form_np(TAU, s, wc, temp),
        ),
        "series x200": (
            lambda: kernels.series_nb(TAU, s, wc, temp, 1e-12, 10**6),
            lambda: kernels.series_np(TAU, s, wc, temp, 1e-12, 10**6),
        ),
        "quadrature x1": (
            lambda: kernels.adaptive_gk_nb(np.ascontiguousarray(edges), *quad),
            lambda: kernels.adaptive_gk_np(edges, *quad),
        ),
        "quadrature x1, 3e5 panels": (
            lambda: kernels.adaptive_gk_nb(np.ascontiguousarray(heavy_edges), *heavy),
            lambda: kernels.adaptive_gk_np(heavy_edges, *heavy),
        ),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'kernel':<28}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}")
    for name, (nb, npy) in cases().items():
        t_nb = best_of(nb, args.repeat)
        t_np = best_of(npy, args.repeat)
        print(f"{name:<28}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
