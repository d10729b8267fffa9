"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernel.py [--repeat 3]

Runs the raw pair kernels on scaled coordinates and a full arrangement build
under each backend, and checks that both backends agree.
"""

import argparse
import time
from itertools import combinations

from tangency_charge import kernel
from tangency_charge.arrangement import build_arrangement
from tangency_charge.generators import gen_comb, gen_convex_family, gen_random_polylines


def _families():
    s1, s2 = gen_comb(16, 16, 8, seed=0)
    yield "comb 16x16x8", s1 + s2
    yield "random 12x40", gen_random_polylines(12, 40, seed=0, biinfinite=True)
    yield "convex 12", gen_convex_family(12, seed=0, m=24)


def _pair_kernels(curves):
    _, scaled = kernel.scale_family([c.geometry for c in curves])
    out = []
    for a, b in combinations(scaled, 2):
        if a.closed or b.closed:
            out.append(kernel.segment_hits(a, b))
        else:
            out.append(kernel.monotone_signs(a, b))
    return out


def _best(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernel.backend() == "cython" else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the Python fallback only")
    print(f"{'family':<16} {'stage':<12} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, curves in _families():
        for stage, fn in (("kernels", lambda: _pair_kernels(curves)),
                          ("arrangement", lambda: [ip.point for ip in build_arrangement(curves).points])):
            times, results = [], []
            for b in backends:
                with kernel.use_backend(b):
                    t, r = _best(fn, args.repeat)
                times.append(t)
                results.append(r)
            if len(results) == 2 and results[0] != results[1]:
                raise SystemExit(f"backends disagree on {name} / {stage}")
            speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
            print(f"{name:<16} {stage:<12} " + " ".join(f"{t * 1e3:8.1f}ms" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
