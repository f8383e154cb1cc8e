#!/usr/bin/env python3
"""Compare the compiled census kernel against the pure-Python one.

Runs the same census slice through both backends, checks the counts agree
(bit for bit — a benchmark that silently diverged would be worthless), and
prints wall times and the speedup.  The compiled backend covers prime-field
q=2 with the degree limits baked into its tables; everything else runs pure.

Usage:
    python bench/benchmark.py [--degree D] [--mode all|smooth] [--span N]
"""

import argparse
import time

from planecount.gf import make_field
from planecount.kernels import HAVE_FAST, census
from planecount.poly import monomial_count
from planecount.smooth import singular_mask


def time_backend(field, d, mode, start, stop, backend, mask=None):
    t0 = time.perf_counter()
    counts = census(field, d, mode, start, stop, mask=mask, backend=backend)
    return counts, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=5)
    ap.add_argument("--mode", choices=["all", "smooth"], default="smooth")
    ap.add_argument("--span", type=int, default=1 << 14,
                    help="number of candidate indexes per timed run")
    ap.add_argument("--with-mask", action="store_true",
                    help="also time the smooth census with a known-singular "
                         "prescan mask")
    args = ap.parse_args()

    field = make_field(2)
    d = args.degree
    space = field.q ** monomial_count(d)
    start = min(space // 3, space - 1)
    stop = min(start + args.span, space)
    print(f"census q=2 d={d} mode={args.mode} slice [{start}, {stop}) "
          f"of {space}")

    if not HAVE_FAST:
        print("compiled kernel NOT available; timing pure backend only")
        counts, dt = time_backend(field, d, args.mode, start, stop, "pure")
        print(f"pure: {dt:.3f}s  counts={counts.tolist()}")
        return

    fast_counts, fast_dt = time_backend(field, d, args.mode, start, stop,
                                        "fast")
    pure_counts, pure_dt = time_backend(field, d, args.mode, start, stop,
                                        "pure")
    if not (fast_counts == pure_counts).all():
        raise SystemExit("BACKENDS DISAGREE — this is a bug, not a benchmark")
    rate_f = (stop - start) / fast_dt
    rate_p = (stop - start) / pure_dt
    print(f"fast: {fast_dt:8.3f}s   {rate_f:12.0f} forms/s")
    print(f"pure: {pure_dt:8.3f}s   {rate_p:12.0f} forms/s")
    print(f"speedup: {pure_dt / fast_dt:.1f}x   (counts verified equal)")

    if args.with_mask and args.mode == "smooth":
        mask = singular_mask(field, d, range(1, 5))
        m_counts, m_dt = time_backend(field, d, "smooth", start, stop,
                                      "fast", mask=mask)
        if not (m_counts == fast_counts).all():
            raise SystemExit("MASKED COUNTS DISAGREE — bug")
        print(f"fast+mask: {m_dt:.3f}s  "
              f"({(stop - start) / m_dt:.0f} forms/s, mask build excluded)")


if __name__ == "__main__":
    main()
