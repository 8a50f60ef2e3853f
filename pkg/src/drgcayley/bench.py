"""Benchmark the census scan kernels: numba @njit vs pure-numpy fallback.

Run as `python -m drgcayley.bench`.  Both backends scan the same index
ranges and must report identical hit counts; the table shows throughput and
speedup.  Compile time is excluded by a warmup pass.
"""

from __future__ import annotations

import argparse
import time

from .groups import inverse_pairs, parse_group
from .kernels import HAS_NUMBA, census_scan, scan_context


def _time_scan(desc, start, stop, backend, repeat):
    best = float("inf")
    hits = -1
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = census_scan(desc, start, stop, backend=backend)
        dt = time.perf_counter() - t0
        best = min(best, dt)
        hits = len(res.hits)
    return best, hits


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="census kernel benchmark")
    parser.add_argument(
        "--group", action="append", default=None, help="group literal (repeatable)"
    )
    parser.add_argument("--limit", type=int, default=1 << 20, help="max subsets per group")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    specs = args.group or ["3^2x3", "5^1x5", "7^1x7"]

    backends = ["numpy"]
    if HAS_NUMBA:
        backends.insert(0, "numba")
        # compile outside the timed region
        census_scan(parse_group("3^1x3"), 0, 16, backend="numba")
    else:
        print("numba unavailable; benchmarking the numpy path only")

    header = f"{'group':>8} {'subsets':>10}"
    for b in backends:
        header += f" {b + ' [s]':>12} {b + ' Msub/s':>14}"
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for spec in specs:
        desc = parse_group(spec)
        scan_context(desc)
        total = 1 << len(inverse_pairs(desc))
        stop = min(total, args.limit)
        row = f"{spec:>8} {stop:>10}"
        times = {}
        counts = {}
        for b in backends:
            dt, hits = _time_scan(desc, 0, stop, b, args.repeat)
            times[b] = dt
            counts[b] = hits
            row += f" {dt:>12.4f} {stop / dt / 1e6:>14.2f}"
        if len(backends) == 2:
            row += f" {times['numpy'] / times['numba']:>8.1f}x"
            if counts["numba"] != counts["numpy"]:
                row += "  !! HIT MISMATCH"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
