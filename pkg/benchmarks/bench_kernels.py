"""Compare the numba and pure-Python canonical-form kernels.

Runs both backends on the same maps (every Th_n projection and every Sh_8
shadow), checks that they return identical codes, and prints timings:

    python benchmarks/bench_kernels.py [--repeat 3] [--n 4]
"""

from __future__ import annotations

import argparse
import time

from triplecross import _kernels
from triplecross import generate as G
from triplecross import maps as M


def _workload(n: int) -> list[M.CombMap]:
    th, _ = G.gen_Th(n)
    shadows = G.gen_shadows(2 * n)
    return [M.map_from_code(c) for c in th.items] + [M.map_from_code(s) for s in shadows.items]


def _run(maps: list[M.CombMap], backend: str) -> list[tuple]:
    return [
        _kernels.canonical_code(m.rot, m.alpha, m.color, allow_mirror=True, backend=backend)
        for m in maps
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=4, help="triple-crossing size of the workload")
    args = ap.parse_args(argv)

    maps = _workload(args.n)
    print(f"workload: {len(maps)} maps, {sum(m.n_darts for m in maps)} darts in total")
    if _kernels.njit is None:
        print("numba unavailable or disabled; timing the Python kernel only")
        backends = ["python"]
    else:
        _run(maps[:1], "numba")  # compile outside the timed region
        backends = ["python", "numba"]

    results = {}
    timings = {}
    for b in backends:
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            results[b] = _run(maps, b)
            best = min(best, time.perf_counter() - t0)
        timings[b] = best
        print(f"{b:>7}: {best * 1e3:9.1f} ms (best of {args.repeat})")
    if len(backends) == 2:
        same = results["python"] == results["numba"]
        print(f"speed-up: {timings['python'] / timings['numba']:.1f}x, identical codes: {same}")
        return 0 if same else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
