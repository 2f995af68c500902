#!/usr/bin/env python3
"""Benchmark the two row-reduction backends (numba vs pure numpy).

Run with no arguments: the script re-executes itself in two
subprocesses, one per backend (the backend is chosen at import time
from ``ETMASS_PURE``), and prints a small comparison table.

    python3 benchmarks/bench_fplinalg.py
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time

SHAPES = [(2, 32, 32), (2, 128, 128), (3, 64, 96), (5, 128, 64), (13, 96, 96)]
REPEATS = 30


def run_one_backend():
    import numpy as np

    from etmass.fplinalg import FpMatrix, backend_name, kernel_basis, rank, rref_decomp

    rng = np.random.default_rng(0)
    results = {"backend": backend_name(), "timings": []}
    for p, m, n in SHAPES:
        mats = [
            FpMatrix(p, rng.integers(0, p, size=(m, n)).astype(np.int64))
            for _ in range(REPEATS)
        ]
        # warm up compilation outside the timed region
        rref_decomp(mats[0])
        t0 = time.perf_counter()
        acc = 0
        for M in mats:
            acc += rank(M) + kernel_basis(M).arr.shape[1]
        dt = time.perf_counter() - t0
        results["timings"].append(
            {"p": p, "shape": [m, n], "seconds": dt / REPEATS, "checksum": acc}
        )
    print(json.dumps(results))


def main():
    rows = {}
    for pure in ("0", "1"):
        env = dict(os.environ, ETMASS_PURE=pure)
        out = subprocess.run(
            [sys.executable, __file__, "--one"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        data = json.loads(out.stdout.strip().splitlines()[-1])
        rows[data["backend"]] = data["timings"]
    backends = sorted(rows)
    print(f"{'p':>4} {'shape':>10} " + " ".join(f"{b:>12}" for b in backends) + "  speedup")
    for i, (p, m, n) in enumerate(SHAPES):
        cells = [rows[b][i]["seconds"] for b in backends]
        checks = {rows[b][i]["checksum"] for b in backends}
        assert len(checks) == 1, "backends disagree on exact results"
        ratio = max(cells) / min(cells)
        print(
            f"{p:>4} {f'{m}x{n}':>10} "
            + " ".join(f"{c * 1e3:>10.3f}ms" for c in cells)
            + f"  {ratio:>6.1f}x"
        )


if __name__ == "__main__":
    if "--one" in sys.argv:
        run_one_backend()
    else:
        main()
