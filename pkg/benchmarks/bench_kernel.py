"""Compare the eigensolver backends: per-call latency and scan throughput.

Usage: python benchmarks/bench_kernel.py [--dims 2,4,8,16] [--repeats 2000]
                                         [--scan-n 300] [--seed 7]
"""

import argparse
import time

import numpy as np

from bb84sdi import _kernel
from bb84sdi.attacks import soundness_scan


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def time_eigh(backend, dims, repeats, seed):
    _kernel.use_backend(backend)
    rows = []
    rng = np.random.default_rng(seed)
    for dim in dims:
        mats = [random_hermitian(rng, dim) for _ in range(min(repeats, 256))]
        _kernel.eigh(mats[0])  # warm up
        start = time.perf_counter()
        for i in range(repeats):
            _kernel.eigh(mats[i % len(mats)])
        per_call = (time.perf_counter() - start) / repeats
        rows.append((dim, per_call))
    return rows


def time_scan(backend, n, seed):
    _kernel.use_backend(backend)
    start = time.perf_counter()
    report = soundness_scan(n, seed)
    return time.perf_counter() - start, report.min_gap


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="2,4,8,16")
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument("--scan-n", type=int, default=300)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    dims = [int(d) for d in args.dims.split(",")]

    backends = _kernel.available_backends()
    default = _kernel.backend_name()
    print(f"backends: {', '.join(backends)} (default: {default})")

    print(f"\neigh latency, {args.repeats} calls per dimension")
    header = "dim " + "".join(f"{b:>14}" for b in backends)
    if set(backends) == {"compiled", "python"}:
        header += f"{'py/compiled':>13}"
    print(header)
    per_backend = {b: dict(time_eigh(b, dims, args.repeats, args.seed))
                   for b in backends}
    for dim in dims:
        line = f"{dim:3d} " + "".join(
            f"{per_backend[b][dim] * 1e6:12.2f}us" for b in backends
        )
        if set(backends) == {"compiled", "python"}:
            ratio = per_backend["python"][dim] / per_backend["compiled"][dim]
            line += f"{ratio:12.2f}x"
        print(line)

    print(f"\nsoundness scan, n={args.scan_n}")
    for b in backends:
        elapsed, min_gap = time_scan(b, args.scan_n, args.seed)
        print(f"{b:>9}: {elapsed:7.3f}s  min gap {min_gap:.3e}")

    _kernel.use_backend(default)


if __name__ == "__main__":
    main()
