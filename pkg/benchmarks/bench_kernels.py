"""Benchmark the batch scan kernels: jit backend against the numpy fallback.

Builds a fully gadgeted fragment, runs the group-bound scan and the
subgroup-dichotomy scan on every available backend, reports timings, and
fails (exit 1) if the backends disagree on any count or verdict.

    python3 benchmarks/bench_kernels.py --naturals 11 --repeat 3
"""

import argparse
import sys
import time

from mekler.graphs import all_pairs, build_fragment
from mekler.group import GroupContext
from mekler.kernels import HAS_NUMBA, scan_group_bound, scan_subgroup_dichotomy
from mekler.subgroup import EdgeFunctional


def parse_edges(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            a, _, b = tok.partition("-")
            out.append((int(a), int(b)))
    return out


def summarize(scan):
    return (
        scan.mode,
        scan.elements_checked,
        scan.members_checked,
        scan.ok,
        sorted(repr(v) for v in scan.violations),
    )


def bench(label, fn, repeat):
    fn()  # warm-up: jit compilation, allocator
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    rate = result.elements_checked / best if best > 0 else float("inf")
    print(f"  {label:<28s} {best:8.3f}s   {rate:12.0f} elements/s")
    return result, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--naturals", type=int, default=11, help="fragment size (all pairs gadgeted)")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--support", type=int, default=3, help="max support size scanned")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--r-edges", default="0-1,1-2", help="encoded edges for the subgroup scan")
    args = ap.parse_args(argv)

    nats = list(range(args.naturals))
    frag = build_fragment(nats, all_pairs(nats))
    ctx = GroupContext(frag, args.p)
    ell = EdgeFunctional.from_edges(parse_edges(args.r_edges))

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    print(
        f"fragment: {len(frag)} vertices, {len(frag.edges)} edges, p={args.p}, "
        f"support <= {args.support}, backends: {', '.join(backends)}"
    )

    results = {}
    for backend in backends:
        print(f"{backend}:")
        g, _ = bench(
            "group bound scan",
            lambda b=backend: scan_group_bound(ctx, max_support=args.support, backend=b),
            args.repeat,
        )
        s, _ = bench(
            "subgroup dichotomy scan",
            lambda b=backend: scan_subgroup_dichotomy(ctx, ell, max_support=args.support, backend=b),
            args.repeat,
        )
        results[backend] = (summarize(g), summarize(s))

    baseline = results[backends[0]]
    agree = all(results[b] == baseline for b in backends)
    counts = baseline[0][1], baseline[1][2]
    print(
        f"agreement: {'ok' if agree else 'MISMATCH'} "
        f"({counts[0]} elements scanned, {counts[1]} subgroup members)"
    )
    if not (baseline[0][3] and baseline[1][3]):
        print("warning: scans reported violations on this fragment")
    return 0 if agree else 1


if __name__ == "__main__":
    sys.exit(main())
