#!/usr/bin/env python3
"""Benchmark the compiled contention kernel against the pure-python fallback.

Measures raw slot sampling throughput and end-to-end simulation wall time
on the bundled 3-node scenario. Run from the repository root:

    python benchmarks/bench_contention.py [--phases 30000] [--repeat 3]
"""

import argparse
import time
from pathlib import Path

import numpy as np

import csmacoop as cc
from csmacoop._contention_py import PyContentionSampler
from csmacoop.contention import CContentionSampler

TOY = Path(__file__).resolve().parent.parent / "scenarios" / "toy.scn"


def bench_raw(sampler_cls, tau, n_nodes, contentions):
    sampler = sampler_cls(np.random.PCG64(np.random.SeedSequence(7)), tau, n_nodes)
    start = time.perf_counter()
    slots = 0
    for _ in range(contentions):
        idle, mask = sampler.next_contention(10**9)
        slots += idle + 1
    elapsed = time.perf_counter() - start
    return slots, elapsed


def bench_run(net, assign, cfg, force_pure):
    start = time.perf_counter()
    trace = cc.simulate(net, assign, cfg, force_pure_kernel=force_pure)
    return trace, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--phases", type=int, default=30_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    scenario = cc.load_scenario(TOY)
    net = scenario.network
    assign = cc.classify(net)

    kernels = [("pure", PyContentionSampler)]
    if cc.compiled_available():
        kernels.insert(0, ("compiled", CContentionSampler))
    else:
        print("note: compiled kernel not built, benchmarking the fallback only")

    tau = 0.0033
    print(f"raw sampling, tau={tau}, {len(net)} nodes, {args.phases} contentions:")
    for name, cls in kernels:
        best = None
        for _ in range(args.repeat):
            slots, elapsed = bench_raw(cls, tau, len(net), args.phases)
            rate = slots / elapsed
            best = max(best or 0.0, rate)
        print(f"  {name:9s} {best / 1e6:8.1f} M slots/s")

    print(f"\nfull runs, {args.phases} contention phases:")
    for protocol, sigma, tau, q in (
        ("direct", 0.0001, 0.0033, 0),
        ("fairmac", 0.0001, 0.0033, 4),
        ("fairmac", 0.0088, 0.045, 4),
    ):
        cfg = cc.SimConfig(
            params=cc.CsmaParams(sigma, tau),
            protocol=protocol,
            seed=7,
            phases=args.phases,
            pending_limit=10,
            forward_max=q,
        )
        results = {}
        for name, _cls in kernels:
            best = None
            for _ in range(args.repeat):
                trace, elapsed = bench_run(net, assign, cfg, force_pure=name == "pure")
                best = min(best or float("inf"), elapsed)
                results[name] = (trace, best)
        label = f"{protocol} sigma={sigma}" + (f" Q={q}" if protocol == "fairmac" else "")
        line = f"  {label:32s}"
        for name, _cls in kernels:
            line += f" {name} {results[name][1] * 1e3:7.1f} ms "
        if len(results) == 2:
            assert results["compiled"][0] == results["pure"][0], "kernel results diverge"
            line += f" (x{results['pure'][1] / results['compiled'][1]:.1f})"
        print(line)
    if len(kernels) == 2:
        print("\nidentical traces confirmed for every configuration")


if __name__ == "__main__":
    main()
