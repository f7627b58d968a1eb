"""Equivalence of the compiled contention kernel and the pure fallback.

Both must map the same PCG64 stream to the same (idle_slots, mask)
sequence: slot t owns draws [t*n, (t+1)*n), node order within a slot.
"""

import numpy as np
import pytest

import csmacoop as cc
from csmacoop import contention
from csmacoop._contention_py import PyContentionSampler

needs_compiled = pytest.mark.skipif(
    not cc.compiled_available(), reason="compiled kernel not built"
)


def naive_contentions(seed, tau, n, count):
    """Reference semantics: one Generator.random(n) call per slot."""
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    out = []
    idle = 0
    while len(out) < count:
        draws = gen.random(n)
        mask = 0
        for i in range(n):
            if draws[i] < tau:
                mask |= 1 << i
        if mask:
            out.append((idle, mask))
            idle = 0
        else:
            idle += 1
    return out


def make(kind, seed, tau, n):
    bitgen = np.random.PCG64(np.random.SeedSequence(seed))
    if kind == "pure":
        return PyContentionSampler(bitgen, tau, n)
    return contention.CContentionSampler(bitgen, tau, n)


@pytest.mark.parametrize("seed,tau,n", [(1, 0.045, 3), (7, 0.0033, 3), (42, 0.3, 6), (9, 0.9, 2)])
def test_pure_kernel_matches_naive_reference(seed, tau, n):
    ref = naive_contentions(seed, tau, n, 300)
    sampler = make("pure", seed, tau, n)
    assert [sampler.next_contention(10**9) for _ in range(300)] == ref


@needs_compiled
@pytest.mark.parametrize("seed,tau,n", [(1, 0.045, 3), (7, 0.0033, 3), (42, 0.3, 6), (9, 0.9, 2)])
def test_compiled_kernel_matches_naive_reference(seed, tau, n):
    ref = naive_contentions(seed, tau, n, 300)
    sampler = make("compiled", seed, tau, n)
    assert [sampler.next_contention(10**9) for _ in range(300)] == ref


@needs_compiled
def test_kernels_agree_after_budget_exhaustion():
    # an exhausted budget (mask == 0) must leave both kernels on the same slot
    results = {}
    for kind in ("pure", "compiled"):
        sampler = make(kind, 1234, 0.002, 4)
        seq = []
        for _ in range(200):
            seq.append(sampler.next_contention(25))
        results[kind] = seq
    assert results["pure"] == results["compiled"]
    assert any(mask == 0 for _, mask in results["pure"])


def test_budget_semantics():
    sampler = make("pure", 5, 1e-9, 3)  # essentially never transmits
    assert sampler.next_contention(10) == (10, 0)
    assert sampler.next_contention(1) == (1, 0)


def test_node_count_bounds():
    bitgen = np.random.PCG64(1)
    with pytest.raises(ValueError):
        PyContentionSampler(bitgen, 0.1, 0)
    with pytest.raises(ValueError):
        PyContentionSampler(bitgen, 0.1, 65)


def test_make_sampler_forces_pure(monkeypatch):
    bitgen = np.random.PCG64(1)
    sampler = cc.make_sampler(bitgen, 0.1, 3, force_pure=True)
    assert sampler.kind == "pure"
    monkeypatch.setenv("CSMACOOP_PURE", "1")
    sampler = cc.make_sampler(np.random.PCG64(1), 0.1, 3)
    assert sampler.kind == "pure"


@needs_compiled
def test_make_sampler_prefers_compiled(monkeypatch):
    monkeypatch.delenv("CSMACOOP_PURE", raising=False)
    sampler = cc.make_sampler(np.random.PCG64(1), 0.1, 3)
    assert sampler.kind == "compiled"


@needs_compiled
def test_full_runs_identical_across_kernels(toy):
    net, assign = toy
    for protocol, forward_max in (("direct", 0), ("coopmac", 0), ("fairmac", 4)):
        cfg = cc.SimConfig(
            params=cc.CsmaParams(0.0088, 0.045),
            protocol=protocol,
            seed=77,
            phases=5_000,
            pending_limit=10,
            forward_max=forward_max,
        )
        compiled = cc.simulate(net, assign, cfg)
        pure = cc.simulate(net, assign, cfg, force_pure_kernel=True)
        assert compiled == pure, protocol
