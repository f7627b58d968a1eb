"""Slotted-CSMA contention engine.

Time advances in sensing slots of length sigma. In every slot each
saturated node independently transmits with probability tau; a slot with
no transmitter is an idle phase of duration sigma, one transmitter is a
success lasting its travel time plus one trailing idle slot, several
transmitters collide for the longest involved packet duration plus the
trailing slot. The trailing slot is dead time charged to the busy phase,
not a contention opportunity.

All randomness comes from one PCG64 stream derived from the 64-bit seed
(per-node draws in node-list order each slot), so identical
(network, config, seed) reproduce identical traces on any platform and
under either contention kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import CsmaParams
from .contention import make_sampler
from .errors import SimulationError, ValidationError
from .metrics import PhaseCounts, TraceSummary
from .protocols import PROTOCOLS, make_protocol
from .topology import HelperAssignment, Network

MAX_ENGINE_NODES = 64


@dataclass(frozen=True)
class SimConfig:
    """Run parameters. `phases` counts contention (non-idle) phases unless
    count_idle_phases is set; max_slots caps the total slot budget so that
    vanishing tau cannot spin forever."""

    params: CsmaParams
    protocol: str
    seed: int
    phases: int = 30_000
    pending_limit: int = 10
    forward_max: int = 0
    count_idle_phases: bool = False
    max_slots: int = 200_000_000

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValidationError(f"protocol must be one of {PROTOCOLS}, got {self.protocol!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.phases < 1:
            raise ValidationError(f"phases must be >= 1, got {self.phases}")
        if self.pending_limit < 0 or self.forward_max < 0:
            raise ValidationError("pending_limit and forward_max must be >= 0")
        if self.max_slots < 1:
            raise ValidationError(f"max_slots must be >= 1, got {self.max_slots}")


@dataclass(frozen=True)
class PhaseOutcome:
    kind: str  # "idle" | "success" | "collision"
    transmitters: tuple[str, ...]
    duration: float
    delivered: tuple[tuple[str, int], ...]


class Engine:
    """Owns all mutable state of one run; strictly single-threaded.

    Separate engines (different seeds or configs) share nothing and may
    run concurrently.
    """

    def __init__(
        self,
        net: Network,
        assign: HelperAssignment,
        cfg: SimConfig,
        force_pure_kernel: bool = False,
    ):
        if len(net) == 0:
            raise ValidationError("network has no nodes")
        if len(net) > MAX_ENGINE_NODES:
            raise ValidationError(
                f"engine supports up to {MAX_ENGINE_NODES} nodes, got {len(net)}"
            )
        self.net = net
        self.cfg = cfg
        self.protocol = make_protocol(
            cfg.protocol, net, assign, cfg.pending_limit, cfg.forward_max
        )
        bitgen = np.random.PCG64(np.random.SeedSequence(cfg.seed))
        self._sampler = make_sampler(
            bitgen, cfg.params.tau, len(net), force_pure=force_pure_kernel
        )
        self._sigma = cfg.params.sigma
        self._slots_used = 0
        self._idle_slots = 0
        self._busy_time = 0.0
        self._success_count = 0
        self._collision_count = 0
        self._delivered = {k: 0 for k in net.nodes}
        self._airtime = {k: 0.0 for k in net.nodes}

    @property
    def kernel_kind(self) -> str:
        return self._sampler.kind

    def _resolve(self, mask: int) -> PhaseOutcome:
        nodes = self.net.nodes
        transmitters = tuple(nodes[i] for i in range(len(nodes)) if mask >> i & 1)
        txs = [self.protocol.effective_transmission(k) for k in transmitters]
        if len(txs) == 1:
            tx = txs[0]
            credit = self.protocol.on_success(tx)
            duration = tx.travel + self._sigma
            self._airtime[tx.node] += tx.duration
            for node, secs in credit.forward_airtime:
                self._airtime[node] += secs
            for node, bits in credit.delivered:
                self._delivered[node] += bits
            self._success_count += 1
            self._busy_time += duration
            return PhaseOutcome("success", transmitters, duration, credit.delivered)
        duration = max(tx.duration for tx in txs) + self._sigma
        for tx in txs:
            self._airtime[tx.node] += tx.duration
            self.protocol.on_collision(tx)
        self._collision_count += 1
        self._busy_time += duration
        return PhaseOutcome("collision", transmitters, duration, ())

    def step_phase(self) -> PhaseOutcome:
        """Advance by exactly one phase (a single slot when idle)."""
        if self._slots_used >= self.cfg.max_slots:
            raise SimulationError(
                f"slot budget of {self.cfg.max_slots} exhausted; "
                "tau may be too small for the requested phase count"
            )
        idle, mask = self._sampler.next_contention(1)
        self._slots_used += 1
        if mask == 0:
            self._idle_slots += 1
            return PhaseOutcome("idle", (), self._sigma, ())
        return self._resolve(mask)

    def run(self) -> TraceSummary:
        """Execute phases until the configured count completes."""
        target = self.cfg.phases
        counted = 0
        while counted < target:
            budget = self.cfg.max_slots - self._slots_used
            if self.cfg.count_idle_phases:
                budget = min(budget, target - counted)
            if budget <= 0:
                break
            idle, mask = self._sampler.next_contention(budget)
            self._idle_slots += idle
            self._slots_used += idle
            if self.cfg.count_idle_phases:
                counted += idle
            if mask == 0:
                continue  # budget ran out; loop re-checks both limits
            self._slots_used += 1
            self._resolve(mask)
            counted += 1
        if counted < target:
            raise SimulationError(
                f"slot budget of {self.cfg.max_slots} exhausted after "
                f"{counted} of {target} phases; "
                "tau may be too small for the requested phase count"
            )
        return self.summary()

    def summary(self) -> TraceSummary:
        """Ledger accumulated so far."""
        return TraceSummary(
            elapsed=self._idle_slots * self._sigma + self._busy_time,
            delivered_bits=dict(self._delivered),
            transmit_seconds=dict(self._airtime),
            phase_counts=PhaseCounts(
                self._idle_slots, self._success_count, self._collision_count
            ),
        )


def simulate(
    net: Network,
    assign: HelperAssignment,
    cfg: SimConfig,
    force_pure_kernel: bool = False,
) -> TraceSummary:
    """Run one full simulation and return its trace summary."""
    return Engine(net, assign, cfg, force_pure_kernel=force_pure_kernel).run()
