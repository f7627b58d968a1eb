"""Per-run ledgers and their reduction to operating points.

Throughput counts only bits a node owns; the energy side also includes
time spent forwarding other nodes' data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analytic import OperatingPoint
from .errors import SimulationError, ValidationError


@dataclass(frozen=True)
class PhaseCounts:
    idle: int
    success: int
    collision: int

    @property
    def total(self) -> int:
        return self.idle + self.success + self.collision


@dataclass(frozen=True)
class TraceSummary:
    """Delivery/energy ledger of one simulation run.

    delivered_bits: own bits credited per node (forwarded data excluded).
    transmit_seconds: airtime per node, attempts and forwarding included.
    """

    elapsed: float
    delivered_bits: dict[str, int]
    transmit_seconds: dict[str, float]
    phase_counts: PhaseCounts

    def __add__(self, other: "TraceSummary") -> "TraceSummary":
        if set(self.delivered_bits) != set(other.delivered_bits):
            raise ValidationError("traces cover different node sets")
        return TraceSummary(
            elapsed=self.elapsed + other.elapsed,
            delivered_bits={
                k: v + other.delivered_bits[k] for k, v in self.delivered_bits.items()
            },
            transmit_seconds={
                k: v + other.transmit_seconds[k] for k, v in self.transmit_seconds.items()
            },
            phase_counts=PhaseCounts(
                self.phase_counts.idle + other.phase_counts.idle,
                self.phase_counts.success + other.phase_counts.success,
                self.phase_counts.collision + other.phase_counts.collision,
            ),
        )


def node_throughputs(trace: TraceSummary) -> dict[str, float]:
    """Per-node empirical throughput; deviations between nodes are a
    fairness diagnostic, the model predicts equality."""
    if trace.elapsed <= 0:
        raise SimulationError("trace covers no simulated time")
    return {k: bits / trace.elapsed for k, bits in trace.delivered_bits.items()}


def finalize(trace: TraceSummary, power: float) -> OperatingPoint:
    """Reduce a trace to an operating point comparable with analytic ones.

    Throughput is the mean of the per-node values; bit-cost divides each
    node's average power by its own throughput.
    """
    throughputs = node_throughputs(trace)
    for k, bits in trace.delivered_bits.items():
        if bits <= 0:
            raise SimulationError(
                f"insufficient run length: node {k!r} delivered no bits"
            )
    mean_throughput = sum(throughputs.values()) / len(throughputs)
    avg_power = {
        k: power * secs / trace.elapsed for k, secs in trace.transmit_seconds.items()
    }
    bit_cost = {k: avg_power[k] / throughputs[k] for k in throughputs}
    return OperatingPoint(
        throughput=mean_throughput, bit_cost=bit_cost, avg_power=avg_power
    )


@dataclass(frozen=True)
class RelativeDeltas:
    """Percent deviations of an operating point from a baseline."""

    throughput_gain_pct: float
    bit_cost_increase_pct: dict[str, float]


def relative_to(point: OperatingPoint, baseline: OperatingPoint) -> RelativeDeltas:
    """Throughput gain and per-node bit-cost increase vs a baseline, in percent."""
    if point.nodes() != baseline.nodes():
        raise ValidationError("operating points cover different node sets")
    if baseline.throughput == 0:
        raise ValidationError("baseline throughput is zero")
    for k, b in baseline.bit_cost.items():
        if b == 0:
            raise ValidationError(f"baseline bit-cost of node {k!r} is zero")
    return RelativeDeltas(
        throughput_gain_pct=100.0 * (point.throughput / baseline.throughput - 1.0),
        bit_cost_increase_pct={
            k: 100.0 * (point.bit_cost[k] / baseline.bit_cost[k] - 1.0)
            for k in point.nodes()
        },
    )
