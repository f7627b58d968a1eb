"""Closed-form throughput and bit-cost.

Covers round-robin scheduling, the slotted-CSMA saturation model, the
small-slot asymptotics of CSMA, and timesharing between two operating
points. Throughput is always reported per node (saturation traffic makes
it equal across nodes), bit-cost per node in joules per delivered own bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .topology import HelperAssignment, Network, _check_mode, timing


@dataclass(frozen=True)
class CsmaParams:
    """Slot length sigma (seconds, normalized per 1-bit packet) and
    per-slot transmit probability tau."""

    sigma: float
    tau: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"sigma must be positive, got {self.sigma!r}")
        if not (0.0 < self.tau < 1.0):
            raise ValidationError(f"tau must lie strictly in (0, 1), got {self.tau!r}")


@dataclass(frozen=True)
class PhaseExpectations:
    """Expected composition of one contention phase.

    p_success is the probability that one specific node transmits alone,
    p_idle that nobody transmits. t_idle/t_success/t_collision are the
    expected time per phase spent in each outcome class (trailing idle
    slot included in the busy durations).
    """

    p_success: float
    p_idle: float
    t_idle: float
    t_success: float
    t_collision: float

    @property
    def mean_duration(self) -> float:
        return self.t_success + self.t_collision + self.t_idle


@dataclass(frozen=True)
class OperatingPoint:
    """A (throughput, per-node bit-cost, per-node average power) triple."""

    throughput: float
    bit_cost: dict[str, float]
    avg_power: dict[str, float]

    def nodes(self) -> tuple[str, ...]:
        return tuple(self.bit_cost)


def _require_nodes(net: Network) -> None:
    if len(net) == 0:
        raise ValidationError("network has no nodes")


def _effective_help_count(assign: HelperAssignment, mode: str) -> dict[str, int]:
    # Forwarding only happens in cooperative mode.
    if mode == "cooperative":
        return assign.help_count
    return {k: 0 for k in assign.help_count}


def rr_performance(net: Network, assign: HelperAssignment, mode: str) -> OperatingPoint:
    """Round-robin operating point: one packet per node per round.

    S = 1 / sum_k s_k and B_k = t_k * E with t_k the per-round airtime of
    node k: (H_k + 1)/R_k for a node helping H_k others, 1/R_{k,h} for a
    relayed node, 1/R_k otherwise.
    """
    _check_mode(mode)
    _require_nodes(net)
    prof = timing(net, assign, mode)
    helps = _effective_help_count(assign, mode)
    s_total = sum(prof.travel_time[k] for k in net.nodes)
    throughput = 1.0 / s_total
    bit_cost = {}
    avg_power = {}
    for k in net.nodes:
        airtime = (helps[k] + 1) * prof.packet_duration[k]
        bit_cost[k] = airtime * net.power
        avg_power[k] = bit_cost[k] * throughput
    return OperatingPoint(throughput=throughput, bit_cost=bit_cost, avg_power=avg_power)


def csma_phase_expectations(
    net: Network, assign: HelperAssignment, mode: str, params: CsmaParams
) -> PhaseExpectations:
    """Expected phase composition of slotted CSMA in saturation.

    With N contenders transmitting independently with probability tau per
    slot: p_success = tau*(1-tau)^(N-1), p_idle = (1-tau)^N,
    t_idle = p_idle*sigma and t_success = sum_k p_success*(s_k + sigma).

    For the collision time, order the packet durations ascending
    (u_1 <= ... <= u_N, ties keeping node order). A collision lasts as
    long as its longest packet plus the trailing slot, so grouping
    collisions by the largest transmitter index k:

        t_collision = sum_{k=2}^{N} tau*(1-tau)^(N-k)
                      * sum_{l=1}^{k-1} C(k-1, l) tau^l (1-tau)^(k-1-l)
                      * (u_k + sigma)
    """
    _check_mode(mode)
    _require_nodes(net)
    n = len(net)
    sigma, tau = params.sigma, params.tau
    prof = timing(net, assign, mode)

    p_success = tau * (1.0 - tau) ** (n - 1)
    p_idle = (1.0 - tau) ** n
    t_idle = p_idle * sigma
    t_success = sum(p_success * (prof.travel_time[k] + sigma) for k in net.nodes)

    u_sorted = sorted(prof.packet_duration[k] for k in net.nodes)
    t_collision = 0.0
    for k in range(2, n + 1):
        inner = sum(
            math.comb(k - 1, l) * tau**l * (1.0 - tau) ** (k - 1 - l)
            for l in range(1, k)
        )
        t_collision += tau * (1.0 - tau) ** (n - k) * inner * (u_sorted[k - 1] + sigma)

    return PhaseExpectations(
        p_success=p_success,
        p_idle=p_idle,
        t_idle=t_idle,
        t_success=t_success,
        t_collision=t_collision,
    )


def csma_throughput(phase: PhaseExpectations) -> float:
    """Per-node saturation throughput S = p_success / mean phase duration."""
    return phase.p_success / phase.mean_duration


def csma_bitcost(
    net: Network, assign: HelperAssignment, mode: str, params: CsmaParams
) -> dict[str, float]:
    """Per-node bit-cost under slotted CSMA.

    Transmitting one own bit succeeds once per tau/p_success = (1-tau)^-(N-1)
    attempts, each attempt burning the packet airtime u_k; forwarding for
    H_k other nodes adds H_k collision-free transmissions of the same
    length. So B_k = (H_k + (1-tau)^-(N-1)) * u_k * E, with H_k = 0 for
    every node in direct mode.
    """
    _check_mode(mode)
    _require_nodes(net)
    n = len(net)
    prof = timing(net, assign, mode)
    helps = _effective_help_count(assign, mode)
    attempts_per_bit = (1.0 - params.tau) ** -(n - 1)
    return {
        k: (helps[k] + attempts_per_bit) * prof.packet_duration[k] * net.power
        for k in net.nodes
    }


def csma_performance(
    net: Network, assign: HelperAssignment, mode: str, params: CsmaParams
) -> OperatingPoint:
    """Full CSMA operating point (throughput, bit-cost, average power)."""
    phase = csma_phase_expectations(net, assign, mode, params)
    throughput = csma_throughput(phase)
    bit_cost = csma_bitcost(net, assign, mode, params)
    avg_power = {k: b * throughput for k, b in bit_cost.items()}
    return OperatingPoint(throughput=throughput, bit_cost=bit_cost, avg_power=avg_power)


def asymptotic_performance(net: Network, assign: HelperAssignment, mode: str) -> OperatingPoint:
    """Small-slot limit of the CSMA operating point.

    Letting sigma -> 0 with tau proportional to sqrt(sigma), the CSMA
    point converges to S* = 1/sum_k s_k and B*_k = (H_k+1)*u_k*E, which is
    exactly the round-robin point; the two are returned identically.
    """
    return rr_performance(net, assign, mode)


def fairmac_infty_asymptotic(net: Network, assign: HelperAssignment) -> OperatingPoint:
    """Small-slot operating point of fairMAC without pending/forward caps.

    With unbounded pending and forwarding limits, every relayed node keeps
    routing via its helper and a helper's bundled packet carries on
    average one packet per served node, so the expected airtime shares
    match cooperative round robin: the point coincides with
    asymptotic_performance in cooperative mode.
    """
    return asymptotic_performance(net, assign, "cooperative")


def timeshare(a: OperatingPoint, b: OperatingPoint, alpha: float) -> OperatingPoint:
    """Operating point reached by running `a` a fraction alpha of the time.

    Throughput and average power mix affinely; bit-cost is their ratio.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha must lie in [0, 1], got {alpha!r}")
    if a.nodes() != b.nodes():
        raise ValidationError("operating points cover different node sets")
    throughput = alpha * a.throughput + (1.0 - alpha) * b.throughput
    avg_power = {
        k: alpha * a.avg_power[k] + (1.0 - alpha) * b.avg_power[k] for k in a.nodes()
    }
    bit_cost = {k: avg_power[k] / throughput for k in a.nodes()}
    return OperatingPoint(throughput=throughput, bit_cost=bit_cost, avg_power=avg_power)
