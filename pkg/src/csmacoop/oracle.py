"""Brute-force evaluator of one contention phase.

Enumerates all 2^N transmit patterns of a slot, classifies each as idle,
success, or collision, and aggregates probability-weighted durations.
Serves as ground truth for the closed-form phase expectations; it shares
no code with them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .analytic import CsmaParams, PhaseExpectations
from .errors import ValidationError
from .topology import HelperAssignment, Network, timing

MAX_NODES = 20


@dataclass(frozen=True)
class PatternOutcome:
    """One transmit pattern: who transmits, how likely, what it costs in time."""

    transmitters: tuple[int, ...]
    probability: float
    kind: str  # "idle" | "success" | "collision"
    duration: float


def enumerate_patterns(
    travel: list[float], duration: list[float], sigma: float, tau: float
) -> list[PatternOutcome]:
    """All 2^N outcomes of one slot, over per-node travel times and packet durations.

    Duration semantics: an idle pattern lasts sigma; a lone transmitter k
    occupies the channel for travel[k] + sigma; simultaneous transmitters
    collide for max of their packet durations + sigma. Accepts tau in
    (0, 1] so degenerate all-transmit cases stay enumerable.
    """
    n = len(travel)
    if n < 1:
        raise ValidationError("need at least one node to enumerate")
    if n > MAX_NODES:
        raise ValidationError(f"enumeration is limited to {MAX_NODES} nodes, got {n}")
    if len(duration) != n:
        raise ValidationError("travel and duration lists differ in length")
    if not 0.0 < tau <= 1.0:
        raise ValidationError(f"tau must lie in (0, 1], got {tau!r}")
    outcomes = []
    for bits in product((False, True), repeat=n):
        prob = 1.0
        for b in bits:
            prob *= tau if b else 1.0 - tau
        tx = tuple(i for i, b in enumerate(bits) if b)
        if not tx:
            kind, dur = "idle", sigma
        elif len(tx) == 1:
            kind, dur = "success", travel[tx[0]] + sigma
        else:
            kind, dur = "collision", max(duration[i] for i in tx) + sigma
        outcomes.append(PatternOutcome(tx, prob, kind, dur))
    return outcomes


def enumerate_phase(
    net: Network, assign: HelperAssignment, mode: str, params: CsmaParams
) -> PhaseExpectations:
    """Phase expectations by direct summation over all transmit patterns."""
    prof = timing(net, assign, mode)
    travel = [prof.travel_time[k] for k in net.nodes]
    duration = [prof.packet_duration[k] for k in net.nodes]
    patterns = enumerate_patterns(travel, duration, params.sigma, params.tau)

    n = len(net.nodes)
    p_idle = 0.0
    success_mass = 0.0
    t_idle = t_success = t_collision = 0.0
    for pat in patterns:
        if pat.kind == "idle":
            p_idle += pat.probability
            t_idle += pat.probability * pat.duration
        elif pat.kind == "success":
            success_mass += pat.probability
            t_success += pat.probability * pat.duration
        else:
            t_collision += pat.probability * pat.duration
    return PhaseExpectations(
        p_success=success_mass / n,
        p_idle=p_idle,
        t_idle=t_idle,
        t_success=t_success,
        t_collision=t_collision,
    )
