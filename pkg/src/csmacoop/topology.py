"""Network description, helper selection, and per-node timing.

All nodes send uplink traffic to one access point (AP). ``ap_rate[k]`` is
the rate node k achieves towards the AP, ``link_rate[(k, l)]`` the rate of
the k->l link; a missing link entry means the link is unusable. Packets
carry one bit, so transmitting a packet at rate R takes 1/R seconds.

A node k may route its packets through a helper h when the two-hop path is
strictly faster than its direct link:

    1/link_rate[k, h] + 1/ap_rate[h]  <  1/ap_rate[k]

with h the minimizer of the left-hand side over all usable links. Helpers
are required to transmit directly themselves (no relay chains).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

MODES = ("direct", "cooperative")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class Network:
    """Immutable network description shared by all analysis and simulation."""

    nodes: tuple[str, ...]
    ap_rate: dict[str, float]
    link_rate: dict[tuple[str, str], float]
    power: float = 1.0

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError("duplicate node identifiers")
        known = set(self.nodes)
        if set(self.ap_rate) != known:
            raise ValidationError("ap_rate must define exactly one rate per node")
        for k, r in self.ap_rate.items():
            if not (math.isfinite(r) and r > 0):
                raise ValidationError(f"ap rate of node {k!r} must be positive, got {r!r}")
        for (a, b), r in self.link_rate.items():
            if a == b:
                raise ValidationError(f"node {a!r} cannot be its own link endpoint")
            if a not in known or b not in known:
                raise ValidationError(f"link ({a!r}, {b!r}) references an unknown node")
            if not (math.isfinite(r) and r > 0):
                raise ValidationError(f"link rate ({a!r}, {b!r}) must be positive, got {r!r}")
        if not (math.isfinite(self.power) and self.power > 0):
            raise ValidationError(f"transmit power must be positive, got {self.power!r}")

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class HelperAssignment:
    """Result of helper selection over a whole network.

    ``direct_set`` (D) and ``via_set`` (C) partition the nodes; ``helper_set``
    (H) is the subset of D that serves at least one node, and
    ``help_count[k]`` the number of nodes k serves.
    """

    helper: dict[str, str | None]
    direct_set: tuple[str, ...]
    via_set: tuple[str, ...]
    helper_set: tuple[str, ...]
    help_count: dict[str, int]


@dataclass(frozen=True)
class TimingProfile:
    """Per-node travel time s_k and first-hop packet duration u_k.

    The travel time is the channel time one bit needs to reach the AP
    (both hops when relayed); the packet duration is the airtime of the
    node's own transmission, the only part that can collide.
    """

    travel_time: dict[str, float]
    packet_duration: dict[str, float]
    mode: str


def two_hop_time(net: Network, k: str, h: str) -> float | None:
    """Travel time of one bit of k routed via h, or None if the link is unusable."""
    rate = net.link_rate.get((k, h))
    if rate is None:
        return None
    return 1.0 / rate + 1.0 / net.ap_rate[h]


def select_helper(net: Network, k: str) -> str | None:
    """Best relay for node k, or None when no two-hop path strictly beats direct.

    Ties on the two-hop time are broken towards the earliest node in the
    node list. This is the raw per-node rule; `classify` additionally
    excludes candidates that do not themselves transmit directly.
    """
    if k not in net.ap_rate:
        raise ValidationError(f"unknown node {k!r}")
    best = None
    best_time = math.inf
    for h in net.nodes:
        if h == k:
            continue
        t = two_hop_time(net, k, h)
        if t is not None and t < best_time:
            best, best_time = h, t
    if best is not None and best_time < 1.0 / net.ap_rate[k]:
        return best
    return None


def classify(net: Network) -> HelperAssignment:
    """Partition nodes into direct transmitters and relayed nodes.

    Applies the two-hop rule to every node, restricting candidate helpers
    to nodes that themselves transmit directly. The "strictly improves
    via" relation is acyclic (summing the defining inequalities around a
    cycle gives a negative total of positive terms), so resolving each
    candidate before its dependents terminates.
    """
    improving: dict[str, list[str]] = {}
    for k in net.nodes:
        direct_time = 1.0 / net.ap_rate[k]
        improving[k] = [
            h
            for h in net.nodes
            if h != k
            and (t := two_hop_time(net, k, h)) is not None
            and t < direct_time
        ]

    resolved: dict[str, str | None] = {}

    def resolve(k: str) -> str | None:
        if k in resolved:
            return resolved[k]
        resolved[k] = None  # sentinel; also the safe answer should rounding ever fake a cycle
        best = None
        best_time = math.inf
        for h in improving[k]:
            if resolve(h) is not None:
                continue
            t = two_hop_time(net, k, h)
            if t < best_time:
                best, best_time = h, t
        resolved[k] = best
        return best

    for k in net.nodes:
        resolve(k)

    help_count = {k: 0 for k in net.nodes}
    for k in net.nodes:
        h = resolved[k]
        if h is not None:
            help_count[h] += 1
    direct_set = tuple(k for k in net.nodes if resolved[k] is None)
    via_set = tuple(k for k in net.nodes if resolved[k] is not None)
    helper_set = tuple(k for k in direct_set if help_count[k] > 0)
    return HelperAssignment(
        helper={k: resolved[k] for k in net.nodes},
        direct_set=direct_set,
        via_set=via_set,
        helper_set=helper_set,
        help_count=help_count,
    )


def timing(net: Network, assign: HelperAssignment, mode: str) -> TimingProfile:
    """Travel times and packet durations for the given mode.

    direct:       s_k = u_k = 1/R_k for every node.
    cooperative:  relayed nodes have u_k = 1/R_{k,h} and
                  s_k = 1/R_{k,h} + 1/R_h; direct nodes keep s_k = u_k = 1/R_k.
    """
    _check_mode(mode)
    travel: dict[str, float] = {}
    duration: dict[str, float] = {}
    for k in net.nodes:
        h = assign.helper[k] if mode == "cooperative" else None
        if h is None:
            travel[k] = duration[k] = 1.0 / net.ap_rate[k]
        else:
            duration[k] = 1.0 / net.link_rate[(k, h)]
            travel[k] = duration[k] + 1.0 / net.ap_rate[h]
    return TimingProfile(travel_time=travel, packet_duration=duration, mode=mode)
