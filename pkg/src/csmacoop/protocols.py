"""Node-level behavior of the three MAC strategies.

The engine drives a protocol with three calls per contention phase: for
every transmitter, effective_transmission() describes what the node puts
on the air right now; afterwards exactly one of on_success() (single
transmitter) or on_collision() (per transmitter) is dispatched.

Direct Link: every node sends its own one-bit packet straight to the AP.

CoopMAC: a relayed node sends to its helper, which forwards to the AP
immediately within the same phase. The forward can never collide (it
only happens after a clean first hop), so only the first hop counts as
collision-prone airtime.

fairMAC: helpers decouple receiving from forwarding. A relayed node
sends first-hop packets to its helper while fewer than P of them are
pending, and falls back to direct transmission otherwise; the helper
parks received packets in an unbounded FIFO queue and, whenever it
transmits itself, bundles up to Q of them with its own bit into one
joint packet. Receipt confirmations ("preACK", incrementing the
source's pending count) and delivery confirmations ("jointACK",
decrementing it) are modeled as instantaneous and lossless.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import islice

from .errors import ProtocolError, ValidationError
from .topology import HelperAssignment, Network

PROTOCOLS = ("direct", "coopmac", "fairmac")


@dataclass(frozen=True)
class OwnPacket:
    """One own bit sent straight to the AP."""

    owner: str


@dataclass(frozen=True)
class RelayedPacket:
    """One own bit sent to a helper that forwards it in the same phase."""

    source: str
    helper: str


@dataclass(frozen=True)
class FirstHopPacket:
    """One own bit handed to a helper for deferred forwarding."""

    source: str
    helper: str


@dataclass(frozen=True)
class JointPacket:
    """A helper's own bit bundled with forwarded packets.

    duration is (1 + len(forwarded)) / R_owner: the bundle is one packet.
    """

    owner: str
    forwarded: tuple[str, ...]
    duration: float


@dataclass(frozen=True)
class Transmission:
    """What a node puts on the air in one phase.

    duration: airtime of the node's own transmission (collision-relevant).
    travel:   channel time until the bit(s) reach the AP on success,
              including any immediate forward.
    """

    node: str
    duration: float
    travel: float
    payload: object


@dataclass(frozen=True)
class PhaseCredit:
    """Outcome of a successful phase: delivered own bits per node, plus
    any forwarding airtime spent by third parties (CoopMAC second hop)."""

    delivered: tuple[tuple[str, int], ...]
    forward_airtime: tuple[tuple[str, float], ...] = ()


class DirectLink:
    name = "direct"

    def __init__(self, net: Network):
        self._tx = {}
        for k in net.nodes:
            u = 1.0 / net.ap_rate[k]
            self._tx[k] = Transmission(k, u, u, OwnPacket(k))

    def effective_transmission(self, node: str) -> Transmission:
        return self._tx[node]

    def on_success(self, tx: Transmission) -> PhaseCredit:
        return PhaseCredit(((tx.node, 1),))

    def on_collision(self, tx: Transmission) -> None:
        # The lost packet is simply offered again at the next attempt.
        pass


class CoopMac:
    name = "coopmac"

    def __init__(self, net: Network, assign: HelperAssignment):
        self._tx = {}
        self._forward_time = {}
        for k in net.nodes:
            h = assign.helper[k]
            if h is None:
                u = 1.0 / net.ap_rate[k]
                self._tx[k] = Transmission(k, u, u, OwnPacket(k))
            else:
                u = 1.0 / net.link_rate[(k, h)]
                fwd = 1.0 / net.ap_rate[h]
                self._tx[k] = Transmission(k, u, u + fwd, RelayedPacket(k, h))
                self._forward_time[k] = (h, fwd)

    def effective_transmission(self, node: str) -> Transmission:
        return self._tx[node]

    def on_success(self, tx: Transmission) -> PhaseCredit:
        if isinstance(tx.payload, RelayedPacket):
            return PhaseCredit(((tx.node, 1),), (self._forward_time[tx.node],))
        return PhaseCredit(((tx.node, 1),))

    def on_collision(self, tx: Transmission) -> None:
        # Helper stays idle when the first hop collides; source retries later.
        pass


@dataclass
class FairMacSourceState:
    """Relayed node's view of its helper backlog: pending grows on preACK,
    shrinks on jointACK, and routing goes direct once it reaches max_pending."""

    helper: str
    max_pending: int
    pending: int = 0


@dataclass
class FairMacHelperState:
    """Forwarding queue of a direct node plus queue-length statistics
    sampled right before each of its own transmissions."""

    max_forward: int
    forward_queue: deque = field(default_factory=deque)
    transmit_samples: int = 0
    queued_at_transmit: int = 0


class FairMac:
    name = "fairmac"

    def __init__(self, net: Network, assign: HelperAssignment, pending_limit: int, forward_max: int):
        if pending_limit < 0:
            raise ValidationError(f"pending limit must be >= 0, got {pending_limit}")
        if forward_max < 0:
            raise ValidationError(f"forward max must be >= 0, got {forward_max}")
        self._net = net
        self.sources = {}
        self.helpers = {}
        for k in net.nodes:
            h = assign.helper[k]
            if h is None:
                self.helpers[k] = FairMacHelperState(max_forward=forward_max)
            else:
                self.sources[k] = FairMacSourceState(helper=h, max_pending=pending_limit)

    def effective_transmission(self, node: str) -> Transmission:
        src = self.sources.get(node)
        if src is not None:
            if src.pending > src.max_pending:
                raise ProtocolError(f"pending count of {node!r} exceeds its limit")
            if src.pending < src.max_pending:
                u = 1.0 / self._net.link_rate[(node, src.helper)]
                return Transmission(node, u, u, FirstHopPacket(node, src.helper))
            u = 1.0 / self._net.ap_rate[node]
            return Transmission(node, u, u, OwnPacket(node))
        helper = self.helpers[node]
        queued = len(helper.forward_queue)
        helper.transmit_samples += 1
        helper.queued_at_transmit += queued
        m = min(helper.max_forward, queued)
        bundle = tuple(islice(helper.forward_queue, m))
        u = (1 + m) / self._net.ap_rate[node]
        return Transmission(node, u, u, JointPacket(node, bundle, u))

    def on_success(self, tx: Transmission) -> PhaseCredit:
        payload = tx.payload
        if isinstance(payload, FirstHopPacket):
            src = self.sources.get(payload.source)
            if src is None or src.helper != payload.helper:
                raise ProtocolError(f"preACK for unknown source {payload.source!r}")
            self.helpers[payload.helper].forward_queue.append(payload.source)
            src.pending += 1
            return PhaseCredit(())
        if isinstance(payload, JointPacket):
            helper = self.helpers[payload.owner]
            popped = tuple(
                helper.forward_queue.popleft() for _ in range(len(payload.forwarded))
            )
            if popped != payload.forwarded:
                raise ProtocolError(
                    f"forwarding queue of {payload.owner!r} changed between "
                    "assembly and delivery"
                )
            counts: dict[str, int] = {}
            for source in payload.forwarded:
                counts[source] = counts.get(source, 0) + 1
            for source, cnt in counts.items():
                src = self.sources.get(source)
                if src is None or src.pending < cnt:
                    raise ProtocolError(f"jointACK does not match pending packets of {source!r}")
                src.pending -= cnt
            delivered = ((payload.owner, 1), *counts.items())
            return PhaseCredit(delivered)
        return PhaseCredit(((tx.node, 1),))

    def on_collision(self, tx: Transmission) -> None:
        # No preACK/jointACK is emitted: queues and pending counters stay
        # untouched and the same data is reassembled at the next attempt.
        pass

    def mean_queue_at_transmit(self, node: str) -> float:
        """Average forwarding-queue length seen by `node` at its own
        transmission attempts (None before the first attempt)."""
        helper = self.helpers[node]
        if helper.transmit_samples == 0:
            return None
        return helper.queued_at_transmit / helper.transmit_samples


def make_protocol(
    name: str,
    net: Network,
    assign: HelperAssignment,
    pending_limit: int = 10,
    forward_max: int = 0,
):
    if name == "direct":
        return DirectLink(net)
    if name == "coopmac":
        return CoopMac(net, assign)
    if name == "fairmac":
        return FairMac(net, assign, pending_limit, forward_max)
    raise ValidationError(f"protocol must be one of {PROTOCOLS}, got {name!r}")
