"""Shared network state that protocols act on.

All energy movement goes through :class:`Network` so that every joule lands
in the ledger and every transmission advances the simulated clock.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .radio import Cause, Ledger, RadioParams, deduct, rx_cost, tx_cost, tx_delay
from .topology import Position, Role, distance

BS = -1  # node id used for the base station in packet records


@dataclass(frozen=True)
class Packet:
    """A data packet that reached a head or the base station."""

    origin: int  # node whose reading decided the payload
    src: int
    dst: int
    value: float
    hops: int
    delay: float  # seconds since the start of the round's TDMA frame
    to_bs: bool = False


@dataclass
class RoundEvents:
    ch_packets: list = field(default_factory=list)  # member -> head deliveries
    bs_packets: list = field(default_factory=list)
    transmissions: int = 0


def tdma_slots(member_ids) -> dict:
    """Slot per member: ascending id order, slots ``0..m-1``."""
    return {m: slot for slot, m in enumerate(sorted(member_ids))}


class Network:
    def __init__(self, nodes, bs: Position, radio: RadioParams,
                 dead_frac: float = 0.05, keep_ledger: bool = False):
        self.nodes = nodes
        self.bs = Position(*bs)
        self.radio = radio
        self.dead_frac = dead_frac
        self.ledger = Ledger(len(nodes), keep_entries=keep_ledger)
        self.round = 0
        self.clock = 0.0  # simulated seconds of airtime so far
        self.deaths = {}  # node id -> round of death
        self._bs_dist = [distance(n.pos, self.bs) for n in nodes]
        self._dist = [[distance(a.pos, b.pos) for b in nodes] for a in nodes]

    def alive_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.alive]

    def dist(self, a: int, b: int) -> float:
        if a == BS:
            return self._bs_dist[b]
        if b == BS:
            return self._bs_dist[a]
        return self._dist[a][b]

    def spend(self, node_id: int, joules: float, cause: Cause) -> bool:
        """Charge ``node_id``; returns True if the node is still alive."""
        node = self.nodes[node_id]
        before = node.energy
        died = deduct(node, joules, self.dead_frac * node.initial_energy)
        self.ledger.record(node_id, self.round, cause, before - node.energy)
        if died:
            self.deaths[node_id] = self.round
            node.role = Role.MEMBER
        return not died

    def _learn(self, a: int, b: int, d: float) -> None:
        self.nodes[a].known_distances[b] = d
        if b != BS:
            self.nodes[b].known_distances[a] = d

    def send(self, src: int, dst: int, bits: int, cause: Cause = Cause.TX_DATA) -> bool:
        """Unicast ``bits`` from ``src`` to ``dst`` (a node id or ``BS``).

        Nothing happens if either end is already dead. An action that has
        started completes, so a node that dies while transmitting or
        receiving still delivers. Returns whether the packet was delivered.
        """
        if not self.nodes[src].alive or (dst != BS and not self.nodes[dst].alive):
            return False
        d = self.dist(src, dst)
        self.spend(src, tx_cost(bits, d, self.radio), cause)
        self.clock += tx_delay(bits, self.radio)
        if dst != BS:
            self.spend(dst, rx_cost(bits, self.radio), Cause.RX)
        self._learn(src, dst, d)
        return True

    def broadcast(self, src: int, recipients, bits: int | None = None) -> list[int]:
        """Control broadcast reaching every alive recipient.

        The transmit range is the distance to the farthest recipient. Both
        sides of the exchange learn their mutual distance. Returns the ids
        that received it.
        """
        bits = self.radio.ctrl_bits if bits is None else bits
        if not self.nodes[src].alive:
            return []
        targets = [r for r in recipients if r != src and self.nodes[r].alive]
        if not targets:
            return []
        dists = [self.dist(src, r) for r in targets]
        self.spend(src, tx_cost(bits, max(dists), self.radio), Cause.TX_CTRL)
        self.clock += tx_delay(bits, self.radio)
        rx = rx_cost(bits, self.radio)
        for r, d in zip(targets, dists):
            self.spend(r, rx, Cause.RX)
            self._learn(src, r, d)
        return targets
