"""LEACH, TEEN and APTEEN on top of the shared network model.

All three share LEACH's randomized head election, nearest-head join and
TDMA slotting; TEEN and APTEEN only differ in when a node's transmitter is
switched on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .network import BS, Network, Packet, RoundEvents, tdma_slots
from .radio import Cause, aggregate_cost, tx_delay
from .topology import Cluster, ConfigError, Role, centroid, distance


class Protocol:
    """Engine-facing contract: one setup, then steady rounds with upkeep."""

    name = "protocol"

    def setup(self, net: Network, rng) -> None:
        raise NotImplementedError

    def steady_round(self, net: Network, readings) -> RoundEvents:
        raise NotImplementedError

    def maybe_rotate(self, net: Network, rng) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class LeachConfig:
    p: float = 0.05
    setup_period: int = 20  # rounds between re-elections

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ConfigError("leach.p must be in (0, 1]")
        if self.setup_period < 1:
            raise ConfigError("leach.setup_period must be >= 1")

    @property
    def rounds_per_epoch(self) -> int:
        return epoch_length(self.p)


@dataclass(frozen=True)
class TeenConfig:
    hard_threshold: float = 30.0
    soft_threshold: float = 2.0

    def __post_init__(self):
        if self.soft_threshold < 0:
            raise ConfigError("teen.soft_threshold must be >= 0")


@dataclass(frozen=True)
class ApteenConfig:
    attribute: str = "temperature"
    hard_threshold: float = 30.0
    soft_threshold: float = 2.0
    count_time: int = 5

    def __post_init__(self):
        if self.soft_threshold < 0:
            raise ConfigError("apteen.soft_threshold must be >= 0")
        if self.count_time < 1:
            raise ConfigError("apteen.count_time must be >= 1")


@dataclass
class LeachState:
    g_set: set = field(default_factory=set)
    round_in_epoch: int = 0


def epoch_length(p: float) -> int:
    return max(1, round(1 / p))


def leach_threshold(p: float, r: int, in_g: bool) -> float:
    """Election probability T(n) for election round ``r``."""
    if not in_g:
        return 0.0
    length = epoch_length(p)
    m = r % length
    if m == length - 1 and abs(p * length - 1) < 1e-12:
        return 1.0
    return min(1.0, p / (1 - p * m))


def leach_elect(nodes, state: LeachState, p: float, r: int, rng) -> set:
    """Elect cluster heads for election round ``r``.

    ``state.g_set`` is refilled with every alive node at epoch boundaries,
    and also whenever none of its members are left alive. Draws repeat until
    at least one head is elected.
    """
    alive = {n.id for n in nodes if n.alive}
    if not alive:
        raise ValueError("no alive node to elect")
    length = epoch_length(p)
    if r % length == 0:
        state.g_set = set(alive)
    state.g_set &= alive
    if not state.g_set:
        state.g_set = set(alive)
    state.round_in_epoch = r % length
    t = leach_threshold(p, r, True)
    candidates = sorted(state.g_set)
    while True:
        heads = {i for i in candidates if rng.random() < t}
        if heads:
            break
    state.g_set -= heads
    return heads


def assign_to_heads(nodes, ch_ids) -> list[Cluster]:
    """Nearest-head membership; ties go to the lower head id."""
    heads = sorted(ch_ids)
    if not heads:
        raise ValueError("need at least one cluster head")
    groups = {h: [h] for h in heads}
    for n in nodes:
        if not n.alive or n.id in groups:
            continue
        best = min(heads, key=lambda h: (distance(n.pos, nodes[h].pos), h))
        groups[best].append(n.id)
    return [
        Cluster(cid, tuple(sorted(groups[h])),
                centroid([nodes[i].pos for i in groups[h]]), head=h)
        for cid, h in enumerate(heads)
    ]


def leach_join(net: Network, ch_ids) -> list[Cluster]:
    """Advertise, join, and hand out TDMA schedules; charges all control traffic."""
    nodes = net.nodes
    everyone = net.alive_ids()
    for h in sorted(ch_ids):
        net.broadcast(h, everyone)
    live_heads = [h for h in ch_ids if nodes[h].alive]
    if not live_heads:
        return []
    clusters = assign_to_heads(nodes, live_heads)
    for cl in clusters:
        for m in cl.members:
            if m != cl.head:
                net.send(m, cl.head, net.radio.ctrl_bits, Cause.TX_CTRL)
    for cl in clusters:
        net.broadcast(cl.head, cl.members)
    return clusters


def teen_should_transmit(value, last_sent, cfg) -> bool:
    if value <= cfg.hard_threshold:
        return False
    return last_sent is None or abs(value - last_sent) >= cfg.soft_threshold


def apteen_should_transmit(value, last_sent, rounds_since_tx: int, cfg: ApteenConfig) -> bool:
    return teen_should_transmit(value, last_sent, cfg) or rounds_since_tx >= cfg.count_time


class BaselineProtocol(Protocol):
    """LEACH-style clustering with a per-variant transmit gate."""

    VARIANTS = ("leach", "teen", "apteen")

    def __init__(self, variant: str = "leach", leach: LeachConfig | None = None,
                 teen: TeenConfig | None = None, apteen: ApteenConfig | None = None):
        if variant not in self.VARIANTS:
            raise ConfigError(f"unsupported protocol {variant!r}")
        self.name = variant
        self.variant = variant
        self.leach = leach or LeachConfig()
        self.teen = teen or TeenConfig()
        self.apteen = apteen or ApteenConfig()
        self.state = LeachState()
        self.elections = 0
        self.rounds_since_setup = 0
        self.clusters: list[Cluster] = []
        self.schedules: dict = {}
        self.ch_history: list[set] = []

    def setup(self, net, rng):
        nodes = net.nodes
        for n in nodes:
            n.role = Role.MEMBER
            n.cluster_id = None
        heads = leach_elect(nodes, self.state, self.leach.p, self.elections, rng)
        self.elections += 1
        self.ch_history.append(heads)
        for h in heads:
            nodes[h].role = Role.CH
        self.clusters = leach_join(net, heads)
        self.schedules = {}
        for cl in self.clusters:
            for m in cl.members:
                nodes[m].cluster_id = cl.id
                # thresholds ride the schedule broadcast and restart the gate
                nodes[m].last_sent_value = None
            self.schedules[cl.id] = tdma_slots(
                m for m in cl.members if m != cl.head and nodes[m].alive)
        self.rounds_since_setup = 0

    def gate(self, node, value) -> bool:
        if self.variant == "leach":
            ok = True
        elif self.variant == "teen":
            ok = teen_should_transmit(value, node.last_sent_value, self.teen)
        else:
            node.rounds_since_tx += 1
            ok = apteen_should_transmit(value, node.last_sent_value, node.rounds_since_tx, self.apteen)
        if ok:
            node.last_sent_value = value
            node.rounds_since_tx = 0
        return ok

    def steady_round(self, net, readings):
        nodes = net.nodes
        radio = net.radio
        td = tx_delay(radio.data_bits, radio)
        ev = RoundEvents()
        for cl in self.clusters:
            ch = cl.head
            if not nodes[ch].alive:
                continue
            inputs = []  # (value, origin, hops, arrival)
            if self.gate(nodes[ch], readings[ch]):
                inputs.append((readings[ch], ch, 0, 0.0))
            for m, slot in self.schedules[cl.id].items():
                if not nodes[m].alive:
                    continue
                if not nodes[ch].alive:
                    break
                v = readings[m]
                if not self.gate(nodes[m], v):
                    continue
                if net.send(m, ch, radio.data_bits):
                    arrival = slot * td + td
                    ev.ch_packets.append(Packet(m, m, ch, v, 1, arrival))
                    ev.transmissions += 1
                    inputs.append((v, m, 1, arrival))
            if not inputs or not nodes[ch].alive:
                continue
            agg = aggregate_cost(radio.data_bits, len(inputs), radio)
            if agg > 0 and not net.spend(ch, agg, Cause.AGGREGATE):
                continue
            value, origin, _, _ = max(inputs, key=lambda x: x[0])
            hops = max(x[2] for x in inputs)
            t = max(x[3] for x in inputs)
            if net.send(ch, BS, radio.data_bits):
                ev.transmissions += 1
                ev.bs_packets.append(Packet(origin, ch, BS, value, hops + 1, t + td, to_bs=True))
        return ev

    def maybe_rotate(self, net, rng):
        self.rounds_since_setup += 1
        if self.rounds_since_setup < self.leach.setup_period or not net.alive_ids():
            return False
        self.setup(net, rng)
        return True
