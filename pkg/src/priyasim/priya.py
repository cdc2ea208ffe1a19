"""PRIYA: base-station driven clustering with split data/routing heads.

Each cluster has a data head (DCH, nearest the cluster centre) that gathers
and max-aggregates member readings, and a routing head (RCH, nearest the
base station) that forwards the aggregate. The RCH nearest the base station
doubles as principal head (PCH) and relays the other clusters' normal
traffic. Critical aggregates skip the PCH.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .baselines import Protocol
from .network import BS, Network, Packet, RoundEvents, tdma_slots
from .radio import Cause, aggregate_cost, tx_delay
from .topology import Cluster, ConfigError, Role, nearest, partition


class Reading(enum.Enum):
    SLEEP = "sleep"
    NORMAL = "normal"
    CRITICAL = "critical"


@dataclass(frozen=True)
class PriyaConfig:
    num_clusters: int = 5
    desired_range: tuple[float, float] = (30.0, 60.0)
    ch_min_energy_frac: float = 0.35

    def __post_init__(self):
        lo, hi = self.desired_range
        if not lo < hi:
            raise ConfigError("priya.desired_range needs lo < hi")
        if not 0 < self.ch_min_energy_frac < 1:
            raise ConfigError("priya.ch_min_energy_frac must be in (0, 1)")
        if self.num_clusters < 1:
            raise ConfigError("priya.num_clusters must be >= 1")


@dataclass
class PriyaHeads:
    dch: dict = field(default_factory=dict)  # cluster id -> node id
    rch: dict = field(default_factory=dict)
    pch: int | None = None


def priya_classify(value, desired_range) -> Reading:
    lo, hi = desired_range
    if value < lo:
        return Reading.SLEEP
    if value > hi:
        return Reading.CRITICAL
    return Reading.NORMAL


def select_heads(net: Network, cluster: Cluster) -> tuple[int, int]:
    """DCH nearest the centroid, RCH nearest the BS among the rest."""
    pos = lambda i: net.nodes[i].pos  # noqa: E731
    alive = [m for m in cluster.members if net.nodes[m].alive]
    dch = nearest(alive, cluster.centroid, pos)
    rest = [m for m in alive if m != dch]
    rch = nearest(rest, net.bs, pos) if rest else dch
    return dch, rch


def pick_pch(net: Network, heads: PriyaHeads) -> int | None:
    rchs = [r for r in heads.rch.values() if net.nodes[r].alive]
    return nearest(rchs, net.bs, lambda i: net.nodes[i].pos)


def _apply_roles(net: Network, clusters, heads: PriyaHeads) -> None:
    for cl in clusters:
        for m in cl.members:
            net.nodes[m].cluster_id = cl.id
            if net.nodes[m].alive:
                net.nodes[m].role = Role.MEMBER
    for cid in heads.dch:
        for i, role in ((heads.dch[cid], Role.DCH), (heads.rch[cid], Role.RCH)):
            if net.nodes[i].alive:
                net.nodes[i].role = role
    if heads.pch is not None and net.nodes[heads.pch].alive:
        net.nodes[heads.pch].role = Role.PCH


def _announce(net: Network, cluster: Cluster, dch: int, rch: int) -> dict:
    """Head announcements plus the DCH's TDMA schedule; returns the schedule."""
    net.broadcast(dch, cluster.members)
    if rch != dch:
        net.broadcast(rch, cluster.members)
    net.broadcast(dch, cluster.members)
    return tdma_slots(m for m in cluster.members if m != dch and net.nodes[m].alive)


def _announce_pch(net: Network, heads: PriyaHeads) -> None:
    if heads.pch is not None:
        net.broadcast(heads.pch, [r for r in heads.rch.values() if r != heads.pch])


def priya_setup(net: Network, cfg: PriyaConfig, seed):
    """Partition the field and install heads; control traffic is charged to ``net``."""
    alive = [n for n in net.nodes if n.alive]
    if len(alive) < cfg.num_clusters:
        raise ConfigError(
            f"priya.num_clusters={cfg.num_clusters} exceeds alive node count {len(alive)}")
    clusters = partition(alive, cfg.num_clusters, seed)
    heads = PriyaHeads()
    for cl in clusters:
        heads.dch[cl.id], heads.rch[cl.id] = select_heads(net, cl)
    heads.pch = pick_pch(net, heads)
    _apply_roles(net, clusters, heads)
    schedules = {}
    for cl in clusters:
        schedules[cl.id] = _announce(net, cl, heads.dch[cl.id], heads.rch[cl.id])
    if len(clusters) > 1:
        _announce_pch(net, heads)
    return clusters, heads, schedules


def _successor(net: Network, cluster: Cluster, old: int, exclude, min_frac: float) -> int:
    """Closest member the outgoing head has heard from, preferring CH-capable ones.

    Falls back to the old head while it lives, then to any alive member.
    """
    known = net.nodes[old].known_distances
    cands = [m for m in cluster.members
             if m not in exclude and m in known and net.nodes[m].alive]
    capable = [m for m in cands if net.nodes[m].energy_fraction >= min_frac]
    if capable:
        return min(capable, key=lambda m: (known[m], m))
    if net.nodes[old].alive:
        return old
    if cands:
        return min(cands, key=lambda m: (known[m], m))
    return old


def priya_maybe_rotate(net: Network, clusters, heads: PriyaHeads, schedules: dict,
                       cfg: PriyaConfig) -> set:
    """Hand over both heads of every cluster where a head fell below the CH floor.

    New heads announce themselves and the DCH re-issues the TDMA schedule
    (updated in ``schedules``). Returns the ids of clusters whose heads changed.
    """
    nodes = net.nodes
    changed = set()
    for cl in clusters:
        dch, rch = heads.dch[cl.id], heads.rch[cl.id]
        if min(nodes[dch].energy_fraction, nodes[rch].energy_fraction) >= cfg.ch_min_energy_frac:
            continue
        new_dch = _successor(net, cl, dch, {dch, rch}, cfg.ch_min_energy_frac)
        new_rch = _successor(net, cl, rch, {dch, rch, new_dch}, cfg.ch_min_energy_frac)
        # a lone survivor serves as both heads
        if not nodes[new_rch].alive:
            new_rch = new_dch
        elif not nodes[new_dch].alive:
            new_dch = new_rch
        if (new_dch, new_rch) == (dch, rch):
            continue
        for old, new in ((dch, new_dch), (rch, new_rch)):
            if new != old:
                net.send(old, new, net.radio.ctrl_bits, Cause.TX_CTRL)
        heads.dch[cl.id], heads.rch[cl.id] = new_dch, new_rch
        changed.add(cl.id)
    if not changed:
        return changed
    old_pch = heads.pch
    heads.pch = pick_pch(net, heads)
    _apply_roles(net, clusters, heads)
    for cl in clusters:
        if cl.id in changed:
            schedules[cl.id] = _announce(net, cl, heads.dch[cl.id], heads.rch[cl.id])
    if len(clusters) > 1 and heads.pch != old_pch:
        _announce_pch(net, heads)
    return changed


class PriyaProtocol(Protocol):
    name = "priya"

    def __init__(self, cfg: PriyaConfig | None = None):
        self.cfg = cfg or PriyaConfig()
        self.clusters: list[Cluster] = []
        self.heads = PriyaHeads()
        self.schedules: dict = {}
        self.rotations = 0

    def setup(self, net, rng):
        self.clusters, self.heads, self.schedules = priya_setup(net, self.cfg, rng)

    def steady_round(self, net, readings):
        nodes = net.nodes
        radio = net.radio
        band = self.cfg.desired_range
        td = tx_delay(radio.data_bits, radio)
        pch = self.heads.pch
        ev = RoundEvents()
        for cl in self.clusters:
            dch, rch = self.heads.dch[cl.id], self.heads.rch[cl.id]
            if not nodes[dch].alive:
                continue
            inputs = []  # (value, origin, hops, arrival)
            if priya_classify(readings[dch], band) is not Reading.SLEEP:
                inputs.append((readings[dch], dch, 0, 0.0))
            for m, slot in self.schedules[cl.id].items():
                if not nodes[m].alive:
                    continue
                if not nodes[dch].alive:
                    break
                v = readings[m]
                if priya_classify(v, band) is Reading.SLEEP:
                    continue
                if net.send(m, dch, radio.data_bits):
                    arrival = slot * td + td
                    ev.ch_packets.append(Packet(m, m, dch, v, 1, arrival))
                    ev.transmissions += 1
                    inputs.append((v, m, 1, arrival))
            if not inputs or not nodes[dch].alive:
                continue
            agg = aggregate_cost(radio.data_bits, len(inputs), radio)
            if agg > 0 and not net.spend(dch, agg, Cause.AGGREGATE):
                continue
            value, origin, _, _ = max(inputs, key=lambda x: x[0])
            hops = max(x[2] for x in inputs)
            t = max(x[3] for x in inputs)
            if rch != dch:
                if not net.send(dch, rch, radio.data_bits):
                    continue
                ev.transmissions += 1
                hops, t = hops + 1, t + td
            if priya_classify(value, band) is Reading.CRITICAL or rch == pch:
                if net.send(rch, BS, radio.data_bits):
                    ev.transmissions += 1
                    ev.bs_packets.append(Packet(origin, rch, BS, value, hops + 1, t + td, True))
                continue
            if pch is None or not net.send(rch, pch, radio.data_bits):
                continue
            ev.transmissions += 1
            hops, t = hops + 1, t + td
            if net.send(pch, BS, radio.data_bits):
                ev.transmissions += 1
                ev.bs_packets.append(Packet(origin, pch, BS, value, hops + 1, t + td, True))
        return ev

    def maybe_rotate(self, net, rng):
        changed = priya_maybe_rotate(net, self.clusters, self.heads, self.schedules, self.cfg)
        if changed:
            self.rotations += 1
        return bool(changed)
