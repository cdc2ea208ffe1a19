"""Node deployment, geometry and proximity-based cluster partitioning."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np


class ConfigError(ValueError):
    """Raised for invalid scenario or experiment settings."""


class Position(NamedTuple):
    x: float
    y: float


class Role(enum.Enum):
    MEMBER = "member"
    CH = "ch"
    DCH = "dch"
    RCH = "rch"
    PCH = "pch"


@dataclass(slots=True)
class Node:
    id: int
    pos: Position
    energy: float
    initial_energy: float
    alive: bool = True
    role: Role = Role.MEMBER
    cluster_id: int | None = None
    last_sent_value: float | None = None
    rounds_since_tx: int = 0
    known_distances: dict = field(default_factory=dict)

    @property
    def energy_fraction(self) -> float:
        return self.energy / self.initial_energy


@dataclass
class Cluster:
    id: int
    members: tuple
    centroid: Position
    head: int | None = None  # single-head protocols only

    def __post_init__(self):
        if not self.members:
            raise ValueError("a cluster needs at least one member")


def deploy(n: int, width: float, height: float, seed, initial_energy: float = 2.0) -> list[Node]:
    """Scatter ``n`` nodes uniformly over ``[0, width] x [0, height]``."""
    if n < 0:
        raise ConfigError("nodes must be >= 0")
    if width <= 0 or height <= 0:
        raise ConfigError("region width and height must be > 0")
    rng = np.random.default_rng(seed)
    xy = rng.uniform((0.0, 0.0), (width, height), size=(n, 2))
    return [
        Node(i, Position(float(x), float(y)), initial_energy, initial_energy)
        for i, (x, y) in enumerate(xy)
    ]


def distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def centroid(members) -> Position:
    if len(members) == 0:
        raise ValueError("centroid of an empty set is undefined")
    xs = math.fsum(p[0] for p in members) / len(members)
    ys = math.fsum(p[1] for p in members) / len(members)
    return Position(xs, ys)


def nearest(candidates, target, pos_of) -> int | None:
    """Id in ``candidates`` closest to ``target``; ties go to the lowest id."""
    best, best_d = None, math.inf
    for c in sorted(candidates):
        d = distance(pos_of(c), target)
        if d < best_d:
            best, best_d = c, d
    return best


def _sse(xy, labels, centers) -> float:
    return float(((xy - centers[labels]) ** 2).sum())


def partition(nodes, k: int, seed, max_iter: int = 100, trace: list | None = None) -> list[Cluster]:
    """Split the alive ``nodes`` into ``k`` proximity clusters (Lloyd k-means).

    Initial centres are ``k`` distinct nodes drawn from ``seed``. A cluster
    that empties during iteration takes the node lying farthest from its own
    centre. Returned clusters are ordered by their smallest member id and
    numbered in that order.

    If ``trace`` is a list, the within-cluster SSE after each iteration is
    appended to it.
    """
    alive = sorted((n for n in nodes if n.alive), key=lambda n: n.id)
    if k < 1:
        raise ConfigError("cluster count must be >= 1")
    if k > len(alive):
        raise ConfigError(f"cluster count {k} exceeds alive node count {len(alive)}")

    ids = np.array([n.id for n in alive])
    xy = np.array([n.pos for n in alive], dtype=float)
    rng = np.random.default_rng(seed)
    centers = xy[np.sort(rng.choice(len(alive), size=k, replace=False))].copy()

    labels = None
    for _ in range(max_iter):
        d2 = ((xy[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = d2.argmin(axis=1)  # first minimum -> lowest cluster index
        counts = np.bincount(new, minlength=k)
        for empty in np.flatnonzero(counts == 0):
            own = d2[np.arange(len(xy)), new]
            donors = counts[new] > 1
            # farthest from its own centre; argmax picks the lowest id on ties
            idx = int(np.argmax(np.where(donors, own, -1.0)))
            counts[new[idx]] -= 1
            new[idx] = empty
            counts[empty] = 1
            centers[empty] = xy[idx]
            d2[idx, empty] = 0.0
        for j in range(k):
            centers[j] = xy[new == j].mean(axis=0)
        if trace is not None:
            trace.append(_sse(xy, new, centers))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new

    groups = [tuple(int(i) for i in ids[labels == j]) for j in range(k)]
    order = sorted(range(k), key=lambda j: groups[j][0])
    return [
        Cluster(cid, groups[j], Position(float(centers[j][0]), float(centers[j][1])))
        for cid, j in enumerate(order)
    ]
