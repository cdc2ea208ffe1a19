"""First-order radio energy model and the energy ledger.

Transmitting ``k`` bits over ``d`` metres costs ``e_elec*k + eps_amp*k*d**2``;
receiving costs ``e_elec*k``. Delay is serialization time only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RadioParams:
    """Radio coefficients, packet sizes and link rate.

    Defaults follow the usual LEACH-lineage conventions; they are not
    measured values.
    """

    e_elec: float = 50e-9  # J/bit
    eps_amp: float = 100e-12  # J/bit/m^2
    data_bits: int = 2000
    ctrl_bits: int = 200
    bandwidth: float = 10_000.0  # bit/s
    e_agg: float = 0.0  # J/bit/signal

    def __post_init__(self):
        for name in ("e_elec", "eps_amp", "ctrl_bits", "e_agg"):
            if getattr(self, name) < 0:
                raise ValueError(f"radio.{name} must be >= 0")
        if self.bandwidth <= 0:
            raise ValueError("radio.bandwidth must be > 0")
        if self.data_bits <= 0:
            raise ValueError("radio.data_bits must be > 0")


def tx_cost(bits, distance, radio: RadioParams) -> float:
    return radio.e_elec * bits + radio.eps_amp * bits * distance * distance


def rx_cost(bits, radio: RadioParams) -> float:
    return radio.e_elec * bits


def aggregate_cost(bits, n_inputs, radio: RadioParams) -> float:
    return radio.e_agg * bits * n_inputs


def tx_delay(bits, radio: RadioParams) -> float:
    return bits / radio.bandwidth


def deduct(node, joules: float, floor: float) -> bool:
    """Take ``joules`` from ``node`` and return True if this killed it.

    Energy is clamped at zero. A node dies when its remaining energy falls
    strictly below ``floor``.
    """
    if not node.alive:
        raise RuntimeError(f"node {node.id} is dead and cannot spend energy")
    if joules < 0:
        raise ValueError("cannot deduct a negative amount")
    node.energy = max(node.energy - joules, 0.0)
    if node.energy < floor:
        node.alive = False
        return True
    return False


class Cause(enum.IntEnum):
    TX_DATA = 0
    TX_CTRL = 1
    RX = 2
    AGGREGATE = 3


@dataclass(frozen=True)
class EnergyLedgerEntry:
    node_id: int
    round: int
    cause: Cause
    joules: float


@dataclass
class Ledger:
    """Running account of every joule spent.

    Per-node and per-cause totals are always kept. The full entry list is
    only recorded when ``keep_entries`` is set, since long runs produce
    millions of entries.
    """

    n_nodes: int
    keep_entries: bool = False
    entries: list = field(default_factory=list)

    def __post_init__(self):
        self._by_node = [0.0] * self.n_nodes
        self._by_cause = [0.0] * len(Cause)
        self.total = 0.0

    @property
    def by_node(self) -> np.ndarray:
        return np.array(self._by_node)

    @property
    def by_cause(self) -> np.ndarray:
        return np.array(self._by_cause)

    def cause_total(self, cause: Cause) -> float:
        return self._by_cause[cause]

    def record(self, node_id: int, rnd: int, cause: Cause, joules: float) -> None:
        self._by_node[node_id] += joules
        self._by_cause[cause] += joules
        self.total += joules
        if self.keep_entries:
            self.entries.append(EnergyLedgerEntry(node_id, rnd, cause, joules))
