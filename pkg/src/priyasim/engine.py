"""Round loop, sensing field and metrics collection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import ApteenConfig, BaselineProtocol, LeachConfig, TeenConfig
from .network import Network
from .priya import PriyaConfig, PriyaProtocol
from .radio import Cause, RadioParams
from .topology import ConfigError, Position, deploy

PROTOCOLS = ("priya", "leach", "teen", "apteen")

# independent RNG streams derived from the scenario seed
_TOPOLOGY, _SENSING, _PROTOCOL = 0, 1, 2


@dataclass(frozen=True)
class SensingConfig:
    """Where readings come from.

    ``kind`` is ``uniform`` (over ``[low, high]``), ``gaussian`` (``mean``,
    ``std``) or ``trace``, in which case ``trace[r][i]`` is node ``i``'s
    reading in round ``r``.
    """

    kind: str = "uniform"
    low: float = 0.0
    high: float = 100.0
    mean: float = 45.0
    std: float = 15.0
    trace: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("uniform", "gaussian", "trace"):
            raise ConfigError(f"sensing.kind: unknown distribution {self.kind!r}")
        if self.kind == "uniform" and self.low > self.high:
            raise ConfigError("sensing.low must be <= sensing.high")
        if self.kind == "gaussian" and self.std < 0:
            raise ConfigError("sensing.std must be >= 0")
        if self.kind == "trace" and self.trace is None:
            raise ConfigError("sensing.kind=trace needs a trace")


class SensingField:
    def __init__(self, cfg: SensingConfig, n: int, seed):
        self.cfg = cfg
        self.n = n
        self.rng = np.random.default_rng([seed, _SENSING])

    def readings(self, rnd: int) -> list:
        cfg = self.cfg
        if cfg.kind == "trace":
            if rnd >= len(cfg.trace):
                raise ConfigError(f"sensing trace has no row for round {rnd}")
            row = [float(v) for v in cfg.trace[rnd]]
            if len(row) != self.n:
                raise ConfigError(f"sensing trace row {rnd} has {len(row)} values, need {self.n}")
            return row
        if cfg.kind == "uniform":
            return self.rng.uniform(cfg.low, cfg.high, self.n).tolist()
        return self.rng.normal(cfg.mean, cfg.std, self.n).tolist()


@dataclass(frozen=True)
class Scenario:
    """One simulation run.

    ``until`` is ``"all_dead"`` (run to ``max_rounds`` or until every node
    is dead) or ``"first_death"`` (also stop after the first death).
    """

    protocol: str = "priya"
    nodes: int = 100
    width: float = 100.0
    height: float = 100.0
    bs: tuple[float, float] = (50.0, 175.0)
    initial_energy: float = 2.0
    dead_frac: float = 0.05
    max_rounds: int = 10000
    seed: int = 0
    until: str = "all_dead"
    radio: RadioParams = field(default_factory=RadioParams)
    sensing: SensingConfig = field(default_factory=SensingConfig)
    priya: PriyaConfig = field(default_factory=PriyaConfig)
    leach: LeachConfig = field(default_factory=LeachConfig)
    teen: TeenConfig = field(default_factory=TeenConfig)
    apteen: ApteenConfig = field(default_factory=ApteenConfig)
    keep_ledger: bool = False

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol: unsupported protocol {self.protocol!r}")
        if self.nodes < 1:
            raise ConfigError("nodes must be a positive count")
        if self.width <= 0 or self.height <= 0:
            raise ConfigError("width and height must be > 0")
        if self.initial_energy <= 0:
            raise ConfigError("initial_energy must be > 0")
        if not 0 <= self.dead_frac < 1:
            raise ConfigError("dead_frac must be in [0, 1)")
        if self.max_rounds < 0:
            raise ConfigError("max_rounds must be >= 0")
        if self.until not in ("all_dead", "first_death"):
            raise ConfigError(f"until: unknown stop rule {self.until!r}")
        if self.protocol == "priya" and self.priya.num_clusters > self.nodes:
            raise ConfigError("priya.num_clusters exceeds nodes")


def make_protocol(sc: Scenario):
    if sc.protocol == "priya":
        return PriyaProtocol(sc.priya)
    return BaselineProtocol(sc.protocol, sc.leach, sc.teen, sc.apteen)


@dataclass(frozen=True)
class RoundRecord:
    round: int
    alive: int
    energy_cum: float
    ch_packets: int
    bs_packets: int
    ch_delay_sum: float
    data_tx_energy: float
    start_time: float
    end_time: float
    first_ch_arrival: float | None  # offset into the round


@dataclass(frozen=True)
class Summary:
    first_death_round: int | None
    all_dead_round: int | None
    cluster_formation_time: float | None
    avg_delay: float | None
    yield_at_ch: float | None
    yield_at_bs: float | None
    elapsed_time: float
    ch_packets: int
    bs_packets: int


@dataclass
class MetricsReport:
    protocol: str
    seed: int
    n_nodes: int
    setup_energy: float
    alive: list
    energy_cum: list
    bs_packets_cum: list
    ch_packets_cum: list
    node_dissipation: list
    summary: Summary
    records: list = field(repr=False, default_factory=list)


def summarize(records, deaths: dict, elapsed: float, n_nodes: int) -> Summary:
    """Run summary from per-round records and the death log (node -> round)."""
    ch = sum(r.ch_packets for r in records)
    bs = sum(r.bs_packets for r in records)
    formation = None
    for r in records:
        if r.first_ch_arrival is not None:
            formation = r.start_time + r.first_ch_arrival
            break
    delay = math.fsum(r.ch_delay_sum for r in records) / ch if ch else None
    return Summary(
        first_death_round=min(deaths.values()) if deaths else None,
        all_dead_round=max(deaths.values()) if n_nodes and len(deaths) == n_nodes else None,
        cluster_formation_time=formation,
        avg_delay=delay,
        yield_at_ch=ch / elapsed if elapsed > 0 else None,
        yield_at_bs=bs / elapsed if elapsed > 0 else None,
        elapsed_time=elapsed,
        ch_packets=ch,
        bs_packets=bs,
    )


class Simulation:
    """Step-wise driver; :func:`run` is the usual entry point.

    ``nodes`` replaces the seeded deployment, for hand-built layouts.
    """

    def __init__(self, scenario: Scenario, nodes=None):
        self.scenario = sc = scenario
        if nodes is None:
            nodes = deploy(sc.nodes, sc.width, sc.height, [sc.seed, _TOPOLOGY], sc.initial_energy)
        elif len(nodes) != sc.nodes:
            raise ConfigError(f"nodes: scenario expects {sc.nodes}, got {len(nodes)}")
        self.net = Network(nodes, Position(*sc.bs), sc.radio, sc.dead_frac, sc.keep_ledger)
        self.protocol = make_protocol(sc)
        self.field = SensingField(sc.sensing, sc.nodes, sc.seed)
        self.rng = np.random.default_rng([sc.seed, _PROTOCOL])
        self.records: list[RoundRecord] = []
        self.protocol.setup(self.net, self.rng)
        self.setup_energy = self.net.ledger.total
        self.setup_time = self.net.clock

    @property
    def finished(self) -> bool:
        sc = self.scenario
        if len(self.records) >= sc.max_rounds or not any(n.alive for n in self.net.nodes):
            return True
        return sc.until == "first_death" and bool(self.net.deaths)

    def step(self, readings=None) -> RoundRecord:
        """Play one round; ``readings`` overrides the sensing field."""
        net = self.net
        rnd = len(self.records)
        net.round = rnd
        drawn = self.field.readings(rnd) if readings is None else list(readings)
        start = net.clock
        data_before = net.ledger.cause_total(Cause.TX_DATA)
        self.last_events = ev = self.protocol.steady_round(net, drawn)
        rec = RoundRecord(
            round=rnd,
            alive=sum(n.alive for n in net.nodes),
            energy_cum=net.ledger.total,
            ch_packets=len(ev.ch_packets),
            bs_packets=len(ev.bs_packets),
            ch_delay_sum=math.fsum(p.delay for p in ev.ch_packets),
            data_tx_energy=float(net.ledger.cause_total(Cause.TX_DATA) - data_before),
            start_time=start,
            end_time=net.clock,
            first_ch_arrival=min((p.delay for p in ev.ch_packets), default=None),
        )
        self.records.append(rec)
        self.protocol.maybe_rotate(net, self.rng)
        return rec

    def report(self) -> MetricsReport:
        net = self.net
        recs = self.records
        initial = np.array([n.initial_energy for n in net.nodes])
        remaining = np.array([n.energy for n in net.nodes])
        return MetricsReport(
            protocol=self.scenario.protocol,
            seed=self.scenario.seed,
            n_nodes=len(net.nodes),
            setup_energy=self.setup_energy,
            alive=[r.alive for r in recs],
            energy_cum=[r.energy_cum for r in recs],
            bs_packets_cum=np.cumsum([r.bs_packets for r in recs], dtype=int).tolist(),
            ch_packets_cum=np.cumsum([r.ch_packets for r in recs], dtype=int).tolist(),
            node_dissipation=(initial - remaining).tolist(),
            summary=summarize(recs, net.deaths, net.clock, len(net.nodes)),
            records=recs,
        )


def run(scenario: Scenario) -> MetricsReport:
    sim = Simulation(scenario)
    while not sim.finished:
        sim.step()
    return sim.report()
