import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from priyasim.baselines import (
    ApteenConfig,
    BaselineProtocol,
    LeachConfig,
    LeachState,
    TeenConfig,
    apteen_should_transmit,
    assign_to_heads,
    leach_elect,
    leach_join,
    leach_threshold,
    teen_should_transmit,
)
from priyasim.network import Network
from priyasim.radio import RadioParams
from priyasim.topology import ConfigError, Position, deploy

from conftest import make_nodes


def test_leach_threshold_examples():
    assert leach_threshold(0.05, 0, True) == pytest.approx(0.05, rel=1e-15)
    assert leach_threshold(0.05, 19, True) == 1.0
    assert leach_threshold(0.05, 7, False) == 0.0
    assert leach_threshold(0.3, 4, False) == 0.0


@given(st.sampled_from([1.0, 0.5, 0.25, 0.2, 0.1, 0.05, 0.01, 0.3, 1 / 3, 0.07]),
       st.integers(0, 10_000))
def test_leach_threshold_bounds_and_growth(p, r):
    t = leach_threshold(p, r, True)
    assert 0.0 <= t <= 1.0
    length = max(1, round(1 / p))
    if r % length < length - 1:
        assert leach_threshold(p, r + 1, True) >= t


def test_p_one_elects_everyone():
    nodes = deploy(10, 100, 100, seed=1)
    heads = leach_elect(nodes, LeachState(), 1.0, 0, np.random.default_rng(0))
    assert heads == set(range(10))


def test_elected_nodes_leave_g_until_epoch_end():
    nodes = deploy(100, 100, 100, seed=3)
    state = LeachState()
    rng = np.random.default_rng(11)
    seen = set()
    for r in range(20):
        heads = leach_elect(nodes, state, 0.05, r, rng)
        assert not heads & seen
        assert not heads & state.g_set
        seen |= heads
    assert seen == set(range(100))  # the last round sweeps up all of G


def test_elect_retries_until_someone_wins():
    nodes = deploy(3, 100, 100, seed=1)
    rng = np.random.default_rng(0)
    for r in range(50):
        assert leach_elect(nodes, LeachState(), 0.01, 0, rng)


def test_g_refills_when_its_members_die():
    nodes = deploy(4, 100, 100, seed=1)
    state = LeachState(g_set={0})
    nodes[0].alive = False
    heads = leach_elect(nodes, state, 0.05, 3, np.random.default_rng(0))
    assert heads and 0 not in heads


def test_assign_to_heads_examples():
    nodes = make_nodes([(0, 0), (1, 0), (9, 0), (10, 0)])
    clusters = assign_to_heads(nodes, {1, 2})
    assert [cl.members for cl in clusters] == [(0, 1), (2, 3)]
    assert [cl.head for cl in clusters] == [1, 2]

    (one,) = assign_to_heads(nodes, {2})
    assert one.members == (0, 1, 2, 3)


def test_assign_tie_goes_to_lower_head_id():
    # node 0 sits midway between heads 3 and 7
    pos = [(5, 0)] + [(100, 100 + i) for i in range(1, 8)]
    pos[3], pos[7] = (0, 0), (10, 0)
    clusters = assign_to_heads(make_nodes(pos), {3, 7})
    assert 0 in clusters[0].members and clusters[0].head == 3


def test_leach_join_charges_control_traffic():
    nodes = make_nodes([(0, 0), (1, 0), (9, 0), (10, 0)])
    net = Network(nodes, Position(5, 50), RadioParams(), keep_ledger=True)
    clusters = leach_join(net, {1, 2})
    assert [cl.members for cl in clusters] == [(0, 1), (2, 3)]
    # 2 adverts + 2 joins + 2 schedules, each received by someone
    assert net.ledger.total > 0
    assert len({e.node_id for e in net.ledger.entries}) == 4
    assert net.nodes[0].known_distances[1] == pytest.approx(1.0)


HT50 = TeenConfig(hard_threshold=50, soft_threshold=2)
AP50 = ApteenConfig(hard_threshold=50, soft_threshold=2, count_time=5)


def test_teen_gate_examples():
    assert not teen_should_transmit(49, None, HT50)
    assert teen_should_transmit(55, None, HT50)
    assert not teen_should_transmit(56, 55, HT50)
    assert teen_should_transmit(58, 55, HT50)


def test_apteen_gate_examples():
    assert apteen_should_transmit(56, 55, 5, AP50)
    assert not apteen_should_transmit(56, 55, 2, AP50)
    assert apteen_should_transmit(58, 55, 0, AP50)


@given(st.floats(-100, 200), st.none() | st.floats(-100, 200), st.integers(0, 20))
def test_apteen_gate_implies_teen_gate(value, last, since):
    if teen_should_transmit(value, last, AP50):
        assert apteen_should_transmit(value, last, since, AP50)


def test_configs_validate():
    with pytest.raises(ConfigError):
        LeachConfig(p=0)
    with pytest.raises(ConfigError):
        TeenConfig(soft_threshold=-1)
    with pytest.raises(ConfigError):
        ApteenConfig(count_time=0)
    with pytest.raises(ConfigError):
        BaselineProtocol("pegasis")


def _one_cluster(variant, m=6, **cfg):
    """Baseline protocol forced into one cluster headed by node 0."""
    pos = [(50, 50)] + [(50 + 3 * i, 45) for i in range(1, m + 1)]
    net = Network(make_nodes(pos), Position(50, 175), RadioParams())
    proto = BaselineProtocol(variant, **cfg)
    proto.clusters = assign_to_heads(net.nodes, {0})
    proto.schedules = {0: {i: i - 1 for i in range(1, m + 1)}}
    return net, proto


def test_leach_round_counts():
    net, proto = _one_cluster("leach", m=6)
    ev = proto.steady_round(net, [10.0] * 7)
    assert len(ev.ch_packets) == 6
    assert len(ev.bs_packets) == 1


def test_teen_below_threshold_is_silent():
    net, proto = _one_cluster("teen", m=6)
    before = net.ledger.total
    for _ in range(5):
        ev = proto.steady_round(net, [10.0] * 7)
        assert not ev.ch_packets and not ev.bs_packets
    assert net.ledger.total == before


def test_apteen_constant_reading_recurrence():
    net, proto = _one_cluster("apteen", m=4, apteen=ApteenConfig(count_time=5))
    sent = {i: [] for i in range(1, 5)}
    for r in range(21):
        ev = proto.steady_round(net, [70.0] * 5)
        for p in ev.ch_packets:
            sent[p.origin].append(r)
    assert all(rounds == [0, 5, 10, 15, 20] for rounds in sent.values())


@given(st.lists(st.floats(0, 100), min_size=7, max_size=7), st.integers(0, 3))
def test_threshold_variants_send_no_more_than_leach(readings, rounds):
    counts = {}
    for variant in ("leach", "teen", "apteen"):
        net, proto = _one_cluster(variant, m=6)
        total = 0
        for _ in range(rounds + 1):
            total += len(proto.steady_round(net, readings).bs_packets)
        counts[variant] = total
    assert counts["teen"] <= counts["leach"]
    assert counts["apteen"] <= counts["leach"]


def test_ch_death_drops_the_rest_of_the_round():
    net, proto = _one_cluster("leach", m=6)
    net.nodes[0].energy = 0.1 + 1.5e-4  # dies on the second reception
    ev = proto.steady_round(net, [10.0] * 7)
    assert len(ev.ch_packets) == 2
    assert not ev.bs_packets
    assert not net.nodes[0].alive
