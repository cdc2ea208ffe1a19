import pytest
from hypothesis import given
from hypothesis import strategies as st

from priyasim.radio import (
    Cause,
    Ledger,
    RadioParams,
    aggregate_cost,
    deduct,
    rx_cost,
    tx_cost,
    tx_delay,
)
from priyasim.topology import Node, Position

RADIO = RadioParams()


@pytest.mark.parametrize(
    "bits, d, expected",
    [(0, 100, 0.0), (2000, 0, 1.0e-4), (2000, 100, 2.1e-3)],
)
def test_tx_cost(bits, d, expected):
    assert tx_cost(bits, d, RADIO) == pytest.approx(expected, rel=1e-15, abs=0)


@pytest.mark.parametrize("bits, expected", [(0, 0.0), (2000, 1.0e-4), (1, 5.0e-8)])
def test_rx_cost(bits, expected):
    assert rx_cost(bits, RADIO) == pytest.approx(expected, rel=1e-15, abs=0)


def test_aggregate_cost():
    assert aggregate_cost(2000, 5, RADIO) == 0.0
    assert aggregate_cost(2000, 0, RadioParams(e_agg=1e-3)) == 0.0
    assert aggregate_cost(2000, 5, RadioParams(e_agg=5e-9)) == pytest.approx(5e-5, rel=1e-15)


@pytest.mark.parametrize("bits, expected", [(2000, 0.2), (0, 0.0), (10_000, 1.0)])
def test_tx_delay(bits, expected):
    assert tx_delay(bits, RADIO) == pytest.approx(expected, rel=1e-15, abs=0)


def _node(energy):
    return Node(0, Position(0, 0), energy, 2.0)


@pytest.mark.parametrize(
    "energy, cost, left, died",
    [(1.0, 0.3, 0.7, False), (0.35, 0.3, 0.05, True), (0.2, 0.5, 0.0, True)],
)
def test_deduct(energy, cost, left, died):
    n = _node(energy)
    assert deduct(n, cost, floor=0.1) is died
    assert n.energy == pytest.approx(left, abs=1e-15)
    assert n.alive is not died


def test_deduct_from_dead_node_is_an_error():
    n = _node(0.0)
    n.alive = False
    with pytest.raises(RuntimeError):
        deduct(n, 0.1, floor=0.1)


def test_radio_params_validation():
    with pytest.raises(ValueError):
        RadioParams(bandwidth=0)
    with pytest.raises(ValueError):
        RadioParams(data_bits=0)
    with pytest.raises(ValueError):
        RadioParams(e_elec=-1)


bits = st.integers(min_value=0, max_value=100_000)
dist = st.floats(min_value=0, max_value=1e4, allow_nan=False)


@given(bits, bits, dist, dist)
def test_tx_cost_monotone(k1, k2, d1, d2):
    lo_k, hi_k = sorted((k1, k2))
    lo_d, hi_d = sorted((d1, d2))
    assert tx_cost(lo_k, lo_d, RADIO) <= tx_cost(hi_k, lo_d, RADIO)
    assert tx_cost(lo_k, lo_d, RADIO) <= tx_cost(lo_k, hi_d, RADIO)
    assert rx_cost(lo_k, RADIO) <= rx_cost(hi_k, RADIO)


@given(bits)
def test_zero_distance_tx_equals_rx(k):
    assert tx_cost(k, 0, RADIO) == rx_cost(k, RADIO)


def test_ledger_totals_and_entries():
    led = Ledger(3, keep_entries=True)
    led.record(0, 0, Cause.TX_DATA, 1e-3)
    led.record(2, 1, Cause.RX, 2e-3)
    led.record(2, 1, Cause.TX_CTRL, 5e-4)
    assert led.total == pytest.approx(3.5e-3)
    assert led.by_node.tolist() == pytest.approx([1e-3, 0, 2.5e-3])
    assert led.cause_total(Cause.RX) == pytest.approx(2e-3)
    assert [e.node_id for e in led.entries] == [0, 2, 2]
    assert Ledger(3).entries == []
