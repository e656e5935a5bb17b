import math
from fractions import Fraction

import pytest

from fksix.random_cluster import (
    BondConfig,
    FKParams,
    HeatBathChain,
    SamplerGraph,
    edge_open_probability,
    enumerate_weights,
    fk_weight,
    heat_bath_sweep,
    sweep_transition_matrix,
)
from fksix.rng import edge_stream


@pytest.fixture(scope="module")
def path2():
    # two edges in a path, both endpoints on the boundary
    return SamplerGraph(
        n_vertices=3, edge_endpoints=((0, 1), (1, 2)), boundary_vertex_mask=(True, False, True)
    )


def exact_stationary_gap(graph, params):
    P = sweep_transition_matrix(graph, params)
    w = enumerate_weights(graph, params)
    z = sum(w)
    pi = [x / z for x in w]
    return max(
        abs(sum(pi[s] * P[s][t] for s in range(len(pi))) - pi[t]) for t in range(len(pi))
    )


def test_two_edge_stationarity_exact(path2):
    params = FKParams(q=Fraction(9), q_b=Fraction(3), p=Fraction(3, 4))
    assert exact_stationary_gap(path2, params) == 0


def test_four_edge_stationarity_exact(diamond1):
    params = FKParams(q=Fraction(4), q_b=Fraction(2), p=Fraction(2, 3))
    assert exact_stationary_gap(diamond1, params) == 0


def test_stationarity_float_tolerance(diamond1):
    params = FKParams(q=10.0, q_b=8.8729833462074170, p=0.75974692952642096)
    assert exact_stationary_gap(diamond1, params) < 1e-12


def test_single_edge_detailed_balance(path2):
    params = FKParams(q=Fraction(9), q_b=Fraction(3), p=Fraction(3, 4))
    w = enumerate_weights(path2, params)
    for s in range(4):
        for e in range(2):
            bits = [(s >> i) & 1 for i in range(2)]
            pr = edge_open_probability(bits, e, path2, params)
            closed, opened = s & ~(1 << e), s | (1 << e)
            assert w[closed] * pr == w[opened] * (1 - pr)


def test_numba_and_python_sweeps_agree(diamond1):
    params = FKParams(q=9.0, q_b=3.0, p=0.75)
    fast = HeatBathChain(diamond1, params, edge_stream(11, 0), start="closed", fast=True)
    slow = HeatBathChain(diamond1, params, edge_stream(11, 0), start="closed", fast=False)
    for _ in range(40):
        fast.sweep()
        slow.sweep()
        assert fast.bits == slow.bits


def test_sweep_is_deterministic_under_seed(diamond2):
    params = FKParams(q=5.0, q_b=2.0, p=0.6)
    a = HeatBathChain(diamond2, params, edge_stream(3, 0), start="closed").sweep(25).bits
    b = HeatBathChain(diamond2, params, edge_stream(3, 0), start="closed").sweep(25).bits
    assert a == b


def test_heat_bath_sweep_wrapper(diamond1):
    params = FKParams(q=4.0, q_b=2.0, p=0.66)
    cfg = BondConfig.all_closed(diamond1)
    out = heat_bath_sweep(cfg, params, edge_stream(5, 0))
    assert isinstance(out, BondConfig)
    assert len(out.bits) == 4


def test_high_p_opens_everything(diamond1):
    params = FKParams(q=4.0, q_b=1.0, p=0.9999)
    chain = HeatBathChain(diamond1, params, edge_stream(1, 0), start="closed")
    chain.sweep(20)
    assert sum(chain.bits) >= 3


def test_marginals_match_enumeration(diamond1):
    # empirical edge marginals against the exact finite distribution
    params = FKParams(q=4.0, q_b=4.0, p=2.0 / 3.0)
    weights = enumerate_weights(diamond1, params)
    z = sum(weights)
    exact = [
        sum(weights[m] for m in range(16) if (m >> e) & 1) / z for e in range(4)
    ]
    chain = HeatBathChain(diamond1, params, edge_stream(42, 0), start="closed")
    chain.sweep(200)
    n_samples, counts = 4000, [0] * 4
    for _ in range(n_samples):
        chain.sweep(2)
        for e, b in enumerate(chain.bits):
            counts[e] += b
    for e in range(4):
        emp = counts[e] / n_samples
        se = math.sqrt(exact[e] * (1 - exact[e]) / n_samples)
        # allow slack for autocorrelation of the thinned chain
        assert abs(emp - exact[e]) < 5 * se + 0.01


def test_fraction_weights_stay_exact(path2):
    params = FKParams(q=Fraction(5), q_b=Fraction(2), p=Fraction(1, 3))
    w = enumerate_weights(path2, params)
    assert all(isinstance(x, Fraction) for x in w)
    # hand expansion: empty (2/3)^2*5*4, one edge 2*(2/9)*4, both (1/9)*2
    assert sum(w) == Fraction(98, 9)
