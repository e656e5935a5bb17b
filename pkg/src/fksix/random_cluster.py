"""The boundary-weighted random-cluster model.

A bond configuration on an even domain assigns one open/closed bit to every
primal edge.  Its unnormalized weight is

    p^open * (1-p)^closed * q^(interior clusters) * q_b^(boundary clusters)

where a cluster is a boundary cluster when it contains a vertex adjacent to
the outside of the domain.  ``q_b = q`` is the free measure, ``q_b = 1`` the
wired one.

The module provides exact weights (Fractions in, Fractions out), the exact
single-edge conditional probabilities, a Holley lattice-condition checker for
stochastic domination between two boundary weights, and a single-edge
heat-bath sampler with a compiled fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from fksix.laurent import LaurentWeight, SymbolicCoupling
from fksix.unionfind import DisjointSets

HOLLEY_EDGE_BUDGET = 14


@dataclass(frozen=True)
class FKParams:
    """Edge weight p, cluster weight q, boundary-cluster weight q_b.

    Values may be floats or Fractions; all exact code paths preserve
    Fractions.  The self-dual critical point is ``critical_p(q)``.
    """

    q: object
    q_b: object
    p: object

    def __post_init__(self):
        if not (self.q > 0):
            raise ValueError("q must be positive")
        if not (0 < self.p < 1):
            raise ValueError("p must lie in (0,1)")
        if not (1 <= self.q_b <= self.q + 1e-12):
            raise ValueError("q_b must lie in [1, q]")

    @classmethod
    def from_coupled(cls, coupled):
        return cls(q=coupled.q, q_b=coupled.q_b, p=coupled.p)


def critical_p(q):
    """Self-dual point sqrt(q) / (1 + sqrt(q))."""
    r = math.sqrt(q)
    return r / (1 + r)


@dataclass(frozen=True)
class BondConfig:
    """One open/closed bit per primal edge of a domain."""

    domain: object
    bits: tuple

    def __post_init__(self):
        if len(self.bits) != self.domain.n_edges:
            raise ValueError("bit count does not match edge count")

    @classmethod
    def all_open(cls, domain):
        return cls(domain, (1,) * domain.n_edges)

    @classmethod
    def all_closed(cls, domain):
        return cls(domain, (0,) * domain.n_edges)

    @classmethod
    def from_int(cls, domain, mask):
        return cls(domain, tuple((mask >> i) & 1 for i in range(domain.n_edges)))

    def as_int(self):
        return sum(b << i for i, b in enumerate(self.bits))

    def with_edge(self, i, value):
        bits = list(self.bits)
        bits[i] = 1 if value else 0
        return BondConfig(self.domain, tuple(bits))

    def dual_bits(self):
        """Dual configuration: the dual edge is open iff the edge is closed."""
        return tuple(1 - b for b in self.bits)


@dataclass(frozen=True)
class ClusterStats:
    n_open: int
    n_closed: int
    interior_clusters: int
    boundary_clusters: int
    dual_clusters: int  # clusters of the dual configuration, outer face wired

    @property
    def total_clusters(self):
        return self.interior_clusters + self.boundary_clusters


def _primal_union(domain, bits):
    uf = DisjointSets(domain.n_vertices)
    for i, b in enumerate(bits):
        if b:
            ua, ub = domain.edge_endpoints[i]
            uf.union(ua, ub)
    return uf


def cluster_stats(cfg):
    """Open/closed counts and all cluster counts of a bond configuration."""
    domain, bits = cfg.domain, cfg.bits
    uf = _primal_union(domain, bits)
    touches = {}
    for v in range(domain.n_vertices):
        r = uf.find(v)
        touches[r] = touches.get(r, False) or domain.boundary_vertex_mask[v]
    k_b = sum(1 for t in touches.values() if t)
    k_i = len(touches) - k_b

    # dual clusters: covered odd faces plus one outer node
    n_dual = len(domain.dual_nodes)
    duf = DisjointSets(n_dual + 1)  # last id is the outer node
    outer = n_dual
    for i, b in enumerate(bits):
        if not b:
            na, nb = domain.dual_edge_nodes[i]
            duf.union(na if na >= 0 else outer, nb if nb >= 0 else outer)
    k_dual = duf.n_components

    n_open = sum(bits)
    return ClusterStats(
        n_open=n_open,
        n_closed=domain.n_edges - n_open,
        interior_clusters=k_i,
        boundary_clusters=k_b,
        dual_clusters=k_dual,
    )


def fk_weight(cfg, params):
    """Unnormalized weight of a configuration.

    With numeric ``FKParams`` this is the full four-factor weight, exact when
    the parameters are Fractions.  With a ``SymbolicCoupling`` it is the
    critical-point Laurent form

        sqrt(q)^open * q^(interior clusters) * q_b^(boundary clusters)

    which differs from the full weight at p = critical_p(q) by the
    configuration-independent factor (1 + sqrt(q))^(-edges).
    """
    st = cluster_stats(cfg)
    if isinstance(params, SymbolicCoupling):
        return (
            params.sqrt_q ** st.n_open
            * params.q ** st.interior_clusters
            * params.q_b ** st.boundary_clusters
        )
    if isinstance(params, LaurentWeight) or not hasattr(params, "p"):
        raise TypeError("params must be FKParams or a SymbolicCoupling")
    p, q, q_b = params.p, params.q, params.q_b
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    return (
        p ** st.n_open
        * (one - p) ** st.n_closed
        * q ** st.interior_clusters
        * q_b ** st.boundary_clusters
    )


@dataclass(frozen=True)
class SamplerGraph:
    """Minimal graph view consumed by the sampler and the exact-chain tools."""

    n_vertices: int
    edge_endpoints: tuple
    boundary_vertex_mask: tuple

    @property
    def n_edges(self):
        return len(self.edge_endpoints)


def _graph_of(domain_or_graph):
    if isinstance(domain_or_graph, SamplerGraph):
        return domain_or_graph
    d = domain_or_graph
    return SamplerGraph(d.n_vertices, d.edge_endpoints, d.boundary_vertex_mask)


def edge_open_probability(bits, edge, graph, params):
    """Heat-bath conditional P(edge open | rest of the configuration).

    Cases, evaluated on the configuration with ``edge`` removed:
    ``p`` when the endpoints are connected; ``p / (p + q_b (1-p))`` when they
    are not but both reach the boundary; ``p / (p + q (1-p))`` otherwise.
    """
    graph = _graph_of(graph)
    uf = DisjointSets(graph.n_vertices)
    for j, b in enumerate(bits):
        if b and j != edge:
            ua, ub = graph.edge_endpoints[j]
            uf.union(ua, ub)
    u, v = graph.edge_endpoints[edge]
    if uf.same(u, v):
        return params.p
    reach = [False] * graph.n_vertices
    for w in range(graph.n_vertices):
        if graph.boundary_vertex_mask[w]:
            reach[uf.find(w)] = True
    weight = params.q_b if (reach[uf.find(u)] and reach[uf.find(v)]) else params.q
    p = params.p
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    return p / (p + weight * (one - p))


def heat_bath_conditional(cfg, edge, params):
    """Conditional probability that a primal edge is open given the rest."""
    return edge_open_probability(cfg.bits, edge, cfg.domain, params)


def _sweep_python(bits, graph, params, coins):
    out = list(bits)
    for i in range(graph.n_edges):
        prob = edge_open_probability(out, i, graph, params)
        out[i] = 1 if coins[i] < prob else 0
    return tuple(out)


_numba_sweep = None


def _get_numba_sweep():
    global _numba_sweep
    if _numba_sweep is None:
        from numba import njit

        @njit(cache=True)
        def sweep(bits, eu, ev, boundary, p, q, qb, coins):
            n_edges = eu.shape[0]
            n_vertices = boundary.shape[0]
            parent = np.empty(n_vertices, dtype=np.int32)
            reach = np.empty(n_vertices, dtype=np.uint8)
            for i in range(n_edges):
                for w in range(n_vertices):
                    parent[w] = w
                for j in range(n_edges):
                    if j != i and bits[j] == 1:
                        a = eu[j]
                        while parent[a] != a:
                            parent[a] = parent[parent[a]]
                            a = parent[a]
                        b = ev[j]
                        while parent[b] != b:
                            parent[b] = parent[parent[b]]
                            b = parent[b]
                        if a != b:
                            parent[b] = a
                for w in range(n_vertices):
                    reach[w] = 0
                for w in range(n_vertices):
                    if boundary[w] == 1:
                        a = w
                        while parent[a] != a:
                            parent[a] = parent[parent[a]]
                            a = parent[a]
                        reach[a] = 1
                a = eu[i]
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                b = ev[i]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a == b:
                    prob = p
                elif reach[a] == 1 and reach[b] == 1:
                    prob = p / (p + qb * (1.0 - p))
                else:
                    prob = p / (p + q * (1.0 - p))
                bits[i] = 1 if coins[i] < prob else 0

        _numba_sweep = sweep
    return _numba_sweep


class HeatBathChain:
    """Single-edge heat-bath dynamics with a fixed ascending scan order.

    One sweep resamples every edge once; randomness enters only through the
    per-edge coins, drawn as one block per sweep so that the compiled and
    pure-Python paths consume the stream identically.
    """

    def __init__(self, domain_or_graph, params, rng, start="closed", fast=True):
        self.graph = _graph_of(domain_or_graph)
        self.domain = domain_or_graph if not isinstance(domain_or_graph, SamplerGraph) else None
        self.params = params
        self.rng = rng
        self.fast = fast
        n = self.graph.n_edges
        if start == "closed":
            bits = (0,) * n
        elif start == "open":
            bits = (1,) * n
        else:
            bits = tuple(start)
        self._bits = np.array(bits, dtype=np.uint8)
        self._eu = np.array([e[0] for e in self.graph.edge_endpoints], dtype=np.int32)
        self._ev = np.array([e[1] for e in self.graph.edge_endpoints], dtype=np.int32)
        self._bnd = np.array(self.graph.boundary_vertex_mask, dtype=np.uint8)

    @property
    def bits(self):
        return tuple(int(b) for b in self._bits)

    def sweep(self, n=1):
        for _ in range(n):
            coins = self.rng.random(self.graph.n_edges)
            if self.fast:
                kernel = _get_numba_sweep()
                kernel(
                    self._bits,
                    self._eu,
                    self._ev,
                    self._bnd,
                    float(self.params.p),
                    float(self.params.q),
                    float(self.params.q_b),
                    coins,
                )
            else:
                self._bits = np.array(
                    _sweep_python(self.bits, self.graph, self.params, coins),
                    dtype=np.uint8,
                )
        return self

    def config(self):
        if self.domain is None:
            raise ValueError("chain runs on a bare graph, not a domain")
        return BondConfig(self.domain, self.bits)


def heat_bath_sweep(cfg, params, rng, fast=False):
    """One full scan of single-edge heat-bath updates; returns the new config."""
    chain = HeatBathChain(cfg.domain, params, rng, start=cfg.bits, fast=fast)
    chain.sweep()
    return chain.config()


def sweep_transition_matrix(domain_or_graph, params):
    """Exact one-sweep transition matrix over all 2^edges configurations.

    Entries are Fractions when the parameters are Fractions.  The matrix is
    the scan-order product of the single-edge heat-bath kernels.
    """
    graph = _graph_of(domain_or_graph)
    n = graph.n_edges
    if n > HOLLEY_EDGE_BUDGET:
        raise ValueError("transition matrix limited to small edge counts")
    size = 1 << n
    exact = isinstance(params.p, Fraction)
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0

    matrix = [[one if s == t else zero for t in range(size)] for s in range(size)]
    for e in range(n):
        nxt = [[zero] * size for _ in range(size)]
        for t in range(size):
            bits = [(t >> i) & 1 for i in range(n)]
            prob = edge_open_probability(bits, e, graph, params)
            t_open = t | (1 << e)
            t_closed = t & ~(1 << e)
            for s in range(size):
                w = matrix[s][t]
                if w:
                    nxt[s][t_open] += w * prob
                    nxt[s][t_closed] += w * (one - prob)
        matrix = nxt
    return matrix


def enumerate_weights(domain_or_graph, params, domain_for_stats=None):
    """Unnormalized weights of all configurations, indexed by bitmask."""
    if isinstance(domain_or_graph, SamplerGraph):
        graph = domain_or_graph
        weights = []
        for mask in range(1 << graph.n_edges):
            bits = [(mask >> i) & 1 for i in range(graph.n_edges)]
            weights.append(_graph_weight(bits, graph, params))
        return weights
    domain = domain_or_graph
    if domain.n_edges > HOLLEY_EDGE_BUDGET:
        raise ValueError(
            f"enumeration budget exceeded: {domain.n_edges} edges > {HOLLEY_EDGE_BUDGET}"
        )
    return [
        fk_weight(BondConfig.from_int(domain, mask), params)
        for mask in range(1 << domain.n_edges)
    ]


def _graph_weight(bits, graph, params):
    uf = DisjointSets(graph.n_vertices)
    for j, b in enumerate(bits):
        if b:
            ua, ub = graph.edge_endpoints[j]
            uf.union(ua, ub)
    touches = {}
    for v in range(graph.n_vertices):
        r = uf.find(v)
        touches[r] = touches.get(r, False) or graph.boundary_vertex_mask[v]
    k_b = sum(1 for t in touches.values() if t)
    k_i = len(touches) - k_b
    n_open = sum(bits)
    p = params.p
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    return p ** n_open * (one - p) ** (len(bits) - n_open) * params.q ** k_i * params.q_b ** k_b


def holley_check(params_lo, params_hi, domain):
    """Holley lattice condition certifying that lo is dominated by hi.

    Checks  w_hi(a|b) * w_lo(a&b) >= w_lo(a) * w_hi(b)  over all ordered
    configuration pairs, exactly when the parameters are Fractions.  For the
    boundary-weighted model the condition holds when the *hi* side carries
    the smaller boundary weight (the more wired measure dominates).
    """
    n = domain.n_edges
    if n > HOLLEY_EDGE_BUDGET:
        raise ValueError(f"enumeration budget exceeded: {n} edges > {HOLLEY_EDGE_BUDGET}")
    lo = [_as_fraction_params(params_lo), _as_fraction_params(params_hi)]
    params_lo, params_hi = lo
    w_lo = enumerate_weights(domain, params_lo)
    w_hi = enumerate_weights(domain, params_hi)
    size = 1 << n
    for a in range(size):
        for b in range(size):
            if w_hi[a | b] * w_lo[a & b] < w_lo[a] * w_hi[b]:
                return False
    return True


def _as_fraction_params(params):
    return FKParams(q=Fraction(params.q), q_b=Fraction(params.q_b), p=Fraction(params.p))
