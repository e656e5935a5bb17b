"""Interface loops between primal and dual clusters.

Every bond configuration on an even domain induces a fully packed family of
loops on the medial edges: at each internal medial vertex the four edges are
joined into two non-crossing strands that flank the open edge through that
vertex (the open primal edge, or the open dual edge when the primal one is
closed); at every other vertex of the fattening the two incident edges chain
through.  Each medial edge then lies on exactly one closed loop.

Loops are stored in their anticlockwise traversal (total turning +2 pi), in
discovery order by smallest medial-edge index.  Orienting a loop clockwise
means reversing that traversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from fksix import lattice
from fksix.lattice import DIR_VEC, OPPOSITE, PAIRING_A, PAIRING_B, turn_sign
from fksix.laurent import SymbolicCoupling


@dataclass(frozen=True)
class Loop:
    """A closed medial strand.  ``points[i]`` starts the i-th directed step
    along the anticlockwise traversal, which runs through ``edges[i]``."""

    edges: tuple
    points: tuple
    is_boundary: bool

    def __len__(self):
        return len(self.edges)

    def directed_steps(self, anticlockwise=True):
        n = len(self.edges)
        if anticlockwise:
            return tuple(
                (self.points[i], self.points[(i + 1) % n], self.edges[i]) for i in range(n)
            )
        return tuple(
            (self.points[(i + 1) % n], self.points[i], self.edges[i])
            for i in reversed(range(n))
        )


@dataclass(frozen=True)
class LoopConfig:
    domain: object
    bits: tuple  # the bond configuration the loops came from
    loops: tuple
    edge_to_loop: tuple

    @property
    def n_loops(self):
        return len(self.loops)


@dataclass(frozen=True)
class OrientedLoopConfig:
    """Loops with a +-1 orientation each: +1 anticlockwise, -1 clockwise.

    Boundary loops are always +1.
    """

    base: LoopConfig
    xi: tuple

    def __post_init__(self):
        for loop, x in zip(self.base.loops, self.xi):
            if loop.is_boundary and x != 1:
                raise ValueError("boundary loops must be anticlockwise")
            if x not in (1, -1):
                raise ValueError("orientations are +-1")

    @property
    def domain(self):
        return self.base.domain

    def delta_n(self):
        """Anticlockwise minus clockwise loop count."""
        return sum(self.xi)

    def arrow_bits(self):
        """Arrow per medial edge: 1 when it points along the canonical
        (+x or +y) direction of the edge."""
        bits = [0] * self.base.domain.n_medial
        medial = self.base.domain.medial_edges
        for loop, x in zip(self.base.loops, self.xi):
            for a, b, e in loop.directed_steps(anticlockwise=(x == 1)):
                bits[e] = 1 if (a, b) == medial[e] else 0
        return tuple(bits)

    def key(self):
        """Canonical identity: the bond bits plus per-loop orientations."""
        return (self.base.bits, self.xi)


def _pairing_for_state(vertex, open_bit):
    """Strand pairing at an internal medial vertex given its edge state.

    Open primal edge: strands flank it (they hug the two odd faces).
    Closed primal edge (open dual): strands hug the two even faces.
    """
    parity = (vertex[0] + vertex[1]) & 1
    if parity == 0:
        return PAIRING_B if open_bit else PAIRING_A
    return PAIRING_A if open_bit else PAIRING_B


def _vertex_pairings(domain, bits):
    pairings = {}
    for v, slots in domain.medial_vertex_slots.items():
        if len(slots) == 4:
            edge_id = domain.vertex_primal_edge[v]
            pairings[v] = _pairing_for_state(v, bits[edge_id])
        else:
            d1, d2 = slots.keys()
            pairings[v] = {d1: d2, d2: d1}
    return pairings


def _trace_loops(domain, pairings):
    """Partition the medial edges into closed loops, stored anticlockwise."""
    medial = domain.medial_edges
    slots = domain.medial_vertex_slots
    visited = [False] * domain.n_medial
    loops = []
    edge_to_loop = [-1] * domain.n_medial
    for seed in range(domain.n_medial):
        if visited[seed]:
            continue
        a, b = medial[seed]
        steps = [(a, b, seed)]
        visited[seed] = True
        cur_from, cur_to = a, b
        while True:
            d_in = _dir_of(cur_from, cur_to)
            d_out = pairings[cur_to][OPPOSITE[d_in]]
            nxt_edge = slots[cur_to][d_out]
            nxt_to = (cur_to[0] + DIR_VEC[d_out][0], cur_to[1] + DIR_VEC[d_out][1])
            if nxt_edge == seed:
                if nxt_to != b:
                    raise AssertionError("loop closed against its starting direction")
                break
            if visited[nxt_edge]:
                raise AssertionError("strand ran into an already traced loop")
            visited[nxt_edge] = True
            steps.append((cur_to, nxt_to, nxt_edge))
            cur_from, cur_to = cur_to, nxt_to
        loop = _canonical_loop(domain, steps)
        idx = len(loops)
        loops.append(loop)
        for e in loop.edges:
            edge_to_loop[e] = idx
    return tuple(loops), tuple(edge_to_loop)


def _dir_of(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    return {(0, 1): lattice.N, (1, 0): lattice.E, (0, -1): lattice.S, (-1, 0): lattice.W}[
        (dx, dy)
    ]


def _canonical_loop(domain, steps):
    n = len(steps)
    total = 0
    for i in range(n):
        d1 = _dir_of(steps[i][0], steps[i][1])
        d2 = _dir_of(steps[(i + 1) % n][0], steps[(i + 1) % n][1])
        total += turn_sign(d1, d2)
    if total == -4:
        steps = [(b, a, e) for a, b, e in reversed(steps)]
    elif total != 4:
        raise AssertionError(f"loop turning number {total}/4 is not +-1")
    # rotate so the traversal starts at the smallest edge id
    k = min(range(n), key=lambda i: steps[i][2])
    steps = steps[k:] + steps[:k]
    edges = tuple(s[2] for s in steps)
    points = tuple(s[0] for s in steps)
    is_boundary = any(e in domain.boundary_edge_ids for e in edges)
    return Loop(edges=edges, points=points, is_boundary=is_boundary)


def extract_loops(cfg):
    """Interface loops of a bond configuration, fully packing the fattening."""
    pairings = _vertex_pairings(cfg.domain, cfg.bits)
    loops, edge_to_loop = _trace_loops(cfg.domain, pairings)
    return LoopConfig(domain=cfg.domain, bits=cfg.bits, loops=loops, edge_to_loop=edge_to_loop)


def loop_stats(lc):
    """(total, interior, boundary) loop counts."""
    boundary = sum(1 for lp in lc.loops if lp.is_boundary)
    total = len(lc.loops)
    return total, total - boundary, boundary


def anticlockwise_probability(lam):
    """Probability e^lam / (e^lam + e^-lam) of orienting a loop anticlockwise."""
    return math.exp(lam) / (math.exp(lam) + math.exp(-lam))


def orient_loops(lc, lam, rng=None, coins=None):
    """Orient loops: boundary loops anticlockwise, the rest by independent
    biased coins.

    The coin stream is indexed by loop discovery order; one uniform is drawn
    for every loop (also the forced boundary ones) so that coin k always
    belongs to loop k regardless of the mixture of loop kinds.
    """
    if coins is None:
        if rng is None:
            raise ValueError("need an rng or an explicit coin vector")
        coins = rng.random(len(lc.loops))
    if len(coins) < len(lc.loops):
        raise ValueError("not enough orientation coins")
    p_acw = anticlockwise_probability(lam)
    xi = tuple(
        1 if loop.is_boundary or coins[k] < p_acw else -1
        for k, loop in enumerate(lc.loops)
    )
    return OrientedLoopConfig(base=lc, xi=xi)


def oriented_weight(olc, coupling):
    """Unnormalized oriented weight exp(lambda * (acw - cw)).

    Symbolically this is the monomial x^(2 sign (acw - cw)).
    """
    delta = olc.delta_n()
    if isinstance(coupling, SymbolicCoupling):
        return coupling.orientation_weight(delta)
    return math.exp(coupling.lam * delta)


def loop_winding(loop, domain=None, anticlockwise=True):
    """Total turning of a loop traversal in quarter turns (+4 or -4).

    Raises if the strand fails to turn by a quarter at some vertex or if the
    total is not a full turn.
    """
    steps = loop.directed_steps(anticlockwise=anticlockwise)
    n = len(steps)
    total = 0
    for i in range(n):
        d1 = _dir_of(steps[i][0], steps[i][1])
        d2 = _dir_of(steps[(i + 1) % n][0], steps[(i + 1) % n][1])
        total += turn_sign(d1, d2)
    if total not in (4, -4):
        raise ValueError(f"loop winding {total} quarter turns is not a full turn")
    return total


def loops_to_jsonable(lc, config_id=None, xi=None):
    """Loop dump record used by the golden-file tests."""
    rec = {
        "config": int(config_id if config_id is not None else sum(b << i for i, b in enumerate(lc.bits))),
        "loops": [list(lp.edges) for lp in lc.loops],
        "boundary": [bool(lp.is_boundary) for lp in lc.loops],
    }
    if xi is not None:
        rec["orientation"] = list(xi)
    return rec
