"""Six-vertex configurations on fattened even domains.

An arrow configuration assigns a direction to every medial edge of the
fattening.  Admissible configurations satisfy the ice rule (two arrows in,
two out) at every internal medial vertex and run anticlockwise along the
region boundary.  The weight of a configuration is c^(number of vertices
whose two incoming arrows are collinear).

Vertex type convention (only the split between types 1-4 and types 5-6
carries weight; the numbering itself is internal):

    incoming edge slots   type
    ---------------------------
    {S, W}                 1
    {N, E}                 2
    {S, E}                 3
    {N, W}                 4
    {E, W}                 5   collinear incoming, horizontal axis
    {N, S}                 6   collinear incoming, vertical axis

Splitting: at each internal vertex the four arrows are joined into two
non-crossing strands, each with one incoming and one outgoing arrow.  For
types 1-4 exactly one of the two non-crossing pairings is consistent with
the arrows; for types 5 and 6 both are, and the choice is made by a biased
coin.  The anticlockwise split is the one whose two strands turn left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from fksix import lattice
from fksix.lattice import N, E, S, W, OPPOSITE, PAIRING_A, PAIRING_B, turn_sign
from fksix.laurent import SymbolicCoupling
from fksix.loops import LoopConfig, OrientedLoopConfig, _trace_loops, _pairing_for_state

_TYPE_BY_INCOMING = {
    frozenset((S, W)): 1,
    frozenset((N, E)): 2,
    frozenset((S, E)): 3,
    frozenset((N, W)): 4,
    frozenset((E, W)): 5,
    frozenset((N, S)): 6,
}

ENUMERATION_MEDIAL_BUDGET = 64


@dataclass(frozen=True)
class CoupledParams:
    """Jointly tuned six-vertex / random-cluster parameters.

    Built from q >= 4 by solving exp(lam) + exp(-lam) = sqrt(q) for the
    positive root; then c = exp(lam/2) + exp(-lam/2), p is the self-dual
    point, and the boundary-cluster weight is exp(lam) sqrt(q).
    """

    lam: float
    c: float
    sqrt_q: float
    q: float
    p: float
    q_b: float

    def __post_init__(self):
        if self.q < 4 - 1e-12:
            raise ValueError("coupled parameters need q >= 4")
        if not (self.c >= 2 - 1e-12):
            raise ValueError("coupled parameters need c >= 2")
        if abs(self.c ** 2 - 2 - self.sqrt_q) > 1e-9:
            raise ValueError("c^2 = 2 + sqrt(q) violated")

    is_symbolic = False

    def negated(self):
        lam = -self.lam
        return CoupledParams(
            lam=lam,
            c=self.c,
            sqrt_q=self.sqrt_q,
            q=self.q,
            p=self.p,
            q_b=math.exp(lam) * self.sqrt_q,
        )


def split_acw_probability(lam):
    """Probability of the anticlockwise split at a type 5/6 vertex."""
    return math.exp(lam / 2) / (math.exp(lam / 2) + math.exp(-lam / 2))


@dataclass(frozen=True)
class SixVertexConfig:
    """Arrows on the medial edges: bit 1 points along +x (horizontal edges)
    or +y (vertical edges)."""

    domain: object
    arrows: tuple

    def __post_init__(self):
        if len(self.arrows) != self.domain.n_medial:
            raise ValueError("arrow count does not match medial edge count")

    def validate(self):
        dom = self.domain
        for e, bit in dom.forced_boundary_bits.items():
            if self.arrows[e] != bit:
                raise ValueError("boundary arrows are not anticlockwise")
        for v in dom.internal_medial_vertices:
            if len(self.incoming_slots(v)) != 2:
                raise ValueError(f"ice rule violated at {v}")
        return self

    def incoming_slots(self, v):
        slots = self.domain.medial_vertex_slots[v]
        incoming = []
        for d, e in slots.items():
            a, _b = self.domain.medial_edges[e]
            bit = self.arrows[e]
            into_v = (bit == 1) if v != a else (bit == 0)
            if into_v:
                incoming.append(d)
        return frozenset(incoming)

    def vertex_types(self):
        """Type label 1..6 per internal vertex, in vertex index order."""
        return tuple(
            _TYPE_BY_INCOMING[self.incoming_slots(v)]
            for v in self.domain.internal_medial_vertices
        )

    def n_type56(self):
        return sum(1 for t in self.vertex_types() if t >= 5)

    def key(self):
        return self.arrows


def sixv_weight(cfg, c):
    """Weight c^(number of type 5 or 6 vertices).

    ``c`` may be a number, a ``CoupledParams`` or a ``SymbolicCoupling``.
    """
    n56 = cfg.n_type56()
    if isinstance(c, SymbolicCoupling):
        return c.c ** n56
    if isinstance(c, CoupledParams):
        return c.c ** n56
    return c ** n56


def enumerate_6v(domain, budget=ENUMERATION_MEDIAL_BUDGET):
    """All configurations with anticlockwise boundary, by backtracking over
    the interior edges with ice-rule pruning."""
    if domain.n_medial > budget:
        raise ValueError(
            f"enumeration budget exceeded: {domain.n_medial} medial edges > {budget}"
        )
    arrows = [None] * domain.n_medial
    for e, bit in domain.forced_boundary_bits.items():
        arrows[e] = bit
    free = [e for e in range(domain.n_medial) if arrows[e] is None]

    internal = set(domain.internal_medial_vertices)
    # per internal vertex: remaining undecided edges and incoming-count so far
    remaining = {v: 0 for v in internal}
    n_in = {v: 0 for v in internal}

    def is_incoming(v, e, bit):
        a, _b = domain.medial_edges[e]
        return (bit == 1) if v != a else (bit == 0)

    def endpoints_internal(e):
        a, b = domain.medial_edges[e]
        return [v for v in (a, b) if v in internal]

    for e in range(domain.n_medial):
        for v in endpoints_internal(e):
            if arrows[e] is None:
                remaining[v] += 1
            elif is_incoming(v, e, arrows[e]):
                n_in[v] += 1
    for v in internal:
        if remaining[v] == 0 and n_in[v] != 2:
            return

    def backtrack(idx):
        if idx == len(free):
            yield SixVertexConfig(domain, tuple(arrows))
            return
        e = free[idx]
        for bit in (0, 1):
            arrows[e] = bit
            ok = True
            touched = endpoints_internal(e)
            for v in touched:
                remaining[v] -= 1
                if is_incoming(v, e, bit):
                    n_in[v] += 1
            for v in touched:
                decided_in = n_in[v]
                decided_out = (4 - remaining[v]) - n_in[v]
                if decided_in > 2 or decided_out > 2:
                    ok = False
                if remaining[v] == 0 and decided_in != 2:
                    ok = False
            if ok:
                yield from backtrack(idx + 1)
            for v in touched:
                if is_incoming(v, e, bit):
                    n_in[v] -= 1
                remaining[v] += 1
            arrows[e] = None

    yield from backtrack(0)


@dataclass(frozen=True)
class SplitRecord:
    """Split choices at the type 5/6 vertices, +1 anticlockwise, -1 clockwise.

    ``vertex_edge_ids`` lists the internal-vertex indices (equal to primal
    edge indices) in ascending order.
    """

    vertex_edge_ids: tuple
    choices: tuple

    @property
    def n_acw(self):
        return sum(1 for c in self.choices if c == 1)

    @property
    def n_cw(self):
        return sum(1 for c in self.choices if c == -1)


def _consistent_pairings(cfg, v):
    incoming = cfg.incoming_slots(v)
    out = []
    for pairing in (PAIRING_A, PAIRING_B):
        if all((d in incoming) != (pairing[d] in incoming) for d in pairing):
            out.append(pairing)
    return out, incoming


def _pairing_turn(pairing, incoming):
    """Total quarter turns of the two strands under a pairing."""
    total = 0
    seen = set()
    for d in pairing:
        pair = frozenset((d, pairing[d]))
        if pair in seen:
            continue
        seen.add(pair)
        d_in = d if d in incoming else pairing[d]
        d_out = pairing[d_in]
        total += turn_sign(OPPOSITE[d_in], d_out)
    return total


def split(cfg, coupling, rng=None, choices=None):
    """Resolve a six-vertex configuration into an oriented loop configuration.

    Returns ``(oriented_loops, record)``.  Types 1-4 are split by their
    unique arrow-consistent non-crossing pairing; types 5/6 by a coin with
    anticlockwise-split probability exp(lam/2)/(exp(lam/2)+exp(-lam/2)),
    keyed by internal-vertex index.  Passing ``choices`` (one +-1 per type
    5/6 vertex, ascending vertex order) makes the map deterministic for
    exhaustive enumeration.
    """
    dom = cfg.domain
    type56 = []
    pairings = {}
    pending = {}
    for idx, v in enumerate(dom.internal_medial_vertices):
        consistent, incoming = _consistent_pairings(cfg, v)
        if len(consistent) == 1:
            if _pairing_turn(consistent[0], incoming) != 0:
                raise AssertionError("deterministic split must not turn")
            pairings[v] = consistent[0]
        elif len(consistent) == 2:
            turns = [_pairing_turn(p, incoming) for p in consistent]
            if sorted(turns) != [-2, 2]:
                raise AssertionError("type 5/6 splits must turn by +-pi")
            acw = consistent[turns.index(2)]
            cw = consistent[turns.index(-2)]
            type56.append(idx)
            pending[idx] = (v, acw, cw)
        else:
            raise AssertionError("no arrow-consistent non-crossing pairing")

    if choices is None:
        if rng is None:
            raise ValueError("need an rng or explicit split choices")
        coins = rng.random(dom.n_edges)
        if isinstance(coupling, SymbolicCoupling):
            raise ValueError("random splitting needs numeric parameters")
        p_acw = split_acw_probability(coupling.lam if isinstance(coupling, CoupledParams) else coupling)
        choices = tuple(1 if coins[idx] < p_acw else -1 for idx in type56)
    if len(choices) != len(type56):
        raise ValueError("one split choice per type 5/6 vertex required")
    for idx, choice in zip(type56, choices):
        v, acw, cw = pending[idx]
        pairings[v] = acw if choice == 1 else cw

    for v, slots in dom.medial_vertex_slots.items():
        if len(slots) == 2:
            d1, d2 = slots.keys()
            pairings[v] = {d1: d2, d2: d1}

    # the pairing at each internal vertex encodes an open or closed edge
    bits = []
    for i, v in enumerate(dom.internal_medial_vertices):
        bits.append(1 if pairings[v] == _pairing_for_state(v, 1) else 0)
    bits = tuple(bits)

    loops, edge_to_loop = _trace_loops(dom, pairings)
    xi = []
    for loop in loops:
        a, b, e = loop.directed_steps(anticlockwise=True)[0]
        along = 1 if (a, b) == dom.medial_edges[e] else 0
        xi.append(1 if cfg.arrows[e] == along else -1)
    for loop, x in zip(loops, xi):
        for a, b, e in loop.directed_steps(anticlockwise=(x == 1)):
            along = 1 if (a, b) == dom.medial_edges[e] else 0
            if cfg.arrows[e] != along:
                raise AssertionError("loop arrows disagree along a strand")
        if loop.is_boundary and x != 1:
            raise AssertionError("boundary loop came out clockwise")

    olc = OrientedLoopConfig(
        base=LoopConfig(domain=dom, bits=bits, loops=loops, edge_to_loop=edge_to_loop),
        xi=tuple(xi),
    )
    record = SplitRecord(
        vertex_edge_ids=tuple(type56),
        choices=tuple(choices),
    )
    return olc, record


def split_inverse(olc):
    """Forget the loop structure, keep the arrows."""
    return SixVertexConfig(olc.domain, olc.arrow_bits()).validate()


def check_winding_identity(olc, record):
    """Turning-angle bookkeeping, in quarter turns:

        2 (acw splits - cw splits) + n2 = 4 (acw loops - cw loops).
    """
    lhs = 2 * (record.n_acw - record.n_cw) + olc.domain.n2
    rhs = 4 * olc.delta_n()
    return lhs == rhs


def sixv_bitmap_hex(cfg):
    """Pack the arrows two bits per edge (direction bit plus a reserved 0),
    little-endian, as a hex string."""
    value = 0
    for e, bit in enumerate(cfg.arrows):
        value |= bit << (2 * e)
    n_bytes = (2 * len(cfg.arrows) + 7) // 8
    return value.to_bytes(n_bytes, "little").hex()


def sixv_from_bitmap_hex(domain, hex_string):
    value = int.from_bytes(bytes.fromhex(hex_string), "little")
    arrows = tuple((value >> (2 * e)) & 1 for e in range(domain.n_medial))
    return SixVertexConfig(domain, arrows).validate()


def sixv_header(domain):
    return {
        "domain": domain.descriptor,
        "medial_edges": domain.n_medial,
        "encoding": "2 bits per medial edge, little-endian; bit0 arrow along +x/+y, bit1 reserved",
    }
