"""Height functions, height clusters, nesting order and the drift statistic.

The height function lives on the faces of the covered region.  Crossing a
medial edge changes the height by +-1; the sign is read off the arrow on the
crossed edge: rotate the step direction by +90 degrees and take the sign of
its inner product with the arrow.

Equivalently, with loops oriented by xi = +1 (anticlockwise) or -1, the
height difference between the base face and another face is the xi-weighted
count of loops separating them.  Both constructions are implemented and are
compared against each other by the test suite.

Nesting: gamma(C) is the surrounding cycle of a cluster in the opposite
lattice; C precedes C' when gamma(C) is contained in C'.  Starting from the
cluster of a base face and repeatedly taking the unique successor produces
an alternating primal/dual sequence whose height increments are exactly the
orientation coins of the interface loops; pooling those increments over
samples estimates tanh(lambda).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from fksix.lattice import face_parity, gamma_of_connected_set
from fksix.loops import extract_loops, orient_loops
from fksix.random_cluster import FKParams, HeatBathChain
from fksix.rng import edge_stream, orientation_stream
from fksix.unionfind import DisjointSets


@dataclass(frozen=True)
class HeightFunction:
    domain: object
    base: tuple
    values: dict

    def __getitem__(self, face):
        return self.values[face]

    def __eq__(self, other):
        return (
            isinstance(other, HeightFunction)
            and self.base == other.base
            and self.values == other.values
        )


def _rot90(d):
    return (-d[1], d[0])


def step_increment(arrows, domain, from_face, to_face):
    """Height change for one step across the shared medial edge."""
    edge = _shared_edge(from_face, to_face)
    e = domain.medial_index[edge]
    a, b = domain.medial_edges[e]
    direction = (b[0] - a[0], b[1] - a[1])
    if arrows[e] == 0:
        direction = (-direction[0], -direction[1])
    d = (to_face[0] - from_face[0], to_face[1] - from_face[1])
    r = _rot90(d)
    dot = direction[0] * r[0] + direction[1] * r[1]
    if dot == 0:
        raise AssertionError("arrow parallel to the crossing step")
    return 1 if dot > 0 else -1


def _shared_edge(f, g):
    # faces adjacent through an edge differ by one unit in one coordinate
    if f[0] == g[0]:
        j = max(f[1], g[1])
        return ((f[0], j), (f[0] + 1, j))
    if f[1] == g[1]:
        i = max(f[0], g[0])
        return ((i, f[1]), (i, f[1] + 1))
    raise ValueError("faces are not adjacent through an edge")


def _face_neighbors(domain, f):
    i, j = f
    for g in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
        if g in domain.covered_faces:
            yield g


def height_from_arrows(cfg, base):
    """Integrate the arrow gradient over the covered faces from ``base``."""
    domain = cfg.domain
    if base not in domain.covered_faces:
        raise ValueError("base face lies outside the covered region")
    values = {base: 0}
    queue = [base]
    while queue:
        f = queue.pop()
        for g in _face_neighbors(domain, f):
            if g not in values:
                values[g] = values[f] + step_increment(cfg.arrows, domain, f, g)
                queue.append(g)
    if len(values) != len(domain.covered_list):
        raise AssertionError("covered region is not face-connected")
    return HeightFunction(domain=domain, base=base, values=values)


def wind_sum_field(olc):
    """xi-weighted count of loops surrounding each covered face.

    For every face f this is  sum over loops L of xi_L * [L surrounds f],
    computed with one signed vertical-crossing sweep per row.
    """
    domain = olc.domain
    rows = {}
    for (i, j) in domain.covered_list:
        lo, hi = rows.get(j, (i, i))
        rows[j] = (min(lo, i), max(hi, i))
    delta = {j: [0] * (hi - lo + 2) for j, (lo, hi) in rows.items()}
    for loop, x in zip(olc.base.loops, olc.xi):
        steps = loop.directed_steps(anticlockwise=True)
        for a, b, _e in steps:
            if a[0] != b[0]:
                continue
            j = min(a[1], b[1])
            if j not in rows:
                continue
            sign = x if b[1] > a[1] else -x
            lo, hi = rows[j]
            pos = a[0] - lo
            if pos < 0:
                continue  # affects no face of this row
            if pos > hi - lo + 1:
                raise AssertionError("loop segment beyond the covered region")
            delta[j][pos] += sign
    field_rows = {}
    for j, arr in delta.items():
        suffix = [0] * (len(arr) + 1)
        for k in range(len(arr) - 1, -1, -1):
            suffix[k] = suffix[k + 1] + arr[k]
        field_rows[j] = suffix
    values = {}
    for (i, j) in domain.covered_list:
        lo, _hi = rows[j]
        values[(i, j)] = field_rows[j][i - lo + 1]
    return values


def height_from_loops(olc, base):
    """Height via separating loops: h(v) = W(base) - W(v) with W the
    xi-weighted surrounding count."""
    domain = olc.domain
    if base not in domain.covered_faces:
        raise ValueError("base face lies outside the covered region")
    w = wind_sum_field(olc)
    w0 = w[base]
    return HeightFunction(
        domain=domain, base=base, values={f: w0 - w[f] for f in domain.covered_list}
    )


def loop_surrounds(loop, face):
    """Winding of a loop's anticlockwise traversal around a face center."""
    i, j = face
    wind = 0
    for a, b, _e in loop.directed_steps(anticlockwise=True):
        if a[0] == b[0] and min(a[1], b[1]) == j and a[0] > i:
            wind += 1 if b[1] > a[1] else -1
    return wind


@dataclass(frozen=True)
class HeightCluster:
    faces: frozenset
    height: int

    @property
    def parity(self):
        return face_parity(next(iter(self.faces)))


def height_clusters(h):
    """Maximal same-parity diagonally connected sets of constant height."""
    domain = h.domain
    faces = domain.covered_list
    index = {f: k for k, f in enumerate(faces)}
    uf = DisjointSets(len(faces))
    for a, b in domain.primal_edges:
        if h.values[a] == h.values[b]:
            uf.union(index[a], index[b])
    for a, b in domain.dual_edges:
        if a in domain.covered_faces and b in domain.covered_faces:
            if h.values[a] == h.values[b]:
                uf.union(index[a], index[b])
    clusters = []
    for members in uf.groups().values():
        fs = frozenset(faces[k] for k in members)
        parities = {face_parity(f) for f in fs}
        if len(parities) != 1:
            raise AssertionError("height cluster mixes parities")
        clusters.append(HeightCluster(faces=fs, height=h.values[faces[members[0]]]))
    return clusters


def precedes(cluster_a, cluster_b):
    """Whether the surrounding cycle of ``cluster_a`` lies inside ``cluster_b``."""
    a = frozenset(tuple(f) for f in cluster_a)
    b = frozenset(tuple(f) for f in cluster_b)
    pa = {face_parity(f) for f in a}
    pb = {face_parity(f) for f in b}
    if len(pa) != 1 or len(pb) != 1:
        raise ValueError("clusters must be parity pure")
    if pa == pb:
        raise ValueError("nesting compares opposite parities")
    gamma = gamma_of_connected_set(a)
    return set(gamma.vertices).issubset(b)


@dataclass(frozen=True)
class NestedClusterSequence:
    """Alternating primal/dual clusters around the base face, truncated at
    the window boundary, with their interface loops and height increments."""

    base: tuple
    clusters: tuple  # tuples of faces
    loop_ids: tuple
    increments: tuple
    heights: tuple  # h relative to the base cluster
    stop_reason: str


def nested_sequence(cfg, olc, base, max_steps=None):
    """Build the nested cluster sequence from ``base`` and check the height
    increments against the loop orientations.

    Stops at the first cluster touching the domain boundary (or reaching the
    outer dual node) and before consuming any boundary loop, so that every
    recorded increment is a genuine orientation coin.
    """
    domain = cfg.domain
    if base not in domain.vertex_set:
        raise ValueError("base face must be a domain vertex")
    bits = cfg.bits

    primal_uf = DisjointSets(domain.n_vertices)
    for i, b in enumerate(bits):
        if b:
            ua, ub = domain.edge_endpoints[i]
            primal_uf.union(ua, ub)
    n_dual = len(domain.dual_nodes)
    outer = n_dual
    dual_uf = DisjointSets(n_dual + 1)
    for i, b in enumerate(bits):
        if not b:
            na, nb = domain.dual_edge_nodes[i]
            dual_uf.union(na if na >= 0 else outer, nb if nb >= 0 else outer)

    primal_groups = {}
    for vid in range(domain.n_vertices):
        primal_groups.setdefault(primal_uf.find(vid), []).append(vid)
    dual_groups = {}
    for nid in range(n_dual + 1):
        dual_groups.setdefault(dual_uf.find(nid), []).append(nid)

    w_field = wind_sum_field(olc)

    def cluster_of(face):
        if face_parity(face) == 0:
            vid = domain.vertex_index[face]
            members = primal_groups[primal_uf.find(vid)]
            faces = tuple(sorted(domain.vertices[m] for m in members))
            touches = any(domain.boundary_vertex_mask[m] for m in members)
            return faces, touches
        nid = domain.dual_node_index[face]
        members = dual_groups[dual_uf.find(nid)]
        touches = any(m == outer for m in members)
        faces = tuple(sorted(domain.dual_nodes[m] for m in members if m != outer))
        return faces, touches

    clusters = []
    loop_ids = []
    increments = []
    heights = [0]
    stop_reason = ""
    current, touches = cluster_of(base)
    clusters.append(current)
    rep = current[0]
    h_rep = w_field[rep]
    for f in current:
        if w_field[f] != h_rep:
            raise AssertionError("height not constant on a cluster")

    step = 0
    while True:
        if touches:
            stop_reason = "cluster touches the boundary"
            break
        if max_steps is not None and step >= max_steps:
            stop_reason = "step limit"
            break
        f0 = min(current, key=lambda f: (f[1], f[0]))
        bottom = ((f0[0], f0[1]), (f0[0] + 1, f0[1]))
        loop_id = olc.base.edge_to_loop[domain.medial_index[bottom]]
        loop = olc.base.loops[loop_id]
        if loop.is_boundary:
            stop_reason = "interface loop touches the boundary"
            break
        if loop_id in loop_ids:
            raise AssertionError("interface loop repeated along the sequence")
        xi = olc.xi[loop_id]

        gamma = gamma_of_connected_set(current)
        uncovered = [g for g in gamma.vertices if g not in domain.covered_faces]
        covered = [g for g in gamma.vertices if g in domain.covered_faces]
        loop_ids.append(loop_id)
        increments.append(xi)
        heights.append(heights[-1] + xi)
        if not covered:
            clusters.append(())
            stop_reason = "successor lies outside the window"
            break
        nxt, nxt_touches = cluster_of(covered[0])
        if uncovered:
            nxt_touches = True
        missing = [g for g in gamma.vertices if g not in nxt and g in domain.covered_faces]
        if missing:
            raise AssertionError("surrounding cycle escapes the successor cluster")
        h_prev = h_rep
        rep = covered[0]
        h_rep = w_field[rep]
        for f in nxt:
            if w_field[f] != h_rep:
                raise AssertionError("height not constant on a cluster")
        if h_prev - h_rep != xi:
            raise AssertionError("height increment disagrees with the loop coin")
        clusters.append(nxt)
        current, touches = nxt, nxt_touches
        step += 1

    return NestedClusterSequence(
        base=base,
        clusters=tuple(clusters),
        loop_ids=tuple(loop_ids),
        increments=tuple(increments),
        heights=tuple(heights),
        stop_reason=stop_reason,
    )


@dataclass
class DriftResult:
    params: object
    radius: int
    n_samples: int
    records: list = field(default_factory=list)  # (sample, n, xi, h)
    mean: float = float("nan")
    stderr: float = float("nan")
    count: int = 0
    tanh_lam: float = float("nan")

    def summary(self):
        return {
            "radius": self.radius,
            "samples": self.n_samples,
            "increments": self.count,
            "mean": self.mean,
            "stderr": self.stderr,
            "tanh_lambda": self.tanh_lam,
        }


def drift_experiment(
    coupled,
    radius,
    n_samples,
    seed,
    burn_in=200,
    thin=10,
    fast=True,
    domain=None,
):
    """Sample the coupled model, orient loops, and pool the nested-sequence
    height increments.  Their mean estimates tanh(lambda)."""
    from fksix.lattice import make_diamond_domain

    if domain is None:
        center = (0, 0) if radius % 2 == 0 else (1, 0)
        domain = make_diamond_domain(center, radius)
    ci, cj = domain.descriptor.get("center", (0, 0))
    base = (ci, cj) if (ci + cj) % 2 == 0 else (ci + 1, cj)
    if base not in domain.vertex_set:
        base = domain.vertices[len(domain.vertices) // 2]
    params = FKParams.from_coupled(coupled)
    chain = HeatBathChain(domain, params, edge_stream(seed, 0), start="closed", fast=fast)
    chain.sweep(burn_in)

    result = DriftResult(
        params=coupled,
        radius=radius,
        n_samples=n_samples,
        tanh_lam=math.tanh(coupled.lam),
    )
    for s in range(n_samples):
        chain.sweep(thin)
        cfg = chain.config()
        lc = extract_loops(cfg)
        coins = orientation_stream(seed, s).random(len(lc.loops))
        olc = orient_loops(lc, coupled.lam, coins=coins)
        seq = nested_sequence(cfg, olc, base)
        for n, (xi, h) in enumerate(zip(seq.increments, seq.heights[1:]), start=1):
            result.records.append((s, n, xi, h))
    n = len(result.records)
    result.count = n
    if n:
        mean = sum(r[2] for r in result.records) / n
        var = sum((r[2] - mean) ** 2 for r in result.records) / max(n - 1, 1)
        result.mean = mean
        result.stderr = math.sqrt(var / n)
    return result
