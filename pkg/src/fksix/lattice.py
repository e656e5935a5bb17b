"""Geometry of the rotated square lattice, its dual, and even domains.

Coordinate conventions used by the whole package:

* The medial lattice is Z^2.  A *face* is the unit square [i,i+1]x[j,j+1]
  of the medial lattice, identified by its lower-left corner ``(i, j)``.
* Faces with even ``i + j`` are vertices of the primal lattice; odd faces
  are vertices of the dual lattice.  Same-parity faces are adjacent when
  they are diagonal neighbours; each such pair shares exactly one corner
  of Z^2, and the primal edge and its dual edge cross at that corner.
* The fattening of a vertex set is the union of the four medial edges of
  each of its faces.  A set of primal faces is an *even domain* when the
  topological boundary of the region covered by its fattening is a single
  simple cycle strictly alternating between vertical and horizontal edges.
* A medial vertex of the fattening is *internal* when all four of its
  incident medial edges belong to the fattening; this happens exactly when
  both faces of the primal diagonal through that vertex are in the domain,
  so internal medial vertices and primal edges correspond one to one.

Medial edges are stored as ordered point pairs ``(a, b)`` with ``b`` equal
to ``a + (1,0)`` or ``a + (0,1)``; the direction from ``a`` to ``b`` is the
edge's canonical direction (used for arrow bits).
"""

from __future__ import annotations

from dataclasses import dataclass

Face = tuple  # (i, j) lower-left corner of a medial face
Point = tuple  # (x, y) medial lattice vertex

# direction slots at a medial vertex
N, E, S, W = 0, 1, 2, 3
DIR_VEC = ((0, 1), (1, 0), (0, -1), (-1, 0))
OPPOSITE = (S, W, N, E)

# the two non-crossing strand pairings at a medial vertex
PAIRING_A = {N: E, E: N, S: W, W: S}  # strands hug the NE and SW faces
PAIRING_B = {N: W, W: N, S: E, E: S}  # strands hug the NW and SE faces


class InvalidDomainError(ValueError):
    """Raised when a vertex set fails the even-domain conditions."""


def face_parity(face):
    return (face[0] + face[1]) & 1


def is_primal_face(face):
    return face_parity(face) == 0


def diagonal_neighbors(face):
    i, j = face
    return ((i + 1, j + 1), (i + 1, j - 1), (i - 1, j + 1), (i - 1, j - 1))


def face_medial_edges(face):
    """The four medial edges bounding a face, in canonical orientation."""
    i, j = face
    return (
        ((i, j), (i + 1, j)),          # bottom
        ((i, j + 1), (i + 1, j + 1)),  # top
        ((i, j), (i, j + 1)),          # left
        ((i + 1, j), (i + 1, j + 1)),  # right
    )


def medial_edge_sides(edge):
    """Faces on the two sides of a medial edge: (south_or_west, north_or_east)."""
    (x1, y1), (x2, y2) = edge
    if y1 == y2:  # horizontal
        return (x1, y1 - 1), (x1, y1)
    return (x1 - 1, y1), (x1, y1)


def crossing_vertex(face_a, face_b):
    """The corner shared by two diagonally adjacent faces."""
    return (max(face_a[0], face_b[0]), max(face_a[1], face_b[1]))


def faces_around_vertex(v):
    """Faces at the NE, NW, SW, SE corners of a medial vertex."""
    x, y = v
    return (x, y), (x - 1, y), (x - 1, y - 1), (x, y - 1)


def dual_pair_at(v):
    """The diagonal face pair of odd parity through a medial vertex."""
    ne, nw, sw, se = faces_around_vertex(v)
    if face_parity(ne) == 1:
        return ne, sw
    return nw, se


def primal_pair_at(v):
    ne, nw, sw, se = faces_around_vertex(v)
    if face_parity(ne) == 0:
        return ne, sw
    return nw, se


def right_face(point, direction):
    """Face on the right of a walker leaving ``point`` in ``direction``."""
    x, y = point
    if direction == E:
        return (x, y - 1)
    if direction == W:
        return (x - 1, y)
    if direction == N:
        return (x, y)
    return (x - 1, y - 1)


def left_face(point, direction):
    x, y = point
    if direction == E:
        return (x, y)
    if direction == W:
        return (x - 1, y - 1)
    if direction == N:
        return (x - 1, y)
    return (x, y - 1)


def turn_sign(d_in, d_out):
    """+1 for a left quarter turn, -1 for a right one; rejects other moves."""
    vx, vy = DIR_VEC[d_in]
    wx, wy = DIR_VEC[d_out]
    cross = vx * wy - vy * wx
    if cross == 0:
        raise ValueError("strand does not turn by a quarter at a vertex")
    return 1 if cross > 0 else -1


def _covered_faces(vertex_set):
    """Faces whose four medial edges all lie in the fattening.

    These are the domain faces themselves plus every odd face all four of
    whose even neighbours belong to the domain.
    """
    covered = set(vertex_set)
    odd_candidates = set()
    for (i, j) in vertex_set:
        odd_candidates.update(((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)))
    for o in odd_candidates:
        i, j = o
        if all(f in vertex_set for f in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1))):
            covered.add(o)
    return covered


class EvenDomain:
    """A validated even domain with all derived index structures.

    Immutable after construction; safe to share across worker processes.
    """

    def __init__(self, vertices, descriptor=None):
        vertex_set = frozenset(tuple(v) for v in vertices)
        reason = _build(self, vertex_set)
        if reason is not None:
            raise InvalidDomainError(reason)
        self.descriptor = descriptor or {
            "kind": "custom",
            "vertices": [list(v) for v in self.vertices],
        }

    # -- convenience ---------------------------------------------------

    def contains_face(self, face):
        return face in self.covered_faces

    def edge_id_of(self, medial_edge):
        return self.medial_index[medial_edge]

    def primal_edge_id(self, face_a, face_b):
        return self.pair_index[frozenset((face_a, face_b))]

    def __repr__(self):
        return f"EvenDomain({self.descriptor}, |V|={self.n_vertices}, |E|={self.n_edges})"


def _build(dom, vertex_set):
    """Populate ``dom`` from ``vertex_set``; return a failure reason or None."""
    if not vertex_set:
        return "empty vertex set"
    for f in vertex_set:
        if face_parity(f) != 0:
            raise ValueError(f"vertex {f} does not have even parity")

    covered = _covered_faces(vertex_set)

    # medial edges of the fattening, indexed in lexicographic order
    edge_set = set()
    for f in vertex_set:
        edge_set.update(face_medial_edges(f))
    medial_edges = tuple(sorted(edge_set))
    medial_index = {e: k for k, e in enumerate(medial_edges)}

    # slot map and degrees at medial vertices
    slots = {}
    for k, (a, b) in enumerate(medial_edges):
        if a[0] == b[0]:  # vertical
            slots.setdefault(a, {})[N] = k
            slots.setdefault(b, {})[S] = k
        else:
            slots.setdefault(a, {})[E] = k
            slots.setdefault(b, {})[W] = k

    internal = []
    for v, sl in slots.items():
        if len(sl) == 4:
            internal.append(v)
        elif len(sl) == 2:
            d1, d2 = sorted(sl)
            if OPPOSITE[d1] == d2:
                return f"collinear boundary edges at medial vertex {v}"
        else:
            return f"medial vertex {v} has degree {len(sl)}"
    internal.sort()

    # primal edges <-> internal medial vertices
    primal_edges = []
    dual_edges = []
    for v in internal:
        pa, pb = primal_pair_at(v)
        if pa not in vertex_set or pb not in vertex_set:
            return f"internal medial vertex {v} without its primal diagonal"
        primal_edges.append(tuple(sorted((pa, pb))))
        dual_edges.append(tuple(sorted(dual_pair_at(v))))
    # cross-check against a direct diagonal scan
    direct = set()
    for f in vertex_set:
        for g in diagonal_neighbors(f):
            if g in vertex_set:
                direct.add(tuple(sorted((f, g))))
    if direct != set(primal_edges):
        return "primal edge scan disagrees with internal-vertex scan"

    # boundary of the covered region
    boundary_ids = set()
    for k, e in enumerate(medial_edges):
        s1, s2 = medial_edge_sides(e)
        n_cov = (s1 in covered) + (s2 in covered)
        if n_cov == 0:
            return f"medial edge {e} borders no covered face"
        if n_cov == 1:
            boundary_ids.add(k)
    for v, sl in slots.items():
        n_bnd = sum(1 for k in sl.values() if k in boundary_ids)
        if len(sl) == 2 and n_bnd != 2:
            return f"degree-2 medial vertex {v} with {n_bnd} boundary edges"
        if len(sl) == 4 and n_bnd not in (0, 2):
            return f"pinched boundary at medial vertex {v}"

    cycle = _trace_boundary(medial_edges, slots, boundary_ids)
    if cycle is None:
        return "boundary is not a single alternating simple cycle"

    # connectivity of the domain in the primal lattice
    verts = sorted(vertex_set)
    vid = {f: i for i, f in enumerate(verts)}
    if len(verts) > 1:
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            f = stack.pop()
            for g in diagonal_neighbors(f):
                if g in vertex_set and g not in seen:
                    seen.add(g)
                    stack.append(g)
        if len(seen) != len(verts):
            return "vertex set is disconnected in the primal lattice"

    # populate
    dom.vertices = tuple(verts)
    dom.vertex_set = vertex_set
    dom.vertex_index = vid
    dom.n_vertices = len(verts)
    dom.covered_faces = frozenset(covered)
    dom.covered_list = tuple(sorted(covered))
    dom.medial_edges = medial_edges
    dom.medial_index = medial_index
    dom.n_medial = len(medial_edges)
    dom.medial_vertex_slots = slots
    dom.internal_medial_vertices = tuple(internal)
    dom.vertex_primal_edge = {v: i for i, v in enumerate(internal)}
    dom.primal_edges = tuple(primal_edges)
    dom.dual_edges = tuple(dual_edges)
    dom.pair_index = {frozenset(p): i for i, p in enumerate(primal_edges)}
    dom.n_edges = len(primal_edges)
    dom.edge_endpoints = tuple((vid[a], vid[b]) for a, b in primal_edges)
    dom.boundary_edge_ids = frozenset(boundary_ids)
    dom.boundary_cycle = cycle  # directed acw steps (from, to, edge id)
    dom.n2 = sum(1 for sl in slots.values() if len(sl) == 2)
    dom.boundary_vertices = frozenset(
        f for f in verts if any(g not in vertex_set for g in diagonal_neighbors(f))
    )
    dom.boundary_vertex_mask = tuple(f in dom.boundary_vertices for f in verts)

    # forced anticlockwise arrows on the region boundary
    forced = {}
    for a, b, k in cycle:
        lo, hi = medial_edges[k]
        forced[k] = 1 if (a, b) == (lo, hi) else 0
    dom.forced_boundary_bits = forced

    # dual graph nodes: covered odd faces, plus a single outer node (-1)
    odd_nodes = tuple(sorted(f for f in covered if face_parity(f) == 1))
    odd_index = {f: i for i, f in enumerate(odd_nodes)}
    dom.dual_nodes = odd_nodes
    dom.dual_node_index = odd_index
    dom.dual_edge_nodes = tuple(
        (odd_index.get(a, -1), odd_index.get(b, -1)) for a, b in dual_edges
    )

    # adjacency lists for cluster searches
    adj = [[] for _ in range(len(verts))]
    for i, (ua, ub) in enumerate(dom.edge_endpoints):
        adj[ua].append((i, ub))
        adj[ub].append((i, ua))
    dom.vertex_adjacency = tuple(tuple(x) for x in adj)
    dadj = {}
    for i, (na, nb) in enumerate(dom.dual_edge_nodes):
        dadj.setdefault(na, []).append((i, nb))
        dadj.setdefault(nb, []).append((i, na))
    dom.dual_adjacency = {k: tuple(v) for k, v in dadj.items()}
    return None


def _trace_boundary(medial_edges, slots, boundary_ids):
    """Trace the region boundary; return acw directed steps or None."""
    if not boundary_ids:
        return None
    start = min(boundary_ids)
    a, b = medial_edges[start]
    steps = [(a, b, start)]
    used = {start}
    cur_pt, last_edge = b, start
    while cur_pt != a:
        options = [
            k for k in slots[cur_pt].values() if k in boundary_ids and k != last_edge
        ]
        if len(options) != 1 or options[0] in used:
            return None
        k = options[0]
        p, q = medial_edges[k]
        nxt = q if p == cur_pt else p
        steps.append((cur_pt, nxt, k))
        used.add(k)
        cur_pt, last_edge = nxt, k
    if used != boundary_ids:
        return None
    # strict alternation between vertical and horizontal edges
    for (a1, b1, _), (a2, b2, _) in zip(steps, steps[1:] + steps[:1]):
        v1 = a1[0] == b1[0]
        v2 = a2[0] == b2[0]
        if v1 == v2:
            return None
    # orient anticlockwise via the turning number
    total = 0
    n = len(steps)
    for idx in range(n):
        a1, b1, _ = steps[idx]
        a2, b2, _ = steps[(idx + 1) % n]
        d1 = _step_dir(a1, b1)
        d2 = _step_dir(a2, b2)
        total += turn_sign(d1, d2)
    if total == -4:
        steps = [(b, a, k) for a, b, k in reversed(steps)]
    elif total != 4:
        return None
    return tuple(steps)


def _step_dir(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    return {(0, 1): N, (1, 0): E, (0, -1): S, (-1, 0): W}[(dx, dy)]


def make_diamond_domain(center, radius, *_):
    """Even domain covering the L1 ball of ``radius`` faces around ``center``.

    The center face parity must match the radius parity so that the corner
    faces of the diamond are primal.
    """
    ci, cj = center
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if (ci + cj) % 2 != radius % 2:
        raise ValueError(
            f"center parity {((ci + cj) % 2)} incompatible with radius {radius}"
        )
    vertices = [
        (i, j)
        for i in range(ci - radius, ci + radius + 1)
        for j in range(cj - radius, cj + radius + 1)
        if abs(i - ci) + abs(j - cj) <= radius and (i + j) % 2 == 0
    ]
    return EvenDomain(
        vertices,
        descriptor={"kind": "diamond", "center": [ci, cj], "radius": radius},
    )


def is_even_domain(vertices):
    """Whether a finite set of primal faces forms an even domain.

    Total on even-parity inputs: pinch points, straight boundary runs,
    disconnection and holes all yield False rather than an exception.
    """
    vertex_set = frozenset(tuple(v) for v in vertices)
    if not vertex_set:
        return False
    for f in vertex_set:
        if face_parity(f) != 0:
            raise ValueError(f"vertex {f} does not have even parity")

    class _Shell:
        pass

    return _build(_Shell(), vertex_set) is None


@dataclass(frozen=True)
class GammaCycle:
    """The surrounding cycle of a connected same-parity set.

    ``vertices`` lists the opposite-parity faces in cyclic order;
    ``crossed_edges`` gives, for each cycle edge, the same-parity edge of
    the input lattice that it crosses (always in the edge boundary of the
    input set).
    """

    vertices: tuple
    crossed_edges: tuple

    @property
    def edges(self):
        n = len(self.vertices)
        return tuple(
            (self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)
        )


def gamma_of_connected_set(cluster, host=None):
    """Unique cycle in the opposite-parity lattice surrounding ``cluster``.

    The cycle's edges cross exactly edges of the input lattice that leave
    the set.  ``cluster`` must be nonempty, of a single parity, and
    connected under diagonal adjacency.  ``host`` is accepted for interface
    symmetry and ignored: the construction runs on the infinite lattice.
    """
    faces = frozenset(tuple(f) for f in cluster)
    if not faces:
        raise ValueError("empty set has no surrounding cycle")
    parities = {face_parity(f) for f in faces}
    if len(parities) != 1:
        raise ValueError("set mixes primal and dual faces")
    par = parities.pop()

    start_face = min(faces, key=lambda f: (f[1], f[0]))
    seen = {start_face}
    stack = [start_face]
    while stack:
        f = stack.pop()
        for g in diagonal_neighbors(f):
            if g in faces and g not in seen:
                seen.add(g)
                stack.append(g)
    if len(seen) != len(faces):
        raise ValueError("set is not connected in its lattice")

    # walk the outer interface anticlockwise, set faces on the left
    i, j = start_face
    start_step = ((i, j), (i + 1, j))
    outside = []
    cur = start_step
    guard = 16 * (len(faces) + 4) ** 2 + 64
    while True:
        a, b = cur
        d = _step_dir(a, b)
        outside.append(right_face(a, d))
        pairing = _set_walk_pairing(b, faces, par)
        d_out = pairing[OPPOSITE[d]]
        nxt = (b, (b[0] + DIR_VEC[d_out][0], b[1] + DIR_VEC[d_out][1]))
        if nxt == start_step:
            break
        cur = nxt
        guard -= 1
        if guard <= 0:
            raise AssertionError("surrounding walk failed to close")

    ring = []
    for f in outside:
        if not ring or ring[-1] != f:
            ring.append(f)
    while len(ring) > 1 and ring[0] == ring[-1]:
        ring.pop()
    ring = _excise_balloons(ring, start_face)
    if len(set(ring)) != len(ring):
        raise AssertionError("surrounding cycle revisits a face")
    if winding_number(ring, start_face) != 1:
        raise AssertionError("surrounding cycle does not wind once around the set")

    crossed = []
    n = len(ring)
    for idx in range(n):
        g1, g2 = ring[idx], ring[(idx + 1) % n]
        di, dj = g2[0] - g1[0], g2[1] - g1[1]
        if abs(di) != 1 or abs(dj) != 1:
            raise AssertionError("surrounding cycle steps are not diagonal")
        v = crossing_vertex(g1, g2)
        edge = tuple(sorted(primal_pair_at(v) if par == 0 else dual_pair_at(v)))
        if (edge[0] in faces) + (edge[1] in faces) != 1:
            raise AssertionError("surrounding cycle crosses a non-boundary edge")
        crossed.append(edge)
    return GammaCycle(vertices=tuple(ring), crossed_edges=tuple(crossed))


def _excise_balloons(ring, witness):
    """Remove cavity excursions from the exterior walk of a face set.

    The hugging walk dives into cavities whose mouth is a single
    opposite-parity face; the surrounding cycle instead crosses the mouth
    face once.  Whenever a face repeats, exactly one of the two sub-walks
    between its occurrences winds around the set (checked at ``witness``);
    the other is a cavity balloon and is dropped.
    """
    while True:
        first = {}
        repeat = None
        for idx, f in enumerate(ring):
            if f in first:
                repeat = (first[f], idx)
                break
            first[f] = idx
        if repeat is None:
            return ring
        i, j = repeat
        balloon = ring[i:j]
        remainder = ring[:i] + ring[j:]
        wb = winding_number(balloon, witness)
        wr = winding_number(remainder, witness)
        if wb == 0 and wr != 0:
            ring = remainder
        elif wr == 0 and wb != 0:
            ring = balloon
        else:
            raise AssertionError("ambiguous cavity excision in the surrounding walk")


def _set_walk_pairing(v, faces, par):
    """Strand pairing at a medial vertex for the walk around a face set.

    The diagonal of the set's parity is treated as connected when both of
    its faces belong to the set; the strands then flank it, otherwise they
    hug the set-parity faces.
    """
    ne, nw, sw, se = faces_around_vertex(v)
    vertex_par = (v[0] + v[1]) & 1
    if par == vertex_par:
        pair_faces = (ne, sw)
    else:
        pair_faces = (nw, se)
    both_in = pair_faces[0] in faces and pair_faces[1] in faces
    hug_is_a = par == vertex_par  # set-parity faces sit NE/SW exactly then
    use_a = hug_is_a != both_in
    return PAIRING_A if use_a else PAIRING_B


def winding_number(polygon, point):
    """Winding number of a closed face-center polygon around a face center.

    ``polygon`` and ``point`` are faces; centers sit at half-integers, so
    doubled coordinates keep the computation exact.
    """
    px, py = 2 * point[0] + 1, 2 * point[1] + 1
    wind = 0
    n = len(polygon)
    for idx in range(n):
        x1, y1 = 2 * polygon[idx][0] + 1, 2 * polygon[idx][1] + 1
        x2, y2 = 2 * polygon[(idx + 1) % n][0] + 1, 2 * polygon[(idx + 1) % n][1] + 1
        if y1 <= py < y2:
            if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) > 0:
                wind += 1
        elif y2 <= py < y1:
            if (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1) < 0:
                wind -= 1
    return wind
