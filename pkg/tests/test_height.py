import pytest
from hypothesis import given, settings, strategies as st

from fksix.height import (
    height_clusters,
    height_from_arrows,
    height_from_loops,
    loop_surrounds,
    nested_sequence,
    precedes,
    wind_sum_field,
)
from fksix.lattice import face_parity
from fksix.loops import extract_loops, orient_loops
from fksix.random_cluster import BondConfig
from fksix.rng import orientation_stream
from fksix.six_vertex import enumerate_6v, split_inverse


def oriented_configs(domain):
    from fksix.loops import OrientedLoopConfig

    for mask in range(1 << domain.n_edges):
        lc = extract_loops(BondConfig.from_int(domain, mask))
        interior = [k for k, lp in enumerate(lc.loops) if not lp.is_boundary]
        for assign in range(1 << len(interior)):
            xi = [1] * len(lc.loops)
            for pos, k in enumerate(interior):
                if (assign >> pos) & 1:
                    xi[k] = -1
            yield BondConfig(domain, lc.bits), OrientedLoopConfig(base=lc, xi=tuple(xi))


def test_base_height_zero(diamond1):
    cfg = next(iter(enumerate_6v(diamond1)))
    h = height_from_arrows(cfg, (0, 0))
    assert h[(0, 0)] == 0


def test_base_outside_rejected(diamond1):
    cfg = next(iter(enumerate_6v(diamond1)))
    with pytest.raises(ValueError):
        height_from_arrows(cfg, (10, 10))


def test_unit_gradient(diamond1):
    for cfg in enumerate_6v(diamond1):
        h = height_from_arrows(cfg, (0, 0))
        for (i, j) in diamond1.covered_list:
            for g in ((i + 1, j), (i, j + 1)):
                if g in diamond1.covered_faces:
                    assert abs(h[(i, j)] - h[g]) == 1


def test_path_independence_via_plaquettes(diamond2):
    # the height around the four faces of each internal vertex closes
    from fksix.height import step_increment

    for cfg in enumerate_6v(diamond2):
        for v in diamond2.internal_medial_vertices:
            x, y = v
            cycle = [(x, y), (x - 1, y), (x - 1, y - 1), (x, y - 1)]
            if not all(f in cfg.domain.covered_faces for f in cycle):
                continue
            total = 0
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                total += step_increment(cfg.arrows, cfg.domain, a, b)
            assert total == 0


def test_second_path_agrees(diamond2):
    # integrate along two different trees: BFS and a column-then-row path
    from fksix.height import step_increment

    cfg = next(iter(enumerate_6v(diamond2)))
    h = height_from_arrows(cfg, (0, 0))
    for target in diamond2.covered_list:
        path = _l_path((0, 0), target, diamond2)
        if path is None:
            continue
        total = 0
        for a, b in zip(path, path[1:]):
            total += step_increment(cfg.arrows, cfg.domain, a, b)
        assert total == h[target]


def _l_path(src, dst, domain):
    path = [src]
    cur = list(src)
    while cur[0] != dst[0]:
        cur[0] += 1 if dst[0] > cur[0] else -1
        if tuple(cur) not in domain.covered_faces:
            return None
        path.append(tuple(cur))
    while cur[1] != dst[1]:
        cur[1] += 1 if dst[1] > cur[1] else -1
        if tuple(cur) not in domain.covered_faces:
            return None
        path.append(tuple(cur))
    return path


def test_loop_height_example(diamond1):
    # all edges open, both loops anticlockwise: the center face sits inside
    # one extra loop than the base, so its height is -1
    cfg = BondConfig.all_open(diamond1)
    olc = orient_loops(extract_loops(cfg), 1.0, coins=[0.0, 0.0])
    h = height_from_loops(olc, (0, 0))
    assert h[(0, 0)] == 0
    assert h[(1, 0)] == -1


def test_flipping_a_loop_shifts_separated_faces(diamond1):
    cfg = BondConfig.all_open(diamond1)
    lc = extract_loops(cfg)
    up = orient_loops(lc, 1.0, coins=[0.0, 0.0])
    down = orient_loops(lc, 1.0, coins=[1.0, 1.0])  # interior loop clockwise
    h_up = height_from_loops(up, (0, 0))
    h_down = height_from_loops(down, (0, 0))
    assert h_down[(1, 0)] - h_up[(1, 0)] == 2
    assert h_down[(0, 0)] == h_up[(0, 0)] == 0


def test_oracle_equivalence_exhaustive_radius1(diamond1):
    for cfg, olc in oriented_configs(diamond1):
        sigma = split_inverse(olc)
        for base in [(0, 0), (1, 1)]:
            ha = height_from_arrows(sigma, base)
            hl = height_from_loops(olc, base)
            assert ha.values == hl.values


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=(1 << 24) - 1), st.integers(min_value=0, max_value=999))
def test_oracle_equivalence_random_radius3(diamond3, mask, coin_seed):
    cfg = BondConfig.from_int(diamond3, mask)
    lc = extract_loops(cfg)
    coins = orientation_stream(coin_seed, 0).random(len(lc.loops))
    olc = orient_loops(lc, 0.7, coins=coins)
    sigma = split_inverse(olc)
    ha = height_from_arrows(sigma, (1, 2))
    hl = height_from_loops(olc, (1, 2))
    assert ha.values == hl.values


def test_wind_field_matches_per_loop_surround(diamond2):
    cfg = BondConfig.from_int(diamond2, 1234)
    lc = extract_loops(cfg)
    coins = orientation_stream(9, 0).random(len(lc.loops))
    olc = orient_loops(lc, 1.0, coins=coins)
    w = wind_sum_field(olc)
    for f in diamond2.covered_list:
        direct = sum(
            x * loop_surrounds(lp, f) for lp, x in zip(lc.loops, olc.xi)
        )
        assert w[f] == direct


def test_height_clusters_parity_pure(diamond2):
    for cfg in enumerate_6v(diamond2):
        h = height_from_arrows(cfg, (0, 0))
        clusters = height_clusters(h)
        covered = set()
        for cl in clusters:
            assert len({face_parity(f) for f in cl.faces}) == 1
            assert all(h[f] == cl.height for f in cl.faces)
            covered |= cl.faces
        assert covered == set(diamond2.covered_list)


def test_covering_pair_property(diamond2):
    # for each edge whose dual endpoints are covered, at least one of the
    # edge and its dual has equal heights at its endpoints
    for cfg in enumerate_6v(diamond2):
        h = height_from_arrows(cfg, (0, 0))
        for (a, b), (c, d) in zip(diamond2.primal_edges, diamond2.dual_edges):
            primal_eq = h[a] == h[b]
            if c in diamond2.covered_faces and d in diamond2.covered_faces:
                assert primal_eq or h[c] == h[d]


def test_adjacent_height_clusters_even_gap(diamond2):
    cfg = next(iter(enumerate_6v(diamond2)))
    h = height_from_arrows(cfg, (0, 0))
    clusters = height_clusters(h)
    of_face = {}
    for idx, cl in enumerate(clusters):
        for f in cl.faces:
            of_face[f] = idx
    for a, b in list(diamond2.primal_edges) + [
        d for d in diamond2.dual_edges if d[0] in h.values and d[1] in h.values
    ]:
        if of_face[a] != of_face[b]:
            gap = h[a] - h[b]
            assert gap != 0 and gap % 2 == 0


def test_precedes_examples():
    assert precedes({(0, 0)}, {(1, 0), (0, 1), (-1, 0), (0, -1)})
    assert not precedes({(0, 0)}, {(1, 0), (0, 1), (-1, 0)})
    with pytest.raises(ValueError):
        precedes({(0, 0)}, {(2, 0)})


def test_unique_successor_among_height_clusters(diamond2):
    # every height cluster whose surrounding cycle stays inside the window
    # has exactly one successor among the opposite-parity clusters
    for cfg in list(enumerate_6v(diamond2))[:6]:
        h = height_from_arrows(cfg, (0, 0))
        clusters = height_clusters(h)
        for cl in clusters:
            from fksix.lattice import gamma_of_connected_set

            gamma = gamma_of_connected_set(cl.faces)
            if not all(g in diamond2.covered_faces for g in gamma.vertices):
                continue
            successors = [
                other
                for other in clusters
                if other.parity != cl.parity and set(gamma.vertices) <= other.faces
            ]
            assert len(successors) == 1


def test_nested_sequence_all_open_stops(diamond1):
    cfg = BondConfig.all_open(diamond1)
    olc = orient_loops(extract_loops(cfg), 1.0, coins=[0.0, 0.0])
    seq = nested_sequence(cfg, olc, (0, 0))
    assert seq.increments == ()
    assert seq.stop_reason == "cluster touches the boundary"


def test_nested_sequence_interior_cluster(diamond2):
    cfg = BondConfig.all_closed(diamond2)
    lc = extract_loops(cfg)
    olc = orient_loops(lc, 1.0, coins=[0.5] * len(lc.loops))
    seq = nested_sequence(cfg, olc, (0, 0))
    assert len(seq.increments) == 1
    assert seq.clusters[0] == ((0, 0),)
    assert seq.heights[1] == seq.increments[0]


def test_increments_are_the_orientation_coins(diamond2):
    # bit for bit: the recorded increments equal the coins assigned to the
    # interface loops through the keyed stream
    from fksix.loops import anticlockwise_probability

    lam = 0.8
    p_acw = anticlockwise_probability(lam)
    for sample in range(60):
        mask = int(orientation_stream(77, 1000 + sample).integers(1 << 12))
        cfg = BondConfig.from_int(diamond2, mask)
        lc = extract_loops(cfg)
        coins = orientation_stream(77, sample).random(len(lc.loops))
        olc = orient_loops(lc, lam, coins=coins)
        seq = nested_sequence(cfg, olc, (0, 0))
        for loop_id, xi in zip(seq.loop_ids, seq.increments):
            assert xi == (1 if coins[loop_id] < p_acw else -1)
            assert not lc.loops[loop_id].is_boundary
