from collections import deque

import numpy as np
import pytest

from iontoric.decoder import (PLAQUETTE, STAR, _match_parities,
                              _pair_crossings, build_graph, correction_edges,
                              extract_defects, judge, logical_overlap, mwpm,
                              pairwise_distance, signed_torus_delta,
                              syndrome_of)
from iontoric.toric import build_layout


def test_extract_empty():
    stars, plaqs = extract_defects(np.zeros((4, 18), dtype=np.uint8), 3)
    assert stars.shape == (0, 3) and plaqs.shape == (0, 3)


def test_extract_single_data_error():
    # a persistent X error flips two plaquettes from round 1 on: defects
    # appear only at round 1 (spatial pair)
    d = 3
    hist = np.zeros((4, 18), dtype=np.uint8)
    hist[1:, 9 + 0] = 1
    hist[1:, 9 + 2] = 1
    stars, plaqs = extract_defects(hist, d)
    assert stars.shape == (0, 3)
    assert plaqs.shape == (2, 3)
    assert (plaqs[:, 0] == 1).all()


def test_extract_measurement_flip():
    # one flipped outcome at round 1 -> temporal defect pair at rounds 1, 2
    hist = np.zeros((4, 18), dtype=np.uint8)
    hist[1, 4] = 1
    stars, plaqs = extract_defects(hist, 3)
    assert plaqs.shape == (0, 3)
    assert stars.shape == (2, 3)
    assert sorted(stars[:, 0]) == [1, 2]
    assert (stars[:, 1] == 1).all() and (stars[:, 2] == 1).all()


def test_extract_odd_count_panics():
    hist = np.zeros((2, 18), dtype=np.uint8)
    hist[1, 0] = 1  # single unpaired defect
    with pytest.raises(AssertionError, match="parity"):
        extract_defects(hist, 3)


def test_pairwise_distance_basics():
    assert pairwise_distance((0, 1, 1), (0, 1, 1), 5) == 0
    # raw separation 3 wraps to 2 on a d=5 torus
    assert pairwise_distance((0, 0, 0), (0, 0, 3), 5) == 2
    assert pairwise_distance((2, 0, 0), (0, 0, 3), 5) == 4
    assert signed_torus_delta(3, 5) == -2
    assert signed_torus_delta(2, 5) == 2


def _bfs_distance(a, b, d, t_max):
    """Shortest-path oracle on the explicit space-time lattice graph."""
    start = tuple(a)
    goal = tuple(b)
    seen = {start: 0}
    q = deque([start])
    while q:
        node = q.popleft()
        if node == goal:
            return seen[node]
        t, r, c = node
        nbrs = [(t, (r + 1) % d, c), (t, (r - 1) % d, c),
                (t, r, (c + 1) % d), (t, r, (c - 1) % d)]
        if t + 1 <= t_max:
            nbrs.append((t + 1, r, c))
        if t - 1 >= 0:
            nbrs.append((t - 1, r, c))
        for nb in nbrs:
            if nb not in seen:
                seen[nb] = seen[node] + 1
                q.append(nb)
    raise AssertionError("unreachable")


def test_pairwise_distance_matches_bfs():
    rng = np.random.default_rng(17)
    for d in (3, 5, 7):
        for _ in range(40):
            a = (int(rng.integers(0, 4)), int(rng.integers(0, d)),
                 int(rng.integers(0, d)))
            b = (int(rng.integers(0, 4)), int(rng.integers(0, d)),
                 int(rng.integers(0, d)))
            assert pairwise_distance(a, b, d) == _bfs_distance(a, b, d, 5)


def test_mwpm_two_defects():
    graph = build_graph(np.array([[0, 0, 0], [1, 2, 1]]), 5, STAR)
    m = mwpm(graph)
    assert m.pairs == ((0, 1),)
    assert m.total_weight == pairwise_distance((0, 0, 0), (1, 2, 1), 5)


def test_correction_cancels_simple_error():
    d = 5
    layout = build_layout(d)
    # X error on edge h(1,1): plaquette defects at faces (0,1) and (1,1)
    err = np.zeros(layout.n_data, dtype=np.uint8)
    err[layout.h_edge(1, 1)] = 1
    syn = syndrome_of(err, layout, PLAQUETTE)
    faces = np.nonzero(syn)[0]
    coords = np.array([[1, f // d, f % d] for f in faces])
    graph = build_graph(coords, d, PLAQUETTE)
    m = mwpm(graph)
    corr = correction_edges(graph, m, layout)
    assert np.array_equal(corr, err)  # unique weight-1 path


def test_correction_clears_syndrome_random():
    # homological soundness: correction always reproduces the defect
    # syndrome, so error + correction is closed
    rng = np.random.default_rng(23)
    d = 5
    layout = build_layout(d)
    for _ in range(50):
        err = (rng.random(layout.n_data) < 0.08).astype(np.uint8)
        syn = syndrome_of(err, layout, PLAQUETTE)
        faces = np.nonzero(syn)[0]
        coords = np.array([[0, f // d, f % d] for f in faces]).reshape(-1, 3)
        graph = build_graph(coords, d, PLAQUETTE)
        m = mwpm(graph)
        corr = correction_edges(graph, m, layout)
        residual = err ^ corr
        assert syndrome_of(residual, layout, PLAQUETTE).sum() == 0


def test_judge_non_contractible_loop_fails():
    d = 3
    layout = build_layout(d)
    err = np.zeros(layout.n_data, dtype=np.uint8)
    err[list(layout.logical_x[0])] = 1  # undetectable X logical
    assert syndrome_of(err, layout, PLAQUETTE).sum() == 0
    empty = build_graph(np.empty((0, 3), dtype=np.int64), d, PLAQUETTE)
    empty_star = build_graph(np.empty((0, 3), dtype=np.int64), d, STAR)
    fail_x, fail_z = judge(mwpm(empty_star), empty_star, mwpm(empty), empty,
                           err, np.zeros_like(err), layout)
    assert any(fail_x) and not any(fail_z)


def test_fast_parities_match_explicit_chains():
    rng = np.random.default_rng(31)
    for d in (3, 5, 7):
        layout = build_layout(d)
        for check_type, face_flag, loops in (
                (PLAQUETTE, True, layout.logical_z),
                (STAR, False, layout.logical_x)):
            for _ in range(40):
                n = 2 * int(rng.integers(1, 5))
                coords = np.stack([
                    rng.integers(0, 4, n), rng.integers(0, d, n),
                    rng.integers(0, d, n)], axis=1).astype(np.int64)
                graph = build_graph(coords, d, check_type)
                m = mwpm(graph)
                corr = correction_edges(graph, m, layout)
                explicit = logical_overlap(corr, loops)
                p1, p2 = _match_parities(
                    coords[:, 0].copy(), coords[:, 1].copy(),
                    coords[:, 2].copy(), d, face_flag)
                assert (p1, p2) == explicit, (d, check_type, coords)


def test_pair_crossings_zero_for_same_point():
    assert _pair_crossings(2, 2, 2, 2, 5, True) == (0, 0)
    assert _pair_crossings(1, 1, 1, 1, 5, False) == (0, 0)


def _decode_data_error(err_x, err_z, layout):
    """Perfect-measurement decode of a static data error; returns residual
    logical parities (fail_x, fail_z)."""
    d = layout.d
    corr = {}
    for err, check_type in ((err_x, PLAQUETTE), (err_z, STAR)):
        syn = syndrome_of(err, layout, check_type)
        locs = np.nonzero(syn)[0]
        coords = np.array([[0, k // d, k % d] for k in locs]).reshape(-1, 3)
        graph = build_graph(coords, d, check_type)
        corr[check_type] = correction_edges(graph, mwpm(graph), layout)
    fail_x = logical_overlap(err_x ^ corr[PLAQUETTE], layout.logical_z)
    fail_z = logical_overlap(err_z ^ corr[STAR], layout.logical_x)
    return fail_x, fail_z


def test_weight_one_errors_always_corrected_d3():
    layout = build_layout(3)
    for edge in range(layout.n_data):
        for pauli in "XYZ":
            err_x = np.zeros(layout.n_data, dtype=np.uint8)
            err_z = np.zeros(layout.n_data, dtype=np.uint8)
            if pauli in "XY":
                err_x[edge] = 1
            if pauli in "ZY":
                err_z[edge] = 1
            fail_x, fail_z = _decode_data_error(err_x, err_z, layout)
            assert not any(fail_x) and not any(fail_z), (edge, pauli)


def test_weight_two_errors_corrected_d5():
    layout = build_layout(5)
    rng = np.random.default_rng(47)
    for _ in range(300):
        edges = rng.choice(layout.n_data, size=2, replace=False)
        paulis = rng.choice(list("XYZ"), size=2)
        err_x = np.zeros(layout.n_data, dtype=np.uint8)
        err_z = np.zeros(layout.n_data, dtype=np.uint8)
        for e, p in zip(edges, paulis):
            if p in "XY":
                err_x[e] = 1
            if p in "ZY":
                err_z[e] = 1
        fail_x, fail_z = _decode_data_error(err_x, err_z, layout)
        assert not any(fail_x) and not any(fail_z), (edges, paulis)


def test_cutoff_neighborhood_above_node_budget():
    # above the node budget the matcher prefers pairs inside the 2d
    # neighborhood: tight local pairs must be matched together even though
    # a global shuffle of the same total cardinality exists
    import time

    rng = np.random.default_rng(3)
    d = 29
    n = 1002
    rows = rng.integers(0, d, n // 2)
    cols = rng.integers(0, d, n // 2)
    coords = np.empty((n, 3), dtype=np.int64)
    coords[0::2, 0] = 0
    coords[0::2, 1] = rows
    coords[0::2, 2] = cols
    coords[1::2, 0] = 1  # twin one time step later, same place
    coords[1::2, 1] = rows
    coords[1::2, 2] = cols
    graph = build_graph(coords, d, PLAQUETTE)
    t0 = time.time()
    m = mwpm(graph)
    assert len(m.pairs) == n // 2
    # a perfect all-local matching exists (the twins), so no pair may be
    # forced past the cutoff, and the result can't cost more than the twins
    assert all(graph.weights[i, j] <= 2 * d for i, j in m.pairs)
    assert m.total_weight <= n // 2
    assert time.time() - t0 < 120
