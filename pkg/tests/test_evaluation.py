import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isltopo import _kernels
from isltopo.evaluation import (
    allpairs_oracle,
    bfs_eccentricity,
    dense_link_cap,
    evaluate,
    hop_summary,
    theoretical_lower_bound,
    worst_case_delay,
)
from isltopo.feasibility import CandidateSet, FeasibilityVariant, TimeWindow, enumerate_candidates
from isltopo.orbits import Constellation, ConstellationConfig, build_constellation, starlink_shell_config
from isltopo.topology import Topology, build_initial_topology

from conftest import all_cross_plane


def random_topology(rng, num_planes=6, sats=4, cap=2, attempts=30):
    cands = all_cross_plane(num_planes, sats)
    topo = Topology(num_planes, sats, cap)
    for _ in range(attempts):
        u, v = cands.pairs[rng.integers(len(cands))]
        topo.add_inter_link(u, v, cands)
    return topo


def test_ring_only_disconnected():
    topo = Topology(3, 22, 2)
    ecc, hops = bfs_eccentricity(topo, 0)
    assert ecc == math.inf
    assert max(h for h in hops if h != math.inf) == 11


def test_path_distances():
    # plane 0 = {0,1,2}; link 0-3 and 3's ring neighbour 4
    cands = all_cross_plane(2, 3)
    topo = Topology(2, 3, 2)
    topo.add_inter_link(0, 3, cands)
    _, hops = bfs_eccentricity(topo, 1)
    assert hops[:5] == [1, 0, 1, 2, 3]


def test_triangle_oracle():
    d = allpairs_oracle(Topology(1, 3, 0))
    assert np.array_equal(d, 1 - np.eye(3))


def test_ring_oracle():
    assert allpairs_oracle(Topology(1, 22, 0)).max() == 11


def test_oracle_size_guard():
    with pytest.raises(ValueError):
        allpairs_oracle(Topology(10, 21, 2))


def test_bfs_matches_oracle_on_random_graphs():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        topo = random_topology(rng)
        oracle = allpairs_oracle(topo)
        rows = np.array([bfs_eccentricity(topo, s)[1] for s in range(24)], dtype=float)
        assert np.array_equal(rows, oracle)


def test_bitset_kernel_matches_queue_kernel():
    rng = np.random.default_rng(7)
    for cap in (1, 2, 5):
        for _ in range(10):
            topo = random_topology(rng, 8, 5, cap, attempts=60)
            args = (topo.node_count, topo.satellites_per_plane, topo.inter, topo.inter_degree)
            e1, s1 = _kernels.all_source_eccentricity(*args)
            e2, s2 = _kernels.bitset_eccentricity(*args)
            assert np.array_equal(e1, e2)
            assert np.array_equal(s1[e1 >= 0], s2[e2 >= 0])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_hop_matrix_properties(seed):
    rng = np.random.default_rng(seed)
    topo = random_topology(rng)
    d = allpairs_oracle(topo)
    assert np.array_equal(d, d.T)
    finite = np.isfinite(d)
    if finite.all():
        # d[i,j] <= d[i,k] + d[k,j] for all k
        assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :] + 1e-12)
    # removing an edge never shortens anything
    full = random_topology(rng, cap=3, attempts=40)
    edges = full.inter_edges()
    if edges:
        fewer = full.copy()
        fewer.remove_inter_link(*edges[rng.integers(len(edges))])
        assert hop_summary(full)[0] <= hop_summary(fewer)[0]


def test_theoretical_bound_shell(shell_config):
    hops, delay = theoretical_lower_bound(shell_config)
    assert math.pi * 6921 == pytest.approx(21743, abs=1)
    assert hops == 9
    assert delay == pytest.approx(72.5, abs=0.05)


def test_theoretical_bound_single_hop():
    cfg = starlink_shell_config(max_isl_distance_km=30000.0)
    assert theoretical_lower_bound(cfg)[0] == 1


def test_dense_link_cap():
    uneven = CandidateSet(2, 3, [(0, 3), (0, 4), (1, 3), (1, 4), (2, 5), (2, 3)], np.ones(6), FeasibilityVariant.snapshot())
    assert uneven.counts().mean() == 2.0
    assert dense_link_cap(uneven) == 3
    regular = CandidateSet(2, 4, [(u, v) for u in range(4) for v in range(4, 8)], np.ones(16), FeasibilityVariant.snapshot())
    assert np.all(regular.counts() == 4)
    assert dense_link_cap(regular) == 5
    empty = CandidateSet(2, 3, np.empty((0, 2)), [], FeasibilityVariant.snapshot())
    assert dense_link_cap(empty) == 1


def test_single_hop_delay():
    assert 2500 / 3e5 * 1e3 == pytest.approx(8.333, abs=1e-3)


def test_delay_scales_with_lengths(small_constellation):
    cands = enumerate_candidates(small_constellation, FeasibilityVariant.snapshot())
    topo = build_initial_topology(cands, 2, seed=1)
    delay, path = worst_case_delay(topo, small_constellation)
    cfg = small_constellation.config
    from dataclasses import replace

    # double every radius: all positions, hence all link lengths, double
    scaled = Constellation(replace(cfg, earth_radius_km=2 * cfg.earth_radius_km, altitude_km=2 * cfg.altitude_km,
                                   gravitational_parameter_km3s2=8 * cfg.gravitational_parameter_km3s2),
                           small_constellation.phase_offsets_rad)
    delay2, path2 = worst_case_delay(topo, scaled)
    assert delay2 == pytest.approx(2 * delay, rel=1e-12)
    assert path2 == path


def test_delay_on_disconnected_raises():
    c = build_constellation(starlink_shell_config(), 0)
    with pytest.raises(ValueError, match="disconnected"):
        worst_case_delay(Topology(72, 22, 2), c)


def test_evaluate_ring_only(small_constellation):
    cfg = small_constellation.config
    report = evaluate(Topology(cfg.num_planes, cfg.satellites_per_plane, 2), small_constellation)
    assert report.stability_fraction == 1.0
    assert report.diameter_hops == math.inf
    assert not report.connected


def test_evaluate_report_invariants(small_constellation):
    cands = enumerate_candidates(small_constellation, FeasibilityVariant.snapshot())
    topo = build_initial_topology(cands, 2, seed=1)
    report = evaluate(topo, small_constellation, TimeWindow(0, 6000, 30))
    assert report.connected
    ecc = report.per_source_eccentricity
    assert report.diameter_hops == max(ecc)
    assert report.mean_eccentricity_hops == pytest.approx(np.mean(ecc))
    oracle = allpairs_oracle(topo)
    assert report.diameter_hops == oracle.max()
    assert report.mean_pairwise_hops == pytest.approx(oracle.sum() / (144 * 143))
    assert report.diameter_hops >= theoretical_lower_bound(small_constellation.config)[0]

    path = [s.flat(12) for s in report.diameter_witness_path]
    assert len(path) - 1 == report.diameter_hops
    assert oracle[path[0], path[-1]] == report.diameter_hops
    # lowest source realising the diameter, then lowest target
    assert path[0] == int(np.argmax(oracle.max(axis=1) == report.diameter_hops))
    assert path[-1] == int(np.argmax(oracle[path[0]] == report.diameter_hops))
    assert all(topo.has_edge(a, b) for a, b in zip(path, path[1:]))


def test_delay_witness_properties(small_constellation):
    cands = enumerate_candidates(small_constellation, FeasibilityVariant.snapshot())
    topo = build_initial_topology(cands, 2, seed=5)
    delay, path = worst_case_delay(topo, small_constellation)
    oracle = allpairs_oracle(topo)
    pos = small_constellation.positions(0.0)
    assert len(path) - 1 == oracle[path[0], path[-1]]
    lengths = [np.linalg.norm(pos[a] - pos[b]) for a, b in zip(path, path[1:])]
    assert all(topo.has_edge(a, b) for a, b in zip(path, path[1:]))
    assert all(d <= small_constellation.config.max_isl_distance_km for d in lengths)
    assert delay == pytest.approx(sum(lengths) / 3e5 * 1e3, rel=1e-12)


def test_delay_brute_force_small():
    """Min-hop then min-length routes, checked by enumerating all shortest paths."""
    import networkx as nx

    cfg = ConstellationConfig(4, 4, 550, 6371, 0.93, 0.3, 8000.0, 2)
    c = build_constellation(cfg, 2)
    cands = enumerate_candidates(c, FeasibilityVariant.snapshot())
    topo = build_initial_topology(cands, 2, seed=2)
    pos = c.positions(0.0)
    g = nx.Graph()
    for a, b in topo.intra_edges() + topo.inter_edges():
        g.add_edge(a, b)
    best = 0.0
    for s in range(16):
        for t in range(16):
            if s != t:
                lengths = [sum(np.linalg.norm(pos[a] - pos[b]) for a, b in zip(p, p[1:]))
                           for p in nx.all_shortest_paths(g, s, t)]
                best = max(best, min(lengths))
    assert worst_case_delay(topo, c)[0] == pytest.approx(best / 3e5 * 1e3, rel=1e-12)
