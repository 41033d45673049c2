"""Hop-count metrics, link stability, propagation delay and lower bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .feasibility import CandidateSet, FeasibilityVariant, TimeWindow, pairs_viable
from .orbits import Constellation, ConstellationConfig, SatelliteId
from .topology import Topology

SPEED_OF_LIGHT_KM_S = 3.0e5
INF = math.inf


@dataclass
class EvalReport:
    diameter_hops: float
    mean_eccentricity_hops: float
    mean_pairwise_hops: float
    stability_fraction: float
    worst_case_delay_ms: float
    per_source_eccentricity: list = field(repr=False)
    diameter_witness_path: list = field(default_factory=list)
    delay_witness_path: list = field(default_factory=list, repr=False)

    @property
    def connected(self) -> bool:
        return math.isfinite(self.diameter_hops)


def _arrays(topology: Topology):
    return topology.node_count, topology.satellites_per_plane, topology.inter, topology.inter_degree


def bfs_eccentricity(topology: Topology, source: int):
    """Hop distances from ``source``; unreachable nodes get ``math.inf``."""
    dist = _kernels.bfs_hops(int(source), *_arrays(topology))
    hops = [int(d) if d >= 0 else INF for d in dist]
    return max(hops), hops


def hop_summary(topology: Topology):
    """``(diameter, mean eccentricity, mean pairwise hops, eccentricities)``; the hot path."""
    n = topology.node_count
    ecc, hop_sum = _kernels.bitset_eccentricity(*_arrays(topology))
    if np.any(ecc < 0):
        return INF, INF, INF, np.full(n, INF)
    mean_pairwise = float(hop_sum.sum()) / (n * (n - 1)) if n > 1 else 0.0
    return int(ecc.max()), float(ecc.sum()) / n, mean_pairwise, ecc


def stability_fraction(topology: Topology, constellation: Constellation, window: TimeWindow, d_max: float, earth_radius_km: float) -> float:
    """Share of inter links feasible over the whole window; 1.0 with no inter links."""
    edges = topology.inter_edge_array()
    if len(edges) == 0:
        return 1.0
    return float(pairs_viable(constellation, edges, window, d_max, earth_radius_km).mean())


def _path_to(pred: np.ndarray, target: int) -> list[int]:
    path = [int(target)]
    while pred[path[-1]] >= 0:
        path.append(int(pred[path[-1]]))
    return path[::-1]


def shortest_path(topology: Topology, constellation: Constellation, source: int, target: int, t0: float = 0.0) -> list[int]:
    """Min-hop path, ties broken by minimum total length at ``t0``."""
    pos = constellation.positions(t0)
    dist, _, pred = _kernels.bfs_hops_lengths(int(source), *_arrays(topology.canonical()), pos)
    if dist[target] < 0:
        raise ValueError(f"satellite {target} unreachable from {source}")
    return _path_to(pred, target)


def worst_case_delay(topology: Topology, constellation: Constellation, t0: float = 0.0, c_km_s: float = SPEED_OF_LIGHT_KM_S):
    """Largest one-way propagation delay (ms) over min-hop, min-length routes.

    Returns ``(delay_ms, witness_path)`` with the path as flat indices.
    """
    topo = topology.canonical()
    pos = constellation.positions(t0)
    length, s, t = _kernels.all_source_max_length(*_arrays(topo), pos)
    if math.isinf(length):
        cfg = constellation.config
        raise ValueError(f"topology is disconnected: {cfg.sat_id(s).label()} cannot reach {cfg.sat_id(t).label()}")
    _, _, pred = _kernels.bfs_hops_lengths(int(s), *_arrays(topo), pos)
    return 1e3 * length / c_km_s, _path_to(pred, t)


def evaluate(topology: Topology, constellation: Constellation, window=None, d_max: float = None, earth_radius_km: float = None) -> EvalReport:
    """Full metrics for one topology.

    ``window`` is the stability window (a TimeWindow or FeasibilityVariant);
    its start is also the epoch for link lengths.
    """
    cfg = constellation.config
    if window is None:
        window = TimeWindow()
    elif isinstance(window, FeasibilityVariant):
        window = window.window
    d_max = cfg.max_isl_distance_km if d_max is None else d_max
    earth_radius_km = cfg.earth_radius_km if earth_radius_km is None else earth_radius_km

    topo = topology.canonical()
    diameter, mean_ecc, mean_pair, ecc = hop_summary(topo)
    sigma = stability_fraction(topo, constellation, window, d_max, earth_radius_km)
    if math.isinf(diameter):
        return EvalReport(INF, INF, INF, sigma, INF, [INF] * topo.node_count, [], [])

    source = int(np.argmax(ecc == diameter))
    pos = constellation.positions(window.start_s)
    dist, _, pred = _kernels.bfs_hops_lengths(source, *_arrays(topo), pos)
    target = int(np.argmax(dist == diameter))
    delay_ms, delay_path = worst_case_delay(topo, constellation, window.start_s)
    return EvalReport(
        diameter_hops=diameter,
        mean_eccentricity_hops=mean_ecc,
        mean_pairwise_hops=mean_pair,
        stability_fraction=sigma,
        worst_case_delay_ms=delay_ms,
        per_source_eccentricity=[int(e) for e in ecc],
        diameter_witness_path=[cfg.sat_id(u) for u in _path_to(pred, target)],
        delay_witness_path=[cfg.sat_id(u) for u in delay_path],
    )


def theoretical_lower_bound(config: ConstellationConfig, c_km_s: float = SPEED_OF_LIGHT_KM_S):
    """Hop and delay floor for the half-circumference between antipodal satellites."""
    if config.max_isl_distance_km <= 0:
        raise ValueError("max_isl_distance_km must be > 0")
    arc = math.pi * config.orbital_radius_km
    return math.ceil(arc / config.max_isl_distance_km), 1e3 * arc / c_km_s


def dense_link_cap(candidates: CandidateSet) -> int:
    counts = candidates.counts()
    mean = float(counts.mean()) if len(counts) else 0.0
    return math.ceil(mean) + 1


def allpairs_oracle(topology: Topology) -> np.ndarray:
    """All-pairs hop matrix by min-plus relaxation over an explicit edge list.

    Test-scale only (at most 200 nodes); unreachable entries are ``inf``.
    """
    n = topology.node_count
    if n > 200:
        raise ValueError(f"allpairs_oracle is limited to 200 nodes, got {n}")
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in topology.intra_edges() + topology.inter_edges():
        d[u, v] = d[v, u] = 1.0
    for k in range(n):
        for i in range(n):
            np.minimum(d[i], d[i, k] + d[k], out=d[i])
    return d


def path_labels(path) -> list[str]:
    return [p.label() if isinstance(p, SatelliteId) else str(p) for p in path]
