"""Geometric link constraints and inter-plane candidate enumeration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .orbits import Constellation, _as_flat

SNAPSHOT = "snapshot"
VIABILITY = "viability"


@dataclass(frozen=True)
class TimeWindow:
    """Sampling grid ``start_s, start_s + step_s, ..., start_s + length_s``."""

    start_s: float = 0.0
    length_s: float = 6000.0
    step_s: float = 30.0

    def __post_init__(self):
        if self.length_s < 0:
            raise ValueError(f"length_s must be >= 0, got {self.length_s}")
        if not self.step_s > 0:
            raise ValueError(f"step_s must be > 0, got {self.step_s}")
        if self.length_s > 0 and self.step_s > self.length_s:
            raise ValueError("step_s must not exceed length_s")

    def sample_times(self) -> np.ndarray:
        n = int(math.floor(self.length_s / self.step_s + 1e-9))
        offsets = self.step_s * np.arange(n + 1)
        if offsets[-1] < self.length_s:
            offsets = np.append(offsets, self.length_s)
        return self.start_s + offsets


@dataclass(frozen=True)
class FeasibilityVariant:
    """Which feasibility test governs the candidate links.

    ``snapshot`` checks the constraints only at ``window.start_s``;
    ``viability`` requires them at every sample of ``window``.
    """

    kind: str = VIABILITY
    window: TimeWindow = field(default_factory=TimeWindow)

    def __post_init__(self):
        if self.kind not in (SNAPSHOT, VIABILITY):
            raise ValueError(f"kind must be '{SNAPSHOT}' or '{VIABILITY}', got {self.kind!r}")

    @classmethod
    def snapshot(cls, t0: float = 0.0) -> "FeasibilityVariant":
        return cls(SNAPSHOT, TimeWindow(t0, 6000.0, 30.0))

    @classmethod
    def viability(cls, t0: float = 0.0, length_s: float = 6000.0, step_s: float = 30.0) -> "FeasibilityVariant":
        return cls(VIABILITY, TimeWindow(t0, length_s, step_s))

    @property
    def t0(self) -> float:
        return self.window.start_s


def distance_feasible(xu, xv, d_max: float) -> bool:
    return bool(np.linalg.norm(np.subtract(xu, xv)) <= d_max)


def los_clear(xu, xv, earth_radius_km: float) -> bool:
    """Distance from Earth's centre to the line through ``xu`` and ``xv`` exceeds the radius."""
    sep = np.linalg.norm(np.subtract(xu, xv))
    if sep == 0.0:
        raise ValueError("line of sight undefined for coincident positions")
    return bool(np.linalg.norm(np.cross(xu, xv)) / sep > earth_radius_km)


def _pairs_feasible(xu: np.ndarray, xv: np.ndarray, d_max: float, earth_radius_km: float) -> np.ndarray:
    """Vectorised distance and line-of-sight test over rows of ``xu``/``xv``."""
    sep = np.linalg.norm(xu - xv, axis=-1)
    if np.any(sep == 0.0):
        raise ValueError("line of sight undefined for coincident positions")
    ratio = np.linalg.norm(np.cross(xu, xv), axis=-1) / sep
    return (sep <= d_max) & (ratio > earth_radius_km)


def link_feasible_at(constellation: Constellation, u, v, t: float, d_max: float, earth_radius_km: float) -> bool:
    cfg = constellation.config
    u, v = _as_flat(u, cfg), _as_flat(v, cfg)
    if u == v:
        raise ValueError("a link needs two distinct satellites")
    xu, xv = constellation.positions(t, [u, v])
    return distance_feasible(xu, xv, d_max) and los_clear(xu, xv, earth_radius_km)


def pairs_viable(constellation: Constellation, pairs, window: TimeWindow, d_max: float, earth_radius_km: float) -> np.ndarray:
    """Boolean per pair: feasible at every sample of ``window``."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    ok = np.ones(len(pairs), dtype=bool)
    if len(pairs) == 0:
        return ok
    for t in window.sample_times():
        pos = constellation.positions(t)
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            break
        ok[idx] = _pairs_feasible(pos[pairs[idx, 0]], pos[pairs[idx, 1]], d_max, earth_radius_km)
    return ok


def viable_over_window(constellation: Constellation, u, v, variant: FeasibilityVariant, d_max: float, earth_radius_km: float) -> bool:
    if variant.kind != VIABILITY:
        raise ValueError("viable_over_window needs a viability variant")
    cfg = constellation.config
    u, v = _as_flat(u, cfg), _as_flat(v, cfg)
    if u == v:
        raise ValueError("a link needs two distinct satellites")
    return bool(pairs_viable(constellation, [(u, v)], variant.window, d_max, earth_radius_km)[0])


class CandidateSet:
    """Feasible inter-plane links, per satellite sorted by distance at ``t0``.

    ``pairs`` holds each unordered pair once as ``(min, max)`` flat indices.
    """

    def __init__(self, num_planes: int, satellites_per_plane: int, pairs, distances, variant: FeasibilityVariant):
        self.num_planes = num_planes
        self.satellites_per_plane = satellites_per_plane
        self.variant = variant
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        distances = np.asarray(distances, dtype=float).reshape(-1)
        pairs = np.sort(pairs, axis=1)
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        self.pairs = pairs[order]
        self.pair_distances = distances[order]
        n = self.num_satellites
        self._keys = set((self.pairs[:, 0] * n + self.pairs[:, 1]).tolist())

        # Per-satellite lists: both directions, sorted by (distance, neighbour).
        src = np.concatenate([self.pairs[:, 0], self.pairs[:, 1]])
        dst = np.concatenate([self.pairs[:, 1], self.pairs[:, 0]])
        dist = np.concatenate([self.pair_distances, self.pair_distances])
        order = np.lexsort((dst, dist, src))
        src, dst, dist = src[order], dst[order], dist[order]
        bounds = np.searchsorted(src, np.arange(n + 1))
        self._neighbors = [dst[bounds[i]:bounds[i + 1]] for i in range(n)]
        self._distances = [dist[bounds[i]:bounds[i + 1]] for i in range(n)]

    @property
    def num_satellites(self) -> int:
        return self.num_planes * self.satellites_per_plane

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        u, v = int(pair[0]), int(pair[1])
        if u > v:
            u, v = v, u
        return u * self.num_satellites + v in self._keys

    def neighbors(self, u: int) -> np.ndarray:
        return self._neighbors[u]

    def distances(self, u: int) -> np.ndarray:
        return self._distances[u]

    def counts(self) -> np.ndarray:
        return np.array([len(nb) for nb in self._neighbors])


def enumerate_candidates(constellation: Constellation, variant: FeasibilityVariant, d_max: float = None, earth_radius_km: float = None) -> CandidateSet:
    """All inter-plane pairs passing the variant's test.

    ``d_max`` and ``earth_radius_km`` default to the constellation config.
    """
    cfg = constellation.config
    d_max = cfg.max_isl_distance_km if d_max is None else d_max
    earth_radius_km = cfg.earth_radius_km if earth_radius_km is None else earth_radius_km
    n, ns = cfg.num_satellites, cfg.satellites_per_plane

    pos = constellation.positions(variant.t0)
    plane = np.arange(n) // ns
    us, vs = [], []
    # row blocks keep the pairwise arrays small
    for start in range(0, n, 256):
        rows = np.arange(start, min(start + 256, n))
        diff = pos[rows, None, :] - pos[None, :, :]
        sep = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        mask = (sep <= d_max) & (plane[rows, None] != plane[None, :]) & (rows[:, None] < np.arange(n)[None, :])
        i, j = np.nonzero(mask)
        us.append(rows[i])
        vs.append(j)
    u = np.concatenate(us)
    v = np.concatenate(vs)
    if len(u):
        keep = _pairs_feasible(pos[u], pos[v], d_max, earth_radius_km)
        u, v = u[keep], v[keep]
    if variant.kind == VIABILITY and len(u):
        keep = pairs_viable(constellation, np.column_stack([u, v]), variant.window, d_max, earth_radius_km)
        u, v = u[keep], v[keep]
    dist = np.linalg.norm(pos[u] - pos[v], axis=-1)
    return CandidateSet(cfg.num_planes, ns, np.column_stack([u, v]), dist, variant)
