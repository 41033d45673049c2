"""Walker-Delta constellation geometry.

Planes are spread over the full 360 degrees of right ascension and every
plane receives a random phase offset drawn uniformly from
``[0, phase_offset_max_rad]``.  Motion is ideal circular two-body motion in
an Earth-centred inertial frame.

Random numbers come from :func:`numpy.random.default_rng` (PCG64), so a
given integer seed produces the same offsets on every platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .utils import check_random_state

MU_EARTH_KM3_S2 = 398600.4418


class SatelliteId(NamedTuple):
    plane: int
    index: int

    def flat(self, satellites_per_plane: int) -> int:
        return self.plane * satellites_per_plane + self.index

    def label(self) -> str:
        return f"{self.plane}:{self.index}"


@dataclass(frozen=True)
class ConstellationConfig:
    """Geometric and hardware parameters of a single shell.

    Angles are in radians, distances in km.
    """

    num_planes: int
    satellites_per_plane: int
    altitude_km: float
    earth_radius_km: float
    inclination_rad: float
    phase_offset_max_rad: float
    max_isl_distance_km: float
    max_inter_links: int
    gravitational_parameter_km3s2: float = MU_EARTH_KM3_S2

    def __post_init__(self):
        checks = [
            ("num_planes", self.num_planes >= 1, "must be >= 1"),
            ("satellites_per_plane", self.satellites_per_plane >= 3, "must be >= 3"),
            ("altitude_km", self.altitude_km > 0, "must be > 0"),
            ("earth_radius_km", self.earth_radius_km > 0, "must be > 0"),
            ("inclination_rad", 0 <= self.inclination_rad <= math.pi, "must lie in [0, pi]"),
            ("phase_offset_max_rad", self.phase_offset_max_rad >= 0, "must be >= 0"),
            ("max_isl_distance_km", self.max_isl_distance_km > 0, "must be > 0"),
            ("max_inter_links", self.max_inter_links >= 0, "must be >= 0"),
            ("gravitational_parameter_km3s2", self.gravitational_parameter_km3s2 > 0, "must be > 0"),
        ]
        for name, ok, msg in checks:
            if not ok:
                raise ValueError(f"{name} {msg}, got {getattr(self, name)!r}")
        for name in ("num_planes", "satellites_per_plane", "max_inter_links"):
            if int(getattr(self, name)) != getattr(self, name):
                raise ValueError(f"{name} must be an integer, got {getattr(self, name)!r}")

    @property
    def num_satellites(self) -> int:
        return self.num_planes * self.satellites_per_plane

    @property
    def orbital_radius_km(self) -> float:
        return self.earth_radius_km + self.altitude_km

    def sat_id(self, flat_index: int) -> SatelliteId:
        return SatelliteId(*divmod(int(flat_index), self.satellites_per_plane))


def starlink_shell_config(**overrides) -> ConstellationConfig:
    """The 72 x 22 shell at 550 km / 53 deg used throughout the benchmarks."""
    params = dict(
        num_planes=72,
        satellites_per_plane=22,
        altitude_km=550.0,
        earth_radius_km=6371.0,
        inclination_rad=math.radians(53.0),
        phase_offset_max_rad=math.pi / 4,
        max_isl_distance_km=2500.0,
        max_inter_links=2,
    )
    params.update(overrides)
    return ConstellationConfig(**params)


@dataclass(frozen=True)
class Constellation:
    config: ConstellationConfig
    phase_offsets_rad: np.ndarray = field(repr=False)

    def __post_init__(self):
        offsets = np.asarray(self.phase_offsets_rad, dtype=float)
        if offsets.shape != (self.config.num_planes,):
            raise ValueError("phase_offsets_rad must have one entry per plane")
        if np.any(offsets < 0) or np.any(offsets > self.config.phase_offset_max_rad):
            raise ValueError("phase offsets must lie in [0, phase_offset_max_rad]")
        offsets.setflags(write=False)
        object.__setattr__(self, "phase_offsets_rad", offsets)

    @property
    def num_satellites(self) -> int:
        return self.config.num_satellites

    @property
    def orbital_radius_km(self) -> float:
        return self.config.orbital_radius_km

    @property
    def mean_motion_rad_s(self) -> float:
        r = self.orbital_radius_km
        return math.sqrt(self.config.gravitational_parameter_km3s2 / r**3)

    def positions(self, t: float, sats=None) -> np.ndarray:
        """ECI positions (km) at time ``t`` seconds, shape ``(len(sats), 3)``.

        ``sats`` is an array of flat indices; all satellites when omitted.
        """
        cfg = self.config
        if sats is None:
            sats = np.arange(cfg.num_satellites)
        sats = np.asarray(sats, dtype=np.int64)
        plane, index = np.divmod(sats, cfg.satellites_per_plane)
        raan = 2.0 * np.pi * plane / cfg.num_planes
        u = (
            2.0 * np.pi * index / cfg.satellites_per_plane
            + self.phase_offsets_rad[plane]
            + self.mean_motion_rad_s * t
        )
        return _orbit_to_eci(raan, u, cfg.inclination_rad, cfg.orbital_radius_km)

    def position(self, sat, t: float) -> np.ndarray:
        return self.positions(t, [_as_flat(sat, self.config)])[0]


def _orbit_to_eci(raan, u, inclination, r):
    cos_o, sin_o = np.cos(raan), np.sin(raan)
    cos_u, sin_u = np.cos(u), np.sin(u)
    cos_i, sin_i = math.cos(inclination), math.sin(inclination)
    x = r * (cos_o * cos_u - sin_o * sin_u * cos_i)
    y = r * (sin_o * cos_u + cos_o * sin_u * cos_i)
    z = r * sin_u * sin_i * np.ones_like(cos_o)
    return np.stack([x, y, z], axis=-1)


def _as_flat(sat, config: ConstellationConfig) -> int:
    if isinstance(sat, SatelliteId):
        if not (0 <= sat.plane < config.num_planes and 0 <= sat.index < config.satellites_per_plane):
            raise IndexError(f"satellite {sat} outside constellation")
        return sat.flat(config.satellites_per_plane)
    sat = int(sat)
    if not 0 <= sat < config.num_satellites:
        raise IndexError(f"satellite {sat} outside constellation")
    return sat


def build_constellation(config: ConstellationConfig, seed=None) -> Constellation:
    """Draw one phase offset per plane, in plane order, from ``seed``.

    ``seed`` may be an int, ``None`` or a :class:`numpy.random.Generator`;
    passing a generator consumes exactly ``num_planes`` uniform draws from it.
    """
    rng = check_random_state(seed)
    offsets = rng.uniform(0.0, config.phase_offset_max_rad, size=config.num_planes)
    # uniform(a, b) is nominally half-open but can round up to b
    offsets = np.minimum(offsets, config.phase_offset_max_rad)
    return Constellation(config, offsets)


def position(constellation: Constellation, sat, t: float) -> np.ndarray:
    return constellation.position(sat, t)


def orbital_period(constellation) -> float:
    """Circular orbit period in seconds; accepts a Constellation or its config."""
    cfg = getattr(constellation, "config", constellation)
    r = cfg.orbital_radius_km
    return 2.0 * math.pi * math.sqrt(r**3 / cfg.gravitational_parameter_km3s2)
