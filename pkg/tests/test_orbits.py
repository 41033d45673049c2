import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from isltopo.orbits import (
    MU_EARTH_KM3_S2,
    ConstellationConfig,
    SatelliteId,
    build_constellation,
    orbital_period,
    position,
    starlink_shell_config,
)


def test_shell_config_derived_values(shell_config):
    assert shell_config.num_satellites == 1584
    assert shell_config.orbital_radius_km == 6921.0


def test_seeded_offsets_within_range(shell_config):
    c = build_constellation(shell_config, seed=42)
    assert c.phase_offsets_rad.shape == (72,)
    assert np.all(c.phase_offsets_rad >= 0)
    assert np.all(c.phase_offsets_rad <= math.pi / 4)


def test_zero_offset_range_gives_zero_offsets():
    cfg = starlink_shell_config(phase_offset_max_rad=0.0)
    assert np.all(build_constellation(cfg, seed=7).phase_offsets_rad == 0.0)


def test_same_seed_same_offsets(shell_config):
    a = build_constellation(shell_config, seed=5)
    b = build_constellation(shell_config, seed=5)
    assert np.array_equal(a.phase_offsets_rad, b.phase_offsets_rad)
    assert not np.array_equal(a.phase_offsets_rad, build_constellation(shell_config, seed=6).phase_offsets_rad)


def test_generator_is_consumed_in_plane_order(shell_config):
    rng = np.random.default_rng(11)
    c = build_constellation(shell_config, rng)
    expected = np.random.default_rng(11).uniform(0, math.pi / 4, size=72)
    assert np.array_equal(c.phase_offsets_rad, expected)


@pytest.mark.parametrize(
    "field, value",
    [
        ("num_planes", 0),
        ("satellites_per_plane", 2),
        ("altitude_km", 0.0),
        ("earth_radius_km", -1.0),
        ("inclination_rad", 4.0),
        ("phase_offset_max_rad", -0.1),
        ("max_isl_distance_km", 0.0),
        ("max_inter_links", -1),
    ],
)
def test_invalid_config_names_field(field, value):
    with pytest.raises(ValueError, match=field):
        starlink_shell_config(**{field: value})


def test_reference_satellite_at_epoch(shell_config):
    c = build_constellation(starlink_shell_config(phase_offset_max_rad=0.0), 0)
    assert np.allclose(position(c, SatelliteId(0, 0), 0.0), [6921.0, 0.0, 0.0], atol=1e-9)


def test_quarter_orbit_position_matches_rotation_matrices():
    cfg = ConstellationConfig(1, 4, 550.0, 6371.0, math.radians(53.0), 0.0, 2500.0, 2)
    c = build_constellation(cfg, 0)
    got = c.position(SatelliteId(0, 1), 0.0)
    # perifocal point at u = pi/2, rotated by inclination about x then RAAN about z
    rot = Rotation.from_euler("ZX", [0.0, math.radians(53.0)])
    oracle = rot.apply([0.0, 6921.0, 0.0])
    assert np.allclose(got, oracle, atol=1e-9)
    assert got == pytest.approx([0.0, 4165.2, 5527.2], abs=0.2)


def test_position_matches_rotation_matrices_general():
    cfg = starlink_shell_config()
    c = build_constellation(cfg, 3)
    for plane, index, t in [(5, 3, 100.0), (40, 17, 2500.0), (71, 21, 5999.0)]:
        raan = 2 * math.pi * plane / 72
        u = 2 * math.pi * index / 22 + c.phase_offsets_rad[plane] + c.mean_motion_rad_s * t
        oracle = Rotation.from_euler("ZX", [raan, cfg.inclination_rad]).apply([6921 * math.cos(u), 6921 * math.sin(u), 0.0])
        assert np.allclose(c.position(SatelliteId(plane, index), t), oracle, atol=1e-8)


def test_orbital_period_matches_circular_speed():
    c = build_constellation(starlink_shell_config(), 0)
    r = 6921.0
    speed = math.sqrt(MU_EARTH_KM3_S2 / r)
    assert orbital_period(c) == pytest.approx(2 * math.pi * r / speed, rel=1e-12)
    assert orbital_period(c) == pytest.approx(5730.13, abs=0.01)
    assert orbital_period(c) < 6000.0


def test_orbital_period_scaling():
    base = starlink_shell_config(earth_radius_km=3000.0, altitude_km=3000.0)
    doubled = starlink_shell_config(earth_radius_km=6000.0, altitude_km=6000.0)
    assert orbital_period(doubled) == pytest.approx(orbital_period(base) * 2**1.5, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), t=st.floats(-1e5, 1e5))
def test_positions_stay_on_sphere(seed, t):
    c = build_constellation(starlink_shell_config(), seed)
    radii = np.linalg.norm(c.positions(t), axis=1)
    assert np.all(np.abs(radii - 6921.0) / 6921.0 < 1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), t=st.floats(0, 1e4))
def test_intra_plane_spacing_and_periodicity(seed, t):
    c = build_constellation(starlink_shell_config(), seed)
    pos = c.positions(t).reshape(72, 22, 3)
    nxt = np.roll(pos, -1, axis=1)
    cosang = np.einsum("pij,pij->pi", pos, nxt) / 6921.0**2
    angles = np.arccos(np.clip(cosang, -1, 1))
    assert np.allclose(angles, 2 * math.pi / 22, atol=1e-9)
    later = c.positions(t + orbital_period(c))
    assert np.max(np.abs(later - c.positions(t))) < 1e-6


def test_satellite_id_round_trip(shell_config):
    for u in (0, 21, 22, 1583):
        sid = shell_config.sat_id(u)
        assert sid.flat(22) == u
    with pytest.raises(IndexError):
        build_constellation(shell_config, 0).position(SatelliteId(72, 0), 0.0)
