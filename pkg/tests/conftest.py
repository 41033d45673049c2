import itertools
import math

import numpy as np
import pytest

from isltopo.feasibility import CandidateSet, FeasibilityVariant
from isltopo.orbits import ConstellationConfig, build_constellation, starlink_shell_config

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def shell_config():
    return starlink_shell_config()


@pytest.fixture
def small_config():
    """12 planes x 12 satellites at the same altitude; ring chords stay under d_max."""
    return ConstellationConfig(
        num_planes=12,
        satellites_per_plane=12,
        altitude_km=550.0,
        earth_radius_km=6371.0,
        inclination_rad=math.radians(53.0),
        phase_offset_max_rad=math.pi / 4,
        max_isl_distance_km=4000.0,
        max_inter_links=2,
    )


@pytest.fixture
def small_constellation(small_config):
    return build_constellation(small_config, seed=3)


def all_cross_plane(num_planes, sats_per_plane, variant=None):
    """Every inter-plane pair, distance 1; geometry-free candidates for graph tests."""
    n = num_planes * sats_per_plane
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if u // sats_per_plane != v // sats_per_plane]
    return CandidateSet(num_planes, sats_per_plane, pairs, np.ones(len(pairs)), variant or FeasibilityVariant.snapshot())
