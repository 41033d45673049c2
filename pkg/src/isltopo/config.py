"""Run configuration, read from an INI file with one section per concern.

Angles are given in degrees and converted to radians here.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .feasibility import SNAPSHOT, VIABILITY, FeasibilityVariant, TimeWindow
from .optimizer import OptimizerConfig
from .orbits import MU_EARTH_KM3_S2, ConstellationConfig


class ConfigError(ValueError):
    """A missing or invalid configuration field."""


@dataclass(frozen=True)
class ExportFlags:
    positions: bool = True
    candidates: bool = True
    edges: bool = True
    history: bool = True
    metrics: bool = True
    linkseries: bool = False


@dataclass(frozen=True)
class RunConfig:
    constellation: ConstellationConfig
    variant: FeasibilityVariant = field(default_factory=FeasibilityVariant)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    eval_window: TimeWindow = field(default_factory=TimeWindow)
    trials: int = 50
    base_seed: int = 0
    output_dir: Path = Path("out")
    exports: ExportFlags = field(default_factory=ExportFlags)
    max_passes: int = 10
    resample_offsets: bool = True
    link_cap: int | str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"run.trials must be >= 1, got {self.trials}")
        if self.max_passes < 1:
            raise ConfigError(f"optimizer.max_passes must be >= 1, got {self.max_passes}")
        if self.jobs < 1:
            raise ConfigError(f"run.jobs must be >= 1, got {self.jobs}")
        n = self.constellation.num_satellites
        if self.optimizer.satellites_per_iteration > n:
            raise ConfigError(f"optimizer.satellites_per_iteration must be <= {n}")

    def with_overrides(self, **changes) -> "RunConfig":
        """Apply CLI-style overrides: seed, trials, variant, jobs, out, link_cap."""
        updates = {}
        if changes.get("seed") is not None:
            updates["base_seed"] = changes["seed"]
        if changes.get("trials") is not None:
            updates["trials"] = changes["trials"]
        if changes.get("jobs") is not None:
            updates["jobs"] = changes["jobs"]
        if changes.get("out") is not None:
            updates["output_dir"] = Path(changes["out"])
        if changes.get("variant") is not None:
            updates["variant"] = replace(self.variant, kind=changes["variant"])
        if "link_cap" in changes:
            updates["link_cap"] = changes["link_cap"]
        return replace(self, **updates)


_REQUIRED = object()

_CONSTELLATION_FIELDS = {
    "num_planes": (int, _REQUIRED),
    "satellites_per_plane": (int, _REQUIRED),
    "altitude_km": (float, _REQUIRED),
    "earth_radius_km": (float, _REQUIRED),
    "inclination_deg": (float, _REQUIRED),
    "phase_offset_max_deg": (float, _REQUIRED),
    "max_isl_distance_km": (float, _REQUIRED),
    "max_inter_links": (int, _REQUIRED),
    "gravitational_parameter_km3s2": (float, MU_EARTH_KM3_S2),
}


def _get(parser, section, key, kind, default=_REQUIRED):
    name = f"{section}.{key}"
    if not parser.has_option(section, key):
        if default is _REQUIRED:
            raise ConfigError(f"missing required field {name}")
        return default
    raw = parser.get(section, key)
    try:
        if kind is bool:
            return parser.getboolean(section, key)
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid value for {name}: {raw!r}") from exc


def parse_run_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    c = {key: _get(parser, "constellation", key, kind, default) for key, (kind, default) in _CONSTELLATION_FIELDS.items()}
    try:
        constellation = ConstellationConfig(
            num_planes=c["num_planes"],
            satellites_per_plane=c["satellites_per_plane"],
            altitude_km=c["altitude_km"],
            earth_radius_km=c["earth_radius_km"],
            inclination_rad=math.radians(c["inclination_deg"]),
            phase_offset_max_rad=math.radians(c["phase_offset_max_deg"]),
            max_isl_distance_km=c["max_isl_distance_km"],
            max_inter_links=c["max_inter_links"],
            gravitational_parameter_km3s2=c["gravitational_parameter_km3s2"],
        )
    except ValueError as exc:
        raise ConfigError(f"constellation.{exc}") from exc

    kind = _get(parser, "feasibility", "variant", str, VIABILITY)
    if kind not in (SNAPSHOT, VIABILITY):
        raise ConfigError(f"feasibility.variant must be snapshot or viability, got {kind!r}")
    try:
        window = TimeWindow(
            _get(parser, "feasibility", "window_start_s", float, 0.0),
            _get(parser, "feasibility", "window_length_s", float, 6000.0),
            _get(parser, "feasibility", "sample_step_s", float, 30.0),
        )
        eval_window = TimeWindow(
            _get(parser, "evaluation", "window_start_s", float, window.start_s),
            _get(parser, "evaluation", "window_length_s", float, window.length_s),
            _get(parser, "evaluation", "sample_step_s", float, window.step_s),
        )
        optimizer = OptimizerConfig(
            iterations=_get(parser, "optimizer", "iterations", int, 300),
            reinforcement_interval=_get(parser, "optimizer", "reinforcement_interval", int, 15),
            satellites_per_iteration=_get(parser, "optimizer", "satellites_per_iteration", int, 20),
            tiebreak_metric=_get(parser, "optimizer", "tiebreak_metric", str, "mean_eccentricity"),
        )
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc

    exports = ExportFlags(**{
        f: _get(parser, "export", f, bool, getattr(ExportFlags, f)) for f in ExportFlags.__dataclass_fields__
    })
    out = Path(_get(parser, "run", "output_dir", str, "out"))
    return RunConfig(
        constellation=constellation,
        variant=FeasibilityVariant(kind, window),
        optimizer=optimizer,
        eval_window=eval_window,
        trials=_get(parser, "run", "trials", int, 50),
        base_seed=_get(parser, "run", "base_seed", int, 0),
        output_dir=out,
        exports=exports,
        max_passes=_get(parser, "optimizer", "max_passes", int, 10),
        resample_offsets=_get(parser, "run", "resample_offsets", bool, True),
        jobs=_get(parser, "run", "jobs", int, 1),
    )


def load_run_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_run_config(text)
