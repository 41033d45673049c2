"""CSV and JSON exports, plus edge-list import."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .evaluation import EvalReport, path_labels
from .feasibility import CandidateSet, TimeWindow
from .optimizer import HistoryEntry
from .orbits import Constellation, ConstellationConfig
from .topology import Topology

EDGE_COLUMNS = ["u_plane", "u_index", "v_plane", "v_index", "kind", "distance_at_t0_km"]
METRIC_KEYS = [
    "diameter_hops",
    "mean_eccentricity_hops",
    "mean_pairwise_hops",
    "stability_fraction",
    "worst_case_delay_ms",
    "witness_path",
]


class TopologyFileError(ValueError):
    """An edge list that cannot be read or does not fit the constellation."""


def _write_rows(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_positions(path, constellation: Constellation, times=(0.0,)) -> Path:
    ns = constellation.config.satellites_per_plane
    rows = []
    for t in times:
        pos = constellation.positions(t)
        for u, (x, y, z) in enumerate(pos.tolist()):
            rows.append([u // ns, u % ns, float(t), x, y, z])
    return _write_rows(path, ["plane", "index", "t_s", "x_km", "y_km", "z_km"], rows)


def write_candidates(path, candidates: CandidateSet) -> Path:
    ns = candidates.satellites_per_plane
    rows = [
        [u // ns, u % ns, v // ns, v % ns, d]
        for (u, v), d in zip(candidates.pairs.tolist(), candidates.pair_distances.tolist())
    ]
    return _write_rows(path, ["u_plane", "u_index", "v_plane", "v_index", "distance_km"], rows)


def edge_rows(topology: Topology, constellation: Constellation, t0: float = 0.0) -> list[list]:
    ns = topology.satellites_per_plane
    pos = constellation.positions(t0)
    rows = []
    for kind, edges in (("intra", topology.intra_edges()), ("inter", topology.inter_edges())):
        for u, v in edges:
            d = float(np.linalg.norm(pos[u] - pos[v]))
            rows.append([u // ns, u % ns, v // ns, v % ns, kind, d])
    return rows


def write_edges(path, topology: Topology, constellation: Constellation, t0: float = 0.0) -> Path:
    return _write_rows(path, EDGE_COLUMNS, edge_rows(topology, constellation, t0))


def read_edges(path, config: ConstellationConfig) -> Topology:
    """Rebuild a topology from an edge list.

    The intra rows must be exactly the rings of ``config``; the link cap is
    the larger of ``config.max_inter_links`` and the largest inter degree
    found, so dense topologies load too.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or any(c not in reader.fieldnames for c in EDGE_COLUMNS[:5]):
                raise TopologyFileError(f"{path}: expected columns {EDGE_COLUMNS}")
            rows = list(reader)
    except OSError as exc:
        raise TopologyFileError(f"cannot read {path}: {exc.strerror}") from exc

    np_, ns = config.num_planes, config.satellites_per_plane
    intra, inter = set(), []
    for lineno, row in enumerate(rows, start=2):
        try:
            up, ui, vp, vi = (int(row[c]) for c in EDGE_COLUMNS[:4])
        except (TypeError, ValueError) as exc:
            raise TopologyFileError(f"{path}:{lineno}: non-integer satellite id") from exc
        if not (0 <= up < np_ and 0 <= vp < np_ and 0 <= ui < ns and 0 <= vi < ns):
            raise TopologyFileError(f"{path}:{lineno}: satellite outside a {np_} x {ns} constellation")
        u, v = sorted((up * ns + ui, vp * ns + vi))
        kind = row["kind"]
        if kind == "intra":
            if (u, v) in intra:
                raise TopologyFileError(f"{path}:{lineno}: duplicate intra link")
            intra.add((u, v))
        elif kind == "inter":
            if up == vp:
                raise TopologyFileError(f"{path}:{lineno}: inter link inside plane {up}")
            inter.append((u, v))
        else:
            raise TopologyFileError(f"{path}:{lineno}: unknown kind {kind!r}")

    if len(set(inter)) != len(inter):
        raise TopologyFileError(f"{path}: duplicate inter links")
    degree = np.bincount(np.array(inter, dtype=np.int64).reshape(-1), minlength=np_ * ns) if inter else np.zeros(1, int)
    topo = Topology(np_, ns, max(config.max_inter_links, int(degree.max())))
    if intra != set(topo.intra_edges()):
        raise TopologyFileError(f"{path}: intra rows do not match the {np_} x {ns} rings")
    for u, v in inter:
        topo.inter[u, topo.inter_degree[u]] = v
        topo.inter[v, topo.inter_degree[v]] = u
        topo.inter_degree[u] += 1
        topo.inter_degree[v] += 1
    return topo


def write_history(path, history: list[HistoryEntry]) -> Path:
    rows = [
        [e.iteration, e.phase, _num(e.objective.worst_cost), _num(e.objective.avg_cost), e.objective.stability, int(e.accepted)]
        for e in history
    ]
    return _write_rows(path, ["iteration", "phase", "H", "H_bar", "sigma", "accepted"], rows)


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def metrics_dict(report: EvalReport, **extra) -> dict:
    out = {
        "diameter_hops": _num(report.diameter_hops),
        "mean_eccentricity_hops": _num(report.mean_eccentricity_hops),
        "mean_pairwise_hops": _num(report.mean_pairwise_hops),
        "stability_fraction": report.stability_fraction,
        "worst_case_delay_ms": _num(report.worst_case_delay_ms),
        "witness_path": path_labels(report.diameter_witness_path),
    }
    out.update(extra)
    return out


def write_json(path, data: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2) + "\n")
    return path


def write_metrics(path, report: EvalReport, **extra) -> Path:
    return write_json(path, metrics_dict(report, **extra))


def linkseries_rows(constellation: Constellation, path_sats, window: TimeWindow, d_max: float) -> list[list]:
    """Distance of every link along ``path_sats`` at each window sample."""
    cfg = constellation.config
    flat = [s.flat(cfg.satellites_per_plane) if hasattr(s, "flat") else int(s) for s in path_sats]
    links = list(zip(flat[:-1], flat[1:]))
    rows = []
    for t in window.sample_times().tolist():
        pos = constellation.positions(t)
        for u, v in links:
            kind = "intra" if u // cfg.satellites_per_plane == v // cfg.satellites_per_plane else "inter"
            label = f"{cfg.sat_id(u).label()}-{cfg.sat_id(v).label()}"
            rows.append([t, label, float(np.linalg.norm(pos[u] - pos[v])), d_max, kind])
    return rows


def write_linkseries(path, constellation: Constellation, path_sats, window: TimeWindow, d_max: float) -> Path:
    rows = linkseries_rows(constellation, path_sats, window, d_max)
    return _write_rows(path, ["t_s", "link_label", "distance_km", "d_max_km", "kind"], rows)


def write_trials(path, trials) -> Path:
    header = ["trial", "seed", "link_cap", "num_candidates", "initial_H", "initial_H_bar",
              "H", "H_bar", "sigma", "diameter_hops", "mean_eccentricity_hops", "stability_fraction",
              "worst_case_delay_ms"]
    rows = []
    for r in trials:
        rows.append([
            r.trial, r.seed, r.link_cap, r.num_candidates,
            _num(r.initial_objective.worst_cost), _num(r.initial_objective.avg_cost),
            _num(r.objective.worst_cost), _num(r.objective.avg_cost), r.objective.stability,
            _num(r.report.diameter_hops), _num(r.report.mean_eccentricity_hops),
            r.report.stability_fraction, _num(r.report.worst_case_delay_ms),
        ])
    return _write_rows(path, header, rows)
