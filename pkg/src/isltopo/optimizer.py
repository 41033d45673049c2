"""Iterative local search over inter-plane links.

Every ``K``-th iteration tops up under-linked satellites; every other
iteration rewires one link at each of ``m`` random satellites.  A modified
copy replaces the incumbent only if it is lexicographically better on
(diameter, average cost, stability).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .evaluation import hop_summary
from .feasibility import VIABILITY, CandidateSet, TimeWindow, pairs_viable
from .orbits import Constellation
from .topology import Topology
from .utils import check_positive_int, check_random_state

MEAN_ECCENTRICITY = "mean_eccentricity"
MEAN_PAIRWISE_HOPS = "mean_pairwise_hops"
REINFORCE = "reinforce"
REPLACE = "replace"


@dataclass(frozen=True)
class OptimizerConfig:
    iterations: int = 300
    reinforcement_interval: int = 15
    satellites_per_iteration: int = 20
    seed: int | None = None
    tiebreak_metric: str = MEAN_ECCENTRICITY

    def __post_init__(self):
        check_positive_int(self.iterations, "iterations", minimum=0)
        check_positive_int(self.reinforcement_interval, "reinforcement_interval")
        check_positive_int(self.satellites_per_iteration, "satellites_per_iteration")
        if self.tiebreak_metric not in (MEAN_ECCENTRICITY, MEAN_PAIRWISE_HOPS):
            raise ValueError(f"unknown tiebreak_metric {self.tiebreak_metric!r}")


class ObjectiveTuple(NamedTuple):
    worst_cost: float
    avg_cost: float
    stability: float


def is_better(candidate: ObjectiveTuple, incumbent: ObjectiveTuple) -> bool:
    h, hbar, sigma = candidate
    h0, hbar0, sigma0 = incumbent
    return h < h0 or (h == h0 and hbar < hbar0) or (h == h0 and hbar == hbar0 and sigma > sigma0)


@dataclass(frozen=True)
class HistoryEntry:
    iteration: int
    phase: str
    objective: ObjectiveTuple
    accepted: bool


@dataclass
class OptimizeResult:
    best: Topology
    objective: ObjectiveTuple
    initial_objective: ObjectiveTuple
    history: list[HistoryEntry] = field(default_factory=list)


def reinforce_degrees(topology: Topology, candidates: CandidateSet, rng) -> int:
    """Fill every under-linked satellite, in index order, from its shuffled candidates."""
    rng = check_random_state(rng)
    cap = topology.max_inter_links
    added = 0
    for u in np.flatnonzero(topology.inter_degree < cap).tolist():
        if topology.inter_degree[u] >= cap:
            continue
        order = np.array(candidates.neighbors(u))
        rng.shuffle(order)
        for w in order.tolist():
            if topology.add_inter_link(u, w, candidates):
                added += 1
                if topology.inter_degree[u] >= cap:
                    break
    return added


def random_replace(topology: Topology, candidates: CandidateSet, m: int, rng) -> int:
    """Rewire one inter link at each of ``m`` distinct random satellites.

    The removed partner is not eligible as the replacement.  Returns the
    number of removals plus additions.
    """
    rng = check_random_state(rng)
    n = topology.node_count
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}")
    changes = 0
    for u in rng.choice(n, size=m, replace=False).tolist():
        k = int(topology.inter_degree[u])
        if k == 0:
            continue
        v = int(topology.inter[u, rng.integers(k)])
        topology.remove_inter_link(u, v)
        changes += 1
        admissible = [w for w in candidates.neighbors(u).tolist() if w != v and topology.can_add(u, w, candidates)]
        if admissible:
            w = admissible[rng.integers(len(admissible))]
            topology.add_inter_link(u, w, candidates)
            changes += 1
    return changes


class ObjectiveEvaluator:
    """Computes the (diameter, average cost, stability) tuple for one candidate set.

    Candidate stability over ``window`` is computed once up front; under the
    viability variant stability is fixed at 1.
    """

    def __init__(self, constellation: Constellation, candidates: CandidateSet, window: TimeWindow | None = None,
                 tiebreak_metric: str = MEAN_ECCENTRICITY):
        self.tiebreak_metric = tiebreak_metric
        self._stable = None
        if candidates.variant.kind != VIABILITY:
            cfg = constellation.config
            window = TimeWindow() if window is None else window
            flags = pairs_viable(constellation, candidates.pairs, window, cfg.max_isl_distance_km, cfg.earth_radius_km)
            n = candidates.num_satellites
            self._stable = np.zeros((n, n), dtype=bool)
            p = candidates.pairs[flags]
            self._stable[p[:, 0], p[:, 1]] = True

    def stability(self, topology: Topology) -> float:
        if self._stable is None:
            return 1.0
        edges = topology.inter_edge_array()
        if len(edges) == 0:
            return 1.0
        return float(self._stable[edges[:, 0], edges[:, 1]].mean())

    def __call__(self, topology: Topology) -> ObjectiveTuple:
        diameter, mean_ecc, mean_pair, _ = hop_summary(topology)
        avg = mean_ecc if self.tiebreak_metric == MEAN_ECCENTRICITY else mean_pair
        return ObjectiveTuple(diameter, avg, self.stability(topology))


def optimize(initial: Topology, candidates: CandidateSet, constellation: Constellation, opt_config: OptimizerConfig,
             eval_window: TimeWindow | None = None, rng=None, evaluator: ObjectiveEvaluator | None = None) -> OptimizeResult:
    """Run the local search for ``opt_config.iterations`` steps.

    ``rng`` overrides ``opt_config.seed`` so a caller can continue one stream.
    """
    rng = check_random_state(opt_config.seed if rng is None else rng)
    m = opt_config.satellites_per_iteration
    if m > initial.node_count:
        raise ValueError(f"satellites_per_iteration {m} exceeds {initial.node_count} satellites")
    if evaluator is None:
        evaluator = ObjectiveEvaluator(constellation, candidates, eval_window, opt_config.tiebreak_metric)

    best = initial.copy()
    best_obj = evaluator(best)
    result = OptimizeResult(best, best_obj, best_obj)
    for i in range(1, opt_config.iterations + 1):
        trial = best.copy()
        if i % opt_config.reinforcement_interval == 0:
            phase = REINFORCE
            reinforce_degrees(trial, candidates, rng)
        else:
            phase = REPLACE
            random_replace(trial, candidates, m, rng)
        obj = evaluator(trial)
        accepted = is_better(obj, best_obj)
        if accepted:
            best, best_obj = trial, obj
        result.history.append(HistoryEntry(i, phase, obj, accepted))
    result.best = best
    result.objective = best_obj
    return result


def objective_is_finite(obj: ObjectiveTuple) -> bool:
    return math.isfinite(obj.worst_cost)
