"""Independent seeded trials and best-of selection.

Trial ``k`` uses seed ``base_seed + k``.  One PCG64 stream per trial is
consumed in a fixed order: plane phase offsets, then the initial
construction, then the search iterations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .config import RunConfig
from .evaluation import EvalReport
from .estimator import ISLTopologyOptimizer
from .optimizer import HistoryEntry, ObjectiveTuple, is_better
from .orbits import Constellation, build_constellation
from .topology import Topology

log = logging.getLogger(__name__)


@dataclass
class TrialResult:
    trial: int
    seed: int
    constellation_seed: int
    link_cap: int
    num_candidates: int
    initial_objective: ObjectiveTuple
    objective: ObjectiveTuple
    report: EvalReport
    topology: Topology = field(repr=False)
    constellation: Constellation = field(repr=False)
    history: list[HistoryEntry] = field(default_factory=list, repr=False)


@dataclass
class TrialsResult:
    best: TrialResult
    trials: list[TrialResult]


def make_estimator(config: RunConfig, random_state=None) -> ISLTopologyOptimizer:
    opt = config.optimizer
    return ISLTopologyOptimizer(
        variant=config.variant,
        n_iterations=opt.iterations,
        reinforcement_interval=opt.reinforcement_interval,
        satellites_per_iteration=opt.satellites_per_iteration,
        link_cap=config.link_cap,
        max_passes=config.max_passes,
        tiebreak_metric=opt.tiebreak_metric,
        eval_window=config.eval_window,
        random_state=random_state,
    )


def run_trial(config: RunConfig, trial: int) -> TrialResult:
    seed = config.base_seed + trial
    rng = np.random.default_rng(seed)
    if config.resample_offsets:
        constellation_seed = seed
        constellation = build_constellation(config.constellation, rng)
    else:
        constellation_seed = config.base_seed
        constellation = build_constellation(config.constellation, constellation_seed)
    est = make_estimator(config, rng).fit(constellation)
    report = est.evaluate()
    log.info("trial %d (seed %d): %s", trial, seed, est.objective_)
    return TrialResult(
        trial=trial,
        seed=seed,
        constellation_seed=constellation_seed,
        link_cap=est.link_cap_,
        num_candidates=len(est.candidates_),
        initial_objective=est.initial_objective_,
        objective=est.objective_,
        report=report,
        topology=est.topology_,
        constellation=constellation,
        history=est.history_,
    )


def select_best(results: list[TrialResult]) -> TrialResult:
    """Best objective under ``is_better``; ties go to the lowest seed."""
    best = None
    for r in sorted(results, key=lambda r: r.seed):
        if best is None or is_better(r.objective, best.objective):
            best = r
    return best


def run_trials(config: RunConfig, num_trials: int | None = None, base_seed: int | None = None, n_jobs: int | None = None) -> TrialsResult:
    config = config.with_overrides(trials=num_trials, seed=base_seed)
    n_jobs = config.jobs if n_jobs is None else n_jobs
    if n_jobs == 1:
        results = [run_trial(config, k) for k in range(config.trials)]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(run_trial)(config, k) for k in range(config.trials))
    return TrialsResult(select_best(results), results)
