"""scikit-learn style front end for the topology search."""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .evaluation import EvalReport, dense_link_cap, evaluate
from .feasibility import FeasibilityVariant, TimeWindow, enumerate_candidates
from .optimizer import MEAN_ECCENTRICITY, ObjectiveEvaluator, OptimizerConfig, optimize
from .orbits import Constellation
from .topology import build_initial_topology
from .utils import check_positive_int, check_random_state

DENSE = "dense"


def check_constellation(X) -> Constellation:
    if not isinstance(X, Constellation):
        raise TypeError(f"expected a Constellation, got {type(X).__name__}")
    return X


def check_variant(variant) -> FeasibilityVariant:
    if isinstance(variant, FeasibilityVariant):
        return variant
    if variant in ("snapshot", "viability"):
        return FeasibilityVariant(variant)
    raise ValueError(f"variant must be 'snapshot', 'viability' or a FeasibilityVariant, got {variant!r}")


def check_is_fitted(estimator, attributes=("topology_",)):
    if not all(hasattr(estimator, a) for a in attributes):
        raise NotFittedError(f"{type(estimator).__name__} is not fitted yet; call fit first")


class ISLTopologyOptimizer(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """Select inter-plane links that minimise the hop diameter of a constellation.

    ``fit`` takes a :class:`Constellation`, enumerates the feasible
    inter-plane candidates, builds the greedy initial topology and runs the
    local search.  ``transform`` returns the chosen inter-plane links as an
    ``(n_links, 2)`` array of flat satellite indices.

    Parameters
    ----------
    variant : {"viability", "snapshot"} or FeasibilityVariant
        Feasibility test for candidate links.
    n_iterations, reinforcement_interval, satellites_per_iteration : int
        Search length, repair period and number of satellites rewired per
        non-repair iteration.
    link_cap : int, "dense" or None
        Inter-plane links per satellite.  ``None`` takes the constellation's
        ``max_inter_links``; ``"dense"`` lifts it above the mean candidate count.
    eval_window : TimeWindow or None
        Window for the stability metric; defaults to the variant's window.
    random_state : int, Generator or None
        A Generator is consumed in place, which lets callers chain
        constellation sampling and fitting on one stream.
    """

    def __init__(self, variant="viability", n_iterations=300, reinforcement_interval=15,
                 satellites_per_iteration=20, link_cap=None, max_passes=10,
                 tiebreak_metric=MEAN_ECCENTRICITY, eval_window=None, random_state=None):
        self.variant = variant
        self.n_iterations = n_iterations
        self.reinforcement_interval = reinforcement_interval
        self.satellites_per_iteration = satellites_per_iteration
        self.link_cap = link_cap
        self.max_passes = max_passes
        self.tiebreak_metric = tiebreak_metric
        self.eval_window = eval_window
        self.random_state = random_state

    def _eval_window(self, variant: FeasibilityVariant) -> TimeWindow:
        return variant.window if self.eval_window is None else self.eval_window

    def fit(self, X, y=None):
        constellation = check_constellation(X)
        variant = check_variant(self.variant)
        opt_config = OptimizerConfig(
            iterations=self.n_iterations,
            reinforcement_interval=self.reinforcement_interval,
            satellites_per_iteration=self.satellites_per_iteration,
            tiebreak_metric=self.tiebreak_metric,
        )
        rng = check_random_state(self.random_state)

        self.candidates_ = enumerate_candidates(constellation, variant)
        if self.link_cap is None:
            self.link_cap_ = constellation.config.max_inter_links
        elif self.link_cap == DENSE:
            self.link_cap_ = dense_link_cap(self.candidates_)
        else:
            self.link_cap_ = check_positive_int(self.link_cap, "link_cap", minimum=0)

        self.initial_topology_ = build_initial_topology(self.candidates_, self.link_cap_, rng, self.max_passes)
        evaluator = ObjectiveEvaluator(constellation, self.candidates_, self._eval_window(variant), self.tiebreak_metric)
        result = optimize(self.initial_topology_, self.candidates_, constellation, opt_config, rng=rng, evaluator=evaluator)
        self.topology_ = result.best
        self.objective_ = result.objective
        self.initial_objective_ = result.initial_objective
        self.history_ = result.history
        self.constellation_ = constellation
        return self

    def transform(self, X=None):
        check_is_fitted(self)
        return self.topology_.inter_edge_array()

    def evaluate(self, X=None) -> EvalReport:
        """Full metrics of the fitted topology on ``X`` (default: the fitted constellation)."""
        check_is_fitted(self)
        constellation = self.constellation_ if X is None else check_constellation(X)
        return evaluate(self.topology_, constellation, self._eval_window(check_variant(self.variant)))

    def score(self, X=None, y=None) -> float:
        """Negative hop diameter, so larger is better."""
        check_is_fitted(self)
        return -float(self.objective_.worst_cost)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.two_d_array = False
        tags.requires_fit = True
        return tags

