"""scikit-learn style wrapper: a graph in, its closest quasi-threshold graph out."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_adjacency, check_params
from .analysis import components, summarize
from .search import SearchConfig, solve


class QuasiThresholdEditor(ClusterMixin, TransformerMixin, BaseEstimator):
    """Minimum edge editing of a graph into a quasi-threshold graph.

    ``X`` is the symmetric adjacency matrix of an undirected graph.  Fitting
    finds a smallest set of node pairs whose toggling removes every induced
    path and cycle on four nodes; the connected components of the edited
    graph serve as cluster labels.

    Parameters
    ----------
    bound : {"basic", "update", "local-search", "min-degree"}
        Lower bound used for pruning.
    branching : {"first", "most", "most-pruned"}
        Subgraph selection strategy.
    all_solutions : bool
        Also enumerate every optimal edit set into ``solutions_``.
    max_k : int or None
        Give up after this many edits; ``k_opt_`` is then None.
    time_limit : float or None
        Wall-clock budget in seconds.
    n_jobs : int
        Worker processes.
    random_state : int
        Seed of the randomized bound.

    Attributes
    ----------
    k_opt_ : int or None
    lower_bound_ : int
    edits_ : list of (int, int)
        One optimal edit set.
    solutions_ : list of tuple
        All optimal edit sets when ``all_solutions`` is set, else ``[edits_]``.
    labels_ : ndarray of shape (n_nodes,)
    summary_ : dict or None
        Aggregate over ``solutions_`` (see :func:`qtedit.analysis.summarize`).
    n_features_in_ : int
    """

    def __init__(
        self,
        bound="local-search",
        branching="most-pruned",
        all_solutions=False,
        max_k=None,
        time_limit=None,
        n_jobs=1,
        random_state=0,
    ):
        self.bound = bound
        self.branching = branching
        self.all_solutions = all_solutions
        self.max_k = max_k
        self.time_limit = time_limit
        self.n_jobs = n_jobs
        self.random_state = random_state

    def fit(self, X, y=None):
        check_params(self)
        g = check_adjacency(X)
        cfg = SearchConfig(
            bound=self.bound,
            branching=self.branching,
            all_solutions=self.all_solutions,
            max_k=self.max_k,
            time_limit=self.time_limit,
            seed=int(self.random_state or 0),
            threads=self.n_jobs,
        )
        result = solve(g, cfg)
        self.graph_ = g
        self.n_features_in_ = g.n
        self.k_opt_ = result.k_opt
        self.lower_bound_ = result.lower_bound
        self.result_ = result
        if result.k_opt is None:
            raise RuntimeError(
                f"no solution within the budget; at least {result.lower_bound} edits are needed"
            )
        self.solutions_ = list(result.solutions)
        self.edits_ = list(self.solutions_[0])
        self.labels_ = np.asarray(components(g.apply(self.edits_)), dtype=np.intp)
        self.summary_ = summarize(g, self.solutions_).as_dict()
        return self

    def transform(self, X):
        """Adjacency matrix of the edited graph; ``X`` must be the fitted graph."""
        check_is_fitted(self, "edits_")
        g = check_adjacency(X)
        if g.n != self.n_features_in_:
            raise ValueError(f"X has {g.n} nodes, but the editor was fitted on {self.n_features_in_}")
        if g != self.graph_:
            raise ValueError("transform expects the graph passed to fit")
        return g.apply(self.edits_).to_numpy()

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
