"""Input checks shared by the estimator."""
from __future__ import annotations

import numbers

import numpy as np
import scipy.sparse as sp
from sklearn.utils import check_array

from .bounds import BOUND_KINDS
from .branching import BRANCH_KINDS
from .graph import MAX_NODES, Graph


def check_adjacency(X) -> Graph:
    """Validate a symmetric adjacency matrix and return it as a :class:`Graph`.

    Nonzero off-diagonal entries are edges.  Dense arrays and scipy sparse
    matrices are accepted; a nonzero diagonal is rejected.
    """
    X = check_array(X, accept_sparse="csr", dtype=None, ensure_min_samples=1, ensure_min_features=1)
    n, m = X.shape
    if n != m:
        raise ValueError(f"adjacency matrix must be square, got shape {X.shape}")
    if n > MAX_NODES:
        raise ValueError(f"{n} nodes exceed the supported maximum of {MAX_NODES}")
    if sp.issparse(X):
        A = (X != 0).astype(np.int8)
        if (A != A.T).nnz:
            raise ValueError("adjacency matrix must be symmetric")
        if A.diagonal().any():
            raise ValueError("adjacency matrix must have a zero diagonal (no self-loops)")
        us, vs = sp.triu(A, 1).nonzero()
        return Graph(n, zip(us.tolist(), vs.tolist()))
    A = np.asarray(X) != 0
    if not np.array_equal(A, A.T):
        raise ValueError("adjacency matrix must be symmetric")
    if A.diagonal().any():
        raise ValueError("adjacency matrix must have a zero diagonal (no self-loops)")
    return Graph.from_numpy(A)


def check_choice(name: str, value, choices) -> None:
    if value not in choices:
        raise ValueError(f"{name} must be one of {tuple(choices)}, got {value!r}")


def check_positive_int(name: str, value, allow_none: bool = False, minimum: int = 1) -> None:
    if value is None and allow_none:
        return
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")


def check_params(est) -> None:
    check_choice("bound", est.bound, BOUND_KINDS)
    check_choice("branching", est.branching, BRANCH_KINDS)
    check_positive_int("n_jobs", est.n_jobs)
    check_positive_int("max_k", est.max_k, allow_none=True, minimum=0)
    if est.time_limit is not None and not (isinstance(est.time_limit, numbers.Real) and est.time_limit > 0):
        raise ValueError(f"time_limit must be positive or None, got {est.time_limit!r}")
