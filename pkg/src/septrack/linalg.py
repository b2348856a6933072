"""Dense linear-algebra kernels: spectral norm, numeric rank, orthogonal projectors.

Everything here is deterministic: the power iteration uses a fixed start
vector so identical inputs give bit-identical answers on a given platform.
Matrices are plain float64 numpy arrays; samples live in the columns.
"""

import numpy as np

DEFAULT_SPECTRAL_TOL = 1e-8
DEFAULT_RANK_TOL = 1e-10

_MAX_POWER_ITERS = 100_000
_MAX_RESTARTS = 8


def _check_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.size == 0:
        raise ValueError("expected a nonempty 2-d matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix has non-finite entries")
    return X


def spectral_norm(X, tol: float = DEFAULT_SPECTRAL_TOL) -> float:
    """Largest singular value of X, via power iteration on the Gram matrix.

    The iteration starts from the normalized all-ones vector and runs on the
    smaller of X Xᵀ / Xᵀ X until the Rayleigh quotient stabilizes to a
    relative change below tol.  A Rayleigh-quotient estimate can only
    underestimate, so after convergence the result is checked against the
    lower bound ‖G‖₂ ≥ max_i ‖G e_i‖ and the iteration restarts from the
    offending basis vector if the bound is violated (this catches start
    vectors that are exactly orthogonal to the leading eigenspace).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    X = _check_matrix(X)
    if not X.any():
        return 0.0
    G = X @ X.T if X.shape[0] <= X.shape[1] else X.T @ X
    s = G.shape[0]
    col_norms = np.linalg.norm(G, axis=0)
    floor = col_norms.max()  # ‖G‖₂ ≥ ‖G e_i‖ for every i

    def iterate(v0: np.ndarray) -> float:
        v = v0 / np.linalg.norm(v0)
        lam = 0.0
        for _ in range(_MAX_POWER_ITERS):
            gv = G @ v
            nrm = np.linalg.norm(gv)
            if nrm == 0.0:
                return 0.0  # start vector was in the kernel
            v = gv / nrm
            new_lam = float(v @ (G @ v))
            if abs(new_lam - lam) <= 0.1 * tol * new_lam:
                return new_lam
            lam = new_lam
        return lam

    lam = iterate(np.ones(s))
    for _ in range(_MAX_RESTARTS):
        if lam >= (1.0 - tol) * floor:
            break
        e = np.zeros(s)
        e[int(np.argmax(col_norms))] = 1.0
        lam = max(lam, iterate(e))
    return float(np.sqrt(max(lam, 0.0)))


def _pivoted_orthonormal_basis(X: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the column span, by pivoted Gram-Schmidt.

    Columns whose residual norm falls at or below tol·σ_max are treated as
    dependent.  Each accepted vector is re-orthogonalized once ("twice is
    enough") so Q stays orthonormal to machine precision.
    """
    sigma = spectral_norm(X)
    if sigma == 0.0:
        return np.zeros((X.shape[0], 0))
    thr = tol * sigma
    R = X.copy()
    qs = []
    for _ in range(min(X.shape)):
        norms = np.linalg.norm(R, axis=0)
        p = int(np.argmax(norms))
        if norms[p] <= thr:
            break
        q = R[:, p] / norms[p]
        for prev in qs:
            q -= (prev @ q) * prev
        q /= np.linalg.norm(q)
        qs.append(q)
        R -= np.outer(q, q @ R)
    if not qs:
        return np.zeros((X.shape[0], 0))
    return np.column_stack(qs)


def numeric_rank(X, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of directions in the column span resolvable above tol·σ_max."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    X = _check_matrix(X)
    return _pivoted_orthonormal_basis(X, tol).shape[1]


def orthogonal_projector(columns, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Symmetric idempotent P with range(P) = span of the given columns.

    The complementary projector is I - P.
    """
    X = _check_matrix(columns)
    Q = _pivoted_orthonormal_basis(X, tol)
    P = Q @ Q.T
    return 0.5 * (P + P.T)
