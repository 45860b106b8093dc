"""Dense linear algebra for support-restricted least squares.

Everything downstream (criteria, solvers, column selection) runs on three
primitives kept here: a least-squares fit on an active column set with the
Gram inverse cached, rank-one growth/shrinkage of that cached inverse, and
the diagonal of the candidate Gram projected off the active span. The n x n
projector is never materialized; all formulas work through ``(X_S, C)`` with
``C = (X_S^T X_S)^(-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.linalg.lapack import dpocon

# Reciprocal-condition floor below which a Gram matrix is treated as singular.
RCOND_FLOOR = 1e-12
# Diagonal pivot floor for removing a column from a cached inverse.
PIVOT_FLOOR = 1e-14
# Cached inverses are rebuilt from scratch after this many rank-one updates.
REFACTOR_EVERY = 64


class SingularGramError(np.linalg.LinAlgError):
    """Active-set Gram matrix is numerically rank deficient."""


class NearSingularBorderError(np.linalg.LinAlgError):
    """Appended column lies (nearly) in the span of the active columns."""


class DegeneratePivotError(np.linalg.LinAlgError):
    """Inverse diagonal pivot too small to support a column removal."""


def as_design(X) -> np.ndarray:
    """Validate and coerce a design matrix to float64, column-major.

    Raises ValueError on non-2D input or non-finite entries.
    """
    A = np.asfortranarray(X, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"design matrix must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("design matrix contains NaN or Inf")
    return A


def as_vector(y, n: int | None = None) -> np.ndarray:
    """Validate and coerce a response vector to a finite float64 1-D array."""
    v = np.ascontiguousarray(y, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected 1-D vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"vector length {v.shape[0]} does not match n={n}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains NaN or Inf")
    return v


def spd_inverse(G: np.ndarray) -> np.ndarray:
    """Invert a symmetric positive-definite Gram matrix.

    Uses a Cholesky solve and symmetrizes the result. Raises
    SingularGramError when the LAPACK reciprocal condition estimate drops
    below RCOND_FLOOR or the matrix is not positive definite.
    """
    k = G.shape[0]
    if k == 0:
        return np.zeros((0, 0))
    try:
        factor = cho_factor(G, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise SingularGramError(f"gram matrix not positive definite: {e}") from e
    anorm = float(np.abs(G).sum(axis=0).max())
    rcond, info = dpocon(factor[0], anorm)
    if info != 0 or rcond < RCOND_FLOOR:
        raise SingularGramError(f"gram matrix rank deficient (rcond ~ {rcond:.2e})")
    C = cho_solve(factor, np.eye(k), check_finite=False)
    return 0.5 * (C + C.T)


@dataclass(frozen=True)
class SupportState:
    """Least-squares fit on an active index set, with cached Gram inverse.

    Attributes
    ----------
    support : list[int]
        Active column indices, in insertion order.
    inverse : np.ndarray
        ``(X_S^T X_S)^(-1)``, shape ``(|S|, |S|)`` in support order.
    beta : np.ndarray
        Coefficients over the support, ``C X_S^T y``.
    residual : np.ndarray
        ``y - X_S beta``, length n.
    explained_energy : float
        ``y^T X_S C X_S^T y``; equals ``||y||^2 - ||residual||^2``.
    xty : np.ndarray
        Cached ``X_S^T y`` in support order.
    updates : int
        Rank-one updates applied since the last fresh factorization.
    """

    support: list[int]
    inverse: np.ndarray
    beta: np.ndarray
    residual: np.ndarray
    explained_energy: float
    xty: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    updates: int = 0

    @property
    def size(self) -> int:
        return len(self.support)

    def verify(self, X: np.ndarray, y: np.ndarray, rtol: float = 1e-8) -> None:
        """Assert the defining identities of the state against (X, y)."""
        Xs = X[:, self.support]
        G = Xs.T @ Xs
        k = self.size
        if k:
            scale = max(np.abs(self.inverse).max(), 1.0)
            assert np.abs(self.inverse - self.inverse.T).max() <= 1e-10 * scale
            assert np.linalg.norm(self.inverse @ G - np.eye(k)) <= 1e-8 * max(
                1.0, np.linalg.norm(self.inverse) * np.linalg.norm(G)
            )
        beta_ref = self.inverse @ (Xs.T @ y)
        assert np.allclose(self.beta, beta_ref, rtol=rtol, atol=1e-12)
        assert np.abs(self.residual - (y - Xs @ self.beta)).max() <= 1e-10
        ref = float(y @ y) - float(self.residual @ self.residual)
        assert abs(self.explained_energy - ref) <= rtol * max(1.0, abs(ref))


def least_squares_on_support(X: np.ndarray, y: np.ndarray, S) -> SupportState:
    """Fit y on the columns of X indexed by S via a fresh factorization.

    S must hold distinct indices in [0, p). An empty S yields beta of
    length 0, residual = y and zero explained energy. Raises
    SingularGramError when the support Gram is rank deficient.
    """
    n, p = X.shape
    S = [int(j) for j in S]
    if len(set(S)) != len(S):
        raise ValueError(f"support indices not distinct: {S}")
    for j in S:
        if not 0 <= j < p:
            raise IndexError(f"support index {j} outside [0, {p})")
    if not S:
        y = np.asarray(y, dtype=np.float64)
        return SupportState(
            support=[],
            inverse=np.zeros((0, 0)),
            beta=np.zeros(0),
            residual=y.copy(),
            explained_energy=0.0,
            xty=np.zeros(0),
        )
    Xs = X[:, S]
    C = spd_inverse(Xs.T @ Xs)
    b = Xs.T @ y
    beta = C @ b
    residual = y - Xs @ beta
    return SupportState(
        support=S,
        inverse=C,
        beta=beta,
        residual=residual,
        explained_energy=float(beta @ b),
        xty=b,
    )


def forward_inverse_update(A_inv: np.ndarray, u: np.ndarray, alpha: float) -> np.ndarray:
    """Grow a cached Gram inverse by one symmetric border row/column.

    Given ``A_inv = A^(-1)`` and the bordered matrix ``[[A, u], [u^T, alpha]]``,
    returns the (k+1) x (k+1) inverse via the block formula with Schur
    complement ``t = alpha - u^T A_inv u``. Raises NearSingularBorderError
    when ``|t| <= 1e-12 * alpha``, i.e. the new column is numerically in the
    span of the current ones.
    """
    k = A_inv.shape[0]
    if k == 0:
        if abs(alpha) <= 0.0:
            raise NearSingularBorderError("bordering a zero-norm column")
        return np.array([[1.0 / alpha]])
    w = A_inv @ u
    t = float(alpha - u @ w)
    if abs(t) <= RCOND_FLOOR * abs(alpha):
        raise NearSingularBorderError(
            f"new column in span of current support (t={t:.3e}, alpha={alpha:.3e})"
        )
    B_inv = np.empty((k + 1, k + 1))
    B_inv[:k, :k] = A_inv + np.outer(w, w) / t
    B_inv[:k, k] = -w / t
    B_inv[k, :k] = -w / t
    B_inv[k, k] = 1.0 / t
    return B_inv


def backward_inverse_update(B_inv: np.ndarray, drop_pos: int) -> np.ndarray:
    """Shrink a cached Gram inverse by deleting one row/column.

    ``drop_pos`` is a position within the current ordering; it is permuted
    to the last slot and removed via ``G - w w^T / gamma`` where gamma is
    the corresponding diagonal pivot of B_inv. Raises DegeneratePivotError
    when the pivot is at or below PIVOT_FLOOR.
    """
    k = B_inv.shape[0]
    if not 0 <= drop_pos < k:
        raise IndexError(f"drop position {drop_pos} outside [0, {k})")
    gamma = float(B_inv[drop_pos, drop_pos])
    if gamma <= PIVOT_FLOOR:
        raise DegeneratePivotError(f"inverse pivot {gamma:.3e} too small")
    keep = [i for i in range(k) if i != drop_pos]
    G = B_inv[np.ix_(keep, keep)]
    w = B_inv[keep, drop_pos]
    return G - np.outer(w, w) / gamma


def extend_support(X: np.ndarray, y: np.ndarray, state: SupportState, j: int) -> SupportState:
    """Append column j to the state's support and refit.

    The cached inverse grows by the block update; a fresh factorization is
    used instead every REFACTOR_EVERY updates or when the border signals
    near singularity, which caps accumulated drift.
    """
    j = int(j)
    if j in state.support:
        raise ValueError(f"column {j} already in support")
    if state.updates + 1 >= REFACTOR_EVERY:
        return least_squares_on_support(X, y, state.support + [j])
    xj = X[:, j]
    u = X[:, state.support].T @ xj if state.size else np.zeros(0)
    try:
        C = forward_inverse_update(state.inverse, u, float(xj @ xj))
    except NearSingularBorderError:
        # Fall back to a fresh factorization; if that is singular too the
        # column genuinely cannot be added.
        return least_squares_on_support(X, y, state.support + [j])
    support = state.support + [j]
    b = np.append(state.xty, float(xj @ y))
    beta = C @ b
    residual = y - X[:, support] @ beta
    return SupportState(
        support=support,
        inverse=C,
        beta=beta,
        residual=residual,
        explained_energy=float(beta @ b),
        xty=b,
        updates=state.updates + 1,
    )


def shrink_support(X: np.ndarray, y: np.ndarray, state: SupportState, pos: int) -> SupportState:
    """Remove the support entry at position pos and refit."""
    if state.size == 0:
        raise ValueError("cannot shrink an empty support")
    support = [s for i, s in enumerate(state.support) if i != pos]
    if state.updates + 1 >= REFACTOR_EVERY:
        return least_squares_on_support(X, y, support)
    try:
        C = backward_inverse_update(state.inverse, pos)
    except DegeneratePivotError:
        return least_squares_on_support(X, y, support)
    b = np.delete(state.xty, pos)
    beta = C @ b
    residual = y - X[:, support] @ beta if support else y.copy()
    return SupportState(
        support=support,
        inverse=C,
        beta=beta,
        residual=residual,
        explained_energy=float(beta @ b) if support else 0.0,
        xty=b,
        updates=state.updates + 1,
    )


def projected_gram_diag(X: np.ndarray, state: SupportState, candidates) -> np.ndarray:
    """Diagonal of the candidate Gram projected off the active span.

    Entry for candidate j is ``X_j^T X_j - (X_S^T X_j)^T C (X_S^T X_j)``,
    the squared norm of X_j after removing its component in span(X_S).
    Negative rounding residue is clamped to zero. Candidates must be
    disjoint from the support.
    """
    cand = np.asarray(list(candidates), dtype=np.intp)
    if cand.size == 0:
        return np.zeros(0)
    if state.size and np.isin(cand, state.support).any():
        raise ValueError("candidates overlap the active support")
    Xc = X[:, cand]
    d = np.einsum("ij,ij->j", Xc, Xc)
    if state.size:
        M = X[:, state.support].T @ Xc
        d = d - np.einsum("ij,ij->j", M, state.inverse @ M)
    return np.maximum(d, 0.0)
