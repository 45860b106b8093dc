"""Column subset selection: approximate a matrix from k of its own columns.

The objective is ``||X - X_S B||_F`` over supports of size k. Greedy and
exchange searches run on the matrix analogues of the selection/elimination
criteria; a leverage-score selector and the truncated-SVD error floor serve
as baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import criteria
from .linalg import SingularGramError, projected_gram_diag, spd_inverse

CSS_VARIANTS = ("classic-greedy", "optimal-greedy", "classic-exchange", "optimal-exchange")


class SpanExhaustedError(RuntimeError):
    """Fewer than k linearly independent columns are available."""


@dataclass(frozen=True)
class CssState:
    """Active columns with the reconstruction coefficients and residual.

    ``coeff`` maps active columns to all columns (``B = C X_S^T X``),
    ``residual`` is ``X - X_S B``, and ``explained`` the Frobenius energy
    captured, ``||X||_F^2 - ||residual||_F^2``.
    """

    support: list[int]
    coeff: np.ndarray
    residual: np.ndarray
    inverse: np.ndarray
    explained: float

    @property
    def size(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class CssReport:
    support: list[int]
    coeff: np.ndarray
    rel_error: float
    variant: str


def css_state(X: np.ndarray, support) -> CssState:
    """Fit the reconstruction of X from the given columns."""
    support = [int(j) for j in support]
    if not support:
        return CssState([], np.zeros((0, X.shape[1])), X.copy(), np.zeros((0, 0)), 0.0)
    Xs = X[:, support]
    C = spd_inverse(Xs.T @ Xs)
    B = C @ (Xs.T @ X)
    R = X - Xs @ B
    explained = float(np.einsum("ij,ij->", X, X) - np.einsum("ij,ij->", R, R))
    return CssState(support, B, R, C, explained)


def _rel_error(X, state) -> float:
    return float(np.linalg.norm(state.residual) / np.linalg.norm(X))


def _addable(X, state, colsq):
    """Candidates that are nonzero and extend the active span."""
    p = X.shape[1]
    outside = np.array(
        [j for j in range(p) if j not in state.support and colsq[j] > 0.0], dtype=np.intp
    )
    if outside.size == 0:
        return outside
    diag = projected_gram_diag(X, state, outside)
    return outside[diag > 1e-12 * colsq[outside]]


def _greedy(X, k, classic):
    colsq = np.einsum("ij,ij->j", X, X)
    state = css_state(X, [])
    for _ in range(k):
        outside = _addable(X, state, colsq)
        if outside.size == 0:
            raise SpanExhaustedError(
                f"only {state.size} independent columns available, needed {k}"
            )
        scores = criteria.css_selection(X, state, outside, classic=classic)
        usable = np.isfinite(scores.scores)
        j = criteria.argmax_lowest(scores.indices[usable], scores.scores[usable])
        state = css_state(X, state.support + [j])
    return state


def _exchange(X, state, classic, kmax):
    colsq = np.einsum("ij,ij->j", X, X)
    frob = float(np.einsum("ij,ij->", X, X))
    loss = frob - state.explained
    while True:
        drops = criteria.css_elimination(X, state, classic=classic).drop_order()
        outside = _addable(X, state, colsq)
        if outside.size == 0:
            return state
        sel = criteria.css_selection(X, state, outside, classic=classic)
        finite = np.isfinite(sel.scores)
        order = np.lexsort((sel.indices[finite], -sel.scores[finite]))
        adds = sel.indices[finite][order]
        best_state, best_loss = state, loss
        for k in range(1, min(kmax, len(drops), len(adds)) + 1):
            trial = sorted(
                (set(state.support) - set(drops[:k].tolist())) | set(adds[:k].tolist())
            )
            try:
                cand = css_state(X, trial)
            except SingularGramError:
                continue
            cand_loss = frob - cand.explained
            if cand_loss < best_loss - 1e-12 * max(frob, 1.0):
                best_state, best_loss = cand, cand_loss
        if best_state.support == state.support:
            return state
        state, loss = best_state, best_loss


def css_solve(X: np.ndarray, k: int, variant: str = "optimal-greedy") -> CssReport:
    """Select k columns of X minimizing the Frobenius reconstruction error.

    Greedy variants add k columns by the configured selection criterion;
    exchange variants then swap weakest-in for strongest-out while the loss
    strictly improves. Raises SpanExhaustedError when fewer than k
    independent columns exist.
    """
    if variant not in CSS_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {CSS_VARIANTS}")
    if not 1 <= k <= X.shape[1]:
        raise ValueError(f"k={k} outside [1, {X.shape[1]}]")
    classic = variant.startswith("classic")
    state = _greedy(X, k, classic)
    if variant.endswith("exchange"):
        state = _exchange(X, state, classic, kmax=k)
    return CssReport(list(state.support), state.coeff, _rel_error(X, state), variant)


def leverage_score_baseline(X: np.ndarray, k: int, n_vectors: int) -> CssReport:
    """Select the k columns with the most energy in the top singular subspace.

    The score of column j is ``sum_i (sigma_i V_ji)^2`` over the top
    ``n_vectors`` right singular vectors, i.e. the squared norm of the
    column's projection onto the dominant left subspace; with all vectors it
    reduces to the column norm. Deterministic; ties go to the lowest column
    index. More vectors give a finer score at the cost of a fuller SVD.
    """
    n, p = X.shape
    if not 1 <= n_vectors <= min(n, p):
        raise ValueError(f"n_vectors={n_vectors} outside [1, {min(n, p)}]")
    _, s, vt = np.linalg.svd(X, full_matrices=False)
    w = s[:n_vectors, None] * vt[:n_vectors]
    lev = np.einsum("ij,ij->j", w, w)
    order = np.lexsort((np.arange(p), -lev))
    support = sorted(int(j) for j in order[:k])
    state = css_state(X, support)
    return CssReport(support, state.coeff, _rel_error(X, state), f"leverage-{n_vectors}")


def svd_rank_bound(X: np.ndarray, k: int) -> float:
    """Relative error of the best rank-k approximation (floor for any CSS)."""
    s = np.linalg.svd(X, compute_uv=False)
    total = float(s @ s)
    if total == 0.0:
        return 0.0
    return float(np.sqrt(max(float(s[k:] @ s[k:]), 0.0) / total))
