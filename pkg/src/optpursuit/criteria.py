"""Per-feature scoring rules for greedy subset selection and elimination.

Two families are provided for each direction:

* classical: squared residual correlation for adding a column, and the
  Wald-style backward sacrifice ``(X_j^T X_j) beta_j^2`` for removing one.
  Both measure a column's individual contribution with all other
  coefficients frozen.
* objective-based: the exact change of the least-squares objective when the
  support is refit after the add/remove. Selection divides the squared
  correlation by the candidate's energy outside the active span; elimination
  scores each active column by the explained energy that would remain
  without it.

A gradient-pursuit selection rule and the matrix-valued (column subset
selection) analogues round out the set. Scores are unnormalized; only the
induced ordering matters, and every argmax/argmin breaks ties toward the
lowest column index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import PIVOT_FLOOR, RCOND_FLOOR, DegeneratePivotError, SupportState, projected_gram_diag

CORR_SELECT = "CorrSelect"
WALD_ELIMINATE = "WaldEliminate"
OPT_SELECT = "OptSelect"
OPT_ELIMINATE = "OptEliminate"
OGP_SELECT = "OgpSelect"
CSS_SELECT = "CssSelect"
CSS_ELIMINATE = "CssEliminate"

_KINDS = frozenset(
    {CORR_SELECT, WALD_ELIMINATE, OPT_SELECT, OPT_ELIMINATE, OGP_SELECT, CSS_SELECT, CSS_ELIMINATE}
)
_SELECT_KINDS = frozenset({CORR_SELECT, OPT_SELECT, OGP_SELECT, CSS_SELECT})


class ZeroColumnError(ValueError):
    """A scored candidate column has zero norm."""


class ZeroDenominatorError(ValueError):
    """All gradient-pursuit gains vanish; the residual is already zero."""


@dataclass(frozen=True)
class CriterionScores:
    """Scores for a set of column indices under one criterion.

    ``scores[i]`` belongs to column ``indices[i]``. Selection kinds may carry
    ``-inf`` entries marking candidates excluded as numerically collinear
    with the active span; NaN never appears. ``classic`` distinguishes the
    classical column-subset-selection rules from the objective-based ones.
    """

    indices: np.ndarray
    scores: np.ndarray
    kind: str
    classic: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown criterion kind {self.kind!r}")
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.intp))
        object.__setattr__(self, "scores", np.asarray(self.scores, dtype=np.float64))
        if self.indices.shape != self.scores.shape:
            raise ValueError("indices and scores must have equal length")
        if len(np.unique(self.indices)) != len(self.indices):
            raise ValueError("indices must be distinct")
        if np.isnan(self.scores).any():
            raise ValueError("criterion produced NaN scores")

    def keep_values(self) -> np.ndarray:
        """Scores oriented so that larger always means 'more worth keeping'.

        Selection kinds already point that way. For elimination kinds the
        orientation depends on the rule: Wald keeps large scores, while the
        objective-based rule drops the column whose removal leaves the most
        energy explained (large score = drop).
        """
        if self.kind in _SELECT_KINDS or self.kind == WALD_ELIMINATE:
            return self.scores
        if self.kind == CSS_ELIMINATE and self.classic:
            return self.scores
        return -self.scores

    def best(self) -> int:
        """Index with the maximal score, ties to the lowest index."""
        return argmax_lowest(self.indices, self.scores)

    def top(self, k: int) -> np.ndarray:
        """The k indices with largest scores, ties to the lowest index."""
        order = np.lexsort((self.indices, -self.scores))
        return self.indices[order[:k]]

    def keep_top(self, k: int) -> np.ndarray:
        """The k most keep-worthy indices under this criterion's orientation."""
        kv = self.keep_values()
        order = np.lexsort((self.indices, -kv))
        return self.indices[order[:k]]

    def drop_order(self) -> np.ndarray:
        """All indices ordered from first-to-drop to last-to-drop."""
        kv = self.keep_values()
        order = np.lexsort((self.indices, kv))
        return self.indices[order]


def argmax_lowest(indices, scores) -> int:
    """Argmax with ties broken toward the lowest index."""
    indices = np.asarray(indices)
    scores = np.asarray(scores)
    m = scores.max()
    return int(indices[scores == m].min())


def _candidate_block(X, state, candidates):
    cand = np.asarray(list(candidates), dtype=np.intp)
    if cand.size and state.size and np.isin(cand, state.support).any():
        raise ValueError("candidates overlap the active support")
    return cand, X[:, cand]


def corr_selection(X: np.ndarray, state: SupportState, candidates) -> CriterionScores:
    """Squared normalized correlation of each candidate with the residual.

    Score is ``(r^T X_j)^2 / (X_j^T X_j)``; ordering matches ranking by
    ``|r^T X_j| / ||X_j||``. Raises ZeroColumnError if any candidate column
    has zero norm.
    """
    cand, Xc = _candidate_block(X, state, candidates)
    colsq = np.einsum("ij,ij->j", Xc, Xc)
    if np.any(colsq <= 0.0):
        bad = cand[colsq <= 0.0]
        raise ZeroColumnError(f"zero-norm candidate column(s): {bad.tolist()}")
    corr = Xc.T @ state.residual
    return CriterionScores(cand, corr**2 / colsq, CORR_SELECT)


def wald_elimination(state: SupportState, X: np.ndarray) -> CriterionScores:
    """Backward sacrifice ``(X_j^T X_j) beta_j^2`` for each active column.

    Order-equivalent to ranking by the absolute Wald T statistic at a fixed
    step; the column minimizing the score is the classical drop choice.
    """
    if state.size == 0:
        raise ValueError("elimination requires a nonempty support")
    Xs = X[:, state.support]
    colsq = np.einsum("ij,ij->j", Xs, Xs)
    return CriterionScores(np.asarray(state.support), colsq * state.beta**2, WALD_ELIMINATE)


def optimal_selection(X: np.ndarray, state: SupportState, candidates) -> CriterionScores:
    """Objective-based selection: correlation over span-projected energy.

    Score is ``(r^T X_j)^2 / (X_j^T X_j - (X_S^T X_j)^T C (X_S^T X_j))``;
    the denominator is the candidate's energy outside the active span, so
    the score equals the full least-squares objective drop from adding j
    and refitting. Candidates whose denominator falls at or below
    ``1e-12 * X_j^T X_j`` are returned with ``-inf`` (already in span).
    """
    cand, Xc = _candidate_block(X, state, candidates)
    colsq = np.einsum("ij,ij->j", Xc, Xc)
    denom = projected_gram_diag(X, state, cand)
    corr = Xc.T @ state.residual
    scores = np.full(cand.shape, -np.inf)
    ok = denom > RCOND_FLOOR * colsq
    scores[ok] = corr[ok] ** 2 / denom[ok]
    return CriterionScores(cand, scores, OPT_SELECT)


def optimal_elimination(
    X: np.ndarray, y: np.ndarray, state: SupportState, method: str = "shortcut"
) -> CriterionScores:
    """Objective-based elimination: explained energy after each removal.

    Score for active column j is ``y^T X_{S'} (X_{S'}^T X_{S'})^{-1} X_{S'}^T y``
    with ``S' = S \\ {j}``, evaluated from the cached inverse without
    refitting. ``method="sandwich"`` uses the rank-one-deflation quadratic
    form directly; ``method="shortcut"`` uses the identical value
    ``explained_energy - beta_j^2 / C_jj``. The column attaining the argmax
    is the one whose removal costs least.
    """
    if state.size < 2:
        raise ValueError("elimination requires at least two active columns")
    C = state.inverse
    diag = np.diag(C).copy()
    if np.any(diag <= PIVOT_FLOOR):
        raise DegeneratePivotError("cached inverse has a vanishing diagonal pivot")
    if method == "shortcut":
        scores = state.explained_energy - state.beta**2 / diag
    elif method == "sandwich":
        b = state.xty
        scores = np.empty(state.size)
        for i in range(state.size):
            bt = b.copy()
            bt[i] = 0.0
            Cb = C @ bt
            scores[i] = bt @ Cb - (Cb[i] ** 2) / diag[i]
    else:
        raise ValueError(f"unknown method {method!r}")
    return CriterionScores(np.asarray(state.support), scores, OPT_ELIMINATE)


def ogp_selection(X: np.ndarray, state: SupportState, candidates) -> CriterionScores:
    """Gradient-pursuit selection: one-step exact-line-search gain per candidate.

    Score is ``(||X_S^T r||^2 + (r^T X_j)^2) / ||X_S X_S^T r + X_j X_j^T r||``,
    the residual-norm decrease of a single exact-line-search gradient step
    on ``S + {j}``. The support-only pieces are computed once per call.
    Raises ZeroDenominatorError when every gain vanishes (zero residual).
    """
    cand, Xc = _candidate_block(X, state, candidates)
    r = state.residual
    if state.size:
        Xs = X[:, state.support]
        xtr = Xs.T @ r
        head = float(xtr @ xtr)
        w = Xs @ xtr
        wsq = float(w @ w)
    else:
        head, wsq = 0.0, 0.0
        w = np.zeros_like(r)
    corr = Xc.T @ r
    num = head + corr**2
    colsq = np.einsum("ij,ij->j", Xc, Xc)
    xw = Xc.T @ w
    den = np.sqrt(np.maximum(wsq + 2.0 * corr * xw + corr**2 * colsq, 0.0))
    if not np.any(num > 0.0):
        raise ZeroDenominatorError("residual is zero; nothing left to pursue")
    scores = np.zeros(cand.shape)
    ok = den > 0.0
    scores[ok] = num[ok] / den[ok]
    return CriterionScores(cand, scores, OGP_SELECT)


def css_selection(X: np.ndarray, state_css, candidates, classic: bool = False) -> CriterionScores:
    """Column-subset selection score for candidate columns.

    The numerator is ``||R^T X_j||^2`` with R the current reconstruction
    residual matrix. The objective-based variant divides by the candidate's
    span-projected energy (``-inf`` when already in span); the classic
    variant divides by ``X_j^T X_j``.
    """
    cand, Xc = _candidate_block(X, state_css, candidates)
    proj = state_css.residual.T @ Xc
    num = np.einsum("ij,ij->j", proj, proj)
    colsq = np.einsum("ij,ij->j", Xc, Xc)
    if classic:
        if np.any(colsq <= 0.0):
            raise ZeroColumnError(f"zero-norm candidate column(s): {cand[colsq <= 0.0].tolist()}")
        return CriterionScores(cand, num / colsq, CSS_SELECT, classic=True)
    denom = projected_gram_diag(X, state_css, cand)
    scores = np.full(cand.shape, -np.inf)
    ok = denom > RCOND_FLOOR * colsq
    scores[ok] = num[ok] / denom[ok]
    return CriterionScores(cand, scores, CSS_SELECT)


def css_elimination(
    X: np.ndarray, state_css, classic: bool = False, method: str = "shortcut"
) -> CriterionScores:
    """Column-subset elimination scores for the active columns.

    Objective-based variant: the Frobenius energy of X still explained
    after removing each column (argmax drops); computed either by the
    rank-one-deflation trace ("sandwich") or the equal shortcut
    ``explained - ||B[i, :]||^2 / C_ii``. Classic variant:
    ``||X_j||^2 ||B[i, :]||^2`` where row i of B carries column j's
    coefficients (argmin drops).
    """
    support = list(state_css.support)
    if len(support) == 0:
        raise ValueError("elimination requires a nonempty support")
    B = state_css.coeff
    rowsq = np.einsum("ij,ij->i", B, B)
    if classic:
        Xs = X[:, support]
        colsq = np.einsum("ij,ij->j", Xs, Xs)
        return CriterionScores(np.asarray(support), colsq * rowsq, CSS_ELIMINATE, classic=True)
    C = state_css.inverse
    diag = np.diag(C).copy()
    if np.any(diag <= PIVOT_FLOOR):
        raise DegeneratePivotError("cached inverse has a vanishing diagonal pivot")
    if method == "shortcut":
        scores = state_css.explained - rowsq / diag
    elif method == "sandwich":
        B0 = X[:, support].T @ X
        scores = np.empty(len(support))
        for i in range(len(support)):
            M = C - np.outer(C[:, i], C[i, :]) / diag[i]
            M[i, :] = 0.0
            M[:, i] = 0.0
            scores[i] = float(np.einsum("ij,ij->", B0, M @ B0))
    else:
        raise ValueError(f"unknown method {method!r}")
    return CriterionScores(np.asarray(support), scores, CSS_ELIMINATE)
