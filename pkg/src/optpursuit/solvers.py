"""Greedy subset-selection solvers, each parameterized by a criterion pair.

One engine per combination strategy, with the scoring rules swapped by
``SolverConfig.variant``:

* ``solve_pursuit`` - select-only matching pursuit with a full least-squares
  refit per step (classical selection gives OMP, objective-based gives OP).
* ``solve_cosa`` - select-2K / merge / prune-to-K iterations (CoSaMP vs
  CoSaOP depending on the criterion pair).
* ``solve_bess`` - fixed-size splicing: swap the weakest k in-support
  columns for the strongest k outside, keep strict improvements.
* ``solve_gp`` - gradient pursuit: selection as above, but coefficients move
  by one exact-line-search gradient step instead of a refit.

All solvers are deterministic: identical inputs and config reproduce the
same report bit-for-bit apart from wall time.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import criteria
from .linalg import (
    PIVOT_FLOOR,
    DegeneratePivotError,
    SingularGramError,
    SupportState,
    extend_support,
    least_squares_on_support,
)

CLASSICAL = "classical"
OPTIMAL = "optimal"


class NoSelectableCandidateError(RuntimeError):
    """Every remaining candidate is numerically inside the active span."""


@dataclass(frozen=True)
class SolverConfig:
    """Shared solver parameters.

    ``k`` is the target support size. ``residual_tol`` stops any solver once
    ``||r||_2`` falls to it; ``variation_tol`` additionally stops the
    select-eliminate family when the coefficient vector stalls.
    ``splicing_kmax``/``splicing_threshold`` control the exchange family;
    they default to ``k`` and to a numerically-meaningful improvement floor
    of ``1e-12 ||y||^2 / (2n)`` per accepted splicing pass (a larger
    threshold trades accuracy for earlier termination). ``ogp_reupdate``
    lets gradient pursuit re-run a gradient step on the current support when
    no candidate beats the in-place gain by ``ogp_reupdate_tau``.
    """

    k: int
    variant: str = CLASSICAL
    residual_tol: float = 1e-6
    variation_tol: float = 1e-7
    max_iter: int = 100
    splicing_kmax: int | None = None
    splicing_threshold: float | None = None
    ogp_reupdate: bool = False
    ogp_reupdate_tau: float = 0.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("sparsity level must be >= 1")
        if self.residual_tol < 0 or self.variation_tol < 0:
            raise ValueError("tolerances must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.variant not in (CLASSICAL, OPTIMAL):
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solver run.

    ``beta`` has length p with exact zeros off the support; ``support``
    preserves the solver's insertion order. ``objective_trace`` records the
    residual sum of squares over iterations and ``wall_time`` is seconds.
    """

    support: list[int]
    beta: np.ndarray
    residual_norms: list[float]
    iterations: int
    wall_time: float
    objective_trace: list[float]

    def support_set(self) -> frozenset[int]:
        return frozenset(self.support)


def _validate(X, y, cfg):
    n, p = X.shape
    if y.shape != (n,):
        raise ValueError(f"y has shape {y.shape}, expected ({n},)")
    if cfg.k > min(n, p):
        raise ValueError(f"sparsity {cfg.k} exceeds min(n, p) = {min(n, p)}")
    colsq = np.einsum("ij,ij->j", X, X)
    if np.any(colsq <= 0.0):
        raise criteria.ZeroColumnError(
            f"zero-norm column(s): {np.flatnonzero(colsq <= 0.0).tolist()}"
        )
    return n, p


def _full_beta(p, state):
    beta = np.zeros(p)
    if state.size:
        beta[state.support] = state.beta
    return beta


def _select_scores(X, state, candidates, variant):
    if variant == OPTIMAL:
        return criteria.optimal_selection(X, state, candidates)
    return criteria.corr_selection(X, state, candidates)


def _drop_order(X, y, state, variant):
    """Active indices ordered first-to-drop under the configured criterion."""
    if state.size == 1:
        return np.asarray(state.support)
    if variant == OPTIMAL:
        return criteria.optimal_elimination(X, y, state).drop_order()
    return criteria.wald_elimination(state, X).drop_order()


def solve_pursuit(X: np.ndarray, y: np.ndarray, cfg: SolverConfig, callback=None) -> SolveReport:
    """Select-only pursuit: grow the support one best column at a time.

    Each iteration ranks the out-of-support columns with the configured
    selection criterion, appends the argmax, refits by least squares (the
    cached Gram inverse grows by a rank-one block update) and refreshes the
    residual. Stops at ``||r|| <= residual_tol`` or ``|S| = k``. Raises
    NoSelectableCandidateError if every remaining candidate is in the span
    of the current support before k columns are active.
    """
    t0 = time.perf_counter()
    n, p = _validate(X, y, cfg)
    state = least_squares_on_support(X, y, [])
    residual_norms, objective = [], []
    excluded: set[int] = set()
    while state.size < cfg.k:
        rnorm = float(np.linalg.norm(state.residual))
        if rnorm <= cfg.residual_tol:
            break
        candidates = [j for j in range(p) if j not in excluded and j not in state.support]
        if not candidates:
            raise NoSelectableCandidateError(
                f"no usable candidate at support size {state.size}"
            )
        scores = _select_scores(X, state, candidates, cfg.variant)
        if not np.any(np.isfinite(scores.scores)):
            raise NoSelectableCandidateError(
                f"all candidates span-collinear at support size {state.size}"
            )
        j = scores.best()
        try:
            state = extend_support(X, y, state, j)
        except SingularGramError:
            # Classical scoring does not pre-screen collinear columns; skip
            # the offender and rescore.
            excluded.add(j)
            continue
        residual_norms.append(float(np.linalg.norm(state.residual)))
        objective.append(float(state.residual @ state.residual))
        if callback is not None:
            callback(state.size, list(state.support), _full_beta(p, state), residual_norms[-1])
    return SolveReport(
        support=list(state.support),
        beta=_full_beta(p, state),
        residual_norms=residual_norms,
        iterations=state.size,
        wall_time=time.perf_counter() - t0,
        objective_trace=objective,
    )


def _cosa_selection_scores(X, state, cfg, colsq, p):
    """Scores over all p indices for the identification stage.

    Out-of-support columns are scored by the configured selection rule;
    in-support columns by plain squared normalized correlation (they are
    orthogonal to the residual after a refit, hence effectively zero).
    Works on the full matrix to avoid per-candidate column copies.
    """
    r = state.residual
    corr = X.T @ r
    scores = corr**2 / colsq
    if cfg.variant == OPTIMAL and state.size:
        M = X[:, state.support].T @ X
        denom = np.maximum(colsq - np.einsum("ij,ij->j", M, state.inverse @ M), 0.0)
        outside = np.ones(p, dtype=bool)
        outside[state.support] = False
        ok = outside & (denom > 1e-12 * colsq)
        scores[ok] = corr[ok] ** 2 / denom[ok]
        scores[outside & ~ok] = -np.inf
    return scores


def _optimal_prune(state_u, k):
    """Peel the merged support down to k columns, one removal at a time.

    The objective-based elimination rule scores a single removal, so it is
    applied repeatedly: each round drops the column whose removal keeps the
    most energy explained (argmin of ``beta_j^2 / C_jj``, ties to the lowest
    index) and downdates the cached inverse by a rank-one update in place,
    zeroing the dropped row/column. Runs entirely on ``(C, X_S^T y)`` with
    no design-matrix access.
    """
    C = state_u.inverse.copy()
    b = state_u.xty.copy()
    m = len(state_u.support)
    alive = np.ones(m, dtype=bool)
    for _ in range(m - k):
        beta = C @ b
        diag = np.diagonal(C)
        if np.any(alive & (diag <= PIVOT_FLOOR)):
            raise DegeneratePivotError("vanishing pivot while pruning merged support")
        score = np.where(alive, beta * beta / np.where(alive, diag, 1.0), np.inf)
        t = int(np.argmin(score))
        C -= np.outer(C[:, t], C[t, :]) / C[t, t]
        b[t] = 0.0
        alive[t] = False
    return [s for s, a in zip(state_u.support, alive) if a]


def solve_cosa(X: np.ndarray, y: np.ndarray, cfg: SolverConfig, callback=None) -> SolveReport:
    """Select-first eliminate-next iterations (CoSaMP-style engine).

    Per iteration: take the top-2k columns by the selection criterion, merge
    with the current support, refit on the merged set, keep the k most
    keep-worthy columns under the elimination criterion, refit, update the
    residual. Stops on the residual tolerance, coefficient stall, or
    ``max_iter``. The 2k block is clamped to ``n - k`` so the merged refit
    stays overdetermined.
    """
    t0 = time.perf_counter()
    n, p = _validate(X, y, cfg)
    if 3 * cfg.k > n:
        warnings.warn(
            f"3k = {3 * cfg.k} exceeds n = {n}; selection block clamped", stacklevel=2
        )
    block = min(2 * cfg.k, p, max(n - cfg.k, 1))
    colsq = np.einsum("ij,ij->j", X, X)
    state = least_squares_on_support(X, y, [])
    beta_prev = np.zeros(p)
    residual_norms, objective = [], []
    iterations = 0
    for it in range(1, cfg.max_iter + 1):
        iterations = it
        scores = _cosa_selection_scores(X, state, cfg, colsq, p)
        finite = np.isfinite(scores)
        idx = np.flatnonzero(finite)
        order = np.lexsort((idx, -scores[idx]))
        omega = idx[order[:block]]
        merged = sorted(set(state.support) | set(omega.tolist()))
        try:
            state_u = least_squares_on_support(X, y, merged)
        except SingularGramError as e:
            raise SingularGramError(
                f"merged refit singular at iteration {it} (|U|={len(merged)})"
            ) from e
        if len(merged) <= cfg.k:
            keep = merged
        elif cfg.variant == OPTIMAL:
            keep = _optimal_prune(state_u, cfg.k)
        else:
            keep = criteria.wald_elimination(state_u, X).keep_top(cfg.k)
        try:
            state = least_squares_on_support(X, y, sorted(int(j) for j in keep))
        except SingularGramError as e:
            raise SingularGramError(f"pruned refit singular at iteration {it}") from e
        beta = _full_beta(p, state)
        rnorm = float(np.linalg.norm(state.residual))
        residual_norms.append(rnorm)
        objective.append(float(state.residual @ state.residual))
        if callback is not None:
            callback(it, list(state.support), beta, rnorm)
        if rnorm <= cfg.residual_tol or float(np.linalg.norm(beta - beta_prev)) <= cfg.variation_tol:
            break
        beta_prev = beta
    return SolveReport(
        support=list(state.support),
        beta=_full_beta(p, state),
        residual_norms=residual_norms,
        iterations=iterations,
        wall_time=time.perf_counter() - t0,
        objective_trace=objective,
    )


def _splice_once(X, y, state, cfg, kmax, tau):
    """One splicing pass: try swap sizes 1..kmax, keep the best improvement.

    Returns the incoming state unchanged when the best loss improvement
    falls below tau.
    """
    n = X.shape[0]
    p = X.shape[1]
    loss0 = float(state.residual @ state.residual) / (2 * n)
    drop_seq = _drop_order(X, y, state, cfg.variant)
    outside = [j for j in range(p) if j not in state.support]
    if not outside:
        return state
    sel = _select_scores(X, state, outside, cfg.variant)
    finite_mask = np.isfinite(sel.scores)
    order = np.lexsort((sel.indices[finite_mask], -sel.scores[finite_mask]))
    add_seq = sel.indices[finite_mask][order]
    best_state, best_loss = state, loss0
    for k in range(1, min(kmax, len(drop_seq), len(add_seq)) + 1):
        trial = sorted(
            (set(state.support) - set(drop_seq[:k].tolist())) | set(add_seq[:k].tolist())
        )
        try:
            cand = least_squares_on_support(X, y, trial)
        except SingularGramError as e:
            raise SingularGramError(f"splice refit singular on support {trial}") from e
        loss = float(cand.residual @ cand.residual) / (2 * n)
        if loss < best_loss:
            best_loss, best_state = loss, cand
    if loss0 - best_loss < tau:
        return state
    return best_state


def solve_bess(X: np.ndarray, y: np.ndarray, cfg: SolverConfig, callback=None) -> SolveReport:
    """Fixed-size best-subset search by splicing (exchange moves).

    Starts from the top-k columns by normalized correlation with y, then
    repeatedly swaps the k' weakest in-support columns (elimination
    criterion) for the k' strongest outside (selection criterion),
    k' = 1..splicing_kmax, accepting a swap only when the loss strictly
    decreases. Terminates when a pass changes nothing or improves by less
    than splicing_threshold.
    """
    t0 = time.perf_counter()
    n, p = _validate(X, y, cfg)
    kmax = cfg.splicing_kmax if cfg.splicing_kmax is not None else cfg.k
    tau = (
        cfg.splicing_threshold
        if cfg.splicing_threshold is not None
        else 1e-12 * float(y @ y) / (2 * n)
    )
    empty = least_squares_on_support(X, y, [])
    init = criteria.corr_selection(X, empty, range(p)).top(cfg.k)
    state = least_squares_on_support(X, y, sorted(int(j) for j in init))
    residual_norms = [float(np.linalg.norm(state.residual))]
    objective = [float(state.residual @ state.residual)]
    iterations = 0
    for it in range(1, cfg.max_iter + 1):
        iterations = it
        new_state = _splice_once(X, y, state, cfg, kmax, tau)
        if new_state.support == state.support:
            break
        state = new_state
        residual_norms.append(float(np.linalg.norm(state.residual)))
        objective.append(float(state.residual @ state.residual))
        if callback is not None:
            callback(it, list(state.support), _full_beta(p, state), residual_norms[-1])
    return SolveReport(
        support=list(state.support),
        beta=_full_beta(p, state),
        residual_norms=residual_norms,
        iterations=iterations,
        wall_time=time.perf_counter() - t0,
        objective_trace=objective,
    )


def solve_gp(X: np.ndarray, y: np.ndarray, cfg: SolverConfig, callback=None) -> SolveReport:
    """Gradient pursuit: select a column, then take one exact gradient step.

    The coefficient update on the active set is
    ``beta_S <- beta_S - alpha g_S`` with ``g_S = -X_S^T r`` and the exact
    line-search step ``alpha = (g^T g) / (g^T X_S^T X_S g)``; no least
    squares is solved. The classical variant selects by residual
    correlation, the optimal variant by the one-step-gain criterion. With
    ``ogp_reupdate`` the solver may repeat a gradient step on the current
    support instead of adding a column.
    """
    t0 = time.perf_counter()
    n, p = _validate(X, y, cfg)
    support: list[int] = []
    beta_s = np.zeros(0)
    r = y.copy()
    residual_norms, objective = [], []
    iterations = 0
    for _ in range(cfg.max_iter):
        rnorm = float(np.linalg.norm(r))
        if rnorm <= cfg.residual_tol:
            break
        add_column = True
        if len(support) < cfg.k:
            candidates = [j for j in range(p) if j not in support]
            state = SupportState(
                support=support,
                inverse=np.zeros((0, 0)),
                beta=beta_s,
                residual=r,
                explained_energy=0.0,
            )
            if cfg.variant == OPTIMAL:
                scores = criteria.ogp_selection(X, state, candidates)
            else:
                scores = criteria.corr_selection(X, state, candidates)
            j = scores.best()
            if cfg.ogp_reupdate and cfg.variant == OPTIMAL and support:
                Xs = X[:, support]
                xtr = Xs.T @ r
                w = Xs @ xtr
                wnorm = float(np.linalg.norm(w))
                stay_gain = float(xtr @ xtr) / wnorm if wnorm > 0 else 0.0
                if stay_gain + cfg.ogp_reupdate_tau >= float(scores.scores.max()):
                    add_column = False
        else:
            if not (cfg.ogp_reupdate and cfg.variant == OPTIMAL):
                break
            add_column = False
        if add_column:
            support = support + [j]
            beta_s = np.append(beta_s, 0.0)
        Xs = X[:, support]
        g = -(Xs.T @ r)
        gsq = float(g @ g)
        if gsq <= 0.0:
            # Zero gradient on the active set: converged.
            iterations += 1
            residual_norms.append(float(np.linalg.norm(r)))
            objective.append(float(r @ r))
            break
        v = Xs @ g
        alpha = gsq / float(v @ v)
        beta_s = beta_s - alpha * g
        r = r + alpha * v
        iterations += 1
        rnorm = float(np.linalg.norm(r))
        residual_norms.append(rnorm)
        objective.append(float(r @ r))
        if callback is not None:
            beta = np.zeros(p)
            beta[support] = beta_s
            callback(iterations, list(support), beta, rnorm)
        if len(support) >= cfg.k and not (cfg.ogp_reupdate and cfg.variant == OPTIMAL):
            break
    beta = np.zeros(p)
    if support:
        beta[support] = beta_s
    return SolveReport(
        support=list(support),
        beta=beta,
        residual_norms=residual_norms,
        iterations=iterations,
        wall_time=time.perf_counter() - t0,
        objective_trace=objective,
    )


SOLVER_REGISTRY = {
    "omp": (solve_pursuit, CLASSICAL),
    "op": (solve_pursuit, OPTIMAL),
    "cosamp": (solve_cosa, CLASSICAL),
    "cosaop": (solve_cosa, OPTIMAL),
    "bess": (solve_bess, CLASSICAL),
    "op-bess": (solve_bess, OPTIMAL),
    "gp": (solve_gp, CLASSICAL),
    "ogp": (solve_gp, OPTIMAL),
}


def run_solver(name: str, X, y, k: int, callback=None, **overrides) -> SolveReport:
    """Run a registered solver by name with a default config."""
    try:
        fn, variant = SOLVER_REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown solver {name!r}; choose from {sorted(SOLVER_REGISTRY)}")
    cfg = SolverConfig(k=k, variant=variant, **overrides)
    return fn(X, y, cfg, callback=callback)
