"""Exhaustive ground truth for small instances.

Every routine refits from scratch on each candidate support and compares
residual sums of squares, so results are independent of the incremental
machinery they are used to certify. RSS values within ``RSS_TIE_TOL`` of the
minimum count as tied; reported argmins break ties toward the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import SingularGramError, least_squares_on_support

RSS_TIE_TOL = 1e-12
ENUM_GUARD = 10**6


class TooLargeError(ValueError):
    """Enumeration size exceeds the safety guard."""


@dataclass(frozen=True)
class OracleResult:
    """Best single add/delete move found by exhaustive refits.

    ``optimal_set`` holds every index whose RSS ties the minimum within
    RSS_TIE_TOL; ``index`` is its smallest element. ``skipped`` lists
    candidates whose refit was numerically singular.
    """

    index: int
    f_value: float
    optimal_set: frozenset[int]
    skipped: tuple[int, ...] = ()


def _rss(X, y, support) -> float:
    state = least_squares_on_support(X, y, support)
    return float(state.residual @ state.residual)


def best_addition(X: np.ndarray, y: np.ndarray, S) -> OracleResult:
    """argmin over j not in S of the refit RSS on S + {j}."""
    p = X.shape[1]
    S = [int(j) for j in S]
    values, skipped = {}, []
    for j in range(p):
        if j in S:
            continue
        try:
            values[j] = _rss(X, y, S + [j])
        except SingularGramError:
            skipped.append(j)
    if not values:
        raise ValueError("no feasible candidate to add")
    fmin = min(values.values())
    ties = frozenset(j for j, v in values.items() if v <= fmin + RSS_TIE_TOL)
    return OracleResult(min(ties), fmin, ties, tuple(skipped))


def best_deletion(X: np.ndarray, y: np.ndarray, S) -> OracleResult:
    """argmin over j in S of the refit RSS on S - {j}."""
    S = [int(j) for j in S]
    if len(S) < 2:
        raise ValueError("deletion requires |S| >= 2")
    values, skipped = {}, []
    for j in S:
        reduced = [i for i in S if i != j]
        try:
            values[j] = _rss(X, y, reduced)
        except SingularGramError:
            skipped.append(j)
    if not values:
        raise ValueError("no feasible deletion")
    fmin = min(values.values())
    ties = frozenset(j for j, v in values.items() if v <= fmin + RSS_TIE_TOL)
    return OracleResult(min(ties), fmin, ties, tuple(skipped))


def best_subset_exhaustive(X: np.ndarray, y: np.ndarray, k: int):
    """Global optimum of the size-k subset problem by full enumeration.

    Returns (support tuple, RSS). Raises TooLargeError when C(p, k) exceeds
    the enumeration guard. Singular subsets are skipped.
    """
    p = X.shape[1]
    if not 1 <= k <= p:
        raise ValueError(f"k={k} outside [1, {p}]")
    if math.comb(p, k) > ENUM_GUARD:
        raise TooLargeError(f"C({p}, {k}) = {math.comb(p, k)} exceeds {ENUM_GUARD}")
    best_support, best_rss = None, np.inf
    for combo in combinations(range(p), k):
        try:
            rss = _rss(X, y, list(combo))
        except SingularGramError:
            continue
        if rss < best_rss - RSS_TIE_TOL:
            best_support, best_rss = combo, rss
    if best_support is None:
        raise ValueError("every size-k subset was singular")
    return best_support, best_rss
