"""Evaluation metrics shared by the benchmark tasks."""

from __future__ import annotations

import hashlib

import numpy as np


class ZeroTruthError(ValueError):
    """NMSE is undefined for a zero ground-truth vector."""


class ConstantTargetError(ValueError):
    """R^2 is undefined for a constant target."""


def nmse(beta_hat, beta_true) -> float:
    """Squared estimation error normalized by the true energy."""
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    beta_true = np.asarray(beta_true, dtype=np.float64)
    denom = float(beta_true @ beta_true)
    if denom == 0.0:
        raise ZeroTruthError("ground-truth vector is zero")
    diff = beta_hat - beta_true
    return float(diff @ diff) / denom


def exact_recovery(support_hat, support_true) -> bool:
    """True iff the two index sets are equal."""
    return set(int(j) for j in support_hat) == set(int(j) for j in support_true)


def r_squared(y, y_hat) -> float:
    """Coefficient of determination of paired observations."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        raise ConstantTargetError("target vector is constant")
    resid = y - y_hat
    return 1.0 - float(resid @ resid) / ss_tot


def pred_error(y, y_hat) -> float:
    """Mean squared prediction error."""
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    resid = y - y_hat
    return float(resid @ resid) / y.shape[0]


def kfold_indices(n: int, n_folds: int = 5, seed: int = 0) -> list[np.ndarray]:
    """Deterministic fold assignment by hashing (seed, index).

    Samples are ordered by a stable per-index hash and dealt into folds of
    size ``n // n_folds``, with the remainder spread over the early folds.
    Independent of platform and process hash randomization.
    """
    if not 2 <= n_folds <= n:
        raise ValueError(f"n_folds={n_folds} outside [2, {n}]")
    keys = [
        int.from_bytes(hashlib.sha256(f"{seed}|{i}".encode()).digest()[:8], "little")
        for i in range(n)
    ]
    order = np.array(sorted(range(n), key=lambda i: (keys[i], i)), dtype=np.intp)
    base, extra = divmod(n, n_folds)
    folds, start = [], 0
    for f in range(n_folds):
        size = base + (1 if f < extra else 0)
        folds.append(np.sort(order[start : start + size]))
        start += size
    return folds


def cross_val_pred_error(X, y, fit_predict, n_folds: int = 5, seed: int = 0) -> float:
    """Mean k-fold prediction error for a fit/predict callable.

    ``fit_predict(X_train, y_train, X_test)`` must return predictions for
    the held-out rows.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    folds = kfold_indices(y.shape[0], n_folds=n_folds, seed=seed)
    errors = []
    for test_idx in folds:
        mask = np.ones(y.shape[0], dtype=bool)
        mask[test_idx] = False
        y_hat = fit_predict(X[mask], y[mask], X[test_idx])
        errors.append(pred_error(y[test_idx], y_hat))
    return float(np.mean(errors))
