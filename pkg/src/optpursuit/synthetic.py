"""Deterministic synthetic problem generation.

All randomness flows through counter-based Philox (4x64-10) generators keyed
by SHA-256 of ``(master seed, stream label)``, so the design matrix, sparse
signal and noise come from independent substreams of one seed and any
instance is reproducible from ``(GENERATOR, seed)`` alone. Noise is rescaled
so the requested SNR identity ``20 log10(||X beta|| / ||eps||) = snr_db``
holds exactly.

Nonzero signal coefficients are standard normal with magnitudes resampled
below 0.1: a near-zero "true" coefficient would make support recovery
vacuously impossible, which is a property of the draw, not of a solver.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

GENERATOR = "philox4x64-10/v1"

SIGNAL_KINDS = ("random", "block")


class InfeasibleBlocksError(ValueError):
    """Block-sparse layout cannot be placed (odd k or p too small)."""


class ZeroSignalError(ValueError):
    """Noise level is undefined because the noiseless signal is zero."""


def stream(seed: int, label: str) -> np.random.Generator:
    """Independent substream of a master seed, keyed by label."""
    digest = hashlib.sha256(f"{GENERATOR}|{seed}|{label}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class ProblemInstance:
    """A generated (X, y) pair with optional ground-truth coefficients."""

    X: np.ndarray
    y: np.ndarray
    beta_true: np.ndarray | None
    meta: dict

    @property
    def true_support(self) -> frozenset[int] | None:
        if self.beta_true is None:
            return None
        return frozenset(np.flatnonzero(self.beta_true).tolist())


def gaussian_design(n: int, p: int, seed: int) -> np.ndarray:
    """n x p matrix of i.i.d. standard normal entries."""
    if n < 1 or p < 1:
        raise ValueError("n and p must be >= 1")
    return stream(seed, "design").standard_normal((n, p))


def toeplitz_design(n: int, p: int, rho: float, seed: int) -> np.ndarray:
    """Rows i.i.d. zero-mean Gaussian with covariance ``rho^|i-j|``.

    Uses the AR(1) construction: the first column is white noise, each
    following column is ``rho`` times the previous plus ``sqrt(1 - rho^2)``
    fresh noise, which realizes the Toeplitz correlation analytically.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho={rho} outside [0, 1)")
    Z = stream(seed, "design").standard_normal((n, p))
    X = np.empty((n, p))
    X[:, 0] = Z[:, 0]
    c = math.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        X[:, j] = rho * X[:, j - 1] + c * Z[:, j]
    return X


def sparse_signal(p: int, k: int, kind: str = "random", seed: int = 0) -> np.ndarray:
    """Length-p vector with exactly k nonzero standard-normal entries.

    ``kind="random"`` scatters the support uniformly; ``kind="block"``
    places two nonoverlapping runs of k/2 adjacent entries (k must be even).
    Magnitudes below 0.1 are resampled.
    """
    if kind == "block" and (k % 2 != 0 or p < k):
        raise InfeasibleBlocksError(
            f"two blocks of {k}/2 adjacent entries need even k and p >= k"
        )
    if k > p:
        raise ValueError(f"k={k} exceeds p={p}")
    rng = stream(seed, "signal")
    if kind == "random":
        support = np.sort(rng.choice(p, size=k, replace=False))
    elif kind == "block":
        half = k // 2
        while True:
            s1, s2 = rng.integers(0, p - half + 1, size=2)
            if abs(int(s1) - int(s2)) >= half:
                break
        support = np.concatenate([np.arange(s1, s1 + half), np.arange(s2, s2 + half)])
        support = np.sort(support)
    else:
        raise ValueError(f"unknown signal kind {kind!r}; choose from {SIGNAL_KINDS}")
    values = rng.standard_normal(k)
    small = np.abs(values) < 0.1
    while small.any():
        values[small] = rng.standard_normal(int(small.sum()))
        small = np.abs(values) < 0.1
    beta = np.zeros(p)
    beta[support] = values
    return beta


def observe_with_snr(
    X: np.ndarray, beta_true: np.ndarray, snr_db: float | None, seed: int
) -> np.ndarray:
    """Observe ``X beta_true`` with Gaussian noise scaled to an exact SNR.

    ``snr_db=None`` (or +inf) returns the noiseless signal. The noise
    direction depends only on the seed; changing snr_db rescales it.
    """
    signal = X @ beta_true
    if snr_db is None or math.isinf(snr_db):
        return signal
    snorm = float(np.linalg.norm(signal))
    if snorm == 0.0:
        raise ZeroSignalError("X @ beta_true is zero; SNR undefined")
    noise = stream(seed, "noise").standard_normal(X.shape[0])
    noise *= snorm * 10.0 ** (-snr_db / 20.0) / float(np.linalg.norm(noise))
    return signal + noise


def generate_instance(
    n: int,
    p: int,
    k: int,
    seed: int,
    snr_db: float | None = None,
    rho: float | None = None,
    signal_kind: str = "random",
) -> ProblemInstance:
    """Generate a full recovery instance from one master seed."""
    if rho is None:
        X = gaussian_design(n, p, seed)
    else:
        X = toeplitz_design(n, p, rho, seed)
    beta = sparse_signal(p, k, kind=signal_kind, seed=seed)
    y = observe_with_snr(X, beta, snr_db, seed)
    meta = {
        "generator": GENERATOR,
        "seed": int(seed),
        "n": int(n),
        "p": int(p),
        "k": int(k),
        "snr_db": None if snr_db is None else float(snr_db),
        "rho": None if rho is None else float(rho),
        "signal_kind": signal_kind,
    }
    return ProblemInstance(X, y, beta, meta)


def save_instance(inst: ProblemInstance, directory) -> None:
    """Write an instance as a CSV bundle (X.csv, y.csv, beta.csv, meta.txt)."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    np.savetxt(out / "X.csv", inst.X, delimiter=",", fmt="%.17g")
    np.savetxt(out / "y.csv", inst.y, delimiter=",", fmt="%.17g")
    if inst.beta_true is not None:
        np.savetxt(out / "beta.csv", inst.beta_true, delimiter=",", fmt="%.17g")
    with open(out / "meta.txt", "w") as fh:
        for key, value in inst.meta.items():
            fh.write(f"{key}={'' if value is None else value}\n")


def load_instance(directory) -> ProblemInstance:
    """Read back a CSV bundle written by save_instance."""
    from .linalg import as_design

    src = Path(directory)
    X = as_design(np.loadtxt(src / "X.csv", delimiter=",", ndmin=2))
    y = np.loadtxt(src / "y.csv", delimiter=",")
    beta_path = src / "beta.csv"
    beta = np.loadtxt(beta_path, delimiter=",") if beta_path.exists() else None
    meta = {}
    with open(src / "meta.txt") as fh:
        for line in fh:
            key, _, raw = line.rstrip("\n").partition("=")
            if raw == "":
                meta[key] = None
            elif key in ("seed", "n", "p", "k"):
                meta[key] = int(raw)
            elif key in ("snr_db", "rho"):
                meta[key] = float(raw)
            else:
                meta[key] = raw
    return ProblemInstance(X, np.atleast_1d(y), beta, meta)
