"""Shared plumbing for the classifier zoo.

Every model exposes ``score_samples`` returning a class-1 score in
[0, 1]; ``predict`` is always the 0.5 threshold on that score, so the
two can never disagree.  Scale-sensitive kinds standardize features with
statistics captured from their own training set.
"""

from __future__ import annotations

import numpy as np

from ..data import stream_seed
from ..errors import TrainingError


def derive_seed(*parts) -> int:
    """Deterministic 64-bit seed from (master seed, symbol, model id, ...)."""
    return stream_seed(*parts)


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    return X


def check_training_data(X: np.ndarray, y: np.ndarray) -> None:
    if len(X) == 0:
        raise TrainingError("empty training set")
    if len(X) != len(y):
        raise TrainingError(f"feature/label length mismatch: {len(X)} vs {len(y)}")
    if not np.isfinite(X).all():
        raise TrainingError("non-finite feature values in training set")
    classes = np.unique(y)
    if len(classes) < 2:
        raise TrainingError("degenerate labels: training set has a single class")


def check_query(X: np.ndarray) -> None:
    if not np.isfinite(X).all():
        raise TrainingError("non-finite feature values in query")


class Standardizer:
    """Per-feature mean/variance scaling fitted on the learn set."""

    def fit(self, X: np.ndarray) -> "Standardizer":
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0.0] = 1.0  # constant features pass through centered
        self.scale_ = scale
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean_) / self.scale_


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class Classifier:
    """Base for all zoo members; subclasses implement ``_fit`` and ``score_samples``."""

    kind = "base"
    scale_sensitive = False

    def fit(self, X, y, seed: int = 0) -> "Classifier":
        X = as_matrix(X)
        y = np.asarray(y, dtype=np.int64)
        check_training_data(X, y)
        self._fit(X, y, np.random.default_rng(seed))
        return self

    def _fit(self, X: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> None:
        raise NotImplementedError

    def score_samples(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return (self.score_samples(X) >= 0.5).astype(np.int64)
