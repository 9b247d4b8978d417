"""Retrieval scoring: overlap, MSE, recall classification, summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _pair(state, pattern) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(state, dtype=float)
    xi = np.asarray(pattern, dtype=float)
    if s.shape != xi.shape or s.ndim != 1:
        raise ValueError(f"length mismatch: state {s.shape} vs pattern {xi.shape}")
    return s, xi


def overlap(state, pattern) -> float:
    """Absolute mean agreement |mean(S_i * xi_i)|, in [0, 1] for +-1 data."""
    s, xi = _pair(state, pattern)
    return float(abs((s * xi).mean()))


def mse(state, pattern) -> float:
    """Mean squared difference; zero iff equal."""
    s, xi = _pair(state, pattern)
    return float(((s - xi) ** 2).mean())


def correct_recall(final_state, target_pattern, threshold: float = 50.0) -> bool:
    """True when the SUM (not mean) of squared differences is below the
    threshold."""
    s, xi = _pair(final_state, target_pattern)
    return float(((s - xi) ** 2).sum()) < threshold


def summarize(values) -> tuple[float, float]:
    """Sample mean and standard deviation (n-1 denominator; sd 0 at n=1)."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        raise ValueError("cannot summarize an empty sequence")
    mean = float(vals.mean())
    sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return mean, sd


@dataclass(frozen=True)
class RecallScore:
    """Per-pattern scores plus the retrieved pattern. Ties break toward
    the lowest pattern index."""

    per_pattern: tuple
    best_index: int
    best_value: float
    criterion: str  # "overlap" (maximized) or "mse" (minimized)


def score_binary(state, patterns) -> RecallScore:
    data = np.asarray(getattr(patterns, "data", patterns), dtype=float)
    scores = tuple(overlap(state, row) for row in data)
    best = int(np.argmax(scores))
    return RecallScore(scores, best, scores[best], "overlap")


def score_continuous(state, patterns) -> RecallScore:
    data = np.asarray(getattr(patterns, "data", patterns), dtype=float)
    scores = tuple(mse(state, row) for row in data)
    best = int(np.argmin(scores))
    return RecallScore(scores, best, scores[best], "mse")
