"""Closed-form capacity estimates and their empirical companions.

The closed forms are asymptotic (large-N) statements evaluated at
finite N; every report labels them as estimates rather than exact
finite-size truths. The Monte-Carlo stability check is the finite-size
counterpart: embed patterns, apply one synchronous sweep, and count how
often each pattern sits still.
"""

from __future__ import annotations

import math

import numpy as np

from .binary_nets import traditional_update_sync
from .complexes import FunctionalComplex, hebbian_weights
from .patterns import random_binary_patterns


def capacity_mixed(n: int, max_degree: int, tolerate_errors: bool = True) -> float:
    """Pattern capacity of a fully connected mixture up to ``max_degree``:
    (sum of N**d for d = 1..D) / (2 ln N), or 4 ln N without errors."""
    if n < 2:
        raise ValueError("need n >= 2")
    if max_degree < 1:
        raise ValueError("need max_degree >= 1")
    total = sum(n**d for d in range(1, max_degree + 1))
    denom = (2.0 if tolerate_errors else 4.0) * math.log(n)
    return total / denom


def diluted_capacity_order(p: float, n: int, degree: int) -> float:
    """Order-of-magnitude capacity p * N**(d-1) of a diluted pure
    degree-d network (an indicator, not an exact count)."""
    if not 0 < p <= 1:
        raise ValueError("connection probability must be in (0, 1]")
    if degree < 2:
        raise ValueError("degree must be >= 2")
    return p * n ** (degree - 1)


def noise_sigma(n: int, n_patterns: int, degree: int) -> float:
    """Noise standard deviation sqrt(P / N**d) contributed by degree d."""
    _check_np(n, n_patterns)
    return math.sqrt(n_patterns / n**degree)


def z_total(n: int, n_patterns: int, max_degree: int) -> float:
    """Total noise variance z = sum over d = 1..D of P / N**d."""
    _check_np(n, n_patterns)
    return sum(n_patterns / n**d for d in range(1, max_degree + 1))


def prob_stable_pattern(n: int, n_patterns: int, max_degree: int) -> float:
    """Approximate probability that an embedded pattern is a fixed point:
    1 - N * sqrt(z / 2 pi) * exp(-1 / 2z), clamped to [0, 1]."""
    z = z_total(n, n_patterns, max_degree)
    value = 1.0 - n * math.sqrt(z / (2.0 * math.pi)) * math.exp(-1.0 / (2.0 * z))
    return min(1.0, max(0.0, value))


def connections_count(n: int, max_degree: int) -> int:
    """Exact number of functional connections in the full D-skeleton:
    sum of C(N, d) for d = 2..D+1 (0-simplices excluded)."""
    if n < 2:
        raise ValueError("need n >= 2")
    if not 1 <= max_degree < n:
        raise ValueError("need 1 <= max_degree < n")
    return sum(math.comb(n, d) for d in range(2, max_degree + 2))


def _check_np(n: int, n_patterns: int) -> None:
    if n < 2:
        raise ValueError("need n >= 2")
    if n_patterns < 1:
        raise ValueError("need at least one pattern")


def empirical_stability_rate(
    cx: FunctionalComplex, n_patterns: int, trials: int, seed
) -> float:
    """Fraction of (pattern, trial) pairs left unchanged by one
    synchronous sweep. Each trial embeds a fresh random pattern set on
    the same simplex support."""
    if trials < 1:
        raise ValueError("need at least one trial")
    stable = 0
    for trial in range(trials):
        pats = random_binary_patterns(n_patterns, cx.n_vertices, [seed, trial])
        loaded = hebbian_weights(cx, pats)
        for row in pats.data:
            state = row.astype(np.int64)
            if np.array_equal(traditional_update_sync(state, loaded), state):
                stable += 1
    return stable / (trials * n_patterns)


def capacity_report(n: int, max_degree: int, n_patterns: int | None = None) -> dict:
    """JSON-friendly summary of the closed-form evaluators."""
    report = {
        "inputs": {"n": n, "max_degree": max_degree, "n_patterns": n_patterns},
        "regime": "asymptotic estimate (large-N closed forms at finite N)",
        "capacity_with_errors": capacity_mixed(n, max_degree, tolerate_errors=True),
        "capacity_without_errors": capacity_mixed(n, max_degree, tolerate_errors=False),
        "connections": connections_count(n, max_degree),
    }
    if n_patterns is not None:
        report["noise_sigma_per_degree"] = {
            d: noise_sigma(n, n_patterns, d) for d in range(1, max_degree + 1)
        }
        report["z_total"] = z_total(n, n_patterns, max_degree)
        report["prob_stable_pattern"] = prob_stable_pattern(n, n_patterns, max_degree)
    return report
