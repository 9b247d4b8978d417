"""Modern continuous dynamics with pluggable similarity measures.

Real-valued spins are retrieved by scoring the current state against
every stored pattern, sharpening the scores with a softmax at inverse
temperature beta, and mixing the patterns with the resulting weights.
Similarity can be the plain dot product, whole-simplex Euclidean or
Manhattan distance, or two genuinely setwise measures built from the
edge-restricted distances inside each simplex:

* ced -- root-sum-square of the pairwise distances over all 1-simplex
  faces of the simplex;
* cmd -- absolute Cayley-Menger determinant of those pairwise
  distances (a squared-volume-like quantity).

Distance scores go through the reciprocal-normalization protocol (low
distance means high similarity); dot-product scores are normalized to
sum to one. An exact zero-distance match takes the full score mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complexes import FunctionalComplex, Simplex, enumerate_faces

MEASURE_KINDS = ("dot", "euclidean", "manhattan", "ced", "cmd")
BASES = ("euclidean", "manhattan")


@dataclass(frozen=True)
class Similarity:
    """A similarity measure; ``base`` picks the pairwise distance used
    inside ced/cmd and is ignored by the other kinds."""

    kind: str
    base: str = "euclidean"

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure {self.kind!r}; known: {MEASURE_KINDS}")
        if self.base not in BASES:
            raise ValueError(f"unknown base distance {self.base!r}; known: {BASES}")

    @property
    def name(self) -> str:
        if self.kind in ("ced", "cmd") and self.base != "euclidean":
            return f"{self.kind}-{self.base}"
        return self.kind

    @classmethod
    def from_name(cls, name: str) -> "Similarity":
        kind, _, base = name.partition("-")
        return cls(kind, base or "euclidean")


def _as_matrix(patterns, n: int) -> np.ndarray:
    data = np.asarray(getattr(patterns, "data", patterns), dtype=float)
    if data.ndim != 2 or data.shape[1] != n:
        raise ValueError("patterns must be a P x N matrix matching the state")
    return data


def _as_state(state) -> np.ndarray:
    s = np.asarray(state, dtype=float)
    if s.ndim != 1:
        raise ValueError("state must be a 1-D vector")
    if not np.all(np.isfinite(s)):
        raise ValueError("state entries must be finite")
    return s


# -- energy ---------------------------------------------------------------


def lse(inv_t: float, patterns, state, cx: FunctionalComplex) -> float:
    """Log-sum-exp of per-(pattern, simplex) spin-product alignments.

    Returns (1/beta) * log sum exp(beta * product terms), evaluated with
    max-subtraction so large beta cannot overflow.
    """
    if inv_t <= 0:
        raise ValueError("inverse temperature must be positive")
    s = _as_state(state)
    xi = _as_matrix(patterns, s.size)
    args = []
    for d in cx.dimensions():
        if d < 1:
            continue
        verts = cx.vertex_array(d)
        args.append((xi * s)[:, verts].prod(axis=2).ravel())
    if not args:
        raise ValueError("complex has no functional simplices")
    a = inv_t * np.concatenate(args)
    m = float(a.max())
    return (m + float(np.log(np.exp(a - m).sum()))) / inv_t


def continuous_energy(state, patterns, cx: FunctionalComplex, inv_t: float) -> float:
    """-lse + half the squared norm of the state."""
    s = _as_state(state)
    return -lse(inv_t, patterns, s, cx) + 0.5 * float(s @ s)


# -- distances -------------------------------------------------------------


def pairwise_distance(rho, pattern_row, state, base: str = "euclidean") -> float:
    """Distance between the two restrictions of pattern and state to the
    2-vertex simplex ``rho``."""
    rho = tuple(rho)
    if len(rho) != 2:
        raise ValueError("pairwise distance needs a 2-vertex simplex")
    xi = np.asarray(pattern_row, dtype=float)
    s = _as_state(state)
    diff = xi[list(rho)] - s[list(rho)]
    if base == "euclidean":
        return float(np.sqrt((diff**2).sum()))
    if base == "manhattan":
        return float(np.abs(diff).sum())
    raise ValueError(f"unknown base distance {base!r}")


def ced(sigma, pattern_row, state, base: str = "euclidean") -> float:
    """Cumulative distance: sqrt of the sum of squared pairwise distances
    over every 1-simplex face of ``sigma``."""
    sigma = tuple(sigma)
    if len(sigma) < 2:
        raise ValueError("ced needs a simplex of dimension >= 1")
    total = 0.0
    for rho in enumerate_faces(sigma, 1):
        total += pairwise_distance(rho, pattern_row, state, base) ** 2
    return float(np.sqrt(total))


def _cayley_menger(sq_dists: np.ndarray) -> np.ndarray:
    """Bordered Cayley-Menger matrices for a batch of squared-distance
    matrices of shape (..., m, m)."""
    m = sq_dists.shape[-1]
    out = np.ones(sq_dists.shape[:-2] + (m + 1, m + 1))
    out[..., 0, 0] = 0.0
    out[..., 1:, 1:] = sq_dists
    return out


def cmd(sigma, pattern_row, state, base: str = "euclidean") -> float:
    """Absolute Cayley-Menger determinant of the pairwise distances over
    the 1-simplex faces of ``sigma``."""
    sigma = tuple(sigma)
    if len(sigma) < 2:
        raise ValueError("cmd needs a simplex of dimension >= 1")
    m = len(sigma)
    sq = np.zeros((m, m))
    for a, b in combinations(range(m), 2):
        d = pairwise_distance((sigma[a], sigma[b]), pattern_row, state, base)
        sq[a, b] = sq[b, a] = d * d
    return float(abs(np.linalg.det(_cayley_menger(sq))))


def _edge_sq_dists(xi: np.ndarray, s: np.ndarray, verts: np.ndarray, base: str):
    """Squared pairwise distance per (pattern, simplex, vertex pair).

    Returns (pairs, D2) with ``pairs`` the in-simplex position pairs and
    ``D2`` of shape (P, count, n_pairs).
    """
    width = verts.shape[1]
    pairs = list(combinations(range(width), 2))
    if base == "euclidean":
        q = (xi - s) ** 2
        gathered = q[:, verts]  # (P, count, width)
        d2 = np.stack([gathered[:, :, a] + gathered[:, :, b] for a, b in pairs], axis=2)
    else:
        a_ = np.abs(xi - s)
        gathered = a_[:, verts]
        d2 = np.stack(
            [(gathered[:, :, a] + gathered[:, :, b]) ** 2 for a, b in pairs], axis=2
        )
    return pairs, d2


def _simplex_distances(
    xi: np.ndarray, s: np.ndarray, verts: np.ndarray, measure: Similarity
) -> np.ndarray:
    """Per-(pattern, simplex) distance matrix of shape (P, count)."""
    if measure.kind == "euclidean":
        diff = (xi - s)[:, verts]
        return np.sqrt((diff**2).sum(axis=2))
    if measure.kind == "manhattan":
        return np.abs(xi - s)[:, verts].sum(axis=2)
    pairs, d2 = _edge_sq_dists(xi, s, verts, measure.base)
    if measure.kind == "ced":
        return np.sqrt(d2.sum(axis=2))
    if measure.kind == "cmd":
        width = verts.shape[1]
        p, count = d2.shape[:2]
        sq = np.zeros((p, count, width, width))
        for idx, (a, b) in enumerate(pairs):
            sq[:, :, a, b] = sq[:, :, b, a] = d2[:, :, idx]
        return np.abs(np.linalg.det(_cayley_menger(sq)))
    raise ValueError(f"measure {measure.kind!r} is not distance-based")


# -- similarity scores and the update --------------------------------------


def similarity_vector(state, patterns, cx: FunctionalComplex, measure: Similarity) -> np.ndarray:
    """Length-P normalized similarity scores (they sum to 1).

    Dot product accumulates per-coordinate products over every
    functional simplex. Distance measures accumulate per-simplex
    distances into one raw score per pattern, then take normalized
    reciprocals; patterns at exactly zero distance split the full mass.
    """
    s = _as_state(state)
    xi = _as_matrix(patterns, s.size)
    if measure.kind == "dot":
        counts = cx.incidence_counts().astype(float)
        if not counts.any():
            raise ValueError("complex has no functional simplices")
        scores = (xi * s) @ counts
        total = scores.sum()
        if total == 0.0:
            raise ValueError("dot-product scores sum to zero; cannot normalize")
        return scores / total
    raw = np.zeros(xi.shape[0])
    saw_simplex = False
    for d in cx.dimensions():
        if d < 1:
            continue
        saw_simplex = True
        raw += _simplex_distances(xi, s, cx.vertex_array(d), measure).sum(axis=1)
    if not saw_simplex:
        raise ValueError("complex has no functional simplices")
    exact = raw == 0.0
    if exact.any():
        return exact / exact.sum()
    recip = 1.0 / raw
    return recip / recip.sum()


def softmax(x: np.ndarray) -> np.ndarray:
    z = np.asarray(x, dtype=float)
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def continuous_update(
    state, patterns, cx: FunctionalComplex, measure: Similarity, inv_t: float
) -> np.ndarray:
    """One retrieval step: softmax(beta * scores) mixed over the patterns.

    The output is a convex combination of pattern rows, so it always
    lies in their convex hull.
    """
    if inv_t <= 0:
        raise ValueError("inverse temperature must be positive")
    s = _as_state(state)
    xi = _as_matrix(patterns, s.size)
    weights = softmax(inv_t * similarity_vector(s, xi, cx, measure))
    return weights @ xi


def settle(
    state,
    patterns,
    cx: FunctionalComplex,
    measure: Similarity,
    inv_t: float,
    tol: float = 1e-6,
    max_steps: int = 50,
):
    """Iterate retrieval steps until the state moves less than ``tol``
    in sup norm, or ``max_steps`` is hit. Returns (state, steps)."""
    s = _as_state(state)
    for step in range(1, max_steps + 1):
        nxt = continuous_update(s, patterns, cx, measure, inv_t)
        if float(np.abs(nxt - s).max()) < tol:
            return nxt, step
        s = nxt
    return s, max_steps
