"""Simplicial connectivity for setwise Hopfield networks.

A network on N neurons couples them through weighted simplices: edges,
triangles, tetrahedra, and so on. This module builds the supporting
structures: full k-skeletons, randomly diluted mixtures that spend a
fixed parameter budget across dimensions, pattern-derived weights, and
the face/closure bookkeeping needed by the homology diagnostics.

Vertices are 0-based integers below ``n_vertices``. A simplex is a
strictly increasing tuple of vertex indices; its dimension is
``len(simplex) - 1``. Only simplices of dimension >= 1 carry weights
(self-connections are pinned to zero). The functional simplex set is
not required to be downward closed -- missing faces act as weight-zero
connections -- so call :func:`downward_closure` before topological
computations that need a genuine simplicial complex.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

Simplex = tuple[int, ...]

#: Budget split per dimension for the named dilution conditions. Every
#: condition spends the same total budget of C(N, 2) nonzero weights;
#: a ``b`` suffix marks the barred digit of the condition name.
CONDITION_FRACTIONS: dict[str, dict[int, float]] = {
    "K1": {1: 1.0},
    "R1b2": {1: 0.75, 2: 0.25},
    "R1b2b": {1: 0.5, 2: 0.5},
    "R12b": {1: 0.25, 2: 0.75},
    "R2": {2: 1.0},
    "R3": {3: 1.0},
    "R1b23": {1: 0.5, 2: 0.25, 3: 0.25},
    "R12b3": {1: 0.25, 2: 0.5, 3: 0.25},
    "R123b": {1: 0.25, 2: 0.25, 3: 0.5},
    "R1b2b3b": {1: 1 / 3, 2: 1 / 3, 3: 1 / 3},
}

CONDITION_NAMES = tuple(CONDITION_FRACTIONS)


def _check_simplex(s: Simplex, n_vertices: int) -> None:
    if len(s) == 0:
        raise ValueError("empty simplex")
    if any(b <= a for a, b in zip(s, s[1:])):
        raise ValueError(f"simplex vertices must be strictly increasing: {s}")
    if s[0] < 0 or s[-1] >= n_vertices:
        raise ValueError(f"simplex {s} out of range for {n_vertices} vertices")


@dataclass(frozen=True)
class DilutionSpec:
    """How a weight budget is split across simplex dimensions.

    ``fractions`` maps dimension d to the share of the budget spent on
    d-simplices; shares must sum to 1. ``budget`` is the total number
    of nonzero weights and defaults to C(N, 2), the size of a complete
    pairwise network.
    """

    fractions: dict[int, float]
    budget: int | None = None

    def __post_init__(self):
        if not self.fractions:
            raise ValueError("fractions must not be empty")
        for d, f in self.fractions.items():
            if d < 1:
                raise ValueError(f"dimension {d} cannot carry weight")
            if not 0.0 <= f <= 1.0:
                raise ValueError(f"fraction for dimension {d} out of [0, 1]: {f}")
        total = sum(self.fractions.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"fractions must sum to 1, got {total}")

    def resolve_budget(self, n_vertices: int) -> int:
        return self.budget if self.budget is not None else math.comb(n_vertices, 2)

    def counts(self, n_vertices: int) -> dict[int, int]:
        """Per-dimension simplex counts, rounded to the nearest integer.

        Halves round away from zero. If rounding leaves the total off
        the budget, the highest dimension absorbs the difference so the
        parameter budget stays exact.
        """
        budget = self.resolve_budget(n_vertices)
        counts = {
            d: int(math.floor(f * budget + 0.5)) for d, f in sorted(self.fractions.items())
        }
        drift = budget - sum(counts.values())
        if drift:
            counts[max(counts)] += drift
        for d, c in counts.items():
            available = math.comb(n_vertices, d + 1)
            if c < 0 or c > available:
                raise ValueError(
                    f"requested {c} {d}-simplices but only {available} exist on "
                    f"{n_vertices} vertices"
                )
        return counts


def condition_spec(name: str, budget: int | None = None) -> DilutionSpec:
    """Look up a named dilution condition (K1, R12b, R1b2b3b, ...)."""
    try:
        fractions = CONDITION_FRACTIONS[name]
    except KeyError:
        known = ", ".join(CONDITION_NAMES)
        raise ValueError(f"unknown condition {name!r}; known conditions: {known}") from None
    return DilutionSpec(fractions=dict(fractions), budget=budget)


@dataclass(frozen=True, eq=False)
class FunctionalComplex:
    """An immutable set of weighted simplices over ``n_vertices`` neurons.

    Simplices are stored dimension-major, lexicographic within each
    dimension. Builders in this module emit only dimensions >= 1;
    :func:`downward_closure` additionally stores the 0-simplices it
    adds, always at weight zero.
    """

    n_vertices: int
    simplices: tuple[Simplex, ...]
    weights: np.ndarray = field(default=None)  # aligned with ``simplices``

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("n_vertices must be positive")
        ordered = tuple(tuple(int(v) for v in s) for s in self.simplices)
        ordered = tuple(sorted(ordered, key=lambda s: (len(s), s)))
        seen = set(ordered)
        if len(seen) != len(ordered):
            raise ValueError("duplicate simplices")
        for s in ordered:
            _check_simplex(s, self.n_vertices)
        if self.weights is None:
            w = np.zeros(len(ordered))
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (len(ordered),):
                raise ValueError("weights must align with simplices")
            # re-align weights with the canonical ordering
            order = sorted(range(len(self.simplices)),
                           key=lambda i: (len(self.simplices[i]), tuple(self.simplices[i])))
            w = w[np.asarray(order, dtype=int)] if len(order) else w
        for s, wi in zip(ordered, w):
            if len(s) == 1 and wi != 0.0:
                raise ValueError("0-simplices carry weight zero")
        w.flags.writeable = False
        object.__setattr__(self, "simplices", ordered)
        object.__setattr__(self, "weights", w)
        # contiguous slice and packed vertex array per dimension
        by_dim: dict[int, tuple[slice, np.ndarray]] = {}
        start = 0
        while start < len(ordered):
            d = len(ordered[start]) - 1
            stop = start
            while stop < len(ordered) and len(ordered[stop]) == len(ordered[start]):
                stop += 1
            verts = np.asarray(ordered[start:stop], dtype=np.intp)
            by_dim[d] = (slice(start, stop), verts)
            start = stop
        object.__setattr__(self, "_by_dim", by_dim)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(ordered)})

    # -- inspection ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._index

    def dimensions(self) -> tuple[int, ...]:
        return tuple(sorted(self._by_dim))

    def counts(self) -> dict[int, int]:
        """Number of stored simplices per dimension."""
        return {d: sl.stop - sl.start for d, (sl, _) in sorted(self._by_dim.items())}

    def vertex_array(self, dim: int) -> np.ndarray:
        """(count, dim+1) integer array of vertex indices, lex order."""
        return self._by_dim[dim][1]

    def weight_array(self, dim: int) -> np.ndarray:
        return self.weights[self._by_dim[dim][0]]

    def weight_of(self, s) -> float:
        return float(self.weights[self._index[tuple(s)]])

    def weight_map(self) -> dict[Simplex, float]:
        return {s: float(w) for s, w in zip(self.simplices, self.weights)}

    def vertices_used(self) -> tuple[int, ...]:
        """Vertices incident to at least one stored simplex."""
        used = sorted({v for s in self.simplices for v in s})
        return tuple(used)

    def is_downward_closed(self) -> bool:
        """True when every face of every stored simplex is stored."""
        for s in self.simplices:
            if len(s) == 1:
                continue
            for face in combinations(s, len(s) - 1):
                if face not in self._index:
                    return False
        return True

    def incidence_counts(self) -> np.ndarray:
        """Per-vertex count of stored simplices of dimension >= 1."""
        c = np.zeros(self.n_vertices, dtype=np.intp)
        for d, (sl, verts) in self._by_dim.items():
            if d >= 1:
                c += np.bincount(verts.ravel(), minlength=self.n_vertices)
        return c

    # -- derivation ----------------------------------------------------

    def with_weights(self, weights) -> "FunctionalComplex":
        """Same simplex set with new weights (array aligned or mapping)."""
        if isinstance(weights, dict):
            w = np.zeros(len(self.simplices))
            for s, val in weights.items():
                w[self._index[tuple(s)]] = val
        else:
            w = np.asarray(weights, dtype=float)
        return FunctionalComplex(self.n_vertices, self.simplices, w)


# -- construction -------------------------------------------------------


def build_k_skeleton(n_vertices: int, k: int) -> FunctionalComplex:
    """Complete complex of every d-simplex for 1 <= d <= k, weights zero."""
    if n_vertices < 1:
        raise ValueError("n_vertices must be positive")
    if not 1 <= k < n_vertices:
        raise ValueError(f"k must satisfy 1 <= k < N, got k={k}, N={n_vertices}")
    simplices = []
    for d in range(1, k + 1):
        simplices.extend(combinations(range(n_vertices), d + 1))
    return FunctionalComplex(n_vertices, tuple(simplices))


def enumerate_faces(s: Simplex, k: int) -> list[Simplex]:
    """All k-dimensional faces of ``s`` in lexicographic order."""
    s = tuple(s)
    if k > len(s) - 1:
        raise ValueError(f"simplex {s} has no faces of dimension {k}")
    if k < 0:
        raise ValueError("face dimension must be nonnegative")
    return list(combinations(s, k + 1))


def unrank_colex(rank: int, k: int) -> Simplex:
    """The ``rank``-th k-subset of the nonnegative integers in
    colexicographic order (combinatorial number system)."""
    out = []
    for j in range(k, 0, -1):
        c = j - 1
        while math.comb(c + 1, j) <= rank:
            c += 1
        out.append(c)
        rank -= math.comb(c, j)
    out.reverse()
    return tuple(out)


def _sample_ranks(total: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` distinct integers from [0, total), sorted. Rejection
    sampling keeps memory flat when total is huge (C(N, d+1) grows fast)."""
    if count > total:
        raise ValueError(f"cannot sample {count} of {total}")
    if count == total:
        return np.arange(total, dtype=np.int64)
    if 3 * count >= total:
        return np.sort(rng.permutation(total)[:count].astype(np.int64))
    chosen: set[int] = set()
    while len(chosen) < count:
        need = count - len(chosen)
        draw = rng.integers(0, total, size=max(need * 2, 16))
        for r in draw:
            chosen.add(int(r))
            if len(chosen) == count:
                break
    return np.asarray(sorted(chosen), dtype=np.int64)


def sample_diluted(n_vertices: int, spec: DilutionSpec, seed) -> FunctionalComplex:
    """Uniform without-replacement sample of simplices per dimension.

    Per-dimension counts come from ``spec.counts``; simplices are drawn
    by unranking colexicographic indices, so the full simplex list is
    never materialized. Deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    counts = spec.counts(n_vertices)
    simplices: list[Simplex] = []
    for d in sorted(counts):
        count = counts[d]
        if count == 0:
            continue
        total = math.comb(n_vertices, d + 1)
        ranks = _sample_ranks(total, count, rng)
        simplices.extend(unrank_colex(int(r), d + 1) for r in ranks)
    return FunctionalComplex(n_vertices, tuple(simplices))


# -- weights and invariants ----------------------------------------------


def _pattern_matrix(patterns) -> np.ndarray:
    data = getattr(patterns, "data", patterns)
    return np.asarray(data, dtype=float)


def hebbian_weights(cx: FunctionalComplex, patterns) -> FunctionalComplex:
    """Embed binary patterns: w(s) = mean-free sum of per-pattern spin
    products over s, scaled by 1/N. Weights land in [-P/N, +P/N]."""
    data = _pattern_matrix(patterns)
    if data.ndim != 2:
        raise ValueError("patterns must be a P x N matrix")
    if data.shape[1] != cx.n_vertices:
        raise ValueError(
            f"pattern width {data.shape[1]} != {cx.n_vertices} vertices"
        )
    if not np.all(np.abs(data) == 1.0):
        raise ValueError("patterns must have entries in {-1, +1}")
    weights = np.zeros(len(cx.simplices))
    for d in cx.dimensions():
        if d < 1:
            continue
        sl, verts = cx._by_dim[d]
        prod = data[:, verts].prod(axis=2)  # (P, count)
        weights[sl] = prod.sum(axis=0) / cx.n_vertices
    return cx.with_weights(weights)


def functional_euler_characteristic(cx: FunctionalComplex) -> int:
    """Alternating count: all N vertices, minus edges, plus triangles, ...

    Counts the stored (functional) simplices of dimension >= 1 plus all
    ``n_vertices`` vertices, whether or not they appear in a simplex.
    """
    chi = cx.n_vertices
    for d, count in cx.counts().items():
        if d >= 1:
            chi += (-1) ** d * count
    return chi


def downward_closure(cx: FunctionalComplex) -> FunctionalComplex:
    """Smallest genuine simplicial complex containing ``cx``.

    Adds every missing face, 0-simplices included, at weight zero;
    existing weights are kept. Idempotent.
    """
    weights = cx.weight_map()
    closed: set[Simplex] = set()
    for s in cx.simplices:
        for size in range(1, len(s) + 1):
            closed.update(combinations(s, size))
    ordered = tuple(sorted(closed, key=lambda s: (len(s), s)))
    w = np.array([weights.get(s, 0.0) for s in ordered])
    return FunctionalComplex(cx.n_vertices, ordered, w)


# -- serialization -------------------------------------------------------


def complex_to_json(cx: FunctionalComplex) -> str:
    obj = {
        "n_vertices": cx.n_vertices,
        "simplices": [list(s) for s in cx.simplices],
        "weights": [float(w) for w in cx.weights],
    }
    return json.dumps(obj)


def complex_from_json(text: str) -> FunctionalComplex:
    obj = json.loads(text)
    try:
        n = obj["n_vertices"]
        simplices = tuple(tuple(s) for s in obj["simplices"])
        weights = np.asarray(obj["weights"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed complex JSON: {exc}") from exc
    return FunctionalComplex(n, simplices, weights)


def save_complex(cx: FunctionalComplex, path) -> None:
    Path(path).write_text(complex_to_json(cx))


def load_complex(path) -> FunctionalComplex:
    return complex_from_json(Path(path).read_text())
