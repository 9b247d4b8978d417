"""Simplicial homology over the rationals for downward-closed complexes.

The k-th boundary map sends a k-simplex to the signed sum of its
(k-1)-faces: dropping the i-th vertex (1-based position in the sorted
simplex) carries sign (-1)**(i-1). Betti numbers follow from ranks:

    beta_k = nullity(boundary_k) - rank(boundary_{k+1})

with nullity(boundary_0) equal to the number of vertices.

Ranks are computed exactly over the rationals by sparse integer column
elimination (``method="exact"``, the default). A GF(2) bitset path
(``method="gf2"``) is much faster on large complexes but can differ
from the rational answer in the rare presence of torsion; use it only
where that risk is acceptable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexes import FunctionalComplex


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse column-major boundary map from k-simplices to (k-1)-simplices."""

    k: int
    row_simplices: tuple
    col_simplices: tuple
    columns: tuple  # one dict per column: row index -> entry in {-1, +1}

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_simplices), len(self.col_simplices))

    def toarray(self) -> np.ndarray:
        mat = np.zeros(self.shape, dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                mat[i, j] = v
        return mat


def _require_closed(cx: FunctionalComplex) -> None:
    if not cx.is_downward_closed():
        raise ValueError(
            "complex is not downward closed; apply downward_closure() first"
        )


def boundary_matrix(cx: FunctionalComplex, k: int) -> BoundaryMatrix:
    """The k-th boundary map of a downward-closed complex.

    Rows and columns are ordered lexicographically. ``k = 0`` gives the
    zero map out of the vertices.
    """
    _require_closed(cx)
    dims = cx.dimensions()
    if dims and not (0 <= k <= max(dims)):
        raise ValueError(f"k={k} outside complex dimensions {dims}")
    cols = tuple(map(tuple, cx.vertex_array(k))) if k in dims else ()
    if k == 0:
        return BoundaryMatrix(0, (), cols, tuple({} for _ in cols))
    rows = tuple(map(tuple, cx.vertex_array(k - 1))) if (k - 1) in dims else ()
    row_index = {s: i for i, s in enumerate(rows)}
    columns = []
    for s in cols:
        col = {}
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            col[row_index[face]] = (-1) ** i  # position i is the (i+1)-th vertex
        columns.append(col)
    return BoundaryMatrix(k, rows, cols, tuple(columns))


# -- ranks ----------------------------------------------------------------


def _reduce_gcd(col: dict) -> dict:
    g = 0
    for v in col.values():
        g = math.gcd(g, v)
    if g > 1:
        return {r: v // g for r, v in col.items()}
    return col


def _rank_exact(columns) -> int:
    """Rank over the rationals via sparse integer column elimination.

    Columns are reduced against stored pivots by cross-multiplication
    (no fractions ever appear); gcd normalization keeps entries small.
    """
    pivots: dict[int, dict] = {}
    rank = 0
    for raw in columns:
        col = {r: v for r, v in raw.items() if v}
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = _reduce_gcd(col)
                rank += 1
                break
            a, b = col[low], piv[low]
            new = {r: b * v for r, v in col.items()}
            for r, v in piv.items():
                nv = new.get(r, 0) - a * v
                if nv:
                    new[r] = nv
                else:
                    new.pop(r, None)
            col = _reduce_gcd(new) if new else new
    return rank


def _rank_gf2(columns) -> int:
    """Rank over GF(2); columns become bitmasks, reduction is XOR."""
    pivots: dict[int, int] = {}
    rank = 0
    for raw in columns:
        x = 0
        for r in raw:
            x |= 1 << r
        while x:
            low = x.bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = x
                rank += 1
                break
            x ^= piv
    return rank


def boundary_rank(bm: BoundaryMatrix, method: str = "exact") -> int:
    if method == "exact":
        return _rank_exact(bm.columns)
    if method == "gf2":
        return _rank_gf2(bm.columns)
    raise ValueError(f"unknown rank method {method!r}")


# -- Betti numbers ---------------------------------------------------------


def betti_numbers(
    cx: FunctionalComplex, max_dim: int | None = None, method: str = "exact"
) -> tuple[int, ...]:
    """(beta_0, ..., beta_max_dim) of a downward-closed complex."""
    _require_closed(cx)
    counts = cx.counts()
    top = max(counts) if counts else 0
    if max_dim is None:
        max_dim = top
    ranks = {0: 0}
    for k in range(1, min(max_dim + 1, top) + 1):
        ranks[k] = boundary_rank(boundary_matrix(cx, k), method=method)
    betti = []
    for k in range(max_dim + 1):
        n_k = counts.get(k, 0)
        betti.append(n_k - ranks.get(k, 0) - ranks.get(k + 1, 0))
    return tuple(betti)


def closed_euler_characteristic(cx: FunctionalComplex) -> int:
    """Alternating sum of face counts (vertices included) of a closed complex."""
    _require_closed(cx)
    return sum((-1) ** d * c for d, c in cx.counts().items())


# -- correlation -----------------------------------------------------------


def pearson_r(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D sequences of equal length")
    if x.size < 2:
        raise ValueError("need at least two observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("degenerate variance: correlation undefined")
    return float(dx @ dy) / (sx * sy)
