"""Binary spin dynamics on weighted simplex sets.

Two flavours share the simplicial connectivity:

* traditional dynamics -- energy is the weighted sum of simplex spin
  products; a neuron aligns with the threshold of its local field,
  ties resolving to +1.
* modern (energy-based) dynamics -- an interaction function F shapes
  per-pattern alignments; a neuron takes the sign of the F-difference
  between clamping itself to +1 and to -1, ties again resolving to +1.

States are plain +-1 integer vectors. Synchronous sweeps run until the
energy stops decreasing or a step cap is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import FunctionalComplex


def _check_state(state, n: int) -> np.ndarray:
    s = np.asarray(state)
    if s.shape != (n,):
        raise ValueError(f"state length {s.shape} != network size {n}")
    if not np.all(np.abs(s) == 1):
        raise ValueError("state entries must be -1 or +1")
    return s.astype(np.int64)


def _check_patterns(patterns, n: int) -> np.ndarray:
    data = np.asarray(getattr(patterns, "data", patterns), dtype=float)
    if data.ndim != 2 or data.shape[1] != n:
        raise ValueError("patterns must be a P x N matrix matching the network")
    if not np.all(np.abs(data) == 1.0):
        raise ValueError("binary dynamics require +-1 patterns")
    kind = getattr(patterns, "kind", None)
    if kind is not None and kind != "binary":
        raise ValueError(f"binary dynamics require binary patterns, got kind={kind!r}")
    return data


# -- interaction functions -------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """F(x) = x**n with integer n >= 2."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("polynomial degree must be >= 2")

    def __call__(self, x):
        return np.asarray(x, dtype=float) ** self.n

    @property
    def name(self) -> str:
        return f"poly{self.n}"


@dataclass(frozen=True)
class Exponential:
    """F(x) = exp(x)."""

    def __call__(self, x):
        return np.exp(np.asarray(x, dtype=float))

    @property
    def name(self) -> str:
        return "exp"


def interaction_from_name(name: str):
    if name == "exp":
        return Exponential()
    if name.startswith("poly"):
        return Polynomial(int(name[4:]))
    raise ValueError(f"unknown interaction {name!r} (expected 'polyN' or 'exp')")


# -- traditional dynamics ----------------------------------------------------


def traditional_energy(state, cx: FunctionalComplex) -> float:
    """E = -sum over functional simplices of w(s) * product of spins on s."""
    s = _check_state(state, cx.n_vertices)
    e = 0.0
    for d in cx.dimensions():
        if d < 1:
            continue
        prod = s[cx.vertex_array(d)].prod(axis=1)
        e -= float(cx.weight_array(d) @ prod)
    return e


def _simplex_sums(state: np.ndarray, cx: FunctionalComplex) -> np.ndarray:
    """t_i = sum over simplices containing i of w(s) * product of spins on s.

    The local field on neuron i is then t_i * S_i, because dividing a
    +-1 spin product by S_i is the same as multiplying by it.
    """
    t = np.zeros(cx.n_vertices)
    for d in cx.dimensions():
        if d < 1:
            continue
        verts = cx.vertex_array(d)
        contrib = cx.weight_array(d) * state[verts].prod(axis=1)
        t += np.bincount(
            verts.ravel(),
            weights=np.repeat(contrib, d + 1),
            minlength=cx.n_vertices,
        )
    return t


def local_fields(state, cx: FunctionalComplex) -> np.ndarray:
    """Per-neuron field h_i = sum_{s : i in s} w(s) * prod_{j in s, j != i} S_j."""
    s = _check_state(state, cx.n_vertices)
    return _simplex_sums(s, cx) * s


def traditional_update_sync(state, cx: FunctionalComplex) -> np.ndarray:
    """One synchronous sweep of the threshold rule; field 0 maps to +1."""
    s = _check_state(state, cx.n_vertices)
    h = _simplex_sums(s, cx) * s
    return np.where(h >= 0, 1, -1).astype(np.int64)


def traditional_update_async(state, cx: FunctionalComplex, i: int) -> np.ndarray:
    """Threshold update of neuron ``i`` only. Never increases the energy."""
    s = _check_state(state, cx.n_vertices)
    if not 0 <= i < cx.n_vertices:
        raise IndexError(f"neuron index {i} out of range")
    h = float((_simplex_sums(s, cx) * s)[i])
    out = s.copy()
    out[i] = 1 if h >= 0 else -1
    return out


# -- modern dynamics ---------------------------------------------------------


def modern_energy(state, patterns, cx: FunctionalComplex, interaction) -> float:
    """E = -sum over patterns and simplices of F(pattern product * spin product)."""
    s = _check_state(state, cx.n_vertices)
    xi = _check_patterns(patterns, cx.n_vertices)
    e = 0.0
    for d in cx.dimensions():
        if d < 1:
            continue
        verts = cx.vertex_array(d)
        xi_prod = xi[:, verts].prod(axis=2)      # (P, count)
        s_prod = s[verts].prod(axis=1)           # (count,)
        e -= float(interaction(xi_prod * s_prod).sum())
    return e


def _alignment_sums(s: np.ndarray, xi: np.ndarray, cx: FunctionalComplex) -> np.ndarray:
    """A[mu, i] = sum over simplices containing i of (pattern product * spin
    product) on the whole simplex; stripping vertex i multiplies by xi_i * S_i."""
    a = np.zeros((xi.shape[0], cx.n_vertices))
    for d in cx.dimensions():
        if d < 1:
            continue
        verts = cx.vertex_array(d)
        contrib = xi[:, verts].prod(axis=2) * s[verts].prod(axis=1)
        flat = verts.ravel()
        for mu in range(xi.shape[0]):
            a[mu] += np.bincount(
                flat, weights=np.repeat(contrib[mu], d + 1), minlength=cx.n_vertices
            )
    return a


def modern_update_sync(state, patterns, cx: FunctionalComplex, interaction) -> np.ndarray:
    """One synchronous sweep of the clamped F-difference rule, sign(0) = +1."""
    s = _check_state(state, cx.n_vertices)
    xi = _check_patterns(patterns, cx.n_vertices)
    inner = _alignment_sums(s, xi, cx) * xi * s  # A[mu,i] * xi_i^mu * S_i
    gap = interaction(xi + inner) - interaction(-xi + inner)
    total = gap.sum(axis=0)
    return np.where(total >= 0, 1, -1).astype(np.int64)


# -- convergence loop ---------------------------------------------------------


@dataclass
class RunOutcome:
    """Result of a synchronous run: state reported is the energy minimizer
    seen before the first non-decrease (or the last state at the step cap)."""

    final_state: np.ndarray
    steps_taken: int
    energy_trace: list = field(default_factory=list)
    stop_reason: str = "max_steps"  # or "energy_non_decreasing"


def run_to_convergence(
    initial,
    cx: FunctionalComplex,
    dynamics: str = "traditional",
    patterns=None,
    interaction=None,
    max_steps: int = 100,
) -> RunOutcome:
    """Iterate synchronous updates until the energy stops decreasing.

    Stops at the first step whose energy is >= the previous one and
    reports the pre-increase state, or runs out of ``max_steps``. The
    energy trace includes the initial energy, one entry per step taken.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if dynamics == "traditional":
        def energy(s):
            return traditional_energy(s, cx)

        def step(s):
            return traditional_update_sync(s, cx)
    elif dynamics == "modern":
        if patterns is None or interaction is None:
            raise ValueError("modern dynamics need patterns and an interaction")

        def energy(s):
            return modern_energy(s, patterns, cx, interaction)

        def step(s):
            return modern_update_sync(s, patterns, cx, interaction)
    else:
        raise ValueError(f"unknown dynamics {dynamics!r}")

    state = _check_state(initial, cx.n_vertices)
    trace = [energy(state)]
    for t in range(1, max_steps + 1):
        nxt = step(state)
        trace.append(energy(nxt))
        if trace[-1] >= trace[-2]:
            return RunOutcome(state, t, trace, "energy_non_decreasing")
        state = nxt
    return RunOutcome(state, max_steps, trace, "max_steps")
