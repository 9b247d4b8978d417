"""Memory pattern generation, loading, and corruption.

Binary patterns are +-1 matrices; continuous patterns live in [0, 1]
(image corpora are normalized to that range on load). The ``kind`` tag
travels with the data so binary dynamics can reject continuous input
and vice versa.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class PatternSet:
    """P x N pattern matrix tagged as ``binary`` (+-1) or ``continuous``
    ([0, 1])."""

    data: np.ndarray
    kind: str

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("patterns must form a P x N matrix with P, N >= 1")
        if self.kind == "binary":
            if not np.all(np.abs(data) == 1.0):
                raise ValueError("binary patterns must have entries in {-1, +1}")
        elif self.kind == "continuous":
            if data.min() < 0.0 or data.max() > 1.0:
                raise ValueError("continuous patterns must lie in [0, 1]")
        else:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def p(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def take(self, count: int) -> "PatternSet":
        if not 1 <= count <= self.p:
            raise ValueError(f"cannot take {count} of {self.p} patterns")
        return PatternSet(self.data[:count].copy(), self.kind)


def random_binary_patterns(p: int, n: int, seed) -> PatternSet:
    """P x N i.i.d. uniform +-1 patterns, deterministic per seed."""
    if p < 1 or n < 1:
        raise ValueError("need p >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    data = rng.integers(0, 2, size=(p, n)) * 2 - 1
    return PatternSet(data.astype(float), "binary")


def random_continuous_patterns(p: int, n: int, seed) -> PatternSet:
    """P x N i.i.d. uniform [0, 1] patterns, deterministic per seed."""
    if p < 1 or n < 1:
        raise ValueError("need p >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    return PatternSet(rng.random((p, n)), "continuous")


# -- corruption -------------------------------------------------------------


@dataclass(frozen=True)
class GaussianNoise:
    """Additive i.i.d. Gaussian noise of the given variance, no clipping."""

    variance: float

    def __post_init__(self):
        if self.variance <= 0:
            raise ValueError("variance must be positive")


@dataclass(frozen=True)
class RandomState:
    """Replace the input with a fresh uniform +-1 vector."""


def corrupt(pattern_row, spec, seed) -> np.ndarray:
    row = np.asarray(pattern_row, dtype=float)
    rng = np.random.default_rng(seed)
    if isinstance(spec, GaussianNoise):
        return row + rng.normal(0.0, np.sqrt(spec.variance), size=row.shape)
    if isinstance(spec, RandomState):
        return (rng.integers(0, 2, size=row.shape) * 2 - 1).astype(float)
    raise TypeError(f"unknown corruption spec {spec!r}")


# -- loaders ----------------------------------------------------------------

_IDX_UBYTE = 0x08


def load_idx_ubyte(path, limit: int | None = None) -> PatternSet:
    """IDX-format unsigned-byte tensor (the MNIST container). Rows are
    flattened items scaled to [0, 1]."""
    raw = Path(path).read_bytes()
    if len(raw) < 4:
        raise ValueError(f"{path}: truncated IDX header")
    zero1, zero2, dtype, ndim = struct.unpack(">BBBB", raw[:4])
    if zero1 != 0 or zero2 != 0:
        raise ValueError(f"{path}: bad IDX magic")
    if dtype != _IDX_UBYTE:
        raise ValueError(f"{path}: unsupported IDX dtype 0x{dtype:02x}")
    if ndim < 1:
        raise ValueError(f"{path}: IDX rank must be >= 1")
    header_end = 4 + 4 * ndim
    dims = struct.unpack(f">{ndim}I", raw[4:header_end])
    count = dims[0]
    item = int(np.prod(dims[1:], dtype=np.int64)) if ndim > 1 else 1
    body = np.frombuffer(raw, dtype=np.uint8, offset=header_end)
    if body.size != count * item:
        raise ValueError(f"{path}: IDX payload size mismatch")
    data = body.reshape(count, item).astype(float) / 255.0
    if limit is not None:
        data = data[:limit]
    if data.shape[0] == 0:
        raise ValueError(f"{path}: no items after applying limit")
    return PatternSet(data, "continuous")


def load_png_dir(path, limit: int | None = None, grayscale: bool = False) -> PatternSet:
    """Directory of PNG images, sorted by filename; RGB stays flattened
    unless ``grayscale`` converts first."""
    from PIL import Image

    root = Path(path)
    files = sorted(root.glob("*.png"))
    if limit is not None:
        files = files[:limit]
    if not files:
        raise FileNotFoundError(f"no PNG files under {root}")
    rows = []
    width = None
    for f in files:
        with Image.open(f) as img:
            if grayscale:
                img = img.convert("L")
            arr = np.asarray(img, dtype=float) / 255.0
        flat = arr.reshape(-1)
        if width is None:
            width = flat.size
        elif flat.size != width:
            raise ValueError(f"{f}: image size differs from the first image")
        rows.append(flat)
    return PatternSet(np.stack(rows), "continuous")


def load_flat_binary(path, limit: int | None = None) -> PatternSet:
    """Raw little-endian float32 matrix with a JSON sidecar ``<file>.json``
    holding {"shape": [P, N]}."""
    path = Path(path)
    sidecar = path.with_name(path.name + ".json")
    if not sidecar.exists():
        raise FileNotFoundError(f"missing shape sidecar {sidecar}")
    meta = json.loads(sidecar.read_text())
    try:
        p, n = (int(x) for x in meta["shape"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{sidecar}: sidecar must hold a 2-entry 'shape'") from exc
    body = np.fromfile(path, dtype="<f4")
    if body.size != p * n:
        raise ValueError(f"{path}: payload holds {body.size} floats, expected {p * n}")
    data = body.reshape(p, n).astype(float)
    if limit is not None:
        data = data[:limit]
    return PatternSet(data, "continuous")


def load_csv_patterns(path, limit: int | None = None, kind: str = "continuous") -> PatternSet:
    """Plain numeric CSV, one pattern per row."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if limit is not None:
        data = data[:limit]
    return PatternSet(data, kind)


def load_image_corpus(
    path,
    fmt: str | None = None,
    limit: int | None = None,
    grayscale: bool = False,
) -> PatternSet:
    """Dispatch on ``fmt`` or infer it: directories are PNG corpora,
    ``*-ubyte``/``*.idx`` files are IDX, ``*.csv`` is CSV, and anything
    else is flat binary with a JSON sidecar."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such corpus: {p}")
    if fmt is None:
        if p.is_dir():
            fmt = "png-dir"
        elif p.suffix == ".csv":
            fmt = "csv"
        elif p.suffix == ".idx" or p.name.endswith("-ubyte"):
            fmt = "idx-ubyte"
        else:
            fmt = "flat-binary"
    if fmt == "idx-ubyte":
        return load_idx_ubyte(p, limit)
    if fmt == "png-dir":
        return load_png_dir(p, limit, grayscale)
    if fmt == "flat-binary":
        return load_flat_binary(p, limit)
    if fmt == "csv":
        return load_csv_patterns(p, limit)
    raise ValueError(f"unknown corpus format {fmt!r}")
