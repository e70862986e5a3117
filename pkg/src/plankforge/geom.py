"""Geometric primitives shared by every covering pipeline.

A slab is the closed set of points between two parallel hyperplanes.  It is
stored as a unit normal ``v``, a lower offset ``b`` and a width ``w`` and
represents ``{x : b <= <v, x> <= b + w}``.  Translations parallel to the
bounding hyperplanes leave the set unchanged, so the lower offset is the only
placement degree of freedom the pipelines ever search over.

Point clouds are the empirical stand-in for volume arguments.  They are drawn
from a counter-based generator keyed by the user seed, one full draw block
per rejection round, so regeneration with the same (body, seed, count) is
bit-for-bit reproducible and independent of evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PlankforgeError

# Unit-norm invariant tolerance for slab normals.
NORM_TOL = 1e-9
# Relative scale of the slab membership tolerance.
MEMBERSHIP_EPS = 1e-12

_MAX_SAMPLING_ROUNDS = 20_000


def as_direction(vec) -> np.ndarray:
    """Validate a unit direction vector and return a frozen float64 copy."""
    v = np.array(vec, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise PlankforgeError(f"direction must be a 1-d vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if not np.isfinite(norm) or abs(norm - 1.0) > NORM_TOL:
        raise PlankforgeError(f"direction must have unit norm within {NORM_TOL}, got norm {norm!r}")
    v.flags.writeable = False
    return v


def unit(vec) -> np.ndarray:
    """Normalize a nonzero vector to unit length."""
    v = np.asarray(vec, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise PlankforgeError("cannot normalize a zero or non-finite vector")
    return v / norm


@dataclass(frozen=True)
class Slab:
    """Closed slab ``{x : lower <= <normal, x> <= lower + width}``."""

    normal: np.ndarray
    lower: float
    width: float

    def __post_init__(self):
        object.__setattr__(self, "normal", as_direction(self.normal))
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "width", float(self.width))
        if not self.width > 0.0:
            raise PlankforgeError(f"slab width must be positive, got {self.width}")

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def upper(self) -> float:
        return self.lower + self.width

    @property
    def midplane(self) -> float:
        return self.lower + 0.5 * self.width

    @property
    def eps(self) -> float:
        """Membership tolerance, scaled so it stays meaningful after many placements."""
        return MEMBERSHIP_EPS * (1.0 + abs(self.lower) + self.width)


def slab_contains(slab: Slab, x) -> bool:
    """Exact membership test of a single point, up to the slab tolerance."""
    p = np.asarray(x, dtype=np.float64)
    if p.shape != (slab.dim,):
        raise PlankforgeError(f"point has dimension {p.shape}, slab has dimension {slab.dim}")
    proj = float(p @ slab.normal)
    eps = slab.eps
    return slab.lower - eps <= proj <= slab.upper + eps


def rescale_width(slab: Slab, factor: float) -> Slab:
    """Rescale a slab's width about its fixed midplane."""
    if not factor > 0.0:
        raise PlankforgeError(f"rescale factor must be positive, got {factor}")
    new_width = slab.width * factor
    new_lower = slab.midplane - 0.5 * new_width
    return Slab(slab.normal, new_lower, new_width)


def scale_translate(slab: Slab, scale: float, shift) -> Slab:
    """Image of a slab under ``x -> scale * x + shift``.

    Membership is preserved exactly: ``x`` in the input slab iff
    ``scale * x + shift`` in the output slab.
    """
    if not scale > 0.0:
        raise PlankforgeError(f"scale must be positive, got {scale}")
    t = np.zeros(slab.dim) if shift is None else np.asarray(shift, dtype=np.float64)
    if t.shape != (slab.dim,):
        raise PlankforgeError("translation dimension mismatch")
    return Slab(slab.normal, scale * slab.lower + float(slab.normal @ t), scale * slab.width)


@dataclass(frozen=True)
class Ball:
    """Euclidean ball given by center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.array(self.center, dtype=np.float64)
        if c.ndim != 1 or c.size < 1:
            raise PlankforgeError("ball center must be a 1-d vector")
        c.flags.writeable = False
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0.0:
            raise PlankforgeError(f"radius must be positive, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def contains(self, x) -> bool:
        p = np.asarray(x, dtype=np.float64)
        diff = p - self.center
        return float(diff @ diff) <= self.radius * self.radius

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.center - self.radius, self.center + self.radius


@dataclass(frozen=True)
class Box:
    """Axis-aligned box.  Degenerate axes (low == high) are allowed so a
    point-like region can still be planned and covered."""

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self):
        lo = np.array(self.low, dtype=np.float64)
        hi = np.array(self.high, dtype=np.float64)
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size < 1:
            raise PlankforgeError("box low/high must be 1-d vectors of equal length")
        if np.any(lo > hi):
            raise PlankforgeError("box requires low[k] <= high[k] for all axes")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "low", lo)
        object.__setattr__(self, "high", hi)

    @property
    def dim(self) -> int:
        return self.low.size

    @property
    def side_lengths(self) -> np.ndarray:
        return self.high - self.low

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.high - self.low))

    def contains(self, x) -> bool:
        p = np.asarray(x, dtype=np.float64)
        return bool(np.all(p >= self.low) and np.all(p <= self.high))

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.low, self.high


Body = Ball | Box


@dataclass
class PointCloud:
    """Deterministic sample of a body, with a per-point alive mask.

    The alive mask is the only mutable piece of state in the package; it is
    owned by whichever pipeline is exhausting the cloud (single writer).
    """

    body: Body
    seed: int
    points: np.ndarray
    alive: np.ndarray

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def alive_count(self) -> int:
        return int(np.count_nonzero(self.alive))

    def alive_indices(self) -> np.ndarray:
        return np.flatnonzero(self.alive)


def sample_cloud(body: Body, count: int, seed: int) -> PointCloud:
    """Sample ``count`` uniform points of ``body``.

    Boxes are sampled directly.  Balls are sampled by rejection from the
    bounding box: every rejection round draws one candidate row per point
    index from a Philox stream keyed by ``seed``, and a point accepts its
    first in-ball candidate.  Row ``i`` of every round is point ``i``'s
    substream, which makes the result a pure function of (body, seed, count).
    """
    if count < 1:
        raise PlankforgeError(f"count must be >= 1, got {count}")
    d = body.dim
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    if isinstance(body, Box):
        u = rng.random((count, d))
        points = body.low + u * (body.high - body.low)
    else:
        center, radius = body.center, body.radius
        points = np.empty((count, d))
        filled = np.zeros(count, dtype=bool)
        for _ in range(_MAX_SAMPLING_ROUNDS):
            u = rng.random((count, d))
            cand = center + (2.0 * u - 1.0) * radius
            diff = cand - center
            inside = np.einsum("ij,ij->i", diff, diff) <= radius * radius
            take = inside & ~filled
            points[take] = cand[take]
            filled |= inside
            if filled.all():
                break
        else:
            raise PlankforgeError("ball rejection sampling failed to fill the cloud")
    points.flags.writeable = False
    return PointCloud(body=body, seed=int(seed), points=points, alive=np.ones(count, dtype=bool))


@dataclass
class Covering:
    """A body together with the ordered slabs claimed to cover it."""

    body: Body
    placed: list[Slab]
    provenance: str
    trace: object | None = None
    warnings: list[str] = field(default_factory=list)
    verification: object | None = None

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def total_width(self) -> float:
        return float(sum(s.width for s in self.placed))


def slab_arrays(slabs, dim: int):
    """Pack slabs into kernel-ready arrays.

    Returns ``(normals, lows, highs, mids, half_widths)`` where lows/highs
    already include each slab's membership tolerance.
    """
    m = len(slabs)
    normals = np.empty((m, dim))
    lows = np.empty(m)
    highs = np.empty(m)
    mids = np.empty(m)
    halfw = np.empty(m)
    for i, s in enumerate(slabs):
        if s.dim != dim:
            raise PlankforgeError(f"slab {i} has dimension {s.dim}, expected {dim}")
        eps = s.eps
        normals[i] = s.normal
        lows[i] = s.lower - eps
        highs[i] = s.upper + eps
        mids[i] = s.midplane
        halfw[i] = 0.5 * s.width
    return normals, lows, highs, mids, halfw
