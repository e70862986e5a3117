"""Independent validation of coverings.

Every covering claim in the package is re-checked here against fresh sample
clouds or grids, using exact per-point membership.  The module also provides
the impossibility check (a covering of a ball of diameter D needs total slab
width at least D) and a coarse-to-fine search for uncovered witness points.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PlankforgeError
from .geom import Ball, Body, Box, Covering, sample_cloud, slab_arrays, slab_contains

DEFAULT_GRID_PER_AXIS = 50


@dataclass
class VerificationReport:
    """Outcome of one exact membership sweep."""

    checked: int
    uncovered: np.ndarray
    total_width: float
    necessity_margin: float
    status: str
    mode: str
    seed: int | None = None

    @property
    def uncovered_count(self) -> int:
        return int(self.uncovered.shape[0])


@dataclass(frozen=True)
class NecessityReport:
    """Width-based impossibility verdict for a ball target."""

    status: str  # "impossible" | "inconclusive"
    total_width: float
    diameter: float


def grid_points(box: Box, per_axis: int) -> np.ndarray:
    """Regular lattice of ``per_axis`` points per axis, endpoints included."""
    axes = [np.linspace(box.low[k], box.high[k], per_axis) for k in range(box.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def verify_covering(
    cov: Covering,
    body: Body | None = None,
    mode: str = "cloud",
    count: int = 100_000,
    seed: int = 0,
    grid_per_axis: int = DEFAULT_GRID_PER_AXIS,
    max_witnesses: int = 100,
) -> VerificationReport:
    """Test sample points of ``body`` (default: the covering's claimed body)
    against all placed slabs; pass iff no point escapes every slab."""
    target = body if body is not None else cov.body
    if target.dim != cov.dim:
        raise PlankforgeError("body/covering dimension mismatch")

    if mode == "cloud":
        pts = sample_cloud(target, count, seed).points
        used_seed = seed
    elif mode == "grid":
        lo, hi = target.bounding_box()
        pts = grid_points(Box(lo, hi), grid_per_axis)
        if isinstance(target, Ball):
            diff = pts - target.center
            pts = pts[np.einsum("ij,ij->i", diff, diff) <= target.radius**2]
        used_seed = None
    else:
        raise PlankforgeError(f"unknown verification mode {mode!r}")

    normals, lows, highs, _, _ = slab_arrays(cov.placed, cov.dim)
    mask = kernels.covered_mask(pts, normals, lows, highs)
    uncovered = pts[mask == 0]

    # Witness soundness: the reported points must fail every slab exactly.
    for p in uncovered[:max_witnesses]:
        if any(slab_contains(s, p) for s in cov.placed):
            raise PlankforgeError("internal error: witness passes a slab membership test")

    total = cov.total_width
    margin = total - target.diameter
    return VerificationReport(
        checked=int(pts.shape[0]),
        uncovered=uncovered,
        total_width=total,
        necessity_margin=margin,
        status="pass" if uncovered.shape[0] == 0 else "fail",
        mode=mode,
        seed=used_seed,
    )


def bang_necessity(cov: Covering, body: Ball) -> NecessityReport:
    """Width necessity: total width below the ball diameter makes any
    translative covering impossible, no sampling needed."""
    if not isinstance(body, Ball):
        raise PlankforgeError("bang_necessity applies to ball targets")
    total = cov.total_width
    status = "impossible" if total < body.diameter else "inconclusive"
    return NecessityReport(status=status, total_width=total, diameter=body.diameter)


def find_uncovered_point(
    slabs,
    ball: Ball,
    budget: int = 100_000,
    seed: int = 0,
) -> np.ndarray | None:
    """Search the ball for a point outside every slab.

    Coarse phase: seeded clouds scored by distance to the nearest slab.
    Fine phase: shrinking Gaussian perturbations around the best point so
    far.  Returns a witness re-checked exactly against every slab, or None
    if the evaluation budget runs out first.
    """
    if budget < 1:
        raise PlankforgeError("budget must be >= 1")
    d = ball.dim
    normals, lows, highs, mids, halfw = slab_arrays(list(slabs), d)

    def verified(pt: np.ndarray) -> bool:
        if not ball.contains(pt):
            return False
        return not any(slab_contains(s, pt) for s in slabs)

    best_pt: np.ndarray | None = None
    best_obj = -np.inf
    used = 0

    coarse_total = max(1, budget // 2)
    batch = max(1, coarse_total // 4)
    for r in range(4):
        n = min(batch, budget - used)
        if n <= 0:
            break
        pts = sample_cloud(ball, n, seed + r).points
        used += n
        obj = kernels.min_slab_distance(pts, normals, mids, halfw)
        i = int(np.argmax(obj))
        if obj[i] > best_obj:
            best_obj = float(obj[i])
            best_pt = pts[i].copy()
        if best_obj > 0.0 and verified(best_pt):
            return best_pt

    if best_pt is None:
        return None

    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed + 1009)))
    sigma = ball.radius / 4.0
    while used < budget:
        n = min(256, budget - used)
        props = best_pt + rng.normal(size=(n, d)) * sigma
        used += n
        diff = props - ball.center
        inside = np.einsum("ij,ij->i", diff, diff) <= ball.radius**2
        props = props[inside]
        improved = False
        if props.shape[0]:
            obj = kernels.min_slab_distance(props, normals, mids, halfw)
            i = int(np.argmax(obj))
            if obj[i] > best_obj:
                best_obj = float(obj[i])
                best_pt = props[i].copy()
                improved = True
                if best_obj > 0.0 and verified(best_pt):
                    return best_pt
        if not improved:
            sigma *= 0.7
            if sigma < 1e-9 * ball.radius:
                sigma = ball.radius / 2.0  # restart wide: escape flat plateaus
    return None
