"""NumPy implementations of the point/slab kernels (fallback backend)."""
import numpy as np


def covered_mask(points, normals, lows, highs):
    """0/1 mask: point i lies inside at least one slab.

    ``lows``/``highs`` carry the membership tolerance already folded in.
    Points found covered are not tested against later slabs, mirroring the
    early-exit loop of the compiled backend.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    remaining = np.arange(n)
    for j in range(normals.shape[0]):
        if remaining.size == 0:
            break
        proj = pts[remaining] @ normals[j]
        hit = (proj >= lows[j]) & (proj <= highs[j])
        out[remaining[hit]] = 1
        remaining = remaining[~hit]
    return out


def interval_counts(sorted_values, lows, highs):
    """Count sorted values inside each closed interval [lows[k], highs[k]]."""
    lo = np.searchsorted(sorted_values, lows, side="left")
    hi = np.searchsorted(sorted_values, highs, side="right")
    return (hi - lo).astype(np.int64)


def min_slab_distance(points, normals, mids, half_widths):
    """Distance from each point to its nearest slab, measured along the normal.

    Zero for points inside some slab; +inf when no slabs are given.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    best = np.full(pts.shape[0], np.inf)
    for j in range(normals.shape[0]):
        proj = pts @ normals[j]
        dist = np.abs(proj - mids[j]) - half_widths[j]
        np.maximum(dist, 0.0, out=dist)
        np.minimum(best, dist, out=best)
    return best
