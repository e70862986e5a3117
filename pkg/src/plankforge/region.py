"""Covering a bounded region by partitioning a width sequence into blocks.

The width stream is split into contiguous blocks whose sums satisfy
``sum >= c * log(1 / w_last)``.  Each block, widened by ``3d/c``, meets the
total-width hypothesis of the greedy ball pipeline in a unit-diameter frame;
scaling the resulting placement by ``c/(3d)`` and translating it onto a ball
of diameter ``c/(6d)`` covers one cell of a cubic tiling of the region.
Slabs wider than ``c/(3d)`` do not need the block machinery: each one covers
a tiling ball by itself and is routed to that fallback first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import PlankforgeError, SlabSupplyError
from .geom import Ball, Box, Covering, Slab, as_direction, scale_translate
from .greedy import GreedyConfig, cover_ball
from .verify import DEFAULT_GRID_PER_AXIS, VerificationReport, verify_covering


@dataclass(frozen=True)
class BlockPartition:
    """Contiguous blocks of a width sequence, half-open index ranges."""

    c: float
    blocks: list[tuple[int, int]]
    sums: list[float]
    thresholds: list[float]

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass
class RegionPlan:
    """Ball tiling of a region plus the slab assignment per ball."""

    region: Box
    ball_diameter: float
    centers: np.ndarray
    assignment: list[dict]


@dataclass
class RegionCoverResult:
    plan: RegionPlan
    covering: Covering
    report: VerificationReport
    ball_coverings: list[Covering]


def limsup_diagnostic(widths) -> np.ndarray:
    """Running ratios ``sum(w_1..w_n) / log(1/w_n)``.

    Entries with ``w_n >= 1`` are reported as +inf markers: the denominator
    is nonpositive there while the numerator grows, so the ratio criterion
    is trivially met.
    """
    w = _check_widths(widths)
    sums = np.cumsum(w)
    out = np.full(w.size, np.inf)
    ok = w < 1.0
    out[ok] = sums[ok] / np.log(1.0 / w[ok])
    return out


def split_blocks(widths, c: float, need: int | None = None) -> BlockPartition:
    """Greedily close blocks at the first index where the running block sum
    reaches ``c * log(1/w)``.

    With ``need`` given, scanning stops once that many blocks exist.  The
    stream running out mid-block raises :class:`SlabSupplyError` with the
    deficit and the partition of the complete blocks.
    """
    w = _check_widths(widths)
    if not 0.0 < c <= 1.0:
        raise PlankforgeError(f"c must be in (0, 1], got {c}")
    blocks: list[tuple[int, int]] = []
    sums: list[float] = []
    thresholds: list[float] = []
    start = 0
    acc = 0.0
    thr = math.inf
    for i in range(w.size):
        acc += float(w[i])
        thr = c * math.log(1.0 / float(w[i]))
        if acc >= thr:
            blocks.append((start, i + 1))
            sums.append(acc)
            thresholds.append(thr)
            start = i + 1
            acc = 0.0
            if need is not None and len(blocks) >= need:
                break
    partition = BlockPartition(c=c, blocks=blocks, sums=sums, thresholds=thresholds)
    incomplete = start < w.size and (need is None or len(blocks) < need)
    short = need is not None and len(blocks) < need
    if incomplete or short:
        deficit = max(0.0, thr - acc) if start < w.size else c * math.log(1.0 / float(w[-1]))
        raise SlabSupplyError(
            f"width stream exhausted mid-block: block {len(blocks)} has sum "
            f"{acc:.6g}, needs {thr:.6g} (deficit {deficit:.6g})",
            partition=partition,
            blocks=len(blocks),
            deficit=deficit,
        )
    return partition


def filter_wide(widths, threshold: float) -> tuple[np.ndarray, np.ndarray]:
    """Split indices into wide (> threshold) and narrow (<= threshold).

    Wide slabs bypass the block machinery: each covers a ball of diameter
    ``threshold`` on its own.
    """
    if not threshold > 0.0:
        raise PlankforgeError(f"threshold must be positive, got {threshold}")
    w = np.asarray(widths, dtype=np.float64)
    wide = np.flatnonzero(w > threshold)
    narrow = np.flatnonzero(w <= threshold)
    return wide, narrow


def plan_centers(region: Box, ball_diameter: float) -> np.ndarray:
    """Cubic tiling: cells of side at most ``ball_diameter/sqrt(d)`` so each
    cell's circumscribed ball has diameter at most ``ball_diameter``."""
    if not ball_diameter > 0.0:
        raise PlankforgeError("ball diameter must be positive")
    d = region.dim
    spacing = ball_diameter / math.sqrt(d)
    axes = []
    for k in range(d):
        length = float(region.high[k] - region.low[k])
        n_k = max(1, math.ceil(length / spacing)) if length > 0.0 else 1
        cell = length / n_k if n_k else 0.0
        axes.append(region.low[k] + (np.arange(n_k) + 0.5) * cell)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def cover_region(
    widths,
    normals,
    region: Box,
    c: float,
    cfg: GreedyConfig | None = None,
    grid_per_axis: int = DEFAULT_GRID_PER_AXIS,
) -> RegionCoverResult:
    """Tile ``region`` with balls of diameter ``c/(6d)`` and cover each from
    the width stream: wide slabs directly, narrow slabs via widened blocks.

    Raises :class:`SlabSupplyError` when the stream cannot supply one wide
    slab or one complete block per ball.
    """
    if not 0.0 < c <= 1.0:
        raise PlankforgeError(f"c must be in (0, 1], got {c}")
    w = _check_widths(widths)
    d = region.dim
    nmat = np.asarray(normals, dtype=np.float64)
    if nmat.shape != (w.size, d):
        raise PlankforgeError(f"normals must have shape {(w.size, d)}, got {nmat.shape}")
    if cfg is None:
        cfg = GreedyConfig(dimension=d)
    if cfg.dimension != d:
        raise PlankforgeError("config dimension does not match the region")

    warnings: list[str] = []
    ratios = limsup_diagnostic(w)
    if float(np.max(ratios)) < c:
        warnings.append(
            f"running width/log ratio peaks at {float(np.max(ratios)):.4g} < c = {c}; "
            "the supplied prefix may not sustain blocks of this strength"
        )

    threshold = c / (3.0 * d)
    ball_diameter = c / (6.0 * d)
    wide_idx, narrow_idx = filter_wide(w, threshold)
    centers = plan_centers(region, ball_diameter)
    n_balls = centers.shape[0]

    n_wide_used = min(wide_idx.size, n_balls)
    need_blocks = n_balls - n_wide_used
    narrow_w = w[narrow_idx]
    try:
        partition = (
            split_blocks(narrow_w, c, need=need_blocks)
            if need_blocks > 0
            else BlockPartition(c, [], [], [])
        )
    except SlabSupplyError as exc:
        coverable = n_wide_used + exc.info.get("blocks", 0)
        raise SlabSupplyError(
            f"not enough slabs: region needs {n_balls} balls, stream covers only "
            f"{coverable} ({n_wide_used} wide + {exc.info.get('blocks', 0)} blocks)",
            balls_required=n_balls,
            balls_coverable=coverable,
            partition=exc.info.get("partition"),
        ) from exc

    scale = c / (3.0 * d)
    assignment: list[dict] = []
    ball_coverings: list[Covering] = []
    merged: list[Slab] = []

    for b in range(n_balls):
        center = centers[b]
        if b < n_wide_used:
            gi = int(wide_idx[b])
            v = as_direction(nmat[gi])
            slab = Slab(v, float(v @ center) - 0.5 * float(w[gi]), float(w[gi]))
            sub = Covering(
                body=Ball(center, 0.5 * ball_diameter),
                placed=[slab],
                provenance="block-region/wide",
            )
            assignment.append({"kind": "wide", "index": gi})
        else:
            j = b - n_wide_used
            a, z = partition.blocks[j]
            block_w = narrow_w[a:z]
            block_n = nmat[narrow_idx[a:z]]
            widened = (3.0 * d / c) * block_w
            # Block sum >= c log(1/w_last) plus w <= c/(3d) force the widened
            # hypothesis; 2c <= 3d makes the implication unconditional.
            need = 3.0 * d * math.log(2.0 / float(widened[-1])) if widened[-1] < 2.0 else 0.0
            if float(widened.sum()) < need:
                raise PlankforgeError(
                    f"block {j} violates the widened total-width hypothesis "
                    f"({float(widened.sum()):.6g} < {need:.6g})"
                )
            sub_cfg = replace(cfg, seed=cfg.seed + 1 + b)
            sub = cover_ball(widened, block_n, sub_cfg)
            sub.placed = [scale_translate(s, scale, center) for s in sub.placed]
            sub.body = Ball(center, scale * sub.body.radius)
            assignment.append(
                {
                    "kind": "block",
                    "index": j,
                    "start": int(narrow_idx[a]),
                    "stop": int(narrow_idx[z - 1]) + 1,
                }
            )
        ball_coverings.append(sub)
        merged.extend(sub.placed)

    plan = RegionPlan(
        region=region,
        ball_diameter=ball_diameter,
        centers=centers,
        assignment=assignment,
    )
    covering = Covering(
        body=region,
        placed=merged,
        provenance="block-region",
        warnings=warnings,
    )
    report = verify_covering(covering, mode="grid", grid_per_axis=grid_per_axis)
    covering.verification = report
    return RegionCoverResult(
        plan=plan, covering=covering, report=report, ball_coverings=ball_coverings
    )


def _check_widths(widths) -> np.ndarray:
    w = np.asarray(widths, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise PlankforgeError("widths must be a nonempty 1-d sequence")
    if not np.all(w > 0):
        raise PlankforgeError("widths must be positive")
    if np.any(w[1:] > w[:-1] * (1.0 + 1e-12)):
        raise PlankforgeError("widths must be nonincreasing")
    return w
