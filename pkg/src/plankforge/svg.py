"""Two-dimensional SVG rendering: one stripe per slab, one circle per ball."""
from __future__ import annotations

import math

from .errors import PlankforgeError
from .geom import Ball, Covering


def covering_svg(cov: Covering, balls: list[Ball] | None = None, size: int = 640) -> str:
    """Render a 2-d covering as stripes over the target body.

    Each placed slab becomes one ``<rect class="stripe">`` rotated into the
    slab frame; each target ball becomes one ``<circle class="ball">``.
    """
    if cov.dim != 2:
        raise PlankforgeError("SVG rendering is only available for dimension 2")
    if balls is None:
        balls = [cov.body] if isinstance(cov.body, Ball) else []

    lo, hi = cov.body.bounding_box()
    span = float(max(hi - lo))
    pad = 0.15 * span if span > 0 else 1.0
    lo = lo - pad
    hi = hi + pad
    world = float(max(hi - lo))
    scale = size / world
    cx0, cy0 = float(lo[0]), float(lo[1])

    def to_px(p) -> tuple[float, float]:
        # y grows downward in SVG; flip for a conventional view.
        return ((p[0] - cx0) * scale, size - (p[1] - cy0) * scale)

    center_world = (lo + hi) / 2.0
    stripe_len = 2.0 * world * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    for ball in balls:
        bx, by = to_px(ball.center)
        parts.append(
            f'<circle class="ball" cx="{bx:.3f}" cy="{by:.3f}" '
            f'r="{ball.radius * scale:.3f}" fill="none" stroke="#333" stroke-width="1.5"/>'
        )
    for slab in cov.placed:
        v = slab.normal
        anchor = center_world + (slab.midplane - float(v @ center_world)) * v
        ax, ay = to_px(anchor)
        # Stripe length runs along the tangent (-v1, v0); the pixel frame
        # flips y, which negates the rotation angle.
        theta = -math.degrees(math.atan2(float(v[0]), -float(v[1])))
        h = slab.width * scale
        parts.append(
            f'<rect class="stripe" x="{-stripe_len / 2:.3f}" y="{-h / 2:.3f}" '
            f'width="{stripe_len:.3f}" height="{h:.3f}" '
            f'fill="#4477aa" fill-opacity="0.18" stroke="#4477aa" stroke-width="0.6" '
            f'transform="translate({ax:.3f} {ay:.3f}) rotate({theta:.4f})"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
