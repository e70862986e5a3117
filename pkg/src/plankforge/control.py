"""Synthesis of polynomial-controlling tables.

Given samples ``x_1 <= x_2 <= ...`` this pipeline produces values ``y_i`` and
a certified coefficient-space ball such that every polynomial of degree at
most ``d`` whose coefficient vector lies in the ball passes within 1 of some
``(x_i, y_i)``.  The constraint ``|p(x_i) - y_i| <= 1`` is a slab in
coefficient space, so the problem is a translative covering of the certified
ball by the moment-curve slabs: samples ``>= 3`` run through the ordered
simplex pipeline, and an all-small sample set falls back to the greedy ball
pipeline, where the slab widths exceed ``3^-d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PlankforgeError, SlabSupplyError
from .geom import Ball, Covering, scale_translate
from .greedy import GreedyConfig, cover_ball
from .moment import (
    basis_u,
    check_condition_i,
    check_condition_ii,
    moment_matrix,
    slabs_from_xs,
)
from .simplex import chebyshev_center, cover_simplex, scale_basis

_SMALL_SAMPLE_LIMIT = 3.0


@dataclass(frozen=True)
class DivergenceReport:
    """Partial sums of ``1/x_i^d`` plus an advisory tail verdict."""

    degree: int
    partial_sums: np.ndarray
    divergent_looking: bool
    note: str


@dataclass
class ControlTable:
    """Pairs ``(x_i, y_i)`` with the coefficient ball they certify."""

    degree: int
    xs: np.ndarray
    ys: np.ndarray
    cert_center: np.ndarray
    cert_radius: float
    covering: Covering | None = None
    warnings: list[str] | None = None

    def __len__(self) -> int:
        return self.xs.size

    def pairs(self) -> list[tuple[float, float]]:
        return [(float(x), float(y)) for x, y in zip(self.xs, self.ys)]


def divergence_test(xs, d: int) -> DivergenceReport:
    """Partial sums of ``1/x_i^d`` with a heuristic convergence flag.

    The flag compares the decay exponent of the terms against ``1/i``; it is
    advisory only, a finite prefix cannot decide divergence.
    """
    x = _check_xs(xs)
    if d < 1:
        raise PlankforgeError(f"degree must be >= 1, got {d}")
    terms = 1.0 / x**d
    sums = np.cumsum(terms)
    n = terms.size
    if n >= 8:
        half = n // 2
        with np.errstate(divide="ignore"):
            slope = math.log(terms[-1] / terms[half]) / math.log(n / (half + 1))
        divergent = slope >= -1.05
        note = f"tail decay exponent estimate {slope:.3f} (heuristic; -1 is the harmonic edge)"
    else:
        divergent = True
        note = "prefix too short for a tail estimate"
    return DivergenceReport(
        degree=d, partial_sums=sums, divergent_looking=bool(divergent), note=note
    )


def control_check(table: ControlTable, coeffs) -> tuple[int, float]:
    """Best residual ``min_i |p(x_i) - y_i|`` for the given coefficients.

    Returns ``(index, residual)``; ties resolve to the smallest index.
    """
    a = np.asarray(coeffs, dtype=np.float64)
    if a.shape != (table.degree + 1,):
        raise PlankforgeError(
            f"coefficient vector must have length {table.degree + 1}, got {a.shape}"
        )
    residuals = np.abs(moment_matrix(table.xs, table.degree) @ a - table.ys)
    i = int(np.argmin(residuals))
    return i, float(residuals[i])


def build_control(xs, d: int, coeff_radius: float, config: GreedyConfig | None = None) -> ControlTable:
    """Produce a control table certified on the ball of radius ``coeff_radius``.

    Samples below 3 only help through the wide-slab greedy route, so when any
    samples ``>= 3`` exist the small ones are discarded (they are finitely
    many here by construction) and the ordered simplex pipeline runs on the
    rest.  Coefficient space is shrunk by ``1/(2R)`` so the certified ball
    becomes unit diameter, the covering is recentred on the origin, and the
    placed slab midplanes are read back as the ``y_i``.
    """
    x = _check_xs(xs)
    if d < 1:
        raise PlankforgeError(f"degree must be >= 1, got {d}")
    if not coeff_radius > 0.0:
        raise PlankforgeError(f"coeff_radius must be positive, got {coeff_radius}")

    tail = x[x >= _SMALL_SAMPLE_LIMIT]
    warnings: list[str] = []
    if tail.size:
        if tail.size < x.size:
            warnings.append(
                f"discarded {x.size - tail.size} samples below {_SMALL_SAMPLE_LIMIT}; "
                "the ordered pipeline needs x_i >= 3"
            )
        table = _build_via_simplex(tail, d, coeff_radius)
    else:
        table = _build_via_greedy(x, d, coeff_radius, config)
    table.warnings = (table.warnings or []) + warnings
    return table


def _build_via_simplex(x: np.ndarray, d: int, radius: float) -> ControlTable:
    ms = slabs_from_xs(x, d)
    basis, basis_scale = scale_basis(basis_u(d), 1.0)
    ci = check_condition_i(ms, basis)
    cii = check_condition_ii(ms, basis, gamma=1.0 / 3.0)
    if not (ci.ok and cii.ok):
        raise PlankforgeError(
            "moment normals violate the basis conditions; "
            f"(i) margin {ci.worst_margin:.3g}, (ii) margin {cii.worst_margin:.3g}"
        )

    scaled_widths = ms.widths / (2.0 * radius)
    try:
        covering, state = cover_simplex(
            scaled_widths, ms.unit_normals, basis, gamma=1.0 / 3.0
        )
    except SlabSupplyError as exc:
        deficit = float(exc.info.get("target", 0.0) - exc.info.get("achieved", 0.0))
        raise SlabSupplyError(
            "sample points exhausted before the covering closed; supply more "
            f"points worth about {radius * deficit:.6g} additional sum of 1/x_i^d "
            f"(scaled width deficit {deficit:.6g})",
            **exc.info,
        ) from exc

    n_placed = len(covering.placed)
    center, inradius = chebyshev_center(
        np.vstack([np.zeros((1, state.dim)), state.vertices()])
    )
    # Recentre so the certified ball sits at the user's coefficient origin,
    # then undo the 1/(2R) shrink.
    placed = [scale_translate(s, 1.0, -center) for s in covering.placed]
    placed = [scale_translate(s, 2.0 * radius, np.zeros(d + 1)) for s in placed]

    norms = ms.norms[:n_placed]
    lowers = np.array([s.lower for s in placed])
    widths = np.array([s.width for s in placed])
    ys = (lowers + 0.5 * widths) * norms

    cert_radius = 2.0 * radius * inradius
    body = Ball(np.zeros(d + 1), cert_radius)
    out_cov = Covering(
        body=body, placed=placed, provenance="lemma3", warnings=[]
    )
    return ControlTable(
        degree=d,
        xs=ms.xs[:n_placed].copy(),
        ys=ys,
        cert_center=np.zeros(d + 1),
        cert_radius=float(cert_radius),
        covering=out_cov,
    )


def _build_via_greedy(x: np.ndarray, d: int, radius: float, config: GreedyConfig | None) -> ControlTable:
    vectors = moment_matrix(x, d)
    norms = np.linalg.norm(vectors, axis=1)
    widths = 2.0 / norms
    unit_normals = vectors / norms[:, None]

    # Inflate the working radius so the covered ball of diameter 1 - w_n/2
    # still certifies the requested radius after scaling back.
    r_work = (radius + 0.25 * float(widths[-1])) * (1.0 + 1e-9)
    scaled_widths = widths / (2.0 * r_work)

    total = float(scaled_widths.sum())
    need = (
        3.0 * (d + 1) * math.log(2.0 / float(scaled_widths[-1]))
        if scaled_widths[-1] < 2.0
        else 0.0
    )
    if scaled_widths[0] < 1.0 and total < need:
        raise SlabSupplyError(
            f"small-sample route needs total scaled width {need:.6g}, has {total:.6g}; "
            "supply more sample points",
            achieved=total,
            target=need,
        )

    cfg = config if config is not None else GreedyConfig(dimension=d + 1)
    if cfg.dimension != d + 1:
        raise PlankforgeError("config dimension must be d + 1 for coefficient space")
    cov = cover_ball(scaled_widths, unit_normals, cfg)

    n_placed = len(cov.placed)
    placed = [scale_translate(s, 2.0 * r_work, np.zeros(d + 1)) for s in cov.placed]
    lowers = np.array([s.lower for s in placed])
    pwidths = np.array([s.width for s in placed])
    ys = (lowers + 0.5 * pwidths) * norms[:n_placed]

    cert_radius = 2.0 * r_work * cov.body.radius
    body = Ball(np.zeros(d + 1), cert_radius)
    out_cov = Covering(
        body=body, placed=placed, provenance="greedy-ball", warnings=list(cov.warnings)
    )
    return ControlTable(
        degree=d,
        xs=x[:n_placed].copy(),
        ys=ys,
        cert_center=np.zeros(d + 1),
        cert_radius=float(cert_radius),
        covering=out_cov,
        warnings=list(cov.warnings),
    )


def _check_xs(xs) -> np.ndarray:
    x = np.asarray(xs, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise PlankforgeError("xs must be a nonempty 1-d sequence")
    if not np.all(x > 0):
        raise PlankforgeError("xs must be positive")
    if np.any(x[1:] < x[:-1]):
        raise PlankforgeError("xs must be nondecreasing")
    return x
