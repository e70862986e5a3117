"""Slab systems with normals on the moment curve ``x -> (1, x, ..., x^d)``.

For a polynomial ``p(x) = <a, (1, x, ..., x^d)>``, the constraint
``|p(x_i) - y_i| <= 1`` carves a slab of width ``2 / ||(1, x_i, ..., x_i^d)||``
out of coefficient space.  For sample points ``x_i >= 3`` these normals are
ordered along the curve and satisfy two inequalities against a fixed ray
basis (a ratio monotonicity condition and a uniform cosine bound) that make
the sequential simplex covering work.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PlankforgeError


def moment_vector(x: float, d: int) -> np.ndarray:
    """The vector ``(1, x, x^2, ..., x^d)``."""
    if d < 1:
        raise PlankforgeError(f"degree must be >= 1, got {d}")
    return np.asarray(x, dtype=np.float64) ** np.arange(d + 1)


def moment_matrix(xs, d: int) -> np.ndarray:
    """Row ``i`` is ``moment_vector(xs[i], d)``."""
    if d < 1:
        raise PlankforgeError(f"degree must be >= 1, got {d}")
    x = np.asarray(xs, dtype=np.float64)
    return x[:, None] ** np.arange(d + 1)[None, :]


@dataclass(frozen=True)
class Basis:
    """Rows are d+1 linearly independent vectors spanning the placement cone."""

    us: np.ndarray

    def __post_init__(self):
        m = np.array(self.us, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PlankforgeError("basis must be a square matrix of row vectors")
        det = float(np.linalg.det(m))
        if abs(det) < 1e-12:
            raise PlankforgeError(f"basis rows are not linearly independent (det {det!r})")
        m.flags.writeable = False
        object.__setattr__(self, "us", m)

    @property
    def dim(self) -> int:
        return self.us.shape[0]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.us, axis=1)

    def scaled(self, factor: float) -> "Basis":
        if not factor > 0.0:
            raise PlankforgeError("basis scale must be positive")
        return Basis(self.us * factor)


def basis_u(d: int) -> Basis:
    """The standard ray basis: ``u_j = e_{d+1-j} + e_{d+1}`` for ``j <= d``
    and ``u_{d+1} = e_{d+1}``.  Its determinant is +-1."""
    if d < 1:
        raise PlankforgeError(f"degree must be >= 1, got {d}")
    us = np.zeros((d + 1, d + 1))
    for j in range(1, d + 1):
        us[j - 1, d - j] = 1.0  # e_{d+1-j}, zero-based column d-j
        us[j - 1, d] = 1.0
    us[d, d] = 1.0
    return Basis(us)


@dataclass(frozen=True)
class MomentSystem:
    """Moment-curve slab family for samples ``3 <= x_1 <= x_2 <= ...``.

    Widths ``2/||x_i||`` are nonincreasing and exceed ``1/x_i^d``; lower
    offsets stay free until a covering pipeline places the slabs.
    """

    degree: int
    xs: np.ndarray
    vectors: np.ndarray
    norms: np.ndarray
    widths: np.ndarray

    def __len__(self) -> int:
        return self.xs.size

    @property
    def unit_normals(self) -> np.ndarray:
        return self.vectors / self.norms[:, None]


def slabs_from_xs(xs, d: int) -> MomentSystem:
    """Build the coefficient-space slab system for sample points ``xs``."""
    x = np.asarray(xs, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise PlankforgeError("xs must be a nonempty 1-d sequence")
    if np.any(x[1:] < x[:-1]):
        raise PlankforgeError("xs must be nondecreasing")
    if x[0] < 3.0:
        raise PlankforgeError(
            "slabs_from_xs requires x_i >= 3; route smaller samples to the "
            "wide-slab branch instead"
        )
    vectors = moment_matrix(x, d)
    norms = np.linalg.norm(vectors, axis=1)
    widths = 2.0 / norms
    if np.any(widths[1:] > widths[:-1] * (1.0 + 1e-12)):
        raise PlankforgeError("internal error: widths not nonincreasing")
    if np.any(widths <= 1.0 / x**d):
        raise PlankforgeError("internal error: width bound w_i > 1/x_i^d violated")
    return MomentSystem(degree=d, xs=x, vectors=vectors, norms=norms, widths=widths)


@dataclass(frozen=True)
class ConditionReport:
    """Margin report for one of the two basis conditions."""

    ok: bool
    worst_margin: float
    violations: tuple

    def __bool__(self) -> bool:
        return self.ok


def check_condition_i(ms: MomentSystem, basis: Basis, rel_tol: float = 1e-12) -> ConditionReport:
    """Ratio monotonicity between consecutive normals.

    For each consecutive pair and each basis ray, the growth ratio along
    ``u_1`` must not exceed the growth ratio along ``u_j``.  Margins are the
    differences ``r_j - r_1``; the worst (most negative) is reported.
    """
    gram = ms.vectors @ basis.us.T
    if np.any(gram <= 0.0):
        raise PlankforgeError("condition (i) needs positive inner products with every ray")
    if len(ms) < 2:
        return ConditionReport(ok=True, worst_margin=np.inf, violations=())
    ratios = gram[1:] / gram[:-1]
    r1 = ratios[:, :1]
    margins = ratios - r1
    tol = rel_tol * np.maximum(1.0, np.abs(r1))
    bad = np.argwhere(margins < -tol)
    violations = tuple(
        (int(i), int(j), float(r1[i, 0]), float(ratios[i, j])) for i, j in bad
    )
    return ConditionReport(
        ok=len(violations) == 0,
        worst_margin=float(margins.min()),
        violations=violations,
    )


def check_condition_ii(
    ms: MomentSystem, basis: Basis, gamma: float = 1.0 / 3.0, rel_tol: float = 1e-12
) -> ConditionReport:
    """Uniform cosine bound ``<x_i, u_j> >= gamma ||x_i|| ||u_j||``.

    The report's margin is the worst cosine slack ``cos(i,j) - gamma``.
    """
    if not 0.0 < gamma < 1.0:
        raise PlankforgeError(f"gamma must be in (0, 1), got {gamma}")
    gram = ms.vectors @ basis.us.T
    cos = gram / (ms.norms[:, None] * basis.norms()[None, :])
    slack = cos - gamma
    bad = np.argwhere(slack < -rel_tol)
    violations = tuple((int(i), int(j), float(cos[i, j])) for i, j in bad)
    return ConditionReport(
        ok=len(violations) == 0,
        worst_margin=float(slack.min()),
        violations=violations,
    )
