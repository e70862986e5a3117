"""Sequential covering of a growing simplex by ordered slab translates.

Starting from the cone spanned by a ray basis, the first slab cuts off a
simplex with one vertex at the origin.  Every further slab is translated so
its lower hyperplane passes through the current vertex on the first ray; the
ordering conditions on the normals guarantee (and each step certifies) that
the lower hyperplane crosses every other edge inside the already-covered
simplex, so no hole opens up.  Once the vertex on the first ray is far
enough, the covered simplex contains the scaled base simplex and hence a
ball of the target diameter.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CertificateError, PlankforgeError, SlabSupplyError
from .geom import Ball, Covering, Slab, as_direction, slab_arrays
from .moment import Basis

_CERT_TOL = 1e-12
_PLANE_TOL = 1e-10


def _facet_normal(edges: np.ndarray) -> np.ndarray:
    """Vector orthogonal to the rows of ``edges`` via cofactor expansion."""
    n = edges.shape[1]
    cols = np.arange(n)
    normal = np.empty(n)
    sign = 1.0
    for i in range(n):
        normal[i] = sign * float(np.linalg.det(edges[:, cols != i]))
        sign = -sign
    return normal


def chebyshev_center(vertices) -> tuple[np.ndarray, float]:
    """Center and radius of the largest ball inscribed in a simplex.

    The optimum of ``max r`` subject to ``<n_f, x> + r <= b_f`` touches every
    facet of a simplex, so the active-set linear program collapses to one
    dense linear solve.  Facet normals come from cofactor expansion.
    """
    v = np.asarray(vertices, dtype=np.float64)
    if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
        raise PlankforgeError(
            f"need n+1 vertices in R^n for a simplex, got shape {v.shape}"
        )
    k, n = v.shape
    scale = float(np.linalg.norm(v.max(axis=0) - v.min(axis=0)))
    if scale == 0.0:
        raise PlankforgeError("degenerate simplex: all vertices coincide")
    vol_factor = abs(float(np.linalg.det(v[1:] - v[0])))
    if vol_factor < 1e-14 * scale**n:
        raise PlankforgeError("degenerate simplex: volume is numerically zero")

    a_mat = np.empty((k, n))
    b_vec = np.empty(k)
    for m in range(k):
        others = np.delete(v, m, axis=0)
        base = others[0]
        nrm = _facet_normal(others[1:] - base)
        nrm /= np.linalg.norm(nrm)
        if float(nrm @ (v[m] - base)) > 0.0:
            nrm = -nrm  # outward: the opposite vertex sits on the negative side
        a_mat[m] = nrm
        b_vec[m] = float(nrm @ base)

    sol = np.linalg.solve(np.hstack([a_mat, np.ones((k, 1))]), b_vec)
    center, radius = sol[:n], float(sol[n])
    if radius <= 0.0:
        raise PlankforgeError("degenerate simplex: nonpositive inradius")
    return center, radius


def scale_basis(basis: Basis, target_diameter: float) -> tuple[Basis, float]:
    """Scale the basis so conv{0, u_1, ..., u_{d+1}} contains a ball of the
    target diameter."""
    if not target_diameter > 0.0:
        raise PlankforgeError(f"target diameter must be positive, got {target_diameter}")
    vertices = np.vstack([np.zeros((1, basis.dim)), basis.us])
    _, inradius = chebyshev_center(vertices)
    factor = target_diameter / (2.0 * inradius)
    return basis.scaled(factor), factor


@dataclass(frozen=True)
class CoverConstant:
    """Total-width target that forces the covered simplex to contain the
    base simplex: ``c >= max_j ||u_j|| / gamma``."""

    gamma: float
    c: float
    basis_scale: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise PlankforgeError(f"gamma must be in (0, 1), got {self.gamma}")
        if not self.c > 0.0:
            raise PlankforgeError("cover constant must be positive")

    @classmethod
    def for_basis(cls, basis: Basis, gamma: float, basis_scale: float = 1.0) -> "CoverConstant":
        c = float(np.max(basis.norms())) / gamma
        return cls(gamma=gamma, c=c, basis_scale=basis_scale)


@dataclass
class StepCertificate:
    """Per-step evidence that the new lower hyperplane cuts every edge."""

    ratios: np.ndarray  # alpha_j / beta_j, all <= 1 + tol
    advance: float  # increase of ||p(1)||


@dataclass
class SimplexState:
    """Covered simplex after ``step`` placements: vertex j is ``t[j] * u_j``."""

    basis: Basis
    t: np.ndarray
    step: int
    last_normal: np.ndarray
    placed: list[Slab] = field(default_factory=list)
    certificates: list[StepCertificate] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def vertices(self) -> np.ndarray:
        return self.t[:, None] * self.basis.us

    def p1_norm(self) -> float:
        return float(self.t[0] * np.linalg.norm(self.basis.us[0]))

    def vertex_norms(self) -> np.ndarray:
        return self.t * self.basis.norms()

    @property
    def degenerate(self) -> bool:
        return bool(np.any(self.t <= 1e-300))


def _ray_dots(normal: np.ndarray, basis: Basis) -> np.ndarray:
    dots = basis.us @ normal
    if np.any(dots <= 0.0):
        raise CertificateError(
            "slab normal has a nonpositive inner product with a basis ray; "
            "the slab would not cut a simplex out of the cone"
        )
    return dots


def place_first(normal, width: float, basis: Basis) -> SimplexState:
    """Place the first slab with its lower hyperplane through the origin."""
    v = as_direction(normal)
    if v.size != basis.dim:
        raise PlankforgeError("normal/basis dimension mismatch")
    if not width > 0.0:
        raise PlankforgeError("width must be positive")
    dots = _ray_dots(v, basis)
    t = width / dots
    state = SimplexState(basis=basis, t=t, step=1, last_normal=v)
    state.placed.append(Slab(v, 0.0, width))
    _check_plane_consistency(state, upper=width, dots=dots)
    return state


def place_next(state: SimplexState, normal, width: float) -> SimplexState:
    """Adjoin the next slab at the current vertex on the first ray.

    The lower hyperplane passes through ``p(1)``; the certificate
    ``alpha_j <= beta_j`` checks that it crosses every edge of the covered
    simplex, which is exactly the ordering condition on the normals.
    """
    v = as_direction(normal)
    if v.size != state.dim:
        raise PlankforgeError("normal/state dimension mismatch")
    if not width > 0.0:
        raise PlankforgeError("width must be positive")
    dots = _ray_dots(v, state.basis)

    lower = float(state.t[0] * dots[0])  # = <v, p(1)>
    alpha = lower / dots
    ratios = alpha / state.t
    if np.any(ratios > 1.0 + _CERT_TOL):
        worst = int(np.argmax(ratios))
        raise CertificateError(
            "ordering condition violated: the new lower hyperplane misses edge "
            f"{worst} (alpha/beta = {float(ratios[worst]):.17g} > 1); slabs must "
            "be ordered along the moment curve"
        )
    t_new = alpha + width / dots
    advance = float(width * np.linalg.norm(state.basis.us[0]) / dots[0])

    new_state = SimplexState(
        basis=state.basis,
        t=t_new,
        step=state.step + 1,
        last_normal=v,
        placed=state.placed + [Slab(v, lower, width)],
        certificates=state.certificates + [StepCertificate(ratios=ratios, advance=advance)],
    )
    _check_plane_consistency(new_state, upper=lower + width, dots=dots)
    return new_state


def _check_plane_consistency(state: SimplexState, upper: float, dots: np.ndarray) -> None:
    levels = state.t * dots
    err = float(np.max(np.abs(levels - upper)))
    if err > _PLANE_TOL * max(1.0, abs(upper)):
        raise CertificateError(
            f"vertices drifted off the common hyperplane (error {err:.3g})"
        )


def cover_simplex(
    widths,
    normals,
    basis: Basis,
    gamma: float = 1.0 / 3.0,
    c_target: float | None = None,
) -> tuple[Covering, SimplexState]:
    """Place ordered slabs until the covered simplex contains the base simplex.

    Stops at the first step where ``||p(1)|| >= c_target`` (default: the
    constructive constant ``max ||u_j|| / gamma``), then certifies that every
    vertex satisfies ``||p(j)|| >= gamma ||p(1)||`` and ``t_j >= 1``.  The
    returned covering claims the inscribed ball of the final simplex.

    Raises :class:`SlabSupplyError` when the slabs run out first; this is the
    total-width hypothesis failing.
    """
    w = np.asarray(widths, dtype=np.float64)
    nmat = np.asarray(normals, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise SlabSupplyError("no slabs supplied", achieved=0.0, target=c_target or 0.0)
    if nmat.shape != (w.size, basis.dim):
        raise PlankforgeError(f"normals must have shape {(w.size, basis.dim)}")
    if c_target is None:
        c_target = CoverConstant.for_basis(basis, gamma).c

    state = place_first(nmat[0], float(w[0]), basis)
    i = 1
    while state.p1_norm() < c_target:
        if i >= w.size:
            raise SlabSupplyError(
                f"slabs exhausted at ||p(1)|| = {state.p1_norm():.6g} before "
                f"reaching the target {c_target:.6g}; total width is too small",
                achieved=state.p1_norm(),
                target=float(c_target),
                placed=state.step,
            )
        state = place_next(state, nmat[i], float(w[i]))
        i += 1

    p1 = state.p1_norm()
    vnorms = state.vertex_norms()
    if np.any(vnorms < gamma * p1 * (1.0 - 1e-9)):
        raise CertificateError(
            "final vertex norms dip below gamma * ||p(1)||; the cosine "
            "condition does not hold for these normals"
        )
    if np.any(state.t < 1.0 - 1e-9):
        raise CertificateError(
            "covered simplex does not contain the base simplex (some t_j < 1)"
        )

    center, inradius = chebyshev_center(
        np.vstack([np.zeros((1, state.dim)), state.vertices()])
    )
    covering = Covering(
        body=Ball(center, inradius),
        placed=list(state.placed),
        provenance="lemma3",
    )
    return covering, state


def sample_simplex(vertices, count: int, seed: int) -> np.ndarray:
    """Uniform points of a simplex via symmetric Dirichlet barycentric weights."""
    v = np.asarray(vertices, dtype=np.float64)
    if count < 1:
        raise PlankforgeError("count must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    lam = rng.dirichlet(np.ones(v.shape[0]), size=count)
    return lam @ v


def scan_state_coverage(state: SimplexState, count: int = 10_000, seed: int = 0) -> int:
    """Sample the covered simplex and count points outside every placed slab."""
    pts = sample_simplex(
        np.vstack([np.zeros((1, state.dim)), state.vertices()]), count, seed
    )
    normals, lows, highs, _, _ = slab_arrays(state.placed, state.dim)
    mask = kernels.covered_mask(pts, normals, lows, highs)
    return int(np.count_nonzero(mask == 0))
