import numpy as np
import pytest

from plankforge import Slab, slab_contains
from plankforge.geom import slab_arrays
from plankforge.kernels import available_backends, get_backend

HAVE_COMPILED = "compiled" in available_backends()
BACKENDS = available_backends()


def random_slabs(rng, m, d):
    slabs = []
    for _ in range(m):
        v = rng.normal(size=d)
        v /= np.linalg.norm(v)
        slabs.append(Slab(v, float(rng.normal() * 0.3), float(0.05 + 0.3 * rng.random())))
    return slabs


@pytest.mark.parametrize("backend", BACKENDS)
def test_covered_mask_matches_slab_contains(backend):
    rng = np.random.default_rng(5)
    slabs = random_slabs(rng, 12, 3)
    pts = rng.normal(size=(400, 3)) * 0.5
    normals, lows, highs, _, _ = slab_arrays(slabs, 3)
    mask = get_backend(backend).covered_mask(pts, normals, lows, highs)
    for i, p in enumerate(pts):
        assert bool(mask[i]) == any(slab_contains(s, p) for s in slabs)


@pytest.mark.parametrize("backend", BACKENDS)
def test_interval_counts_brute_force(backend):
    rng = np.random.default_rng(6)
    vals = np.sort(rng.normal(size=3000))
    lows = rng.normal(size=20)
    highs = lows + rng.random(20)
    counts = get_backend(backend).interval_counts(vals, lows, highs)
    for k in range(20):
        assert counts[k] == int(np.sum((vals >= lows[k]) & (vals <= highs[k])))


@pytest.mark.parametrize("backend", BACKENDS)
def test_min_slab_distance_brute_force(backend):
    rng = np.random.default_rng(7)
    slabs = random_slabs(rng, 8, 2)
    pts = rng.normal(size=(200, 2))
    normals, _, _, mids, halfw = slab_arrays(slabs, 2)
    dist = get_backend(backend).min_slab_distance(pts, normals, mids, halfw)
    for i, p in enumerate(pts):
        ref = min(max(0.0, abs(float(p @ s.normal) - s.midplane) - 0.5 * s.width) for s in slabs)
        assert dist[i] == pytest.approx(ref, abs=1e-12)


def test_empty_slab_set():
    pts = np.zeros((5, 2))
    empty_n = np.zeros((0, 2))
    empty = np.zeros(0)
    for backend in BACKENDS:
        k = get_backend(backend)
        assert not k.covered_mask(pts, empty_n, empty, empty).any()
        assert np.all(np.isinf(k.min_slab_distance(pts, empty_n, empty, empty)))


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
class TestBackendParity:
    def test_interval_counts_bit_identical(self):
        rng = np.random.default_rng(8)
        vals = np.sort(rng.normal(size=50_000))
        lows = rng.normal(size=100)
        highs = lows + rng.random(100)
        a = get_backend("python").interval_counts(vals, lows, highs)
        b = get_backend("compiled").interval_counts(vals, lows, highs)
        assert np.array_equal(a, b)

    def test_covered_mask_agrees_on_random_data(self):
        rng = np.random.default_rng(9)
        pts = rng.normal(size=(20_000, 3))
        nrm = rng.normal(size=(50, 3))
        nrm /= np.linalg.norm(nrm, axis=1)[:, None]
        lows = rng.normal(size=50)
        highs = lows + rng.random(50)
        a = get_backend("python").covered_mask(pts, nrm, lows, highs)
        b = get_backend("compiled").covered_mask(pts, nrm, lows, highs)
        assert np.array_equal(a, b)

    def test_min_slab_distance_close(self):
        rng = np.random.default_rng(10)
        pts = rng.normal(size=(5_000, 3))
        nrm = rng.normal(size=(30, 3))
        nrm /= np.linalg.norm(nrm, axis=1)[:, None]
        lows = rng.normal(size=30)
        highs = lows + rng.random(30)
        mids = (lows + highs) / 2
        hw = (highs - lows) / 2
        a = get_backend("python").min_slab_distance(pts, nrm, mids, hw)
        b = get_backend("compiled").min_slab_distance(pts, nrm, mids, hw)
        assert np.max(np.abs(a - b)) < 1e-12
