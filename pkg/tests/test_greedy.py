import math

import numpy as np
import pytest

from plankforge import (
    Ball,
    GreedyConfig,
    PlankforgeError,
    PointCloud,
    Slab,
    candidate_offsets,
    cover_ball,
    greedy_step,
    rescale_width,
    residual_fraction,
    slab_contains,
    verify_covering,
)
from plankforge.cli import random_normals

E1 = np.array([1.0])
UNIT_BALL_1D = Ball(np.zeros(1), 0.5)


def cloud_from_points(points, body):
    pts = np.asarray(points, dtype=np.float64)
    return PointCloud(body=body, seed=0, points=pts, alive=np.ones(len(pts), dtype=bool))


class TestCandidateOffsets:
    def test_count_half_width(self):
        offsets = candidate_offsets(0.5, UNIT_BALL_1D, E1)
        assert len(offsets) == 4  # ceil(2/w)

    def test_single_wide_slab(self):
        offsets = candidate_offsets(2.0, UNIT_BALL_1D, E1)
        assert len(offsets) == 1
        s = Slab(E1, float(offsets[0]), 2.0)
        # the one full-width slab spans the whole ball
        assert s.lower <= -0.5 and s.upper >= 0.5

    def test_count_derived(self):
        offsets = candidate_offsets(0.3, UNIT_BALL_1D, E1)
        assert len(offsets) == math.ceil(2 / 0.3) == 7

    def test_half_width_family_tiles_projection(self):
        # Half-width translates abut and cover [-rho, rho]; this is what the
        # per-step pigeonhole rests on.
        for w in (0.5, 0.3, 0.17, 1.2):
            offsets = candidate_offsets(w, UNIT_BALL_1D, E1)
            los = offsets + w / 4
            his = offsets + 3 * w / 4
            assert los[0] <= -0.5 + 1e-15
            assert his[-1] >= 0.5 - 1e-15
            assert np.allclose(los[1:], his[:-1], atol=1e-12)

    def test_off_center_ball(self):
        ball = Ball(np.array([1.0, 2.0]), 0.3)
        v = np.array([0.0, 1.0])
        offsets = candidate_offsets(0.2, ball, v)
        los = offsets + 0.05
        his = offsets + 0.15
        assert los[0] <= 2.0 - 0.3 + 1e-15 and his[-1] >= 2.0 + 0.3 - 1e-15

    def test_width_validation(self):
        with pytest.raises(PlankforgeError):
            candidate_offsets(0.0, UNIT_BALL_1D, E1)


class TestGreedyStep:
    def test_five_point_example(self):
        # Oracle: w=1 gives 2 candidates with half-slabs [-0.5,0] and [0,0.5];
        # counts are 3 ({-0.4,-0.2,0}) and 3 ({0,0.2,0.4}); tie -> smaller offset.
        cloud = cloud_from_points([[-0.4], [-0.2], [0.0], [0.2], [0.4]], UNIT_BALL_1D)
        offsets = candidate_offsets(1.0, UNIT_BALL_1D, E1)
        assert len(offsets) == 2
        offset, covered = greedy_step(cloud, E1, 1.0)
        assert offset == float(offsets[0])
        assert covered.tolist() == [0, 1, 2]
        assert len(covered) >= 3

    def test_empty_cloud(self):
        cloud = cloud_from_points([[0.1]], UNIT_BALL_1D)
        cloud.alive[:] = False
        offset, covered = greedy_step(cloud, E1, 0.5)
        assert offset == float(candidate_offsets(0.5, UNIT_BALL_1D, E1)[0])
        assert covered.size == 0

    def test_pigeonhole_hundred_points(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(-0.5, 0.5, size=(100, 1))
        cloud = cloud_from_points(pts, UNIT_BALL_1D)
        _, covered = greedy_step(cloud, E1, 0.5)
        assert covered.size >= 25  # ceil(100 / ceil(2/0.5))

    def test_covered_points_inside_half_width_translate(self):
        rng = np.random.default_rng(4)
        ball = Ball(np.zeros(2), 0.5)
        pts = rng.uniform(-0.5, 0.5, size=(500, 2))
        inside = np.linalg.norm(pts, axis=1) <= 0.5
        cloud = cloud_from_points(pts[inside], ball)
        v = np.array([0.6, 0.8])
        offset, covered = greedy_step(cloud, v, 0.4)
        half = rescale_width(Slab(v, offset, 0.4), 0.5)
        for i in covered:
            assert slab_contains(half, cloud.points[i])


class TestCoverBall:
    def test_d1_nine_halves(self):
        # 9 x 0.5 satisfies the width hypothesis in d=1; the verified claim
        # is the interval of radius 1/2 - w_n/4.
        cfg = GreedyConfig(dimension=1, cloud_size=50_000, seed=1)
        cov = cover_ball([0.5] * 9, np.ones((9, 1)), cfg)
        assert cov.body.radius == pytest.approx(0.375)
        assert cov.verification.status == "pass"
        assert cov.verification.uncovered_count == 0
        # the run also covers the longer interval of length 1 - w_n/4
        rep = verify_covering(cov, body=Ball(np.zeros(1), 0.4375), mode="cloud", count=50_000, seed=77)
        assert rep.status == "pass"

    def test_single_wide_slab_short_circuit(self):
        cfg = GreedyConfig(dimension=2, cloud_size=10_000, verify_cloud_size=10_000, seed=0)
        cov = cover_ball([1.0], np.array([[0.0, 1.0]]), cfg)
        assert len(cov.placed) == 1
        assert cov.body.radius == pytest.approx(0.5)
        assert cov.verification.status == "pass"

    def test_d2_random_normals_trace_invariants(self):
        widths = decreasing_until_hypothesis(2)
        normals = random_normals(2, widths.size, 1)
        cfg = GreedyConfig(dimension=2, cloud_size=50_000, verify_cloud_size=20_000, seed=1)
        cov = cover_ball(widths, normals, cfg)
        assert cov.verification.status == "pass"
        assert cov.trace.pigeonhole_ok()
        # placed slabs carry the input widths and normals
        for s, w, v in zip(cov.placed, widths, normals):
            assert s.width == pytest.approx(w, rel=1e-15)
            assert np.allclose(s.normal, v)
        # alive counts are nonincreasing
        alives = [st.alive_before for st in cov.trace.steps]
        assert all(a >= b for a, b in zip(alives, alives[1:]))

    def test_determinism_bit_exact(self):
        widths = decreasing_until_hypothesis(2)
        normals = random_normals(2, widths.size, 5)
        cfg = GreedyConfig(dimension=2, cloud_size=20_000, verify_cloud_size=5_000, seed=9)
        a = cover_ball(widths, normals, cfg)
        b = cover_ball(widths, normals, cfg)
        assert [s.lower for s in a.placed] == [s.lower for s in b.placed]

    def test_expansion_soundness(self):
        # expanding the half-width translate by 2 contains it
        rng = np.random.default_rng(12)
        for _ in range(50):
            v = rng.normal(size=2)
            v /= np.linalg.norm(v)
            s = Slab(v, rng.normal(), 0.1 + rng.random())
            half = rescale_width(s, 0.5)
            x = rng.normal(size=2)
            if slab_contains(half, x):
                assert slab_contains(s, x)

    def test_d1_interval_arithmetic_oracle(self):
        # Exact oracle, no sampling: merge the placed intervals in x-space
        # and check they contain the claimed interval.
        cfg = GreedyConfig(dimension=1, cloud_size=50_000, seed=1)
        cov = cover_ball([0.5] * 9, np.ones((9, 1)), cfg)
        spans = []
        for s in cov.placed:
            sign = float(s.normal[0])
            if sign > 0:
                spans.append((s.lower, s.upper))
            else:
                spans.append((-s.upper, -s.lower))
        spans.sort()
        merged = [list(spans[0])]
        for lo, hi in spans[1:]:
            if lo <= merged[-1][1] + 1e-12:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        target = (-0.4375, 0.4375)
        assert any(lo <= target[0] and hi >= target[1] for lo, hi in merged)

    def test_d3_constant_widths(self):
        # 37 slabs of width 0.4 meet the d=3 hypothesis 9 log 5
        n = 37
        widths = np.full(n, 0.4)
        assert widths.sum() >= 9 * math.log(2 / 0.4)
        normals = random_normals(3, n, 13)
        cfg = GreedyConfig(dimension=3, cloud_size=100_000, verify_cloud_size=50_000, seed=13)
        cov = cover_ball(widths, normals, cfg)
        assert cov.verification.status == "pass"
        assert cov.trace.pigeonhole_ok()
        assert cov.body.radius == pytest.approx(0.4)

    def test_hypothesis_violation_warns(self):
        cfg = GreedyConfig(dimension=1, cloud_size=5_000, verify_cloud_size=2_000, seed=2)
        cov = cover_ball([0.5, 0.5], np.ones((2, 1)), cfg)
        assert any("best effort" in w for w in cov.warnings)

    def test_input_validation(self):
        cfg = GreedyConfig(dimension=1, cloud_size=1_000, seed=0)
        with pytest.raises(PlankforgeError):
            cover_ball([0.2, 0.5], np.ones((2, 1)), cfg)  # increasing widths
        with pytest.raises(PlankforgeError):
            cover_ball([0.5], np.ones((1, 2)), cfg)  # dimension mismatch


class TestResidualFraction:
    def test_single_step_bound(self):
        rng = np.random.default_rng(6)
        pts = rng.uniform(-0.5, 0.5, size=(100, 1))
        cloud = cloud_from_points(pts, UNIT_BALL_1D)
        from plankforge import GreedyStep, GreedyTrace

        offset, covered = greedy_step(cloud, E1, 0.5)
        trace = GreedyTrace([GreedyStep(offset, 100, covered.size, 4)])
        emp, bound = residual_fraction(trace)
        assert bound == pytest.approx(0.75)
        assert emp <= bound

    def test_empty_trace(self):
        from plankforge import GreedyTrace

        assert residual_fraction(GreedyTrace([])) == (1.0, 1.0)

    def test_two_steps_width_one(self):
        # ceil(2/1) = 2 candidates per step: bound (1/2)*(1/2)
        from plankforge import GreedyStep, GreedyTrace, sample_cloud

        cloud = sample_cloud(UNIT_BALL_1D, 10_000, 4)
        trace = GreedyTrace([])
        for _ in range(2):
            m = cloud.alive_count
            offset, covered = greedy_step(cloud, E1, 1.0)
            trace.steps.append(GreedyStep(offset, m, covered.size, 2))
            cloud.alive[covered] = False
        emp, bound = residual_fraction(trace)
        assert bound == pytest.approx(0.25)
        assert emp <= bound
        assert cloud.alive_count == 0  # two cells tile the interval exactly

    def test_empirical_never_exceeds_bound(self):
        widths = decreasing_until_hypothesis(2)
        normals = random_normals(2, widths.size, 21)
        cfg = GreedyConfig(dimension=2, cloud_size=20_000, verify_cloud_size=5_000, seed=3)
        cov = cover_ball(widths, normals, cfg)
        emp, bound = residual_fraction(cov.trace)
        assert emp <= bound


def decreasing_until_hypothesis(d, w0=0.5, ratio=0.98):
    """Strictly decreasing widths, stopped at the first n meeting the
    total-width hypothesis sum >= 3 d log(2/w_n)."""
    widths = [w0]
    while sum(widths) < 3 * d * math.log(2 / widths[-1]):
        widths.append(widths[-1] * ratio)
    return np.array(widths)
