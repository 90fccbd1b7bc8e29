"""
Tests for the segment solvers (squares and disks).
"""

import math
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersion.exceptions import InfeasibleError, InvalidGeometryError, UnboundedObjectiveError
from dispersion.geometry import Point, Segment, feasible_set, forbidden_interval_square
from dispersion.solvers.line import (
    EndpointFunc,
    LineInstance,
    Shape,
    candidate_root,
    count_disks,
    count_on_feasible,
    count_squares,
    solve_disks,
    solve_squares,
    validate_placement,
)

from .helpers import points_near, random_points, random_segment


class TestCountSquares:
    """Tests for the square decision procedure."""

    def test_point_above_the_middle(self, unit_segment):
        """Test (5, 1) with side 4 leaves [0, 3] and [7, 10], one square each."""
        assert count_squares([Point(5.0, 1.0)], unit_segment, 4.0) == 2

    def test_empty_segment(self, unit_segment):
        """Test no points and side 2 gives floor(10 / 2) + 1."""
        assert count_squares([], unit_segment, 2.0) == 6

    def test_segment_swallowed(self, unit_segment):
        """Test a forbidden interval wider than the segment leaves nothing."""
        assert count_squares([Point(5.0, 0.0)], unit_segment, 20.0) == 0

    def test_boundary_contact_is_allowed(self, unit_segment):
        """Test a point exactly on the square's edge does not forbid."""
        assert count_squares([Point(5.0, 1.0)], unit_segment, 2.0) == 6

    def test_intervals_do_not_interfere(self, rng, unit_segment):
        """Test the per-interval closed form equals the greedy carried across intervals."""
        for _ in range(200):
            pts = random_points(rng, int(rng.integers(0, 8)))
            s = float(rng.uniform(0.2, 4.0))
            forbidden = [iv for iv in (forbidden_interval_square(pt, s) for pt in pts) if iv is not None]
            feasible = feasible_set(unit_segment, forbidden)
            assert count_squares(pts, unit_segment, s) == count_on_feasible(feasible, s)


class TestCountDisks:
    """Tests for the interference-aware greedy."""

    def test_greedy_carries_last_across_intervals(self):
        """Test feasible [0, 1] and [1.5, 3] with spacing 1 hold 0, 1, 2, 3."""
        assert count_on_feasible([(0.0, 1.0), (1.5, 3.0)], 1.0) == 4

    def test_interval_within_spacing_contributes_nothing(self):
        """Test an interval wholly inside the spacing of the last center is skipped."""
        assert count_on_feasible([(0.0, 0.0), (0.5, 0.8), (2.0, 2.0)], 1.0) == 2

    def test_empty_segment_closed_form(self, unit_segment):
        """Test lambda 2 with alpha 1/2 spaces centers 4 apart: floor(10 / 4) + 1."""
        assert count_disks([], unit_segment, 2.0, alpha=0.5) == 3

    def test_segment_swallowed(self, unit_segment):
        """Test (5, 0) at lambda 6 forbids (-1, 11)."""
        assert count_disks([Point(5.0, 0.0)], unit_segment, 6.0) == 0

    def test_rotated_segment_matches_axis(self):
        """Test the count does not depend on where the segment lies."""
        axis = Segment(Point(0.0, 0.0), Point(10.0, 0.0))
        tilted = Segment(Point(1.0, 1.0), Point(7.0, 9.0))
        pts_axis = [Point(3.0, 1.0), Point(7.0, -2.0)]
        # same local coordinates in the tilted frame
        pts_tilted = [Point(1.0 + 0.6 * x - 0.8 * y, 1.0 + 0.8 * x + 0.6 * y) for x, y in ((3.0, 1.0), (7.0, -2.0))]
        for lam in (0.5, 1.5, 2.5):
            assert count_disks(pts_axis, axis, lam) == count_disks(pts_tilted, tilted, lam)

    def test_monotone_in_lambda(self, rng):
        """Test count_disks and count_squares never increase with lambda on random instances."""
        for _ in range(50):
            seg = random_segment(rng)
            pts = points_near(rng, seg, int(rng.integers(0, 8)))
            lams = sorted(float(v) for v in rng.uniform(0.05, 6.0, size=6))
            disks = [count_disks(pts, seg, lam) for lam in lams]
            squares = [count_squares(pts, seg, lam) for lam in lams]
            assert disks == sorted(disks, reverse=True)
            assert squares == sorted(squares, reverse=True)


class TestCandidateRoot:
    """Tests for the root of right(lam) - left(lam) = t * lam / alpha."""

    def test_two_points_one_step(self):
        """Test the root of 3 lam^2 + 20 lam - 136 = 0."""
        left = EndpointFunc.right_of(Point(0.0, 3.0))
        right = EndpointFunc.left_of(Point(10.0, 3.0))
        expected = (-20.0 + math.sqrt(400.0 + 12.0 * 136.0)) / 6.0
        assert candidate_root(left, right, 1) == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(4.17965, abs=1e-5)

    def test_two_points_no_step(self):
        """Test t = 0 closes the gap at sqrt(34)."""
        left = EndpointFunc.right_of(Point(0.0, 3.0))
        right = EndpointFunc.left_of(Point(10.0, 3.0))
        assert candidate_root(left, right, 0) == pytest.approx(math.sqrt(34.0), abs=1e-9)

    def test_constant_endpoints(self):
        """Test constants 0 and 10 with t = 2 give 5."""
        root = candidate_root(EndpointFunc.constant(0.0), EndpointFunc.constant(10.0), 2)
        assert root == pytest.approx(5.0, abs=1e-9)

    def test_alpha_scales_the_step(self):
        """Test alpha 1/2 doubles the spacing: 10 = 2 * (2 lam)."""
        root = candidate_root(EndpointFunc.constant(0.0), EndpointFunc.constant(10.0), 2, alpha=0.5)
        assert root == pytest.approx(2.5, abs=1e-9)

    def test_no_root_when_gap_is_negative(self):
        """Test reversed constants have no positive root."""
        assert candidate_root(EndpointFunc.constant(10.0), EndpointFunc.constant(0.0), 1) is None

    def test_no_root_outside_bracket(self):
        """Test an upper bracket below the root yields None."""
        assert candidate_root(EndpointFunc.constant(0.0), EndpointFunc.constant(10.0), 2, lam_max=4.0) is None

    def test_square_endpoints_move_by_half_side(self):
        """Test square endpoints are x +/- s/2 from 2|y| on."""
        f = EndpointFunc.right_of(Point(2.0, 1.0), shape=Shape.SQUARE)
        assert f.domain_lo == 2.0
        assert f(4.0) == 4.0


class TestSolveSquares:
    """Tests for the square optimizer."""

    def test_boundary_exempt_point(self, unit_segment):
        """Test (5, 1) with k = 6 gives side 2."""
        s_star, placement = solve_squares([Point(5.0, 1.0)], unit_segment, 6)
        assert s_star == pytest.approx(2.0, rel=1e-9)
        assert len(placement.centers) == 6

    def test_empty_two_squares(self, unit_segment):
        """Test no points and k = 2 put the squares at the endpoints."""
        s_star, placement = solve_squares([], unit_segment, 2)
        assert s_star == pytest.approx(10.0, rel=1e-9)
        assert placement.centers == pytest.approx((0.0, 10.0))

    def test_point_on_the_segment(self, unit_segment):
        """Test (5, 0) with k = 2 still reaches side 10 at the endpoints."""
        s_star, placement = solve_squares([Point(5.0, 0.0)], unit_segment, 2)
        assert s_star == pytest.approx(10.0, rel=1e-9)
        assert placement.centers == pytest.approx((0.0, 10.0))
        assert validate_placement([Point(5.0, 0.0)], unit_segment, placement)

    def test_unbounded_single_square(self, unit_segment):
        """Test k = 1 without points has no finite optimum."""
        with pytest.raises(UnboundedObjectiveError):
            solve_squares([], unit_segment, 1)


class TestSolveDisks:
    """Tests for the disk optimizer."""

    def test_half_alpha(self, unit_segment):
        """Test (5, 0), k = 2, alpha 1/2 gives lambda 5 at the endpoints."""
        pts = [Point(5.0, 0.0)]
        lam_star, placement = solve_disks(pts, unit_segment, 2, alpha=0.5)
        assert lam_star == pytest.approx(5.0, rel=1e-9)
        assert placement.centers == pytest.approx((0.0, 10.0))
        assert validate_placement(pts, unit_segment, placement, alpha=0.5)

    def test_symmetric_points(self, unit_segment):
        """Test (0, 3) and (10, 3) with k = 2 give lambda of about 4.17965."""
        pts = [Point(0.0, 3.0), Point(10.0, 3.0)]
        lam_star, placement = solve_disks(pts, unit_segment, 2)
        assert lam_star == pytest.approx(4.17965, abs=1e-5)
        assert validate_placement(pts, unit_segment, placement)

    def test_even_spacing(self, unit_segment):
        """Test no points with k = 3 spaces centers at 0, 5, 10."""
        lam_star, placement = solve_disks([], unit_segment, 3)
        assert lam_star == pytest.approx(5.0, rel=1e-9)
        assert placement.centers == pytest.approx((0.0, 5.0, 10.0))

    def test_world_coordinates_follow_the_segment(self):
        """Test the placement maps back onto a tilted segment."""
        seg = Segment(Point(1.0, 1.0), Point(7.0, 9.0))
        _, placement = solve_disks([], seg, 2)
        assert placement.world[0] == pytest.approx((1.0, 1.0))
        assert placement.world[1] == pytest.approx((7.0, 9.0))

    def test_degenerate_segment(self):
        """Test k >= 2 on a single-point segment is infeasible."""
        seg = Segment(Point(1.0, 1.0), Point(1.0, 1.0))
        with pytest.raises(InfeasibleError):
            solve_disks([Point(3.0, 3.0)], seg, 2)

    def test_unbounded_single_center(self, unit_segment):
        """Test k = 1 without points has no finite optimum."""
        with pytest.raises(UnboundedObjectiveError):
            solve_disks([], unit_segment, 1)

    def test_invalid_alpha(self, unit_segment):
        """Test a non-positive alpha is rejected."""
        with pytest.raises(InvalidGeometryError):
            solve_disks([Point(1.0, 1.0)], unit_segment, 2, alpha=0.0)

    def test_instance_rejects_zero_k(self, unit_segment):
        """Test LineInstance enforces k >= 1."""
        with pytest.raises(InvalidGeometryError):
            LineInstance((), unit_segment, 0)


class TestOptimality:
    """Seeded checks of witnesses and bracketing on random instances."""

    def test_witness_and_bracketing(self, rng):
        """Test count(lam*) >= k, count just above lam* < k, and the witness is valid."""
        for _ in range(40):
            seg = random_segment(rng)
            pts = points_near(rng, seg, int(rng.integers(1, 7)))
            k = int(rng.integers(1, 5))
            alpha = float(rng.choice([0.5, 1.0, 2.0]))
            lam_star, placement = solve_disks(pts, seg, k, alpha)
            assert count_disks(pts, seg, lam_star, alpha) >= k
            assert count_disks(pts, seg, lam_star * (1.0 + 1e-6), alpha) < k
            assert len(placement.centers) == k
            assert validate_placement(pts, seg, placement, alpha)

    def test_square_witness_and_bracketing(self, rng):
        """Test the same bracketing for squares."""
        for _ in range(40):
            seg = random_segment(rng)
            pts = points_near(rng, seg, int(rng.integers(1, 7)))
            k = int(rng.integers(1, 5))
            s_star, placement = solve_squares(pts, seg, k)
            assert count_squares(pts, seg, s_star) >= k
            assert count_squares(pts, seg, s_star * (1.0 + 1e-6)) < k
            assert validate_placement(pts, seg, placement)

    @pytest.mark.property_based
    @given(
        st.lists(
            st.tuples(st.floats(0.0, 10.0, allow_nan=False), st.floats(-3.0, 3.0, allow_nan=False)),
            min_size=1,
            max_size=6,
        ),
        st.integers(2, 4),
    )
    @settings(max_examples=60, deadline=None)
    def test_optimum_is_feasible(self, coords, k):
        """Property: the solver's optimum always admits k centers."""
        seg = Segment(Point(0.0, 0.0), Point(10.0, 0.0))
        pts = [Point(x, y) for x, y in coords]
        lam_star, placement = solve_disks(pts, seg, k)
        assert lam_star > 0.0
        assert count_disks(pts, seg, lam_star) >= k
        assert validate_placement(pts, seg, placement)


@pytest.mark.slow
class TestScaling:
    """Larger instances (run with ``-m slow``)."""

    def test_two_hundred_points(self, rng):
        """Test solve_disks on n = 200, k = 20 returns a valid witness."""
        seg = Segment(Point(0.0, 0.0), Point(200.0, 0.0))
        pts = random_points(rng, 200, box=200.0, spread=5.0)
        lam_star, placement = solve_disks(pts, seg, 20)
        assert count_disks(pts, seg, lam_star) >= 20
        assert validate_placement(pts, seg, placement)

    def test_doubling_n_roughly_doubles_count_time(self, rng):
        """Test count_disks time grows by at most 2.6x from n = 20000 to n = 40000 (best of three)."""
        seg = Segment(Point(0.0, 0.0), Point(100.0, 0.0))

        def best_time(n):
            pts = random_points(rng, n, box=100.0, spread=20.0)
            runs = []
            for _ in range(3):
                start = time.perf_counter()
                count_disks(pts, seg, 0.05)
                runs.append(time.perf_counter() - start)
            return min(runs)

        assert best_time(40_000) <= 2.6 * best_time(20_000)
