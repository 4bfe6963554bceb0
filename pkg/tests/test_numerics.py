"""Tests for bisection search and grids."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aggreason.errors import InvalidTolerance, MonotonicityViolation, RangeError
from aggreason.numerics import (
    Tolerance,
    UnitValue,
    grid_points,
    inf_satisfying,
    sup_satisfying,
    to_unit_array,
)


class TestUnitValue:
    """Tests for UnitValue."""

    def test_accepts_bounds(self):
        """Test that 0 and 1 are accepted."""
        assert UnitValue(0.0) == 0.0
        assert UnitValue(1) == 1.0

    @pytest.mark.parametrize("value", [-0.1, 1.0000001, math.nan, math.inf])
    def test_rejects_outside(self, value):
        """Test that values outside [0, 1] are rejected."""
        with pytest.raises(RangeError):
            UnitValue(value)


class TestTolerance:
    """Tests for Tolerance."""

    def test_defaults(self):
        """Test the default stopping rule."""
        tol = Tolerance()
        assert tol.eps == 1e-9
        assert tol.max_iter == 80

    def test_rejects_non_positive_eps(self):
        """Test that eps must be positive."""
        with pytest.raises(InvalidTolerance):
            Tolerance(eps=0.0)

    def test_rejects_unreachable_eps(self):
        """Test that too few iterations for eps are rejected."""
        with pytest.raises(InvalidTolerance):
            Tolerance(eps=1e-9, max_iter=10)

    def test_invalid_tolerance_is_value_error(self):
        """Test that InvalidTolerance is also a ValueError."""
        with pytest.raises(ValueError):
            Tolerance(max_iter=0)


class TestSupSatisfying:
    """Tests for sup_satisfying."""

    def test_linear_boundary(self):
        """Test that 0.5 z <= 0.2 gives 0.4."""
        assert abs(sup_satisfying(lambda z: 0.5 * z <= 0.2) - 0.4) <= 1e-9

    def test_flat_boundary(self):
        """Test that min(0.6, z) <= 0.4 gives 0.4."""
        assert abs(sup_satisfying(lambda z: np.minimum(0.6, z) <= 0.4) - 0.4) <= 1e-9

    def test_empty_set_is_zero(self):
        """Test the convention sup of the empty set = 0."""
        assert sup_satisfying(lambda z: z <= -1.0) == 0.0

    def test_true_at_one(self):
        """Test that a predicate holding at 1 gives exactly 1."""
        assert sup_satisfying(lambda z: z <= 2.0) == 1.0

    def test_rejects_up_set(self):
        """Test that an up-set predicate raises MonotonicityViolation."""
        with pytest.raises(MonotonicityViolation):
            sup_satisfying(lambda z: z >= 0.5)

    def test_rejects_bump(self):
        """Test that a predicate true only near 1/2 is caught at the midpoint."""
        with pytest.raises(MonotonicityViolation, match="at 1/2"):
            sup_satisfying(lambda z: np.abs(z - 0.5) <= 0.1)

    def test_vectorized(self):
        """Test that a whole array of thresholds is bisected at once."""
        thresholds = np.array([0.0, 0.1, 0.25, 0.5])
        result = sup_satisfying(lambda z: 0.5 * z <= thresholds, shape=(4,))
        assert np.allclose(result, [0.0, 0.2, 0.5, 1.0], atol=1e-9)

    def test_deterministic(self):
        """Test that repeated calls are bit-identical."""
        first = sup_satisfying(lambda z: z * z <= 0.3)
        second = sup_satisfying(lambda z: z * z <= 0.3)
        assert first == second

    @settings(max_examples=50, deadline=None)
    @given(
        power=st.floats(min_value=0.2, max_value=5.0),
        y=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_agrees_with_linear_scan(self, power, y):
        """Test agreement with a fine linear scan for nondecreasing g."""
        scan = np.linspace(0.0, 1.0, 100001)
        expected = scan[scan**power <= y].max(initial=0.0)
        result = sup_satisfying(lambda z: z**power <= y)
        assert abs(result - expected) <= 1e-9 + 1e-5


class TestInfSatisfying:
    """Tests for inf_satisfying."""

    def test_up_set_boundary(self):
        """Test that z >= 0.3 gives 0.3."""
        assert abs(inf_satisfying(lambda z: z >= 0.3) - 0.3) <= 1e-9

    def test_scaled_boundary(self):
        """Test that min(z / 0.5, 1) >= 0.4 gives 0.2."""
        assert abs(inf_satisfying(lambda z: np.minimum(z / 0.5, 1.0) >= 0.4) - 0.2) <= 1e-9

    def test_empty_set_is_one(self):
        """Test the convention inf of the empty set = 1."""
        assert inf_satisfying(lambda z: np.zeros_like(z, dtype=bool)) == 1.0

    def test_true_at_zero(self):
        """Test that a predicate holding at 0 gives exactly 0."""
        assert inf_satisfying(lambda z: z >= -1.0) == 0.0

    def test_rejects_down_set(self):
        """Test that a down-set predicate raises MonotonicityViolation."""
        with pytest.raises(MonotonicityViolation):
            inf_satisfying(lambda z: z <= 0.5)

    def test_rejects_bump(self):
        """Test that a predicate true only near 1/2 is caught at the midpoint."""
        with pytest.raises(MonotonicityViolation, match="at 1/2"):
            inf_satisfying(lambda z: np.abs(z - 0.5) <= 0.1, shape=(2,))

    @settings(max_examples=50, deadline=None)
    @given(
        power=st.floats(min_value=0.2, max_value=5.0),
        y=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_agrees_with_linear_scan(self, power, y):
        """Test agreement with a fine linear scan for nondecreasing g."""
        scan = np.linspace(0.0, 1.0, 100001)
        expected = scan[scan**power >= y].min(initial=1.0)
        result = inf_satisfying(lambda z: z**power >= y)
        assert abs(result - expected) <= 1e-9 + 1e-5


class TestGridPoints:
    """Tests for grid_points."""

    def test_two_points(self):
        """Test the smallest grid."""
        assert list(grid_points(2).points) == [0.0, 1.0]

    def test_three_points(self):
        """Test the midpoint grid."""
        assert list(grid_points(3).points) == [0.0, 0.5, 1.0]

    def test_step(self):
        """Test the step of the 101-point grid."""
        grid = grid_points(101)
        assert grid.step == pytest.approx(0.01)
        assert grid.points[0] == 0.0
        assert grid.points[-1] == 1.0
        assert grid.points[30] == 0.3

    def test_rejects_single_point(self):
        """Test that fewer than two points are rejected."""
        with pytest.raises(ValueError):
            grid_points(1)

    def test_points_read_only(self):
        """Test that grid points cannot be modified."""
        with pytest.raises(ValueError):
            grid_points(5).points[0] = 0.5


class TestToUnitArray:
    """Tests for to_unit_array."""

    def test_clips_round_off(self):
        """Test that values just outside [0, 1] are clipped."""
        assert list(to_unit_array([-1e-17, 0.5, 1.0 + 1e-15])) == [0.0, 0.5, 1.0]
