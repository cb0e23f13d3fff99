"""Unit tests for reference functions."""

import math

import numpy as np
import pytest

from fraclab import fixtures
from fraclab.errors import DomainError


class TestClosedForms:
    """Test closed-form reference values."""

    def test_explicit_exponent(self):
        """1 + (sigma - 1) / (1 + gamma)."""
        assert fixtures.explicit_exponent(1.5, 1.0) == pytest.approx(1.25)
        assert fixtures.explicit_exponent(1.8, 0.0) == pytest.approx(1.8)

    def test_gaussian_at_zero(self):
        """sigma = 1 gives -2 / sqrt(pi); sigma -> 2 approaches q''(0) = -2."""
        assert fixtures.gaussian_fraclap_at_zero(1.0) == pytest.approx(-2.0 / math.sqrt(math.pi))
        assert fixtures.gaussian_fraclap_at_zero(1.999) == pytest.approx(
            fixtures.GAUSSIAN_SECOND_DERIVATIVE_AT_ZERO, abs=1e-2)

    def test_odd_kink_reference(self):
        """Positive, decreasing in the distance, and only defined for sigma in (1, 2)."""
        values = fixtures.odd_kink_reference(1.5, [0.2, 0.1, 0.05])
        assert np.all(values > 0)
        assert np.all(np.diff(values) > 0)
        with pytest.raises(DomainError):
            fixtures.odd_kink_reference(0.8, 0.1)

    def test_odd_kink_reference_slope(self):
        """The regular part steepens the slope beyond -(sigma - 1) at moderate distances."""
        slope = fixtures.odd_kink_reference_slope(1.5, [0.2, 0.1, 0.05, 0.025])
        assert slope == pytest.approx(-0.636, abs=5e-3)
        fine = fixtures.odd_kink_reference_slope(1.5, [1e-6, 5e-7])
        assert fine == pytest.approx(-0.5, abs=1e-3)

    def test_explicit_problem_range(self, small_grid):
        """The explicit solution needs sigma in (1, 2) and gamma > 0."""
        with pytest.raises(DomainError):
            fixtures.explicit_problem(small_grid, 0.5, 1.0)
        with pytest.raises(DomainError):
            fixtures.explicit_problem(small_grid, 1.5, 0.0)


class TestProfiles:
    """Test smooth profiles and the comparison pair."""

    def test_smooth_step(self):
        """0 up to 1, 1 from 2 on, 1/2 at the midpoint."""
        values = fixtures.smooth_step([0.0, 1.0, 1.5, 2.0, 3.0])
        np.testing.assert_allclose(values, [0.0, 0.0, 0.5, 1.0, 1.0])
        assert np.all(np.diff(fixtures.smooth_step(np.linspace(0.0, 3.0, 301))) >= 0)

    def test_bump(self):
        """Peak at 0, zero outside the support."""
        values = fixtures.bump([0.0, 0.25, 0.5, 0.75], 1e-3, 0.5)
        assert values[0] == pytest.approx(1e-3)
        assert 0 < values[1] < values[0]
        assert values[2] == 0.0
        assert values[3] == 0.0

    def test_comparison_pair(self, small_grid):
        """u(0) > v(0) with the same values outside the bump."""
        v, u = fixtures.comparison_pair(small_grid)
        assert u.at_node(0.0) - v.at_node(0.0) == pytest.approx(1e-3)
        outside = np.abs(small_grid.nodes) >= 0.5
        np.testing.assert_array_equal(u.values[outside], v.values[outside])
        assert u.exterior == v.exterior

    def test_comparison_pair_support(self, small_grid):
        """The bump stays inside B_1."""
        with pytest.raises(DomainError):
            fixtures.comparison_pair(small_grid, support=1.0)
