"""Unit tests for norms, seminorms and affine fits."""

import numpy as np
import pytest

from fraclab.errors import DomainError, UsageError
from fraclab.grid import (ExteriorExtension, Grid, GridFunction, best_affine_fit, c1alpha_seminorm,
                          holder_seminorm, oscillation, tail_norm)


@pytest.fixture
def grid():
    return Grid(2.0, 1.0 / 64.0)


class TestTailNorm:
    """Test the weighted L1 norm."""

    def test_zero(self, grid):
        """The zero function has zero tail norm."""
        assert tail_norm(GridFunction(grid, np.zeros(grid.size)), 1.5) == 0.0

    def test_constant_inside(self, grid):
        """1 on [-R, R] and 0 outside: 2 (1 - (1 + R)^-sigma) / sigma."""
        sigma = 1.5
        u = GridFunction(grid, np.ones(grid.size))
        expected = 2.0 * (1.0 - 3.0 ** (-sigma)) / sigma
        assert tail_norm(u, sigma) == pytest.approx(expected, rel=1e-3)

    def test_constant_everywhere(self, grid):
        """1 on the whole line: 2 / sigma."""
        u = GridFunction(grid, np.ones(grid.size), ExteriorExtension.constant(1.0))
        assert tail_norm(u, 1.5) == pytest.approx(2.0 / 1.5, rel=1e-3)

    def test_divergent(self, grid):
        """Fast-growing exteriors are rejected."""
        u = GridFunction(grid, np.zeros(grid.size), ExteriorExtension.power(1.0, 1.6))
        with pytest.raises(DomainError, match="not in L1_sigma"):
            tail_norm(u, 1.5)

    def test_absolute_homogeneity(self, grid):
        """tail_norm(c u) = |c| tail_norm(u), exterior included."""
        u = GridFunction.from_function(grid, np.cos, ExteriorExtension.constant(0.5))
        base = tail_norm(u, 1.2)
        for c in (3.0, -0.25):
            assert tail_norm(u.map_affine(c), 1.2) == pytest.approx(abs(c) * base, rel=1e-9)


class TestOscillationAndHolder:
    """Test oscillation and Holder seminorms."""

    def test_oscillation(self, grid):
        """max - min of |x| over B_1/2 is 1/2."""
        u = GridFunction.from_function(grid, np.abs)
        assert oscillation(u, 0.0, 0.5) == 0.5

    def test_holder_even_power(self, grid):
        """|x|^(1/2) has [u]_(1/2) = 1, attained with one point at the origin."""
        u = GridFunction.from_function(grid, lambda x: np.sqrt(np.abs(x)))
        assert holder_seminorm(u, 0.5, 0.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_holder_odd_power(self, grid):
        """sign(x) |x|^(1/2) has [u]_(1/2) = sqrt 2, attained at symmetric pairs."""
        u = GridFunction.from_function(grid, lambda x: np.sign(x) * np.sqrt(np.abs(x)))
        assert holder_seminorm(u, 0.5, 0.0, 1.0) == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_holder_alpha_range(self, grid):
        """alpha must lie in (0, 1]."""
        u = GridFunction.from_function(grid, np.abs)
        with pytest.raises(DomainError):
            holder_seminorm(u, 1.5, 0.0, 1.0)

    def test_holder_monotone_in_radius(self, grid):
        """Enlarging the ball never decreases the seminorm."""
        u = GridFunction.from_function(grid, lambda x: np.sin(5.0 * x) + np.abs(x) ** 0.7)
        values = [holder_seminorm(u, 0.6, 0.125, r) for r in (0.125, 0.25, 0.5, 1.0)]
        assert all(b >= a for a, b in zip(values[:-1], values[1:]))

    @pytest.mark.parametrize("alpha,alpha_prime", [(0.3, 0.7), (0.5, 1.0)])
    def test_holder_exponent_inequality(self, grid, alpha, alpha_prime):
        """[u]_alpha <= [u]_alpha' (2r)^(alpha' - alpha) on a ball of radius r."""
        u = GridFunction.from_function(grid, lambda x: np.sign(x) * np.abs(x) ** 0.4 + x ** 2)
        r = 0.75
        lower = holder_seminorm(u, alpha, 0.0, r)
        upper = holder_seminorm(u, alpha_prime, 0.0, r) * (2.0 * r) ** (alpha_prime - alpha)
        assert lower <= upper * (1.0 + 1e-12)

    def test_c1alpha_quadratic(self, grid):
        """The centered derivative of x^2 is exactly 2x, whose Lipschitz constant is 2."""
        u = GridFunction.from_function(grid, lambda x: x ** 2)
        assert c1alpha_seminorm(u, 1.0, 0.0, 0.5) == pytest.approx(2.0, rel=1e-10)

    def test_empty_ball(self, grid):
        """Balls without nodes are a usage error."""
        u = GridFunction.from_function(grid, np.abs)
        with pytest.raises(UsageError):
            oscillation(u, 0.0, -1.0)


class TestBestAffineFit:
    """Test the Chebyshev affine fit."""

    def test_exact_affine(self, grid):
        """Affine data is reproduced with zero deviation."""
        u = GridFunction.from_function(grid, lambda x: 2.0 * x + 1.0)
        a, p, dev = best_affine_fit(u, 0.0, 0.5)
        assert a == pytest.approx(1.0)
        assert p == pytest.approx(2.0)
        assert dev == pytest.approx(0.0, abs=1e-12)

    def test_quadratic(self, grid):
        """x^2 on B_r(0): p = 0, a = r^2 / 2, dev = r^2 / 2."""
        u = GridFunction.from_function(grid, lambda x: x ** 2)
        fit = best_affine_fit(u, 0.0, 1.0)
        assert fit.p == pytest.approx(0.0, abs=1e-12)
        assert fit.a == pytest.approx(0.5)
        assert fit.dev == pytest.approx(0.5)

    def test_shifted_center(self, grid):
        """The slope is measured from the ball center."""
        u = GridFunction.from_function(grid, lambda x: (x - 0.5) ** 2 + 3.0 * x)
        fit = best_affine_fit(u, 0.5, 0.25)
        assert fit.p == pytest.approx(3.0, abs=1e-12)
        assert fit.dev == pytest.approx(0.25 ** 2 / 2.0)

    def test_too_few_nodes(self, grid):
        """At least three nodes are needed."""
        u = GridFunction.from_function(grid, np.abs)
        with pytest.raises(UsageError):
            best_affine_fit(u, 0.0, grid.h / 2.0)

    def test_dev_ignores_added_affine(self, grid):
        """Adding a + b x shifts the fit coefficients and keeps the deviation."""
        u = GridFunction.from_function(grid, lambda x: np.abs(x) ** 1.3 + np.cos(4.0 * x))
        fit = best_affine_fit(u, 0.25, 0.5)
        moved = best_affine_fit(u.map_affine(1.0, 0.7, -2.5), 0.25, 0.5)
        assert moved.dev == pytest.approx(fit.dev, abs=1e-12)
        assert moved.p == pytest.approx(fit.p - 2.5, abs=1e-9)
        assert moved.a == pytest.approx(fit.a + 0.7 - 2.5 * 0.25, abs=1e-9)
