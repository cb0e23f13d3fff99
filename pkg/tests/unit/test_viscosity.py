"""Unit tests for tangent tests and viscosity-inequality checks."""

import numpy as np
import pytest

from fraclab import fixtures
from fraclab.errors import DomainError, UsageError
from fraclab.operators import QuadraticTest
from fraclab.solver import (ProblemSpec, certify_viscosity, check_contact, check_viscosity_inequality,
                            tangent_test)

DELTA = 1.0 / 16.0


@pytest.fixture
def cosine(small_grid):
    return fixtures.cosine_function(small_grid)


def cosine_problem(operator, rhs):
    return ProblemSpec(gamma=0.0, operator=operator, rhs=rhs)


class TestTangentTest:
    """Test construction of touching quadratics."""

    @pytest.mark.parametrize("kind", ["sub", "super"])
    def test_touches(self, cosine, kind):
        """The tangent test touches u at x from the requested side."""
        test = tangent_test(cosine, 0.5, kind, DELTA)
        assert test.value == cosine.at_node(0.5)
        check_contact(cosine, 0.5, test, kind, DELTA)

    def test_curvature_brackets_second_derivative(self, cosine):
        """Sub curvature lies above -cos(x), super curvature below."""
        upper = tangent_test(cosine, 0.5, "sub", DELTA).curvature
        lower = tangent_test(cosine, 0.5, "super", DELTA).curvature
        assert lower < -np.cos(0.5) < upper
        assert upper - lower < 0.1

    def test_wrong_side(self, cosine):
        """A super test does not touch from above."""
        test = tangent_test(cosine, 0.5, "super", DELTA)
        with pytest.raises(UsageError, match="from above"):
            check_contact(cosine, 0.5, test, "sub", DELTA)

    def test_detached(self, cosine):
        """Tests must take the value of u at x."""
        test = QuadraticTest(center=0.5, value=cosine.at_node(0.5) + 1.0, slope=0.0, curvature=0.0)
        with pytest.raises(UsageError, match="does not touch"):
            check_contact(cosine, 0.5, test, "sub", DELTA)

    def test_unknown_kind(self, cosine):
        """kind is sub or super."""
        with pytest.raises(UsageError):
            tangent_test(cosine, 0.5, "both", DELTA)


class TestViscosityInequality:
    """Test the signed inequality on the cosine, where -I(cos) = cos."""

    def test_value(self, cosine, fraclap_operator):
        """The checked value approximates cos(x)."""
        prob = cosine_problem(fraclap_operator, 0.0)
        test = tangent_test(cosine, 0.5, "sub", DELTA)
        check = check_viscosity_inequality(cosine, 0.5, test, "sub", prob, DELTA)
        assert check.value == pytest.approx(np.cos(0.5), abs=1e-2)
        assert check.rhs == 0.0

    @pytest.mark.parametrize("kind,rhs,outcome", [
        ("sub", 0.0, "fail"),
        ("sub", 2.0, "pass"),
        ("super", 0.0, "pass"),
        ("super", 2.0, "fail"),
    ])
    def test_outcome_follows_rhs(self, cosine, fraclap_operator, kind, rhs, outcome):
        """cos(x) <= f is a subsolution inequality, cos(x) >= f a supersolution one."""
        prob = cosine_problem(fraclap_operator, rhs)
        test = tangent_test(cosine, 0.5, kind, DELTA)
        check = check_viscosity_inequality(cosine, 0.5, test, kind, prob, DELTA)
        assert check.outcome == outcome
        assert check.ok == (outcome != "fail")

    def test_vanishing_gradient_is_skipped(self, cosine, fraclap_operator):
        """At the maximum of cos the test gradient vanishes."""
        prob = ProblemSpec(gamma=1.0, operator=fraclap_operator, rhs=0.0)
        test = tangent_test(cosine, 0.0, "sub", DELTA)
        check = check_viscosity_inequality(cosine, 0.0, test, "sub", prob, DELTA)
        assert check.outcome == "skipped"
        assert check.ok

    def test_outside_ball(self, cosine, fraclap_operator):
        """Points must lie in B_1."""
        prob = cosine_problem(fraclap_operator, 0.0)
        test = tangent_test(cosine, 1.0, "sub", DELTA)
        with pytest.raises(DomainError):
            check_viscosity_inequality(cosine, 1.0, test, "sub", prob, DELTA)


class TestComparisonPair:
    """Certificates for the pair u > v sharing the same Dirichlet data."""

    @pytest.fixture
    def pair(self, small_grid):
        return fixtures.comparison_pair(small_grid)

    def test_v_is_flat_inside(self, pair):
        """v vanishes in B_1, so every supersolution test is skipped."""
        v, u = pair
        prob = fixtures.comparison_problem(1.5)
        report = certify_viscosity(v, prob, "super", 0.25)
        assert report.ok
        assert report.tested == 0
        assert report.skipped == np.count_nonzero(prob.interior_mask(v.grid))

    def test_u_is_subsolution(self, pair):
        """The far data dominates the bump, so I(u) > 0 wherever the gradient is nonzero."""
        v, u = pair
        prob = fixtures.comparison_problem(1.5)
        report = certify_viscosity(u, prob, "sub", 0.25)
        assert report.ok
        assert report.tested > 0
        assert report.failures == []

    def test_selected_nodes(self, pair):
        """Only the requested nodes are checked."""
        _, u = pair
        prob = fixtures.comparison_problem(1.5)
        report = certify_viscosity(u, prob, "sub", 0.25, nodes=[0.25, -0.25])
        assert report.passed + report.failed + report.skipped == 2
