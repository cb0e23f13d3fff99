"""Unit tests for kernels, profiles and Isaacs families."""

import math

import numpy as np
import pytest

from fraclab.errors import DomainError, UsageError
from fraclab.kernels import (IsaacsOperator, KernelFamilyFactory, KernelSpec, build_operator,
                             check_continuity_modulus, check_ellipticity, default_sample_points,
                             get_kernel, kernel_value, make_constant_kernel, make_frac_laplacian,
                             make_perturbed_kernel, normalization_constant)
from fraclab.kernels.profiles import BandProfile, CallableProfile, ConstantProfile, PerturbedProfile


class TestNormalizationConstant:
    """Test the constant C_sigma."""

    def test_sigma_one(self):
        """C_1 = 1 / pi in one dimension."""
        assert normalization_constant(1.0) == pytest.approx(1.0 / math.pi, rel=1e-12)

    def test_sigma_three_halves(self):
        """Closed form at sigma = 1.5."""
        expected = 1.5 * math.sqrt(2.0) * math.gamma(1.25) / (math.sqrt(math.pi) * math.gamma(0.25))
        assert normalization_constant(1.5) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("sigma", [0.0, 2.0, -0.5, 2.5])
    def test_out_of_range(self, sigma):
        """sigma must lie strictly between 0 and 2."""
        with pytest.raises(DomainError):
            normalization_constant(sigma)


class TestKernelSpec:
    """Test kernel construction and evaluation."""

    def test_frac_laplacian_multiplier(self):
        """The fractional Laplacian has kappa == 1 and lambda = Lambda = 1."""
        spec = make_frac_laplacian(1.2)
        assert spec.kappa(0.3) == 1.0
        assert spec.lambda_lo == spec.lambda_hi == 1.0
        assert spec.limit_multiplier is None

    def test_invalid_band(self):
        """lambda > Lambda is rejected."""
        with pytest.raises(DomainError):
            KernelSpec(1.5, 2.0, 1.0, ConstantProfile(1.5))

    def test_kernel_value(self):
        """K(z) = C kappa |z|^(-1-sigma)."""
        spec = make_frac_laplacian(1.0)
        assert kernel_value(spec, 2.0) == pytest.approx(0.25 / math.pi)
        assert kernel_value(spec, -2.0) == kernel_value(spec, 2.0)

    def test_kernel_value_singular(self):
        """The kernel is not defined at the origin."""
        with pytest.raises(DomainError):
            kernel_value(make_frac_laplacian(1.0), 0.0)

    def test_specs_hash_by_value(self):
        """Equal constant kernels are interchangeable as cache keys."""
        assert make_frac_laplacian(1.5) == make_frac_laplacian(1.5)
        assert hash(make_frac_laplacian(1.5)) == hash(make_frac_laplacian(1.5))

    def test_describe(self):
        """describe carries the band and the profile parameters."""
        info = make_constant_kernel(1.5, 1.5, 1.0, 2.0).describe()
        assert info["lambda"] == 1.0
        assert info["Lambda"] == 2.0
        assert info["value"] == 1.5


class TestEllipticityCheck:
    """Test the sampled ellipticity condition."""

    def test_band_passes(self):
        """Band multipliers stay inside [lambda, Lambda]."""
        spec = get_kernel("band", 1.5, {"lambda": 1.0, "Lambda": 2.0, "seed": 3})
        result = check_ellipticity(spec, default_sample_points())
        assert result.passed
        assert bool(result)

    def test_reports_offender(self):
        """A multiplier leaving the band is reported with its worst point."""
        profile = CallableProfile(lambda z: 1.0 + z, label="ramp")
        spec = KernelSpec(1.5, 1.0, 2.0, profile)
        result = check_ellipticity(spec, [0.5, 1.5, 3.0])
        assert not result.passed
        assert result.offender == 3.0
        assert result.offender_value == pytest.approx(4.0)

    def test_rejects_zero_sample(self):
        """The origin is not a valid sample."""
        with pytest.raises(UsageError):
            check_ellipticity(make_frac_laplacian(1.5), [0.0, 1.0])


class TestContinuityCheck:
    """Test the sampled continuity modulus condition."""

    def test_perturbed_kernel_passes(self):
        """The perturbed family carries a matching modulus."""
        spec = make_perturbed_kernel(1.5, 1.5, 1.0, 1.0, 2.0)
        assert check_continuity_modulus(spec, default_sample_points()).passed
        assert check_ellipticity(spec, default_sample_points()).passed

    def test_too_small_modulus_fails(self):
        """A modulus below the actual deviation is caught."""
        profile = PerturbedProfile(1.5, 1.0, 0.25)
        spec = KernelSpec(1.5, 1.0, 2.0, profile, limit_multiplier=1.5, modulus=lambda t: 0.1 * t)
        result = check_continuity_modulus(spec, [0.25, 0.5, 1.0])
        assert not result.passed
        assert result.offender == 1.0

    def test_requires_limit_data(self):
        """Kernels without a limit multiplier cannot be checked."""
        with pytest.raises(UsageError):
            check_continuity_modulus(make_frac_laplacian(1.5), [0.5])

    def test_limit_outside_band(self):
        """k must lie strictly inside (lambda, Lambda)."""
        with pytest.raises(DomainError):
            make_perturbed_kernel(1.5, 2.0, 1.0, 1.0, 2.0)


class TestProfiles:
    """Test multiplier profiles."""

    def test_band_reproducible(self):
        """The same seed gives the same shell values."""
        first = BandProfile(1.0, 2.0, 7)
        second = BandProfile(1.0, 2.0, 7)
        np.testing.assert_array_equal(first.shell_values, second.shell_values)
        assert not np.array_equal(first.shell_values, BandProfile(1.0, 2.0, 8).shell_values)

    def test_band_breakpoints(self):
        """Breakpoints are the dyadic shell edges inside the interval."""
        assert BandProfile(1.0, 2.0, 0).breakpoints(0.3, 5.0) == [0.5, 1.0, 2.0, 4.0]

    def test_band_is_even(self):
        """kappa(-z) = kappa(z)."""
        profile = BandProfile(1.0, 2.0, 1)
        z = np.array([0.01, 0.3, 1.7, 9.0])
        np.testing.assert_array_equal(profile(z), profile(-z))

    def test_constant_rejects_nonpositive(self):
        """A constant multiplier must be positive."""
        with pytest.raises(ValueError):
            ConstantProfile(0.0)

    def test_perturbed_modulus(self):
        """kappa - k equals the modulus and saturates past |z| = 1."""
        profile = PerturbedProfile(1.5, 0.5, 0.2)
        assert profile(0.25) == pytest.approx(1.5 + 0.2 * 0.5)
        assert profile(4.0) == pytest.approx(1.7)


class TestKernelFamilyFactory:
    """Test kernel family factory functionality."""

    def test_get_supported_families(self):
        """Test getting list of supported families."""
        families = KernelFamilyFactory.get_supported_families()
        assert families == ["fraclap", "constant", "band", "perturbed"]

    def test_invalid_family(self):
        """Test error for invalid family."""
        with pytest.raises(ValueError, match="Unsupported kernel family: invalid"):
            get_kernel("invalid", 1.5, {})

    def test_band_entries_differ(self):
        """Each entry of a band family gets its own seed."""
        op = build_operator("band", 1.5, {"lambda": 1.0, "Lambda": 2.0, "seed": 3}, (2, 2))
        assert op.shape == (2, 2)
        seeds = [spec.multiplier.seed for spec in op.entries()]
        assert seeds == [3, 4, 5, 6]

    def test_constant_values_per_entry(self):
        """values assigns one multiplier per entry."""
        op = KernelFamilyFactory.create_operator(
            "constant", 1.5, {"lambda": 1.0, "Lambda": 2.0, "values": [1.0, 2.0]}, (1, 2))
        assert [spec.kappa(1.0) for spec in op.entries()] == [1.0, 2.0]


class TestIsaacsOperator:
    """Test Isaacs family validation."""

    def test_single(self):
        """A single kernel is a 1 x 1 family."""
        op = IsaacsOperator.single(make_frac_laplacian(1.5))
        assert op.shape == (1, 1)
        assert op.sigma == 1.5

    def test_ragged_rows(self):
        """Rows of different length are rejected."""
        spec = make_frac_laplacian(1.5)
        with pytest.raises(UsageError):
            IsaacsOperator(((spec, spec), (spec,)))

    def test_mixed_sigma(self):
        """All entries share sigma."""
        with pytest.raises(DomainError):
            IsaacsOperator(((make_frac_laplacian(1.5), make_frac_laplacian(1.2)),))

    def test_limit_multipliers(self):
        """The local limit matrix collects k_ij."""
        op = build_operator("perturbed", 1.5, {"lambda": 1.0, "Lambda": 2.0, "k_values": [1.2, 1.8]}, (2, 1))
        np.testing.assert_array_equal(op.limit_multipliers(), [[1.2], [1.8]])

    def test_limit_multipliers_missing(self):
        """The fractional Laplacian has no local limit multiplier."""
        with pytest.raises(UsageError):
            IsaacsOperator.single(make_frac_laplacian(1.5)).limit_multipliers()
