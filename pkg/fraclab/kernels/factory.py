"""Kernel family factory."""

from typing import Any, Dict, List, Tuple

from .profiles import BandProfile
from .spec import (IsaacsOperator, KernelSpec, make_constant_kernel, make_frac_laplacian,
                   make_perturbed_kernel)


def get_kernel(family: str, sigma: float, params: Dict[str, Any], index: int = 0) -> KernelSpec:
    """Factory function to create a kernel of a named family.

    ``index`` distinguishes the entries of an Isaacs family; seeded families
    offset their seed by it.
    """
    family = family.lower()

    if family == "fraclap":
        return make_frac_laplacian(sigma)

    elif family == "constant":
        lambda_lo = float(params.get("lambda", 1.0))
        lambda_hi = float(params.get("Lambda", 1.0))
        values = params.get("values")
        value = float(values[index]) if values else float(params.get("value", 1.0))
        return make_constant_kernel(sigma, value, lambda_lo, lambda_hi)

    elif family == "band":
        lambda_lo = float(params.get("lambda", 1.0))
        lambda_hi = float(params.get("Lambda", 2.0))
        seed = int(params.get("seed", 0)) + index
        profile = BandProfile(lambda_lo, lambda_hi, seed)
        return KernelSpec(sigma, lambda_lo, lambda_hi, profile)

    elif family == "perturbed":
        lambda_lo = float(params.get("lambda", 1.0))
        lambda_hi = float(params.get("Lambda", 2.0))
        ks = params.get("k_values")
        k = float(ks[index]) if ks else float(params.get("k", 0.5 * (lambda_lo + lambda_hi)))
        return make_perturbed_kernel(sigma, k, float(params.get("omega_exponent", 1.0)),
                                     lambda_lo, lambda_hi, params.get("amplitude"))

    else:
        raise ValueError(f"Unsupported kernel family: {family}")


def build_operator(family: str, sigma: float, params: Dict[str, Any],
                   shape: Tuple[int, int] = (1, 1)) -> IsaacsOperator:
    """Build an m x n Isaacs family whose entries come from one kernel family."""
    m, n = shape
    rows = []
    for i in range(m):
        rows.append(tuple(get_kernel(family, sigma, params, index=i * n + j) for j in range(n)))
    return IsaacsOperator(tuple(rows))


class KernelFamilyFactory:
    """Factory class for creating kernels and Isaacs families."""

    @staticmethod
    def create_operator(family: str, sigma: float, params: Dict[str, Any],
                        shape: Tuple[int, int] = (1, 1)) -> IsaacsOperator:
        """Create an Isaacs family."""
        return build_operator(family, sigma, params, shape)

    @staticmethod
    def get_supported_families() -> List[str]:
        """Get list of supported kernel families."""
        return ["fraclap", "constant", "band", "perturbed"]
