import numpy as np
import pytest

from freudquad import build_basis


@pytest.fixture(scope="session")
def basis2():
    """Squared-exponential weight, capacity past the envelope cap of 512."""
    return build_basis(2.0, 600)


@pytest.fixture(scope="session")
def basis2_deep():
    """Capacity for sqrt-exponential series truncations at the test depths."""
    return build_basis(2.0, 26_000)


@pytest.fixture(scope="session")
def basis4():
    """Quartic weight via the Stieltjes procedure."""
    return build_basis(4.0, 44)


@pytest.fixture(scope="session")
def trapezoid_oracle():
    """Independent integration oracle: fine uniform trapezoid grid.

    Deliberately unrelated to the composite Gauss-Legendre reference used
    inside the basis construction.
    """

    def integrate(values_fn, radius, points=30_001):
        xs = np.linspace(-radius, radius, points)
        return np.trapezoid(values_fn(xs), xs), xs

    return integrate
