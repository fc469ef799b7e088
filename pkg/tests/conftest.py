import pytest

from invquot import get_preset, parse, symmetry_quotient

PENTAGON = "x1^2*x2 + x2^2*x3 + x3^2*x4 + x4^2*x5 + x5^2*x1"


@pytest.fixture(scope="session")
def pentagon_poly():
    return parse(PENTAGON)


@pytest.fixture(scope="session")
def sq(pentagon_poly):
    """Symmetry quotient of the five-variable loop, shared across the suite."""
    return symmetry_quotient(pentagon_poly)


@pytest.fixture(scope="session")
def trivial_sq():
    return symmetry_quotient(parse(get_preset("cubic-trivial-quotient")))
