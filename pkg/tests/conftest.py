import pytest

from secantpot import find_roots, parse_function

CUBIC = "z^3-1"
CUBIC2 = "(z^2-1)*(z-1/2)"


@pytest.fixture(scope="session")
def cubic():
    f = parse_function(CUBIC)
    return f, find_roots(f)


@pytest.fixture(scope="session")
def cubic2():
    f = parse_function(CUBIC2)
    return f, find_roots(f)


def root_near(roots, z):
    return min(range(len(roots)), key=lambda k: abs(roots[k].z0 - z))
