import pytest

from primpair.ffield import build_field

# The four table-backed fields every counting/bound test sweeps.
SMALL_FIELDS = [(2, 1, 4), (3, 1, 4), (5, 1, 3), (7, 1, 3)]


@pytest.fixture(scope="session", params=SMALL_FIELDS, ids=lambda t: f"q{t[0]**t[1]}n{t[2]}")
def small_field(request):
    p, h, n = request.param
    return build_field(p, h, n)


@pytest.fixture(scope="session")
def f16():
    return build_field(2, 1, 4)


@pytest.fixture(scope="session")
def f81():
    return build_field(3, 1, 4)
