import pytest

from spcodes.gf import field_new


@pytest.fixture(scope="session")
def f3():
    return field_new(1)


@pytest.fixture(scope="session")
def f9():
    return field_new(2)


@pytest.fixture(scope="session")
def f27():
    return field_new(3)


@pytest.fixture(params=[1, 2, 3], ids=["q3", "q9", "q27"], scope="session")
def fq(request):
    """One field per supported desk-scale degree."""
    return field_new(request.param)
