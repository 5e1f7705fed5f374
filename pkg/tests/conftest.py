import pytest
from mpmath import mp

from fermipart import build_table


@pytest.fixture(autouse=True)
def fifty_digits():
    # library results carry 50 digits; keep test-side arithmetic at the same precision
    with mp.workdps(50):
        yield


@pytest.fixture(scope="session")
def table():
    return build_table(4500)


@pytest.fixture(scope="session")
def small_table():
    return build_table(200)
