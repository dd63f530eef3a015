import mpmath
import pytest


@pytest.fixture(autouse=True)
def _mp_precision():
    with mpmath.workprec(256):
        yield
