# testing/conftest.py
import pytest

from services import lattice_service


@pytest.fixture
def builtin():
    return lattice_service.builtin_order
