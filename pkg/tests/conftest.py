import pytest

from siltingkit.verify import dihedral_setup


@pytest.fixture(scope="session")
def a4():
    return dihedral_setup(4)


@pytest.fixture(scope="session")
def a3():
    return dihedral_setup(3)
