import pytest

from atomgames.kernel import full_powerset_structure
from atomgames.rainbow import finite_rainbow
from atomgames.rainbow_enum import build_atom_table


@pytest.fixture(scope="session")
def small_sig():
    return finite_rainbow(3, 2, 2)


@pytest.fixture(scope="session")
def small_tab(small_sig):
    # 17301 atoms; shared across the suite, built once
    return build_atom_table(small_sig)


@pytest.fixture(scope="session")
def powerset23():
    return full_powerset_structure(2, 3)
