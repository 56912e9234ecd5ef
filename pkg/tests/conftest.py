import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hurwitzred.groups import build_dihedral, build_psl2  # noqa: E402


@pytest.fixture(scope="session")
def psl5():
    return build_psl2(5)


@pytest.fixture(scope="session")
def psl7():
    return build_psl2(7)


@pytest.fixture(scope="session")
def psl11():
    return build_psl2(11)


@pytest.fixture(scope="session")
def d14():
    return build_dihedral(7)
