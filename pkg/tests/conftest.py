import pytest

from qspan.flags import flag_complex
from qspan.groups import GSet, group_closure, parse_cycles
from qspan.hecke import HeckeContext


@pytest.fixture(scope="session")
def s3():
    return group_closure([parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)])


@pytest.fixture(scope="session")
def z2():
    return group_closure([parse_cycles("(0 1)", 2)])


@pytest.fixture(scope="session")
def a2_ctx():
    "Flag complex for n=3, q=2 with cached generator spans."
    return HeckeContext(flag_complex(3, 2))


@pytest.fixture(scope="session")
def a3_ctx():
    return HeckeContext(flag_complex(4, 2))


@pytest.fixture(scope="session")
def a2q3_ctx():
    return HeckeContext(flag_complex(3, 3))
