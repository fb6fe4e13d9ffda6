import sys

import numpy as np
import pytest

from qsetlab.oml_core import build_boolean, build_mo, direct_product, parse_lattice_name


@pytest.fixture(scope="session")
def mo2():
    return build_mo(2)


@pytest.fixture(scope="session")
def bool2():
    return build_boolean(2)


@pytest.fixture(scope="session")
def bool3():
    return build_boolean(3)


@pytest.fixture(scope="session")
def prod():
    return direct_product(build_boolean(1), build_mo(2))


@pytest.fixture(scope="session", params=["mo2", "prod(bool1,mo2)", "bool3"])
def core_lattice(request):
    return request.param, parse_lattice_name(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
