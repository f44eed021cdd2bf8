from pathlib import Path

import pytest

from multimagic import gf, io

DATA = Path(__file__).parent / "data"
GOLDEN_CMS9 = DATA / "cms9_expected.cms"
GOLDEN_LOA = DATA / "loa_9_2_4_3_members.oaf"

# one line per acceptance criterion, echoed after the run regardless of
# pytest's stdout capturing
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def f3():
    return gf.build_field(3, 1)


@pytest.fixture(scope="session")
def f5():
    return gf.build_field(5, 1)


@pytest.fixture(scope="session")
def f7():
    return gf.build_field(7, 1)


@pytest.fixture(scope="session")
def f9():
    return gf.build_field(3, 2)


@pytest.fixture(scope="session")
def golden_cms9():
    """The nine frozen order-9 bimagic squares, as a bundle."""
    return io.read_cms_bundle(GOLDEN_CMS9)


@pytest.fixture(scope="session")
def golden_loa():
    """The 81 frozen 4x9 arrays, indexed members[9*i + k]."""
    return io.read_oa_family(GOLDEN_LOA)
