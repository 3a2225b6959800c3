import numpy as np
import pytest

from kdcoinc import dft, mub4, spin1, tao, u6


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def catalog_list():
    return [("dft3", dft(3)), ("dft4", dft(4)), ("dft5", dft(5)), ("tao", tao()),
            ("spin1", spin1()), ("mub4_1", mub4(1)), ("mub4_i", mub4(1j)),
            ("u6", u6("plain")), ("u6p", u6("primed"))]


CATALOG_IDS = [name for name, _ in catalog_list()]
CATALOG_MATS = [T for _, T in catalog_list()]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(r.line())
