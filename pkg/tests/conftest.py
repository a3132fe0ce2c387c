import numpy as np
import pytest

from slpinterp.engine import RandomChoices
from slpinterp.ff import make_tower
from slpinterp.polynomial import SparsePolynomial
from slpinterp.slp import slp_from_sparse

# z1 z2 + z1^6 z2^6 + 2 z1^4 z2^10 + 4 z1^3 z2^20 over F_13
WORKED_F = SparsePolynomial(2, {(1, 1): 1, (6, 6): 1, (4, 10): 2, (3, 20): 4})


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


@pytest.fixture(scope="session")
def f13():
    return make_tower(13, 1, 1)


@pytest.fixture(scope="session")
def worked_f():
    return WORKED_F


@pytest.fixture(scope="session")
def worked_slp():
    return slp_from_sparse(WORKED_F)


@pytest.fixture(scope="session")
def worked_choices(f13):
    return RandomChoices(
        primes=[5, 7],
        vectors=[[[4, 1], [2, 0]], [[2, 4], [1, 6]]],
        diversifiers=[(f13.elem(6), f13.elem(8))],
    )


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
