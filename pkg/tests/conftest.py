import numpy as np
import pytest

from sspvb.data import generate_synthetic, load_bundled_year
from sspvb.model import BatterySpec, CostParams, PVSpec
from sspvb.sizing import SizingBounds, SizingProblem

# (criterion, passed, detail) lines appended by the acceptance suite
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def bundled_year():
    return load_bundled_year()


@pytest.fixture(scope="session")
def week():
    """One synthetic week with a load small enough that a 20-panel grid reaches zero LLP."""
    return generate_synthetic(seed=7, days=7, peak_load_kw=1.0)


@pytest.fixture(scope="session")
def week_problem(week):
    bounds = SizingBounds(n_pv=(0, 20), n_bes=(0, 10), dod=(0.2, 0.8), dod_step=0.1)
    return SizingProblem(week, PVSpec(), BatterySpec(), CostParams(), bounds)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
