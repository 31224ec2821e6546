import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from llab import _backend  # noqa: E402
from llab.arith import build_table  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def table():
    """Shared table large enough for every unit test (d*N up to ~2e5)."""
    return build_table(300_000)


@pytest.fixture(params=["python", "cython"])
def kernels(request):
    if request.param == "cython" and not _backend.COMPILED_AVAILABLE:
        pytest.skip("compiled kernels not built")
    return _backend.get(request.param)


# One line per acceptance criterion, printed at the end of the run.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
