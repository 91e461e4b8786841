import os
import tempfile

import pytest

# Keep the structure-constant cache out of the user's home during tests.
os.environ.setdefault("CARTAN_SPECTRA_CACHE", tempfile.mkdtemp(prefix="cartan_spectra_cache_"))

from cartan_spectra.apposition import apposition_data  # noqa: E402
from cartan_spectra.chevalley import build_lie_algebra  # noqa: E402
from cartan_spectra.rootsys import all_types, build_root_system  # noqa: E402

ALL_TYPES = [str(t) for t in all_types(8)]
SMALL_TYPES = [t for t in ALL_TYPES if int(t[1:]) <= 4]


@pytest.fixture(scope="session")
def algebra():
    return lambda t: build_lie_algebra(build_root_system(t))


@pytest.fixture(scope="session")
def appo():
    return lambda t: apposition_data(build_lie_algebra(build_root_system(t)))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
