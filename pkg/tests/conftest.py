import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from unitrack import SeedSpec, run_unitrack, verify_run  # noqa: E402


@pytest.fixture(scope="session")
def finn_run():
    """Amplitude-4 flat-bump run to depth 5 at the default sampling angle."""
    return run_unitrack(SeedSpec("finn_bump", 4.0), depth_max=5, theta_max=0.02)


@pytest.fixture(scope="session")
def finn_reports(finn_run):
    return verify_run(finn_run)


@pytest.fixture(scope="session")
def finn_run8():
    """Deep run at the full default budget; coarser angle keeps it quick."""
    return run_unitrack(
        SeedSpec("finn_bump", 4.0), depth_max=8, theta_max=0.05, jet_budget=10
    )


@pytest.fixture(scope="session")
def straight_run():
    return run_unitrack(SeedSpec("straight", 0.0), depth_max=5)
