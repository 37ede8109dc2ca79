"""
Shared fixtures: equation parameters, solved profiles and config files.
"""
import json

import pytest

from pmelab.core.base import PmeParams
from pmelab.core.logging import setup_logging
from pmelab.fields import BarenblattField, GiantField
from pmelab.services.elliptic_profile import solve_profile
from pmelab.services.exact_solutions import BarenblattParams


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    setup_logging("WARNING")


@pytest.fixture(scope="session")
def pme_21():
    return PmeParams(2.0, 1)


@pytest.fixture(scope="session")
def pme_22():
    return PmeParams(2.0, 2)


@pytest.fixture(scope="session")
def profile_21(pme_21):
    """Elliptic profile for m=2, n=1 on B(0, 1)"""
    return solve_profile(pme_21, R=1.0)


@pytest.fixture(scope="session")
def barenblatt_21(pme_21):
    return BarenblattParams(pme_21, C=1.0)


@pytest.fixture(scope="session")
def barenblatt_field_21(barenblatt_21):
    return BarenblattField(barenblatt_21)


@pytest.fixture(scope="session")
def giant_field_21(profile_21):
    return GiantField(profile_21, t0=0.0)


@pytest.fixture
def write_config(tmp_path):
    """Write a JSON run config and return its path"""

    def _write(payload, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write
