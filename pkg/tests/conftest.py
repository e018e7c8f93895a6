import os

import pytest
from hypothesis import HealthCheck, settings

from satlattice.catalog import group_by_duality
from satlattice.search import enumerate_at

# CI machines are slower; the lattice strategies trip the too_slow health check there.
settings.register_profile("ci", suppress_health_check=(HealthCheck.too_slow,), deadline=None)
settings.register_profile("dev", max_examples=50, deadline=None)
settings.load_profile("ci" if "CI" in os.environ else "dev")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the n=6 searches and large samples")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def catalogs():
    """Grouped size-2n catalogs with the prefix chain fixed, n = 2..5."""
    return {n: group_by_duality(enumerate_at(n, 2 * n)) for n in range(2, 6)}


@pytest.fixture(scope="session")
def catalog6():
    return group_by_duality(enumerate_at(6, 12, threads=max(1, min(8, os.cpu_count() or 1))))


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    from satlattice import config

    monkeypatch.setattr(config, "CONFIG_DIR", tmp_path / "config")
    for var in config.ENV_OVERRIDES:
        monkeypatch.delenv(var, raising=False)
