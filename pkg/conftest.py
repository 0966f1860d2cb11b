"""
Pytest Configuration and Fixtures
Central configuration for pytest with reusable fixtures
"""
import os

import allure
import pytest
from pytest_metadata.plugin import metadata_key

from config.config import Config
from hecke import __version__
from hecke.heckemod import HeckeModule
from utils.logger import log
from utils.module_factory import ModuleFactory


def _worker_id(config) -> str:
    return getattr(config, 'workerinput', {}).get('workerid', 'master')


@pytest.fixture(scope="session")
def module_factory():
    """
    Factory for HeckeModule instances shared across a worker's tests

    Yields:
        ModuleFactory: factory with a per-process module cache
    """
    yield ModuleFactory
    ModuleFactory.clear_cache()


@pytest.fixture(scope="function")
def build_module(request, module_factory):
    """
    Build a module and record its configuration in the Allure report

    Returns:
        Callable[[str, int, int], HeckeModule]
    """
    worker_id = _worker_id(request.config)

    def _build(cartan_type: str, m: int, denominator: int) -> HeckeModule:
        allure.dynamic.parameter("Type", cartan_type)
        allure.dynamic.parameter("m", m)
        allure.dynamic.parameter("N", denominator)
        allure.dynamic.label("worker", worker_id)
        log.info(f"[{worker_id}] Building module {cartan_type}, m={m}, N={denominator}")
        return module_factory.create_module(cartan_type, m, denominator)

    return _build


@pytest.fixture(scope="function", autouse=True)
def test_logger(request):
    """
    Log test start and end with the worker id

    Args:
        request: pytest request object
    """
    test_name = request.node.name
    worker_id = _worker_id(request.config)

    log.info("=" * 80)
    log.info(f"[{worker_id}] STARTING TEST: {test_name}")
    log.info("=" * 80)

    yield

    log.info("=" * 80)
    log.info(f"[{worker_id}] FINISHED TEST: {test_name}")
    log.info("=" * 80)


def pytest_configure(config):
    """
    Configure pytest with custom metadata

    Args:
        config: pytest config object
    """
    if metadata_key not in config.stash:
        return
    metadata = config.stash[metadata_key]
    metadata['Project'] = 'hecke'
    metadata['Version'] = __version__
    metadata['Environment'] = Config.ENVIRONMENT
    metadata['Max Rank'] = Config.MAX_RANK
    metadata['Max Index Set'] = Config.MAX_INDEX_SET
    metadata['Python Version'] = os.sys.version.split()[0]


@pytest.fixture(scope="session", autouse=True)
def setup_session():
    """
    Session-level setup
    """
    log.info("=" * 80)
    log.info("TEST SESSION STARTED")
    log.info(f"Configuration: {Config.get_all_config()}")
    log.info("=" * 80)

    yield

    log.info("=" * 80)
    log.info("TEST SESSION ENDED")
    log.info("=" * 80)
