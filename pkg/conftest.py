"""
Shared fixtures for the quantum_ideals test suite
"""
import random

import pytest

from quantum_ideals.config.settings import DEFAULT_CATALOG_DIR, DEFAULT_TABLE_FILE
from quantum_ideals.services.catalog_service import CatalogService
from quantum_ideals.services.skein_eval import BracketCache, standard_A, su2_params


@pytest.fixture(scope='session')
def catalog():
    return CatalogService(DEFAULT_CATALOG_DIR)


@pytest.fixture(scope='session')
def table_file():
    return DEFAULT_TABLE_FILE


@pytest.fixture(scope='session')
def params5():
    return standard_A(5)


@pytest.fixture(scope='session')
def params7():
    return standard_A(7)


@pytest.fixture(scope='session')
def su2():
    return su2_params(3)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fresh_cache():
    return BracketCache()
