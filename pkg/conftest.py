# conftest.py
import numpy as np
import pytest

from config import Config
from services.catalog import CatalogService


@pytest.fixture
def rng():
    """Seeded generator for random rational test data"""
    return np.random.default_rng(20240917)


@pytest.fixture(autouse=True)
def no_log_files(monkeypatch):
    monkeypatch.setattr(Config, "LOG_TO_FILE", False)


@pytest.fixture(scope="session")
def catalog_service():
    return CatalogService(cache_size=32)
