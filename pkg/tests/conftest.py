import pytest

from eulerkronecker import scan
from eulerkronecker.verification import Context


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(scan.CACHE_ENV, str(tmp_path / "cache"))


@pytest.fixture(scope="session")
def verify_ctx():
    """One Context per session so the q <= 30000 scan is computed once."""
    return Context(jobs=1)
