from __future__ import annotations

import os
from pathlib import Path

import pytest

# Sample caches live next to the repository so repeated runs reuse them.
os.environ.setdefault("CUBIC_DIST_CACHE", str(Path(__file__).resolve().parent.parent / "cache"))


@pytest.fixture
def tmp_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBIC_DIST_CACHE", str(tmp_path))
    return tmp_path
