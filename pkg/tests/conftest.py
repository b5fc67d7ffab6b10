from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from govdag.bundled import sample_pack_path, seed_library_path
from govdag.core.manifest import TaskPack, load_pack
from govdag.executor.library import OperatorCard, load_library


@pytest.fixture(scope="session")
def sample_pack() -> TaskPack:
    return load_pack(sample_pack_path())


@pytest.fixture(scope="session")
def seed_library() -> list[OperatorCard]:
    return list(load_library(seed_library_path()))
