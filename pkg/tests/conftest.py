import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from promptseg.fixtures import build_fixture_set


@pytest.fixture(scope="session")
def fixture_root(tmp_path_factory) -> Path:
    """A 20-scene synthetic dataset with pred == gt (the oracle fixed point)."""
    root = tmp_path_factory.mktemp("fixture_scenes")
    build_fixture_set(root, n_scenes=20, size=96, seed=7)
    return root
