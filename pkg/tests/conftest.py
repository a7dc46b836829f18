import os

import pytest

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="session")
def fixture_root():
    return os.path.join(REPO_ROOT, "fixtures")


@pytest.fixture(scope="session")
def config_dir(fixture_root):
    return os.path.join(fixture_root, "configs")
