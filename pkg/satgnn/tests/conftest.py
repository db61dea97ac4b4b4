import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from util import build_dataset, export_as  # noqa: E402

from satgnn import load_dataset  # noqa: E402


@pytest.fixture(scope="session")
def tiny_dir(tmp_path_factory) -> Path:
    """24 instances (12 SAT / 12 UNSAT), binary graph records."""
    return build_dataset(
        tmp_path_factory.mktemp("tiny"), count=24, seed=7, n_range="10:14"
    )


@pytest.fixture(scope="session")
def tiny_json_dir(tiny_dir, tmp_path_factory) -> Path:
    """The same 24 instances exported as JSON records."""
    return export_as(
        tiny_dir / "manifest.jsonl", tmp_path_factory.mktemp("tiny-json"), "json"
    )


@pytest.fixture(scope="session")
def tiny_graphs(tiny_dir):
    return load_dataset(tiny_dir)


@pytest.fixture(scope="session")
def holdout_dir(tmp_path_factory) -> Path:
    """Balanced 200-instance held-out evaluation set."""
    return build_dataset(tmp_path_factory.mktemp("holdout"), count=200, seed=99)


@pytest.fixture(scope="session")
def holdout_graphs(holdout_dir):
    return load_dataset(holdout_dir)
