import pytest

from shortcycles.dickman import DickmanEvaluator


@pytest.fixture(scope="session")
def dickman():
    """Shared evaluator so panel construction is paid once per session."""
    return DickmanEvaluator()
