# conftest.py
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from core.fdalg import Tolerance  # noqa: E402
from core.models import SuiteContext  # noqa: E402


@pytest.fixture
def tol() -> Tolerance:
    return Tolerance()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def suite_ctx(tol) -> SuiteContext:
    return SuiteContext(tol=tol, seed=7)
