import numpy as np
import pytest

from fraccomp.util.config import FCConfig


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: route-equivalence and Monte Carlo suites")


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch: pytest.MonkeyPatch) -> FCConfig:
    """
    Resets the run-wide configuration so tests never see each other's precision overrides.

    """
    monkeypatch.delenv("FRACCOMP_THREADS", raising=False)
    config = FCConfig()
    config.reset()
    yield config
    config.reset()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
