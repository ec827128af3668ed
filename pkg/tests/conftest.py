from collections.abc import Callable
from typing import Generator

import pytest

from app.config import Settings, use_settings
from app.rootsys import RootSystem, build_root_system


@pytest.fixture(autouse=True)
def default_settings() -> Generator[Settings, None, None]:
    """Default caps for every test; the CLI may install its own settings meanwhile."""
    settings = Settings()
    use_settings(settings)
    yield settings
    use_settings(None)


@pytest.fixture
def caps() -> Generator[Callable, None, None]:
    """Install settings with some caps lowered, e.g. caps(max_elements=10)."""

    def install(**overrides) -> Settings:
        settings = Settings(**overrides)
        use_settings(settings)
        return settings

    yield install
    use_settings(None)


@pytest.fixture
def a2() -> RootSystem:
    return build_root_system("A2")


@pytest.fixture
def a3() -> RootSystem:
    return build_root_system("A3")


@pytest.fixture
def b3() -> RootSystem:
    return build_root_system("B3")


@pytest.fixture
def g2() -> RootSystem:
    return build_root_system("G2")
