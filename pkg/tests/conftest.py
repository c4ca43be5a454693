import os

import pytest

from wplmut import hall


@pytest.fixture(autouse=True, scope="session")
def _memory_cache():
    """Keep the Hall-number cache in memory unless the caller points at a directory."""
    if not os.environ.get(hall.CACHE_ENV):
        hall.set_cache(hall.HallCache(None))
    yield
    hall.default_cache().flush()
