import sys
from pathlib import Path

import pytest

from pnodal.gentrig import PParameters, build_table

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def table_cache():
    """Session-wide cache of (PParameters, SpTable) per exponent."""
    cache = {}

    def get(p: float, table_size: int = 4096):
        key = (p, table_size)
        if key not in cache:
            params = PParameters.from_exponent(p, table_size=table_size)
            cache[key] = (params, build_table(params))
        return cache[key]

    return get
