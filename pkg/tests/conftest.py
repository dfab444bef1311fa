import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tensorhierarchy import catalog  # noqa: E402
from tensorhierarchy.dgla import run_pipeline  # noqa: E402
from tensorhierarchy.fileformats import triple_from_dict  # noqa: E402

CATALOG = catalog.names()
LIE_VALUED = ["abelian", "crossed_module_aff1", "sl2_adjoint_crossed"]


@functools.lru_cache(maxsize=None)
def triple(name):
    return triple_from_dict(catalog.get(name), name)


@functools.lru_cache(maxsize=None)
def pipeline(name, N, shortcut=True):
    return run_pipeline(triple(name), N, shortcut=shortcut)


@pytest.fixture(params=CATALOG)
def catalog_name(request):
    return request.param
