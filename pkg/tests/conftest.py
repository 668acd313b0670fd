import pytest

from facetabd import kernels, oracle
from facetabd.syntax import parse_instance

SAILING = """\
# sailing: wind w, crew c, sun s, rain gear r, nice trip n
clause -w r
clause -w -c n
clause -w -s n
hyp w c s r
man n
"""


@pytest.fixture
def sailing():
    return parse_instance(SAILING)


@pytest.fixture(params=kernels.available())
def backend(request):
    prev = kernels.set_backend(request.param)
    oracle._tables_cached.cache_clear()
    yield request.param
    kernels.set_backend(prev)
    oracle._tables_cached.cache_clear()
