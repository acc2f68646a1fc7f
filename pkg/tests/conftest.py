from functools import lru_cache

import pytest
from hypothesis import settings

from plumbcalc.appendix import load_appendix
from plumbcalc.theta import derive_family_params

settings.register_profile("plumbcalc", deadline=None)
settings.load_profile("plumbcalc")


@lru_cache(maxsize=None)
def _entries():
    return tuple(load_appendix())


@pytest.fixture
def entries():
    return _entries()


@pytest.fixture
def entry1_family():
    P, Q = derive_family_params(_entries()[0].labels)
    return P.signed_set(), Q, P.L
