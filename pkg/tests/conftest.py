import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quadric_prolongation.forms import HermitianFormPack, builtin_catalog
from quadric_prolongation.theorem import verify_pack


def identity_pack(n, k=1):
    return HermitianFormPack.from_matrices([[[1 if i == j else 0 for j in range(n)] for i in range(n)]] * k)


@functools.lru_cache(maxsize=None)
def verified(name):
    """(report, table, state, phi) for the named full-suite pack, computed once."""
    (pack,) = [p for p in builtin_catalog("full-suite") if p.name == name]
    return verify_pack(pack)


@pytest.fixture
def heis1():
    return verified("heisenberg-n1")


SUITE_NAMES = [p.name for p in builtin_catalog("full-suite")]
