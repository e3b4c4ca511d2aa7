"""Golden level dimensions, recomputed independently of the package solvers."""

import pytest

from conftest import verified
from oracles import tangent_dims

GOLDEN = {
    "heisenberg-n1": (1, 2, 2, 2, 1, 0),
    "heisenberg-n2": (1, 4, 5, 4, 1, 0),
    "heisenberg-n3": (1, 6, 10, 6, 1, 0),
    "hyperquadric-(+,-)": (1, 4, 5, 4, 1, 0),
    "diagonal-n2-k2": (2, 4, 4, 4, 2, 0),
    "diagonal-n2-k3": (3, 4, 5, 0, 0, 0),
}

ORACLE_PACKS = {
    "heisenberg-n1": [[[1]]],
    "heisenberg-n2": [[[1, 0], [0, 1]]],
    "hyperquadric-(+,-)": [[[1, 0], [0, -1]]],
    "diagonal-n2-k2": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
    "diagonal-n2-k3": [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]],
}


@pytest.mark.parametrize("name", sorted(ORACLE_PACKS))
def test_oracle_reproduces_golden(name):
    assert tangent_dims(ORACLE_PACKS[name]) == GOLDEN[name]


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_pipelines_match_golden(name):
    _, table, state, _ = verified(name)
    direct = tuple(table.dims.get(l, 0) for l in range(-2, 4))
    prolonged = tuple(state.dim(l) for l in range(-2, 4))
    assert direct == GOLDEN[name]
    assert prolonged == GOLDEN[name]
