import itertools

import pytest

from conftest import verified
from quadric_prolongation.graded import GradedAlgebraTable
from quadric_prolongation.prolongation import (
    ProlongationError,
    extend_brackets,
    init_state,
    prolong_step,
    run_to_termination,
)


def heis_table():
    return verified("heisenberg-n1")[1]


def test_init_state_base_dims():
    state = init_state(heis_table())
    assert state.dims() == {-2: 1, -1: 2, 0: 2}


def test_steps_follow_direct_dimensions():
    state = init_state(heis_table())
    assert prolong_step(state) == 2
    assert prolong_step(state) == 1
    assert prolong_step(state) == 0
    assert state.terminated
    cert = extend_brackets(state)
    assert cert.all_pass


def test_run_to_termination_heisenberg():
    state, cert = run_to_termination(heis_table(), 6)
    assert cert.termination_level == 3
    assert [state.dims()[l] for l in range(-2, 4)] == [1, 2, 2, 2, 1, 0]
    assert state.dim(7) == 0


def test_stored_elements_are_nonzero_on_g_minus_1():
    state, _ = run_to_termination(heis_table())
    for lev in state.levels.values():
        for value in lev.value:
            assert any(value)


def test_mixed_bracket_examples():
    state, _ = run_to_termination(heis_table())
    for i in range(state.dim(1)):
        assert state.bracket_basis(1, i, 1, i) == {}
        for j in range(state.dim(2)):
            assert state.bracket_basis(1, i, 2, j) == {}


def test_codim2_matches_direct():
    _, table, _, _ = verified("diagonal-n2-k2")
    state, cert = run_to_termination(table)
    assert cert.all_pass
    assert state.dim(1) == table.dims[1] and state.dim(2) == table.dims[2]


def test_max_level_precondition():
    with pytest.raises(ValueError):
        run_to_termination(heis_table(), 0)


def test_max_level_too_small():
    with pytest.raises(ProlongationError):
        run_to_termination(heis_table(), 2)


def test_zeroed_negative_bracket():
    base = heis_table().truncated(0)
    kept = {key: v for key, v in base.brackets.items() if not all(base.level_of(i) == -1 for i in key)}
    with pytest.raises(ProlongationError, match="surjective"):
        init_state(GradedAlgebraTable(base.levels, base.dims, kept))


def test_level_zero_acting_trivially():
    base = heis_table().truncated(0)
    kept = {key: v for key, v in base.brackets.items() if 0 not in {base.level_of(i) for i in key}}
    with pytest.raises(ProlongationError, match="annihilates"):
        init_state(GradedAlgebraTable(base.levels, base.dims, kept))


def test_table_must_start_at_minus_two():
    with pytest.raises(ProlongationError):
        init_state(GradedAlgebraTable((-1, 0), {-1: 1, 0: 1}, {}))


@pytest.mark.parametrize("name", ["heisenberg-n2", "diagonal-n2-k2"])
def test_dims_independent_of_g_minus_1_order(name):
    _, table, state, _ = verified(name)
    order = list(range(table.total_dim))
    block = list(table.indices(-1))
    # reverse the level -1 basis and rotate the level 0 basis
    for t, o in zip(block, reversed(block)):
        order[t] = o
    zero = list(table.indices(0))
    for t, o in zip(zero, zero[1:] + zero[:1]):
        order[t] = o
    permuted = table.reindexed(order)
    state2, cert2 = run_to_termination(permuted)
    assert cert2.all_pass
    assert state2.dims() == state.dims()


def test_brackets_are_antisymmetric_everywhere():
    state, _ = run_to_termination(heis_table())
    levels = range(-2, 3)
    for la, lb in itertools.product(levels, repeat=2):
        for i in range(state.dim(la)):
            for j in range(state.dim(lb)):
                ab = state.bracket_basis(la, i, lb, j)
                ba = state.bracket_basis(lb, j, la, i)
                assert ab == {m: -c for m, c in ba.items()}
