import itertools
from fractions import Fraction

import pytest

from conftest import identity_pack, verified
from quadric_prolongation.exact import GaussianRational, echelon
from quadric_prolongation.fields import PolyVectorField, tangency_check, weight_of
from quadric_prolongation.forms import DegenerateFormError, HermitianFormPack, builtin_catalog
from quadric_prolongation.graded import GradedAlgebraTable, jacobi_check, jacobi_violations
from quadric_prolongation.quadric import (
    assemble_table,
    build_negative_basis,
    solve_g0,
    solve_g1,
    solve_g2,
    weight3_nullcheck,
    weight3_solutions,
)

I = GaussianRational(0, 1)


def test_negative_basis_heisenberg():
    pack = identity_pack(1)
    m2, m1 = build_negative_basis(pack)
    dw = PolyVectorField.from_terms(1, 1, {((0,), (0,), 1): 1})
    assert m2 == [dw]
    expected = [
        PolyVectorField.from_terms(1, 1, {((0,), (0,), 0): 1, ((1,), (0,), 1): 2 * I}),
        PolyVectorField.from_terms(1, 1, {((0,), (0,), 0): I, ((1,), (0,), 1): 2}),
    ]
    assert sorted(map(repr, m1)) == sorted(map(repr, expected))


def test_negative_basis_codim2():
    pack = builtin_catalog("diagonal-codim2")[0]
    m2, m1 = build_negative_basis(pack)
    assert (len(m2), len(m1)) == (2, 4)
    assert all(tangency_check(f, pack) for f in m2 + m1)


def test_g0_dimensions():
    pack = identity_pack(1)
    sols = solve_g0(pack)
    assert len(sols) == 2
    for e in sols:
        assert e.s[0][0] == 2 * e.C[0][0].re
    assert len(solve_g0(identity_pack(2))) == 5
    assert len(solve_g0(HermitianFormPack.from_matrices([[[-1]]]))) == 2


def test_g1_heisenberg_relation():
    sols = solve_g1(identity_pack(1))
    assert len(sols) == 2
    for e in sols:
        assert e.A[0][0][0] == 2 * I * e.a[0][0].conj()
    assert len(solve_g1(identity_pack(2))) == 4


def test_g2_heisenberg_relation():
    sols = solve_g2(identity_pack(1))
    assert len(sols) == 1
    (e,) = sols
    b = e.B[0][0][0]
    assert b.im == 0 and b.re != 0
    assert e.r[0][0][0] == b
    assert len(solve_g2(identity_pack(2))) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_identity_form_dimension_law(n):
    table = assemble_table(identity_pack(n))
    assert table.dim_tuple() == (1, 2 * n, n * n + 1, 2 * n, 1)
    assert table.total_dim == (n + 2) ** 2 - 1


@pytest.mark.parametrize("lam", [Fraction(1, 3), Fraction(5, 2), 7])
def test_scaling_invariance(lam):
    pack = builtin_catalog("diagonal-codim2")[0]
    assert assemble_table(pack.scaled(lam)).dim_tuple() == assemble_table(pack).dim_tuple()


def test_assembled_table_properties():
    for name in ("heisenberg-n1", "heisenberg-n2", "diagonal-n2-k2", "diagonal-n2-k3"):
        _, table, _, _ = verified(name)
        pack = table.pack
        assert table.dims[-2] == pack.k and table.dims[-1] == 2 * pack.n
        for lvl in table.levels:
            for i in table.indices(lvl):
                assert weight_of(table.fields[i]) == lvl
                assert tangency_check(table.fields[i], pack)
        images = [table.bracket_basis(i, j) for i, j in itertools.combinations(table.indices(-1), 2)]
        assert len(echelon(images)) == pack.k
        assert jacobi_check(table)


def test_structure_constants_antisymmetric():
    _, table, _, _ = verified("heisenberg-n1")
    for i in range(table.total_dim):
        assert table.bracket_basis(i, i) == {}
        for j in range(i + 1, table.total_dim):
            assert table.bracket_basis(j, i) == {m: -c for m, c in table.bracket_basis(i, j).items()}


def test_corrupted_table_fails_jacobi():
    _, table, _, _ = verified("heisenberg-n1")
    (i, j), vec = next(iter(sorted(table.brackets.items())))
    m = next(iter(vec))
    bad = table.with_constant(i, j, m, vec[m] + 1)
    assert not jacobi_check(bad)
    assert jacobi_violations(bad, limit=1)


def test_abelian_table_passes_jacobi():
    table = GradedAlgebraTable((-2, -1, 0), {-2: 1, -1: 2, 0: 1}, {})
    assert jacobi_check(table)


def test_weight3_nullcheck_examples():
    assert weight3_nullcheck(identity_pack(1))
    assert weight3_nullcheck(identity_pack(2))
    assert weight3_solutions(identity_pack(1)) == []


def test_degenerate_pack_rejected():
    with pytest.raises(DegenerateFormError):
        assemble_table(HermitianFormPack.from_matrices([[[1, 0], [0, 0]]]))
