from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadric_prolongation.exact import (
    GaussianRational,
    GaussMatrix,
    NotInSpan,
    RatMatrix,
    SpanCoordinates,
    echelon,
    format_rational,
    nullspace,
    parse_rational,
    rank,
    realify,
    sparse_nullspace,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
gauss = st.builds(GaussianRational, small, small)


def rat_matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r).map(
                lambda rows: RatMatrix.from_rows(rows, c)
            )
        )
    )


def test_parse_rational_roundtrip():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-1/2") == Fraction(-1, 2)
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(2) == "2/1"


@pytest.mark.parametrize("bad", ["2/4", "1/-2", "1/0", "0.5", "3", "a/b", ""])
def test_parse_rational_rejects_non_canonical(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_rank_examples():
    assert rank(RatMatrix.identity(2)) == 2
    assert rank(RatMatrix.zeros(2, 2)) == 0
    assert rank(RatMatrix.from_rows([[1, 2], [2, 4]])) == 1


def test_nullspace_examples():
    assert nullspace(RatMatrix.identity(2)) == []
    assert nullspace(RatMatrix.from_rows([[1, 2]])) == [(Fraction(-2), Fraction(1))]
    basis = nullspace(RatMatrix.zeros(3, 3))
    assert basis == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_realify_examples():
    i = GaussianRational(0, 1)
    assert realify(GaussMatrix.from_rows([[i]])).to_rows() == [[0, -1], [1, 0]]
    assert realify(GaussMatrix.from_rows([[1]])).to_rows() == [[1, 0], [0, 1]]
    assert realify(GaussMatrix.from_rows([[GaussianRational(1, 1)]])).to_rows() == [[1, -1], [1, 1]]


@given(rat_matrices())
def test_rank_plus_nullity(m):
    basis = nullspace(m)
    assert rank(m) + len(basis) == m.cols
    for v in basis:
        assert all(x == 0 for x in m.mul_vector(v))


@given(rat_matrices())
def test_nullspace_deterministic(m):
    again = RatMatrix.from_rows(m.to_rows(), m.cols)
    assert nullspace(m) == nullspace(again)


@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_realify_multiplicative(r, s, c, data):
    A = GaussMatrix.from_rows(data.draw(st.lists(st.lists(gauss, min_size=s, max_size=s), min_size=r, max_size=r)), s)
    B = GaussMatrix.from_rows(data.draw(st.lists(st.lists(gauss, min_size=c, max_size=c), min_size=s, max_size=s)), c)
    assert realify(A @ B) == realify(A) @ realify(B)


@given(gauss, gauss)
def test_conjugation_laws(x, y):
    assert x.conj().conj() == x
    assert (x * y).conj() == x.conj() * y.conj()
    p = x * x.conj()
    assert p.im == 0 and p.re >= 0
    assert (x + y) - y == x


def test_gaussian_division_and_pairs():
    x = GaussianRational(1, 2)
    assert x / x == GaussianRational(1)
    assert GaussianRational.from_pair(x.to_pair()) == x
    assert x.to_pair() == ["1/1", "2/1"]


def test_hermitian_and_conj_transpose():
    m = GaussMatrix.from_rows([[1, GaussianRational(0, 1)], [GaussianRational(0, -1), 2]])
    assert m.is_hermitian()
    assert m.conj_transpose() == m


def test_echelon_is_reduced():
    piv = echelon([{0: Fraction(2), 1: Fraction(4)}, {0: Fraction(1), 2: Fraction(1)}])
    assert set(piv) == {0, 1}
    assert piv[0][0] == 1 and 1 not in piv[0]


def test_sparse_nullspace_matches_dense():
    rows = [[1, 2, 0, -1], [0, 0, 1, 3]]
    dense = nullspace(RatMatrix.from_rows(rows))
    sparse = sparse_nullspace([{j: Fraction(v) for j, v in enumerate(r) if v} for r in rows], 4)
    assert dense == sparse


def test_span_coordinates():
    span = SpanCoordinates([{0: 1, 1: 1}, {1: 1}])
    assert span.coordinates({0: 2, 1: 5}) == [2, 3]
    assert not span.contains({2: 1})
    with pytest.raises(NotInSpan):
        span.coordinates({2: 1})
    with pytest.raises(ValueError):
        SpanCoordinates([{0: 1}, {0: 2}])
