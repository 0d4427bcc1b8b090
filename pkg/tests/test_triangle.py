from fractions import Fraction

import pytest

import oracles
from nqdelta import (Constant, Geometric, SingularTriangleError, Unit, Weights, apply, compose,
                     diagonal, explicit_matrix, identity, invert, make_composed_inverse,
                     make_delta_minus, make_delta_minus_inverse, make_nbar_delta, make_riesz,
                     make_riesz_inverse, ones, unit_column)
from nqdelta.triangle import truncate

W1 = Weights(Constant(1))
W3 = Weights(Geometric(3, 1))


def test_delta_minus_entries():
    D = make_delta_minus()
    assert (D(0, 0), D(5, 4), D(5, 2)) == (-1, 1, 0)


def test_delta_minus_inverse():
    S = make_delta_minus_inverse()
    assert S(3, 0) == -1 and S(3, 3) == -1 and S(2, 3) == 0
    assert truncate(compose(make_delta_minus(), S), 8) == oracles.identity(8)


def test_riesz_entries():
    assert make_riesz(W1)(2, 1) == Fraction(1, 3)
    assert make_riesz(W3)(1, 1) == Fraction(3, 4)
    R = make_riesz(W3)
    for n in range(10):
        assert sum(R.row(n, n)) == 1


def test_riesz_inverse():
    Ri = make_riesz_inverse(W1)
    assert Ri(3, 3) == 4 and Ri(3, 2) == -3
    assert truncate(compose(make_riesz(W3), make_riesz_inverse(W3)), 16) == oracles.identity(16)


def test_compose_laws():
    T = make_riesz(W3)
    assert truncate(compose(identity(), T), 8) == truncate(T, 8)
    assert truncate(compose(make_delta_minus(), make_delta_minus_inverse()), 8) == oracles.identity(8)
    A = compose(make_riesz(W1), make_delta_minus())
    assert [A(n, n) for n in range(5)] == [Fraction(-1, n + 1) for n in range(5)]


@pytest.mark.parametrize("name", ["constant", "geometric2", "geometric3", "power1"])
def test_compose_matches_dense_product(name):
    from conftest import families
    w = families()[name]
    N = 10
    dense = oracles.matmul(oracles.riesz(w.seq, N), oracles.delta_minus(N))
    assert truncate(make_nbar_delta(w), N) == dense
    assert truncate(compose(make_riesz(w), make_delta_minus()), N) == dense


def test_invert_examples():
    inv = invert(make_delta_minus(), 8)
    assert all(inv(n, k) == -1 for n in range(9) for k in range(n + 1))
    assert truncate(invert(make_riesz(W3), 8), 8) == truncate(make_riesz_inverse(W3), 8)


@pytest.mark.parametrize("name", ["constant", "geometric2", "geometric3", "power1"])
def test_invert_matches_gauss_jordan(name):
    from conftest import families
    w = families()[name]
    N = 9
    ref = oracles.gauss_inverse(oracles.nbar_delta(w.seq, N))
    assert truncate(invert(make_nbar_delta(w), N), N) == ref
    assert truncate(make_composed_inverse(w), N) == ref


def test_invert_singular():
    T = explicit_matrix([[1], [2, 0], [0, 1, 1]])
    with pytest.raises(SingularTriangleError) as exc:
        invert(T, 4)
    assert exc.value.index == 1


def test_invert_rejects_non_triangle():
    with pytest.raises(ValueError):
        invert(unit_column(3), 4)


def test_composed_inverse_closed_form():
    C = make_composed_inverse(W1)
    assert all(C(n, k) == 0 for n in range(6) for k in range(n))
    assert [C(n, n) for n in range(6)] == [-(n + 1) for n in range(6)]
    assert make_composed_inverse(W3)(2, 0) == Fraction(-2, 3)
    prod = compose(compose(make_riesz(W3), make_delta_minus()), make_composed_inverse(W3))
    assert truncate(prod, 16) == oracles.identity(16)


def test_apply_examples():
    assert apply(make_delta_minus(), ones(), 3) == [-1, 0, 0, 0]
    assert apply(make_delta_minus(), Unit(0), 3) == [-1, 1, 0, 0]
    for w in (W1, W3):
        assert apply(make_riesz(w), ones(), 3) == [1, 1, 1, 1]


def test_diagonal_and_unit_column():
    D = diagonal(Geometric(2, 1))
    assert (D(3, 3), D(3, 2)) == (8, 0)
    U = unit_column(1)
    assert (U(0, 1), U(7, 1), U(7, 0)) == (1, 1, 0)
    assert U.row_support(5) == 1


def test_encodings():
    assert compose(make_riesz(W1), make_delta_minus()).encoding == {
        "kind": "compose", "of": [{"kind": "riesz"}, {"kind": "delta-minus"}]}
    assert unit_column(2).encoding == {"kind": "unit-column", "index": 2}
