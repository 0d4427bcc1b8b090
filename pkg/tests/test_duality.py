from fractions import Fraction

import pytest

import oracles
from nqdelta import (Constant, Explicit, Geometric, Outcome, Unit, Weights, beta_dual_membership,
                     c_matrix, dual_norm, finite, finite_subset_sup, ones, pairing_check)
from nqdelta.duality import matrix_subset_sup
from nqdelta import unit_column

W1 = Weights(Constant(1))
W3 = Weights(Geometric(3, 1))


def test_c_matrix_examples():
    C = c_matrix(W1, Unit(0))
    assert all(C(n, 0) == -1 for n in range(8))
    assert all(C(n, k) == 0 for n in range(8) for k in range(1, n + 1))
    Z = c_matrix(W3, Constant(0))
    assert all(Z(n, k) == 0 for n in range(6) for k in range(n + 1))
    P = c_matrix(W3, Unit(1), "printed")
    assert P(0, 0) == 0
    assert all(P(n, 0) == Fraction(-2, 3) for n in range(1, 8))


def test_pairing_examples():
    assert pairing_check(W3, Constant(0), finite([1, 2]), 8) == 0
    assert pairing_check(W1, Unit(0), Unit(0), 8) == 0


def test_pairing_matches_dense_oracle(family):
    _, w = family
    a, y = finite([1, "2/3", 0, -3]), finite([2, 0, 5, 1, "-1/2"])
    lhs = oracles.pairing_sides(w.seq, a, y, 10)
    C = c_matrix(w, a)
    rhs = [sum(C(n, k) * y(k) for k in range(n + 1)) for n in range(11)]
    assert lhs == rhs


def test_printed_variant_breaks_pairing():
    assert pairing_check(W3, finite([1, 2, -3]), finite([2, 0, 5, 1]), 8, "printed") != 0


def test_dual_norm_examples():
    for variant in ("derived", "printed"):
        assert dual_norm(W1, Constant(0), variant=variant)[0].value == 0
        val = dual_norm(W1, Unit(1), variant=variant)[0]
        assert val.value == 2 and val.argmax == 1
        assert dual_norm(W1, Unit(0), variant=variant)[0].value == 1


def test_dual_norm_vertex_oracle_small():
    for a in (Unit(1), Unit(0), finite([1, -2, 0, 3])):
        per_n = dict(dual_norm(W3, a)[0].per_n)
        for n in range(8):
            assert per_n[n] == oracles.vertex_dual_norm(W3.seq, a, n)


def test_dual_norm_terminal_section_not_sup():
    # row 6 of riesz·delta-minus for q = 3^k: |τ_6(x)| <= ‖x‖, so the norm is 1
    from nqdelta import make_nbar_delta
    A = make_nbar_delta(W3)
    row = finite(A.row(6, 6))
    val = dual_norm(W3, row)[0]
    assert val.value == 1
    assert val.sup == Fraction(4010, 1093)
    assert oracles.vertex_dual_norm(W3.seq, row, 6) == 1


def test_dual_norm_homogeneity():
    a = finite([1, -2, 0, 3])
    base = dual_norm(W3, a)[0].value
    assert dual_norm(W3, finite([-3, 6, 0, -9]))[0].value == 3 * base


def test_finite_subset_sup_examples():
    assert finite_subset_sup([1, -2, 3, 0], 3) == 4
    assert finite_subset_sup([0, 0, 0], 3) == 0
    assert finite_subset_sup([-1, -1], 2) == 2
    assert finite_subset_sup(Explicit((1, -2, 3)), 3) == oracles.subset_sup([1, -2, 3])


def test_matrix_subset_sup():
    assert matrix_subset_sup(unit_column(1), 4)[0] == 1


def test_beta_dual_examples():
    for tag in ("c0", "c", "linf"):
        assert beta_dual_membership(W3, Constant(0), tag).outcome is Outcome.HOLDS
    assert beta_dual_membership(W1, Unit(0), "c0").outcome is Outcome.HOLDS
    rep = beta_dual_membership(W1, ones(), "c0")
    assert rep.outcome is Outcome.FAILS and "c1" in rep.failed


def test_beta_dual_plain_tag_rejected():
    with pytest.raises(ValueError):
        beta_dual_membership(W1, Unit(0), "plain-c0")


def test_beta_dual_report_json():
    js = beta_dual_membership(W3, Unit(2), "c").to_json()
    assert js["outcome"] == "Holds" and js["required"] == ["c1", "c2", "c4"]
