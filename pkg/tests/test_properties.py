"""Property tests for the invariants, each adjudicated by an oracle."""
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from conftest import families
from nqdelta import (Explicit, Mode, Weights, basis_vector, c_matrix, coefficients_and_reconstruct,
                     dual_norm, finite_subset_sup, invert, make_nbar_delta, pairing_check,
                     tau_transform)
from nqdelta.classes import RowNorms
from nqdelta.triangle import composed_inverse_image, explicit_matrix, truncate

FAMS = families()
FAMS_FLOAT = families(Mode.FLOAT)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)
family_names = st.sampled_from(sorted(FAMS))
positive = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8)
common = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def sparse(max_len, max_support):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_len))
        vals = [Fraction(0)] * n
        for i in draw(st.lists(st.integers(0, n - 1), max_size=max_support, unique=True)):
            vals[i] = draw(rationals)
        return Explicit(tuple(vals))
    return build()


@common
@given(st.lists(positive, min_size=2, max_size=12))
def test_scale_free_recurrences(qs):
    w = Weights(Explicit(tuple(qs), "repeat-last"))
    for k in range(len(qs) - 1):
        assert w.v(k + 1) == w.v(k) * w.rho(k) + 1
        assert w.u(k) == w.v(k) * (w.rho(k) - 1)


@common
@given(family_names, sparse(10, 6))
def test_tau_is_left_inverse_of_composed_inverse(name, t):
    w = FAMS[name]
    x = composed_inverse_image(w, t)
    assert tau_transform(w, x, 14).values == [t(n) for n in range(15)]
    assert oracles.tau(w.seq, x, 14) == [t(n) for n in range(15)]


@common
@given(family_names, sparse(12, 8), sparse(12, 8))
def test_pairing_exact(name, a, y):
    assert pairing_check(FAMS[name], a, y, 14) == 0


@common
@given(family_names, sparse(8, 5), st.integers(0, 7))
def test_derived_section_is_vertex_max(name, a, n):
    w = FAMS[name]
    assert c_matrix(w, a).section_values(n, n)[0] == oracles.vertex_dual_norm(w.seq, a, n)


@common
@given(st.lists(rationals, min_size=1, max_size=10))
def test_subset_sup(row):
    assert finite_subset_sup(row, len(row)) == oracles.subset_sup(row)


@common
@given(family_names, sparse(6, 4), st.fractions(min_value=-5, max_value=5, max_denominator=5))
def test_dual_norm_homogeneous(name, a, alpha):
    w = FAMS[name]
    scaled = Explicit(tuple(alpha * v for v in a.values))
    assert dual_norm(w, scaled)[0].value == abs(alpha) * dual_norm(w, a)[0].value


@common
@given(family_names, sparse(12, 6))
def test_representation_residual_zero(name, t):
    w = FAMS[name]
    rep = coefficients_and_reconstruct(w, composed_inverse_image(w, t), 20)
    assert rep.residual == 0


@common
@given(family_names, st.integers(0, 12))
def test_basis_identity(name, k):
    w = FAMS[name]
    assert tau_transform(w, basis_vector(w, k), 16).values == [int(n == k) for n in range(17)]


@common
@given(st.lists(st.lists(rationals, min_size=1, max_size=1), min_size=1, max_size=1),
       st.lists(st.tuples(rationals, rationals), min_size=0, max_size=6))
def test_invert_random_triangles(first, rest):
    # lower-triangular with nonzero diagonal: rows of growing length
    rows = [[first[0][0] or Fraction(1)]]
    for i, (off, diag) in enumerate(rest, start=1):
        rows.append([off] * i + [diag or Fraction(1)])
    T = explicit_matrix(rows)
    N = len(rows) - 1
    dense = [r + [Fraction(0)] * (N + 1 - len(r)) for r in rows]
    assert truncate(invert(T, N), N) == oracles.gauss_inverse(dense)


@common
@given(family_names, st.integers(0, 20))
def test_nbar_delta_rows_have_norm_one(name, n):
    w = FAMS[name]
    assert RowNorms(w, make_nbar_delta(w))(n, n) == 1


@common
@given(family_names, sparse(10, 6))
def test_float_mode_tracks_exact(name, t):
    w, wf = FAMS[name], FAMS_FLOAT[name]
    tf = Explicit(tuple(float(v) for v in t.values), mode=Mode.FLOAT)
    exact = c_matrix(w, t).section_values(0, 9)
    approx = c_matrix(wf, tf).section_values(0, 9)
    for e, f in zip(exact, approx):
        assert abs(float(e) - f) <= 1e-9 * max(1.0, abs(float(e)))
