"""Compiled and pure-Python kernels must agree on float inputs."""
import random
from fractions import Fraction

import pytest

from nqdelta import _pykernels, kernels
from nqdelta.core import Mode

ckernels = pytest.importorskip("nqdelta._ckernels") if kernels.HAVE_EXTENSION else None
needs_ext = pytest.mark.skipif(ckernels is None, reason="compiled extension not built")


def _arrays(rng, m):
    a = [rng.uniform(-2, 2) if rng.random() < 0.6 else 0.0 for _ in range(m + 1)]
    u = [rng.uniform(-1.5, 0.0) for _ in range(m + 1)]
    v = [rng.uniform(1.0, 3.0) for _ in range(m + 1)]
    return a, u, v


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_profiles_agree(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 60)
    a, u, v = _arrays(rng, m)
    for fn in ("printed_profile", "derived_profile"):
        got = list(getattr(ckernels, fn)(a, u, v, 0, m))
        ref = getattr(_pykernels, fn)(a, u, v, 0, m)
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-12)
    assert ckernels.derived_section(a, u, v, m) == pytest.approx(
        _pykernels.derived_section(a, u, v, m), rel=1e-12)


@needs_ext
def test_forward_substitution_agrees():
    rng = random.Random(7)
    rows = [[rng.uniform(-1, 1) for _ in range(n)] + [rng.uniform(1, 2)] for n in range(30)]
    got = ckernels.forward_substitution(rows)
    ref = _pykernels.forward_substitution(rows)
    for g, r in zip(got, ref):
        assert list(g) == pytest.approx(r, rel=1e-9, abs=1e-12)


@needs_ext
def test_forward_substitution_singular():
    with pytest.raises(ZeroDivisionError) as exc:
        ckernels.forward_substitution([[1.0], [1.0, 0.0]])
    assert exc.value.args[0] == 1


def test_derived_profile_ends_with_section():
    a = [Fraction(1), Fraction(-2), Fraction(0), Fraction(3)]
    u = [Fraction(-2, 3)] * 4
    v = [Fraction(1), Fraction(4, 3), Fraction(13, 9), Fraction(40, 27)]
    assert _pykernels.derived_profile(a, u, v, 0, 3)[-1] == _pykernels.derived_section(a, u, v, 3)


def test_exact_inputs_use_pure_kernels():
    assert kernels.backend(Mode.EXACT) is _pykernels
    if kernels.HAVE_EXTENSION:
        assert kernels.backend(Mode.FLOAT) is ckernels
