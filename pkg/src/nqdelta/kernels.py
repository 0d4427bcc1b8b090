"""Kernel dispatch: compiled float64 core when built, pure Python otherwise.

Exact-mode inputs always go through the pure-Python kernels.  Set
``NQDELTA_PURE=1`` to force the fallback for float inputs as well.
"""
from __future__ import annotations

import os

from . import _pykernels
from .core import Mode

try:
    if os.environ.get("NQDELTA_PURE"):
        raise ImportError("pure kernels forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

HAVE_EXTENSION = _ckernels is not None


def backend(mode: Mode):
    if Mode(mode) is Mode.FLOAT and _ckernels is not None:
        return _ckernels
    return _pykernels


def printed_profile(a, u, v, m_lo, m_hi, mode):
    return list(backend(mode).printed_profile(a, u, v, m_lo, m_hi))


def derived_profile(a, u, v, m_lo, m_hi, mode):
    return list(backend(mode).derived_profile(a, u, v, m_lo, m_hi))


def derived_section(a, u, v, m, mode):
    return backend(mode).derived_section(a, u, v, m)


def forward_substitution(rows, mode):
    return backend(mode).forward_substitution(rows)
