"""Row-finite infinite matrices given by entry rules, with triangles as the main case.

A matrix never stores its entries; truncated dense views are built only
inside :func:`invert` and when a caller asks for a row.
"""
from __future__ import annotations

import threading
from typing import Callable, Sequence

from . import kernels
from .core import (Explicit, Mode, NqDeltaError, RuleSequence, Scalar, SequenceSpec, Weights,
                   check_modes, one, to_scalar, zero)


class SingularTriangleError(NqDeltaError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"triangle has a zero diagonal entry at index {index}")


class Matrix:
    """An infinite matrix ``(a_{nk})`` whose rows have finite support.

    ``support(n)`` returns ``(lo, hi)`` such that ``a_{nk} = 0`` outside
    ``lo <= k <= hi``; ``hi`` may be ``None`` for rows with unbounded support.
    ``bandwidth`` ``b`` means ``lo(n) >= n - b`` for every row.
    """

    triangular = False

    def __init__(self, entry: Callable[[int, int], Scalar], mode: Mode, *, name: str = "matrix",
                 support: Callable[[int], tuple] | None = None, bandwidth: int | None = None,
                 row: Callable[[int, int], list] | None = None, encoding: dict | None = None):
        self._entry = entry
        self.mode = Mode(mode)
        self.name = name
        self._support = support
        self.bandwidth = bandwidth
        self._row = row
        self.encoding = encoding

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, mode={self.mode.value})"

    def support(self, n: int) -> tuple:
        if self._support is not None:
            return self._support(n)
        return (0, None)

    def entry(self, n: int, k: int) -> Scalar:
        if n < 0 or k < 0:
            raise IndexError("matrix indices must be >= 0")
        lo, hi = self.support(n)
        if k < lo or (hi is not None and k > hi):
            return zero(self.mode)
        return self._entry(n, k)

    __call__ = entry

    def row(self, n: int, upto: int) -> list:
        """Entries ``a_{n0} .. a_{n,upto}``."""
        if self._row is not None:
            return self._row(n, upto)
        lo, hi = self.support(n)
        z = zero(self.mode)
        top = upto if hi is None else min(hi, upto)
        out = [z] * (upto + 1)
        for k in range(max(lo, 0), top + 1):
            out[k] = self._entry(n, k)
        return out

    def row_support(self, n: int) -> int | None:
        return self.support(n)[1]

    def memoized(self) -> "Matrix":
        """Same matrix with an entry cache (safe for concurrent readers)."""
        cache: dict = {}
        lock = threading.Lock()
        base = self._entry

        def entry(n, k):
            try:
                return cache[n, k]
            except KeyError:
                val = base(n, k)
                with lock:
                    cache[n, k] = val
                return val

        cls = type(self) if isinstance(self, Triangle) else Matrix
        return cls(entry, self.mode, name=self.name + "+memo", support=self._support,
                   bandwidth=self.bandwidth, encoding=self.encoding)

    def to_json(self) -> dict:
        if self.encoding is None:
            raise TypeError(f"matrix {self.name!r} has no JSON encoding")
        return dict(self.encoding)


class Triangle(Matrix):
    """Lower-triangular matrix: ``a_{nk} = 0`` for ``k > n``."""

    triangular = True

    def __init__(self, entry, mode, *, name="triangle", support=None, bandwidth=None, row=None,
                 encoding=None, inverse: Callable[[], "Triangle"] | None = None):
        if support is None:
            if bandwidth is None:
                support = lambda n: (0, n)  # noqa: E731
            else:
                support = lambda n, b=bandwidth: (max(0, n - b), n)  # noqa: E731
        super().__init__(entry, mode, name=name, support=support, bandwidth=bandwidth, row=row,
                         encoding=encoding)
        self._inverse = inverse

    def diagonal(self, n: int) -> Scalar:
        return self.entry(n, n)

    def closed_inverse(self) -> "Triangle | None":
        return self._inverse() if self._inverse is not None else None


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------


def identity(mode: Mode = Mode.EXACT) -> Triangle:
    o = one(mode)
    return Triangle(lambda n, k: o, mode, name="identity", bandwidth=0,
                    encoding={"kind": "identity"}, inverse=lambda: identity(mode))


def zero_matrix(mode: Mode = Mode.EXACT) -> Matrix:
    z = zero(mode)
    return Matrix(lambda n, k: z, mode, name="zero", support=lambda n: (0, -1),
                  encoding={"kind": "zero"})


def make_delta_minus(mode: Mode = Mode.EXACT) -> Triangle:
    """Backward difference: ``(Δ⁻x)_k = x_{k-1} - x_k`` with ``x_{-1} = 0``."""
    o = one(mode)
    return Triangle(lambda n, k: -o if k == n else o, mode, name="delta-minus", bandwidth=1,
                    encoding={"kind": "delta-minus"}, inverse=lambda: make_delta_minus_inverse(mode))


def make_delta_minus_inverse(mode: Mode = Mode.EXACT) -> Triangle:
    o = one(mode)
    return Triangle(lambda n, k: -o, mode, name="delta-minus-inverse",
                    encoding={"kind": "delta-minus-inverse"}, inverse=lambda: make_delta_minus(mode))


def make_riesz(w: Weights) -> Triangle:
    """Weighted mean ``q_k / Q_n`` for ``k <= n``."""
    if w.mode is Mode.EXACT:
        def row(n, upto):
            Qn = w.Q(n)
            out = [w.q(k) / Qn for k in range(min(n, upto) + 1)]
            return out + [zero(w.mode)] * (upto - len(out) + 1)
    else:
        row = None
    return Triangle(w.riesz_entry, w.mode, name="riesz", row=row, encoding={"kind": "riesz"},
                    inverse=lambda: make_riesz_inverse(w))


def make_riesz_inverse(w: Weights) -> Triangle:
    """Bidiagonal inverse: ``Q_n/q_n`` on the diagonal, ``-Q_{n-1}/q_n`` below it."""
    def entry(n, k):
        vn = w.v(n)
        return vn if k == n else -(vn - 1)
    return Triangle(entry, w.mode, name="riesz-inverse", bandwidth=1,
                    encoding={"kind": "riesz-inverse"}, inverse=lambda: make_riesz(w))


def make_nbar_delta(w: Weights) -> Triangle:
    """Closed form of the product riesz · delta-minus.

    Entry ``(q_{k+1} - q_k)/Q_n`` for ``k < n`` and ``-q_n/Q_n`` on the diagonal.
    """
    def entry(n, k):
        if k == n:
            return -1 / w.v(n)
        return w.riesz_entry(n, k) * (1 / w.rho(k) - 1)

    if w.mode is Mode.EXACT:
        def row(n, upto):
            Qn = w.Q(n)
            top = min(n, upto)
            out = [(w.q(k + 1) - w.q(k)) / Qn for k in range(min(top + 1, n))]
            if upto >= n:
                out.append(-w.q(n) / Qn)
            return out + [zero(w.mode)] * (upto - len(out) + 1)
    else:
        row = None
    return Triangle(entry, w.mode, name="nbar-delta", row=row, encoding={"kind": "nbar-delta"},
                    inverse=lambda: make_composed_inverse(w))


def make_composed_inverse(w: Weights) -> Triangle:
    """Inverse of riesz · delta-minus in closed form.

    Entry ``Q_k (1/q_{k+1} - 1/q_k)`` for ``k < n`` (independent of ``n``) and
    ``-Q_n/q_n`` on the diagonal.
    """
    def entry(n, k):
        return -w.v(n) if k == n else w.u(k)

    def row(n, upto):
        top = min(n, upto)
        out = w.u_list(top)[: min(top + 1, n)] if n > 0 else []
        if upto >= n:
            out.append(-w.v(n))
        return out + [zero(w.mode)] * (upto - len(out) + 1)

    return Triangle(entry, w.mode, name="composed-inverse", row=row,
                    encoding={"kind": "composed-inverse"}, inverse=lambda: make_nbar_delta(w))


def unit_column(j: int, mode: Mode = Mode.EXACT) -> Matrix:
    """Every row equals ``e^(j)``."""
    o = one(mode)
    return Matrix(lambda n, k: o, mode, name=f"unit-column({j})", support=lambda n: (j, j),
                  encoding={"kind": "unit-column", "index": j})


def diagonal(seq: SequenceSpec) -> Triangle:
    enc = None
    try:
        enc = {"kind": "diagonal", "seq": seq.to_json()}
    except TypeError:
        pass
    return Triangle(lambda n, k: seq(n), seq.mode, name="diagonal", bandwidth=0, encoding=enc)


def explicit_matrix(rows: Sequence[Sequence], mode: Mode = Mode.EXACT) -> Matrix:
    """Finitely many explicit rows, all later rows zero."""
    table = [tuple(to_scalar(x, mode) for x in r) for r in rows]
    lasts = []
    for r in table:
        nz = [i for i, x in enumerate(r) if x != 0]
        lasts.append(nz[-1] if nz else -1)
    firsts = []
    for r in table:
        nz = [i for i, x in enumerate(r) if x != 0]
        firsts.append(nz[0] if nz else 0)

    def support(n):
        if n >= len(table):
            return (0, -1)
        return (firsts[n], lasts[n])

    def entry(n, k):
        return table[n][k]

    enc = {"kind": "explicit", "rows": [[_fmt(x) for x in r] for r in table], "tail": "zeros"}
    if all(last <= n for n, last in enumerate(lasts)):
        return Triangle(entry, mode, name="explicit", support=support, encoding=enc)
    return Matrix(entry, mode, name="explicit", support=support, encoding=enc)


def _fmt(x):
    from .core import format_scalar
    return format_scalar(x)


def scaled(t: Matrix, alpha) -> Matrix:
    """``alpha · t`` with the same support."""
    a = to_scalar(alpha, t.mode)
    cls = Triangle if t.triangular else Matrix
    kwargs = {}
    if t.encoding is not None:
        kwargs["encoding"] = {"kind": "scaled", "factor": _fmt(a), "of": t.encoding}
    return cls(lambda n, k: a * t.entry(n, k), t.mode, name=f"{_fmt(a)}*{t.name}",
               support=t.support, bandwidth=t.bandwidth, **kwargs)


def compose(left: Matrix, right: Matrix) -> Matrix:
    """The product ``left · right``, evaluated lazily entry by entry."""
    mode = check_modes(left, right)

    def j_range(n, k):
        lo_l, hi_l = left.support(n)
        if hi_l is None:
            raise ValueError(f"left factor {left.name!r} has unbounded row {n}; product undefined")
        if right.triangular:
            lo = max(lo_l, k)
            hi = hi_l if right.bandwidth is None else min(hi_l, k + right.bandwidth)
        else:
            lo, hi = lo_l, hi_l
        return lo, hi

    def entry(n, k):
        lo, hi = j_range(n, k)
        total = zero(mode)
        for j in range(lo, hi + 1):
            lo_r, hi_r = right.support(j)
            if k < lo_r or (hi_r is not None and k > hi_r):
                continue
            total += left.entry(n, j) * right.entry(j, k)
        return total

    def support(n):
        lo_l, hi_l = left.support(n)
        if hi_l is None:
            return (0, None)
        if hi_l < lo_l:
            return (0, -1)
        los, his = [], []
        for j in range(lo_l, hi_l + 1):
            lo_r, hi_r = right.support(j)
            if hi_r is not None and hi_r < lo_r:
                continue
            los.append(lo_r)
            his.append(hi_r)
        if not los:
            return (0, -1)
        if any(h is None for h in his):
            return (min(los), None)
        return (min(los), max(his))

    bw = None
    if left.bandwidth is not None and right.bandwidth is not None:
        bw = left.bandwidth + right.bandwidth
    enc = None
    if left.encoding is not None and right.encoding is not None:
        enc = {"kind": "compose", "of": [left.encoding, right.encoding]}
    name = f"{left.name}·{right.name}"

    if left.triangular and right.triangular:
        if bw is not None:
            return Triangle(entry, mode, name=name, bandwidth=bw, encoding=enc)
        return Triangle(entry, mode, name=name, encoding=enc)
    return Matrix(entry, mode, name=name, support=support, bandwidth=bw, encoding=enc)


def invert(t: Matrix, N: int) -> Triangle:
    """Truncated inverse of a triangle by forward substitution on rows ``0..N``.

    The returned triangle only answers indices ``<= N``.
    """
    if not t.triangular:
        raise ValueError(f"{t.name!r} is not lower triangular")
    if N < 0:
        raise ValueError("N must be >= 0")
    rows = [t.row(n, n) for n in range(N + 1)]
    try:
        inv = kernels.forward_substitution(rows, t.mode)
    except ZeroDivisionError as exc:
        raise SingularTriangleError(int(exc.args[0])) from None

    def entry(n, k):
        if n > N:
            raise IndexError(f"truncated inverse only covers rows <= {N}")
        return inv[n][k]

    def row(n, upto):
        if n > N:
            raise IndexError(f"truncated inverse only covers rows <= {N}")
        out = list(inv[n][: upto + 1])
        return out + [zero(t.mode)] * (upto - len(out) + 1)

    return Triangle(entry, t.mode, name=f"inv({t.name})[{N}]", row=row)


def apply(t: Matrix, x: SequenceSpec, N: int) -> list:
    """The transform ``(A_n(x))_{n<=N}``; each row sum is finite."""
    check_modes(t, x)
    if N < 0:
        raise ValueError("N must be >= 0")
    out = []
    xs = x.support()
    for n in range(N + 1):
        lo, hi = t.support(n)
        if hi is None:
            if xs is None:
                raise ValueError(f"row {n} of {t.name!r} and the sequence both have unbounded support")
            hi = xs
        total = zero(t.mode)
        for k in range(max(lo, 0), hi + 1):
            a = t.entry(n, k)
            if a:
                total += a * x(k)
        out.append(total)
    return out


def image(t: Matrix, x: SequenceSpec, *, encoding: dict | None = None) -> RuleSequence:
    """``t x`` as a lazily evaluated sequence."""
    check_modes(t, x)

    def rule(n):
        return apply_row(t, x, n)

    enc = encoding
    if enc is None and t.encoding is not None:
        try:
            enc = {"kind": "image", "matrix": t.encoding, "seq": x.to_json()}
        except TypeError:
            enc = None
    return RuleSequence(rule, t.mode, name=f"{t.name}({x!r})", encoding=enc)


def apply_row(t: Matrix, x: SequenceSpec, n: int) -> Scalar:
    lo, hi = t.support(n)
    if hi is None:
        hi = x.support()
        if hi is None:
            raise ValueError(f"row {n} of {t.name!r} and the sequence both have unbounded support")
    total = zero(t.mode)
    for k in range(max(lo, 0), hi + 1):
        a = t.entry(n, k)
        if a:
            total += a * x(k)
    return total


def composed_inverse_image(w: Weights, y: SequenceSpec, *, encoding: dict | None = None) -> RuleSequence:
    """``x = (riesz · delta-minus)^{-1} y`` evaluated with a running prefix sum.

    ``x_n = sum_{k<n} u_k y_k - v_n y_n``.
    """
    mode = check_modes(w, y)
    prefix = [zero(mode)]  # prefix[n] = sum_{k<n} u_k y_k
    lock = threading.Lock()

    def rule(n):
        if len(prefix) <= n:
            with lock:
                while len(prefix) <= n:
                    k = len(prefix) - 1
                    yk = y(k)
                    prefix.append(prefix[-1] + (w.u(k) * yk if yk else zero(mode)))
        yn = y(n)
        return prefix[n] - (w.v(n) * yn if yn else zero(mode))

    enc = encoding
    if enc is None:
        try:
            enc = {"kind": "image", "matrix": {"kind": "composed-inverse"}, "seq": y.to_json()}
        except TypeError:
            enc = None
    return RuleSequence(rule, mode, name="composed-inverse-image", encoding=enc)


def as_sequence(values: Sequence, mode: Mode) -> Explicit:
    """A finite list viewed as a sequence with a zero tail."""
    return Explicit(tuple(values), "zeros", mode=mode)


def truncate(t: Matrix, N: int) -> list:
    """Dense ``(N+1) x (N+1)`` view (rows and columns ``0..N``)."""
    return [t.row(n, N) for n in range(N + 1)]
