"""Scalars, rule-based sequences, weight sequences and estimation plumbing.

Two scalar modes exist: ``exact`` (:class:`fractions.Fraction`) and
``float`` (IEEE double).  Every sequence, weight family and matrix carries
its mode, and operations that combine objects of different modes raise
:class:`ModeMismatchError` instead of coercing.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterator, Sequence, Union

Scalar = Union[Fraction, float]


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class NqDeltaError(Exception):
    """Base class for input errors raised by this package."""


class ModeMismatchError(NqDeltaError):
    pass


class InvalidWeightsError(NqDeltaError):
    def __init__(self, index: int, value=None):
        self.index = index
        self.value = value
        msg = f"weight q_{index} is not positive"
        if value is not None:
            msg += f" (got {value})"
        super().__init__(msg)


def to_scalar(value, mode: Mode = Mode.EXACT) -> Scalar:
    """Convert ints, floats, Fractions or ``"p/q"`` strings to a mode scalar."""
    mode = Mode(mode)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if mode is Mode.EXACT:
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite value {value!r} in exact mode")
            return Fraction(str(value))
        if isinstance(value, (int, Rational, str)):
            return Fraction(value)
        raise TypeError(f"cannot convert {value!r} to an exact scalar")
    if isinstance(value, str):
        return float(Fraction(value)) if "/" in value else float(value)
    return float(value)


def zero(mode: Mode) -> Scalar:
    return Fraction(0) if Mode(mode) is Mode.EXACT else 0.0


def one(mode: Mode) -> Scalar:
    return Fraction(1) if Mode(mode) is Mode.EXACT else 1.0


def format_scalar(value: Scalar):
    """JSON-friendly rendering: exact values become strings ``"p"`` or ``"p/q"``, floats stay floats."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return float(value)


def check_modes(*objs) -> Mode:
    """Return the common mode of ``objs`` or raise :class:`ModeMismatchError`."""
    modes = {Mode(o.mode) for o in objs if o is not None}
    if len(modes) > 1:
        raise ModeMismatchError(f"cannot mix scalar modes {sorted(m.value for m in modes)}")
    return modes.pop() if modes else Mode.EXACT


# --------------------------------------------------------------------------
# sequences
# --------------------------------------------------------------------------


class SequenceSpec:
    """An infinite sequence ``(x_k)_{k>=0}`` evaluable at any index."""

    mode: Mode = Mode.EXACT

    def term(self, k: int) -> Scalar:
        raise NotImplementedError

    def __call__(self, k: int) -> Scalar:
        if k < 0:
            raise IndexError(f"sequence index must be >= 0, got {k}")
        return self.term(k)

    def ratio(self, k: int) -> Scalar:
        """``x_k / x_{k+1}``; overridden where a closed form avoids overflow."""
        return self(k) / self(k + 1)

    def terms(self, n: int) -> list:
        """The list ``x_0 .. x_n``."""
        return [self(k) for k in range(n + 1)]

    def support(self) -> int | None:
        """Largest index that can be nonzero, or ``None`` if unbounded."""
        return None

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no JSON encoding")


def eval_sequence(spec: SequenceSpec, k: int) -> Scalar:
    return spec(k)


def _frozen_set(obj, name, value):
    object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class Constant(SequenceSpec):
    value: Scalar = 1
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        _frozen_set(self, "mode", Mode(self.mode))
        _frozen_set(self, "value", to_scalar(self.value, self.mode))

    def term(self, k):
        return self.value

    def ratio(self, k):
        return one(self.mode)

    def support(self):
        return -1 if self.value == 0 else None

    def to_json(self):
        return {"kind": "constant", "value": format_scalar(self.value)}


@dataclass(frozen=True)
class Geometric(SequenceSpec):
    """``k -> scale * ratio**k``."""

    ratio_: Scalar = 2
    scale: Scalar = 1
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        _frozen_set(self, "mode", Mode(self.mode))
        _frozen_set(self, "ratio_", to_scalar(self.ratio_, self.mode))
        _frozen_set(self, "scale", to_scalar(self.scale, self.mode))

    def term(self, k):
        try:
            return self.scale * self.ratio_**k
        except OverflowError:
            return math.copysign(math.inf, self.scale)

    def ratio(self, k):
        return 1 / self.ratio_

    def support(self):
        return -1 if self.scale == 0 else None

    def to_json(self):
        return {"kind": "geometric", "ratio": format_scalar(self.ratio_), "scale": format_scalar(self.scale)}


@dataclass(frozen=True)
class Power(SequenceSpec):
    """``k -> (k+1)**exponent``."""

    exponent: Scalar = 1
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        _frozen_set(self, "mode", Mode(self.mode))
        p = to_scalar(self.exponent, self.mode)
        if self.mode is Mode.EXACT and p.denominator != 1:
            raise ValueError("exact mode needs an integer exponent (rational powers are irrational)")
        _frozen_set(self, "exponent", p)

    def _pow(self, base):
        p = self.exponent
        if self.mode is Mode.EXACT:
            return Fraction(base) ** int(p)
        return float(base) ** p

    def term(self, k):
        return self._pow(k + 1)

    def ratio(self, k):
        if self.mode is Mode.EXACT:
            return Fraction(k + 1, k + 2) ** int(self.exponent)
        return ((k + 1) / (k + 2)) ** self.exponent

    def to_json(self):
        return {"kind": "power", "exponent": format_scalar(self.exponent)}


@dataclass(frozen=True)
class Unit(SequenceSpec):
    """The unit sequence ``e^(index)``."""

    index: int = 0
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        _frozen_set(self, "mode", Mode(self.mode))
        if self.index < 0:
            raise ValueError("unit index must be >= 0")

    def term(self, k):
        return one(self.mode) if k == self.index else zero(self.mode)

    def support(self):
        return self.index

    def to_json(self):
        return {"kind": "unit", "index": self.index}


TAILS = ("zeros", "repeat-last")


@dataclass(frozen=True)
class Explicit(SequenceSpec):
    """A finite prefix of values followed by a declared tail rule."""

    values: tuple = ()
    tail: str = "zeros"
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        _frozen_set(self, "mode", Mode(self.mode))
        if self.tail not in TAILS:
            raise ValueError(f"tail must be one of {TAILS}, got {self.tail!r}")
        if self.tail == "repeat-last" and not self.values:
            raise ValueError("repeat-last needs at least one value")
        _frozen_set(self, "values", tuple(to_scalar(v, self.mode) for v in self.values))

    def term(self, k):
        if k < len(self.values):
            return self.values[k]
        if self.tail == "zeros":
            return zero(self.mode)
        return self.values[-1]

    def support(self):
        if self.tail == "repeat-last" and self.values[-1] != 0:
            return None
        last = -1
        for i, v in enumerate(self.values):
            if v != 0:
                last = i
        return last

    def to_json(self):
        return {"kind": "explicit", "values": [format_scalar(v) for v in self.values], "tail": self.tail}


@dataclass(frozen=True)
class Linear(SequenceSpec):
    """Finite linear combination ``sum_i c_i * x^(i)``."""

    terms_: tuple = ()
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        seqs = [s for _, s in self.terms_]
        mode = check_modes(*seqs) if seqs else Mode(self.mode)
        _frozen_set(self, "mode", mode)
        _frozen_set(self, "terms_", tuple((to_scalar(c, mode), s) for c, s in self.terms_))

    def term(self, k):
        total = zero(self.mode)
        for c, s in self.terms_:
            total += c * s(k)
        return total

    def support(self):
        sup = -1
        for c, s in self.terms_:
            if c == 0:
                continue
            t = s.support()
            if t is None:
                return None
            sup = max(sup, t)
        return sup

    def to_json(self):
        return {"kind": "linear", "terms": [[format_scalar(c), s.to_json()] for c, s in self.terms_]}


class RuleSequence(SequenceSpec):
    """A sequence given by an arbitrary rule ``k -> value``, memoized.

    ``encoding`` is an optional JSON dict used when the rule came from a
    decodable spec (for example a basis vector).
    """

    def __init__(self, rule: Callable[[int], Scalar], mode: Mode, *, name: str = "rule",
                 support: int | None = None, encoding: dict | None = None):
        self._rule = rule
        self.mode = Mode(mode)
        self.name = name
        self._support = support
        self._encoding = encoding
        self._memo: dict[int, Scalar] = {}

    def term(self, k):
        try:
            return self._memo[k]
        except KeyError:
            value = self._rule(k)
            self._memo[k] = value  # idempotent fill
            return value

    def support(self):
        return self._support

    def to_json(self):
        if self._encoding is None:
            return super().to_json()
        return dict(self._encoding)

    def __repr__(self):
        return f"RuleSequence({self.name!r}, mode={self.mode.value})"


def ones(mode: Mode = Mode.EXACT) -> Constant:
    """The sequence ``e = (1, 1, 1, ...)``."""
    return Constant(1, mode=mode)


def finite(values: Sequence, mode: Mode = Mode.EXACT) -> Explicit:
    return Explicit(tuple(values), "zeros", mode=mode)


# --------------------------------------------------------------------------
# weights
# --------------------------------------------------------------------------


class Weights:
    """Positive weights ``q_k`` with memoized partial sums ``Q_n``.

    Besides ``q`` and ``Q`` the class exposes the scale-free quantities the
    formulas actually use, so float mode survives weights that overflow:

    * ``v(k) = Q_k / q_k``
    * ``rho(k) = q_k / q_{k+1}``
    * ``u(k) = Q_k (1/q_{k+1} - 1/q_k) = v_k (rho_k - 1)``
    """

    def __init__(self, q: SequenceSpec):
        self.seq = q
        self.mode = Mode(q.mode)
        self._lock = threading.Lock()
        self._q: list = []
        self._Q: list = []
        self._rho: list = []
        self._v: list = []
        self._logq: list = []
        self._abs_u: list = []

    def __repr__(self):
        return f"Weights({self.seq!r})"

    def __eq__(self, other):
        return isinstance(other, Weights) and self.seq == other.seq

    def __hash__(self):
        return hash(("Weights", repr(self.seq)))

    def to_json(self):
        return self.seq.to_json()

    # exact partial sums

    def _fill_q(self, n):
        with self._lock:
            while len(self._q) <= n:
                k = len(self._q)
                qk = self.seq(k)
                if not qk > 0:
                    raise InvalidWeightsError(k, qk)
                self._q.append(qk)
                self._Q.append(qk if k == 0 else self._Q[-1] + qk)

    def q(self, k: int) -> Scalar:
        if len(self._q) <= k:
            self._fill_q(k)
        return self._q[k]

    def Q(self, n: int) -> Scalar:
        if len(self._Q) <= n:
            self._fill_q(n)
        return self._Q[n]

    # scale-free quantities

    def _fill_ratios(self, n):
        with self._lock:
            if not self._v:
                q0 = self.seq(0)
                if not q0 > 0:
                    raise InvalidWeightsError(0, q0)
                self._v.append(one(self.mode))
            while len(self._rho) <= n:
                k = len(self._rho)
                try:
                    r = self.seq.ratio(k)
                except ZeroDivisionError:
                    raise InvalidWeightsError(k + 1, 0) from None
                if not r > 0 or (self.mode is Mode.FLOAT and not math.isfinite(r)):
                    raise InvalidWeightsError(k + 1)
                self._rho.append(r)
                self._v.append(self._v[-1] * r + 1)

    def rho(self, k: int) -> Scalar:
        if len(self._rho) <= k:
            self._fill_ratios(k)
        return self._rho[k]

    def v(self, k: int) -> Scalar:
        if len(self._v) <= k:
            self._fill_ratios(k)
        return self._v[k]

    def u(self, k: int) -> Scalar:
        return self.v(k) * (self.rho(k) - 1)

    def v_list(self, n: int) -> list:
        self.v(n)
        return self._v[: n + 1]

    def u_list(self, n: int, lo: int = 0) -> list:
        """``u_lo .. u_n``."""
        self.rho(n)
        return [self._v[k] * (self._rho[k] - 1) for k in range(lo, n + 1)]

    def v_slice(self, lo: int, n: int) -> list:
        self.v(n)
        return self._v[lo: n + 1]

    def abs_u_prefix(self, k: int) -> Scalar:
        """``sum_{j<k} |u_j|``, memoized."""
        if len(self._abs_u) <= k:
            self.rho(k)
            with self._lock:
                if not self._abs_u:
                    self._abs_u.append(zero(self.mode))
                while len(self._abs_u) <= k:
                    j = len(self._abs_u) - 1
                    self._abs_u.append(self._abs_u[-1] + abs(self._v[j] * (self._rho[j] - 1)))
        return self._abs_u[k]

    def log_q(self, k: int) -> float:
        """``log q_k`` computed from the ratios (float mode helper)."""
        if len(self._logq) <= k:
            self.rho(k)
            with self._lock:
                if not self._logq:
                    self._logq.append(math.log(float(self.seq(0))))
                while len(self._logq) <= k:
                    j = len(self._logq)
                    self._logq.append(self._logq[-1] - math.log(float(self._rho[j - 1])))
        return self._logq[k]

    def riesz_entry(self, n: int, k: int) -> Scalar:
        """``q_k / Q_n`` for ``k <= n``."""
        if self.mode is Mode.EXACT:
            return self.q(k) / self.Q(n)
        log_Q = self.log_q(n) + math.log(self.v(n))
        return math.exp(self.log_q(k) - log_Q)


def partial_sums(w: Weights, n: int) -> list:
    """``[Q_0, ..., Q_n]``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    w.Q(n)
    return list(w._Q[: n + 1])


# --------------------------------------------------------------------------
# truncation policy and verdicts
# --------------------------------------------------------------------------


class Outcome(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TruncationPolicy:
    n_start: int = 8
    n_max: int = 4096
    growth: float = 2
    window: int = 3
    tol: Scalar | None = None
    divergence_threshold: float = 1e12

    def __post_init__(self):
        if not 0 <= self.n_start <= self.n_max:
            raise ValueError("need 0 <= n_start <= n_max")
        if not self.growth > 1:
            raise ValueError("growth must be > 1")
        if self.window < 2:
            raise ValueError("window must be >= 2")
        if self.tol is not None and self.tol < 0:
            raise ValueError("tol must be >= 0")
        if not self.divergence_threshold > 0:
            raise ValueError("divergence_threshold must be > 0")

    def tolerance(self, mode: Mode) -> Scalar:
        """The effective tolerance: 0 in exact mode and 1e-9 in float mode unless set."""
        if self.tol is not None:
            return to_scalar(self.tol, mode)
        return Fraction(0) if Mode(mode) is Mode.EXACT else 1e-9

    def checkpoints(self) -> Iterator[int]:
        n = max(self.n_start, 1)
        while n < self.n_max:
            yield n
            n = max(n + 1, math.ceil(n * self.growth))
        yield self.n_max

    def to_json(self):
        return {
            "n_start": self.n_start,
            "n_max": self.n_max,
            "growth": self.growth,
            "window": self.window,
            "tol": None if self.tol is None else format_scalar(self.tol),
            "divergence_threshold": self.divergence_threshold,
        }


@dataclass
class Verdict:
    outcome: Outcome
    estimate: Scalar | None = None
    checkpoints: list = field(default_factory=list)
    reason: str = ""
    label: str = ""

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    def to_json(self):
        return {
            "label": self.label,
            "outcome": self.outcome.value,
            "estimate": None if self.estimate is None else format_scalar(self.estimate),
            "checkpoints": [[n, format_scalar(v)] for n, v in self.checkpoints],
            "reason": self.reason,
        }


def combine(verdicts: Sequence[Verdict]) -> Outcome:
    """Holds only if all hold; Fails if any fails; otherwise Inconclusive."""
    if any(v.fails for v in verdicts):
        return Outcome.FAILS
    if all(v.holds for v in verdicts):
        return Outcome.HOLDS
    return Outcome.INCONCLUSIVE
