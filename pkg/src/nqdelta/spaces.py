"""The matrix domains of riesz · delta-minus in c0, c and ℓ∞.

A sequence ``x`` belongs to the wrapped domain over a base space ``X`` when
its transform ``τ(x)``, ``τ_n = (1/Q_n) Σ_{k<=n} q_k (x_{k-1} - x_k)``, lies
in ``X``.  The norm of every domain is ``sup_n |τ_n|``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .core import (Mode, Outcome, Scalar, SequenceSpec, TruncationPolicy, Verdict, Weights,
                   check_modes, ones, zero)
from .estimate import bounded_scan, limit_scan
from .triangle import composed_inverse_image
from .core import RuleSequence

BASES = ("c0", "c", "linf")


@dataclass(frozen=True)
class SpaceTag:
    base: str
    wrapped: bool = True

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"base space must be one of {BASES}, got {self.base!r}")

    @classmethod
    def parse(cls, text: str) -> "SpaceTag":
        text = text.strip().lower().replace("ℓ∞", "linf").replace("l_inf", "linf")
        if text.startswith("plain-"):
            return cls(text[len("plain-"):], wrapped=False)
        if text.startswith("wrapped-"):
            text = text[len("wrapped-"):]
        return cls(text, wrapped=True)

    def __str__(self):
        return self.base if self.wrapped else f"plain-{self.base}"


@dataclass
class TauSequence:
    values: list

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)


class TauStream:
    """Incrementally extended ``τ_0, τ_1, ...`` of one sequence."""

    def __init__(self, w: Weights, x: SequenceSpec):
        self.mode = check_modes(w, x)
        self.w, self.x = w, x
        self.values: list = []
        self._acc = zero(self.mode)  # exact: Σ q_k Δ⁻x_k
        self._prev_x = zero(self.mode)
        self._lock = threading.Lock()

    def upto(self, n: int) -> list:
        if len(self.values) <= n:
            with self._lock:
                self._extend(n)
        return self.values[: n + 1]

    def _extend(self, n):
        w, x = self.w, self.x
        exact = self.mode is Mode.EXACT
        while len(self.values) <= n:
            k = len(self.values)
            xk = x(k)
            diff = self._prev_x - xk
            self._prev_x = xk
            if exact:
                self._acc += w.q(k) * diff
                self.values.append(self._acc / w.Q(k))
            else:
                vk = w.v(k)
                prev = self.values[-1] if self.values else 0.0
                self.values.append(prev * (1 - 1 / vk) + diff / vk)

    def block(self, lo: int, hi: int) -> list:
        return self.upto(hi)[lo:]


def tau_transform(w: Weights, x: SequenceSpec, N: int) -> TauSequence:
    if N < 0:
        raise ValueError("N must be >= 0")
    return TauSequence(TauStream(w, x).upto(N))


def space_norm(w: Weights, x: SequenceSpec, policy: TruncationPolicy | None = None):
    """``sup_n |τ_n(x)|`` with a stabilization verdict."""
    policy = policy or TruncationPolicy()
    stream = TauStream(w, x)
    verdict = bounded_scan(stream.block, policy, stream.mode, label="norm")
    return verdict.estimate, verdict


def basis_vector(w: Weights, k: int) -> RuleSequence:
    """Column ``k`` of the composed inverse: ``τ(basis_vector(w, k)) = e^(k)``.

    Terms are 0 before ``k``, ``-Q_k/q_k`` at ``k`` and ``Q_k (1/q_{k+1} - 1/q_k)``
    afterwards.
    """
    if k < 0:
        raise ValueError("basis index must be >= 0")
    mode = w.mode
    diag = -w.v(k)
    after = w.u(k)
    z = zero(mode)

    def rule(n):
        if n < k:
            return z
        return diag if n == k else after

    return RuleSequence(rule, mode, name=f"s^({k})", support=k if after == 0 else None,
                        encoding={"kind": "basis", "index": k})


def limit_vector(w: Weights) -> RuleSequence:
    """The vector with ``τ = e``: the composed inverse applied to ``e``."""
    return composed_inverse_image(w, ones(w.mode), encoding={"kind": "basis", "index": -1})


@dataclass
class Representation:
    coefficients: list
    limit: Scalar | None
    residual: Scalar
    reconstruction: list
    limit_verdict: Verdict | None = None


def coefficients_and_reconstruct(w: Weights, x: SequenceSpec, N: int, *, target: str = "null",
                                 policy: TruncationPolicy | None = None) -> Representation:
    """Coefficients ``λ_k = τ_k(x)`` and the basis reconstruction of ``x`` on ``0..N``.

    ``target="null"`` expands in the basis vectors alone; ``target="convergent"``
    first estimates ``l = lim τ_n`` (the wrapped-c test must hold) and expands
    as ``l s^(-1) + Σ (λ_k - l) s^(k)``.
    """
    if target not in ("null", "convergent"):
        raise ValueError("target must be 'null' or 'convergent'")
    mode = check_modes(w, x)
    stream = TauStream(w, x)
    lam = stream.upto(N)
    limit = None
    lverdict = None
    if target == "convergent":
        lverdict = limit_scan(stream.block, policy or TruncationPolicy(), mode, label="c")
        if lverdict.holds:
            limit = lverdict.estimate

    coeffs = lam if limit is None else [c - limit for c in lam]
    u = w.u_list(N)
    acc = zero(mode)
    recon = []
    lim_part = limit_vector(w) if limit is not None else None
    for n in range(N + 1):
        val = acc - w.v(n) * coeffs[n]
        if lim_part is not None:
            val += limit * lim_part(n)
        recon.append(val)
        acc += u[n] * coeffs[n]
    residual = max((abs(x(n) - recon[n]) for n in range(N + 1)), default=zero(mode))
    return Representation(list(lam), limit, residual, recon, lverdict)


def space_membership(w: Weights, x: SequenceSpec, tag: SpaceTag | str,
                     policy: TruncationPolicy | None = None) -> Verdict:
    policy = policy or TruncationPolicy()
    mode = check_modes(w, x)
    if isinstance(tag, str):
        tag = SpaceTag.parse(tag)
    if tag.wrapped:
        block = TauStream(w, x).block
    else:
        def block(lo, hi):
            return [x(n) for n in range(lo, hi + 1)]
    label = str(tag)
    if tag.base == "c0":
        return limit_scan(block, policy, mode, label=label, to_zero=True)
    if tag.base == "c":
        return limit_scan(block, policy, mode, label=label)
    return bounded_scan(block, policy, mode, label=label)


__all__ = [
    "SpaceTag", "TauSequence", "TauStream", "tau_transform", "space_norm", "basis_vector",
    "limit_vector", "Representation", "coefficients_and_reconstruct", "space_membership", "Outcome",
]
