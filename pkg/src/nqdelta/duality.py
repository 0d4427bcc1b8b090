"""The C-matrix of a sequence ``a``, β-dual tests and the dual norm.

For ``x = (riesz · delta-minus)^{-1} y`` the partial sums of ``a x`` are a
triangle applied to ``y``:

    Σ_{k<=n} a_k x_k = Σ_{k<=n} c_{nk} y_k,
    c_{nk} = u_k (P_n - P_k) - v_k a_k      (k < n)
    c_{nn} = -v_n a_n

with ``P`` the prefix sums of ``a``, ``u_k = Q_k (1/q_{k+1} - 1/q_k)`` and
``v_k = Q_k / q_k``.  That is the ``derived`` variant.  The ``printed``
variant drops the ``- v_k a_k`` term below the diagonal; it does not satisfy
the pairing identity and is kept for comparison only.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .core import (Mode, Outcome, Scalar, SequenceSpec, TruncationPolicy, Verdict, Weights,
                   check_modes, combine, zero)
from .estimate import limit_scan, sup_scan
from .spaces import SpaceTag
from .triangle import Triangle, composed_inverse_image


class Variant(str, enum.Enum):
    DERIVED = "derived"
    PRINTED = "printed"


class PrefixSums:
    """Memoized ``P_n = a_0 + ... + a_n`` together with the ``a`` values."""

    def __init__(self, a: SequenceSpec):
        self.a = a
        self.mode = a.mode
        self.values: list = []
        self.P: list = []
        self._lock = threading.Lock()

    def upto(self, n):
        if len(self.P) <= n:
            with self._lock:
                while len(self.P) <= n:
                    k = len(self.P)
                    ak = self.a(k)
                    self.values.append(ak)
                    self.P.append(ak if k == 0 else self.P[-1] + ak)
        return self.P


class CMatrix(Triangle):
    def __init__(self, w: Weights, a: SequenceSpec, variant: Variant = Variant.DERIVED):
        mode = check_modes(w, a)
        self.w, self.a = w, a
        self.variant = Variant(variant)
        self.prefix = PrefixSums(a)
        derived = self.variant is Variant.DERIVED

        def entry(n, k):
            P = self.prefix.upto(n)
            ak = self.prefix.values[k]
            if k == n:
                return -w.v(n) * ak
            val = w.u(k) * (P[n] - P[k])
            if derived:
                val -= w.v(k) * ak
            return val

        def row(n, upto):
            P = self.prefix.upto(max(n, upto))
            vals = self.prefix.values
            top = min(n, upto)
            out = []
            for k in range(top + 1):
                if k == n:
                    out.append(-w.v(n) * vals[n])
                    continue
                val = w.u(k) * (P[n] - P[k])
                if derived:
                    val -= w.v(k) * vals[k]
                out.append(val)
            return out + [zero(mode)] * (upto - top)

        super().__init__(entry, mode, name=f"C[{self.variant.value}]", row=row)

    def section_values(self, lo: int, hi: int) -> list:
        """``Σ_k |c_{nk}|`` for ``lo <= n <= hi``."""
        self.prefix.upto(hi)
        a = self.prefix.values[: hi + 1]
        u = self.w.u_list(hi)
        v = self.w.v_list(hi)
        if self.variant is Variant.DERIVED:
            return kernels.derived_profile(a, u, v, lo, hi, self.mode)
        return kernels.printed_profile(a, u, v, lo, hi, self.mode)

    def row_sums(self, lo: int, hi: int) -> list:
        """``Σ_k c_{nk}`` for ``lo <= n <= hi`` via running sums (O(1) per row)."""
        w = self.w
        P = self.prefix.upto(hi)
        a = self.prefix.values
        z = zero(self.mode)
        U = W = V = z  # Σ_{k<n} u_k, Σ_{k<n} u_k P_k, Σ_{k<n} v_k a_k
        out = []
        for n in range(hi + 1):
            diag = w.v(n) * a[n]
            s = P[n] * U - W - diag
            if self.variant is Variant.DERIVED:
                s -= V
            if n >= lo:
                out.append(s)
            uk = w.u(n)
            U += uk
            W += uk * P[n]
            V += diag
        return out


def c_matrix(w: Weights, a: SequenceSpec, variant: Variant | str = Variant.DERIVED) -> CMatrix:
    return CMatrix(w, a, Variant(variant))


def pairing_check(w: Weights, a: SequenceSpec, y: SequenceSpec, N: int,
                  variant: Variant | str = Variant.DERIVED) -> Scalar:
    """``max_{n<=N} |Σ_{k<=n} a_k x_k - (C y)_n|`` with ``x`` the preimage of ``y``."""
    mode = check_modes(w, a, y)
    C = c_matrix(w, a, variant)
    x = composed_inverse_image(w, y)
    worst = zero(mode)
    lhs = zero(mode)
    ys = [y(k) for k in range(N + 1)]
    for n in range(N + 1):
        lhs += a(n) * x(n)
        row = C.row(n, n)
        rhs = sum((c * yk for c, yk in zip(row, ys) if yk), zero(mode))
        worst = max(worst, abs(lhs - rhs))
    return worst


@dataclass
class DualNormValue:
    value: Scalar | None
    sup: Scalar | None
    argmax: int | None
    per_n: list = field(default_factory=list)
    variant: Variant = Variant.DERIVED


def dual_norm(w: Weights, a: SequenceSpec, policy: TruncationPolicy | None = None,
              variant: Variant | str = Variant.DERIVED):
    """Dual norm of ``a`` on the three wrapped domains.

    ``printed``: the running sup over ``n`` of the section formula.
    ``derived``: the limit over ``n`` of ``Σ_k |c_{nk}|``; for finitely
    supported ``a`` this is the exact norm of ``x -> Σ a_k x_k``.  The
    running sup of the sections is reported alongside.

    Returns ``(DualNormValue, Verdict)``.
    """
    policy = policy or TruncationPolicy()
    variant = Variant(variant)
    C = c_matrix(w, a, variant)
    mode = C.mode
    state = {"best": None, "arg": None, "per_n": []}

    def block(lo, hi):
        vals = C.section_values(lo, hi)
        for i, val in enumerate(vals):
            n = lo + i
            if state["best"] is None or val > state["best"]:
                state["best"], state["arg"] = val, n
        state["per_n"].extend((lo + i, val) for i, val in enumerate(vals))
        return vals

    if variant is Variant.PRINTED:
        lo_ref = {"lo": 0}

        def value_at(N):
            block(lo_ref["lo"], N)
            lo_ref["lo"] = N + 1
            return state["best"]

        verdict = sup_scan(value_at, policy, mode, label="dual-norm[printed]")
    else:
        verdict = limit_scan(block, policy, mode, label="dual-norm[derived]")
    result = DualNormValue(verdict.estimate, state["best"], state["arg"], state["per_n"], variant)
    return result, verdict


def finite_subset_sup(row, n_terms: int) -> Scalar:
    """``max_K |Σ_{k∈K} r_k|`` over subsets of the first ``n_terms`` indices.

    For real entries this is ``max(Σ positive parts, Σ negative parts)``.
    """
    if isinstance(row, SequenceSpec):
        vals = [row(k) for k in range(n_terms)]
    else:
        vals = list(row)[:n_terms]
    pos = sum((x for x in vals if x > 0), 0)
    neg = sum((-x for x in vals if x < 0), 0)
    return max(pos, neg)


def matrix_subset_sup(A, n_terms: int, policy: TruncationPolicy | None = None):
    """``sup_n`` of :func:`finite_subset_sup` over the rows of ``A`` (the (c0, ℓ1) test)."""
    policy = policy or TruncationPolicy()
    state = {"lo": 0, "best": zero(A.mode)}

    def value_at(N):
        for n in range(state["lo"], N + 1):
            state["best"] = max(state["best"], finite_subset_sup(A.row(n, n_terms - 1), n_terms))
        state["lo"] = N + 1
        return state["best"]

    verdict = sup_scan(value_at, policy, A.mode, label="subset-sup")
    return verdict.estimate, verdict


# --------------------------------------------------------------------------
# β-duals
# --------------------------------------------------------------------------

REQUIRED_SETS = {"c0": ("c1", "c2"), "c": ("c1", "c2", "c4"), "linf": ("c2", "c3")}


@dataclass
class BetaDualReport:
    outcome: Outcome
    sets: dict
    required: tuple
    failed: list
    variant: Variant

    def to_json(self):
        return {
            "outcome": self.outcome.value,
            "required": list(self.required),
            "failed": self.failed,
            "variant": self.variant.value,
            "sets": {k: v.to_json() for k, v in self.sets.items()},
        }


def _set_c1(C, policy):
    state = {"lo": 0, "best": zero(C.mode)}

    def value_at(N):
        vals = C.section_values(state["lo"], N)
        state["best"] = max([state["best"], *vals])
        state["lo"] = N + 1
        return state["best"]

    return sup_scan(value_at, policy, C.mode, label="c1")


def column_limits(column, n_cols: int, policy, mode, *, to_zero=False, label="column"):
    """Per-column limits of ``n -> column(n, k)`` for ``k < n_cols``.

    Returns ``(alphas, verdict)``; the verdict combines the columns and
    carries the checkpoints of the deciding column.
    """
    alphas, verdicts = [], []
    for k in range(n_cols):
        def block(lo, hi, k=k):
            return [column(n, k) for n in range(lo, hi + 1)]
        vk = limit_scan(block, policy, mode, label=f"{label}[{k}]", to_zero=to_zero)
        alphas.append(vk.estimate)
        verdicts.append(vk)
    outcome = combine(verdicts)
    deciding = next((v for v in verdicts if v.outcome is outcome), verdicts[-1]) if verdicts else None
    if outcome is Outcome.HOLDS and verdicts:
        deciding = verdicts[-1]
    cps = deciding.checkpoints if deciding else []
    reason = deciding.reason if deciding else "no columns"
    if deciding and outcome is not Outcome.HOLDS:
        reason = f"{deciding.label}: {reason}"
    return alphas, Verdict(outcome, None, cps, reason, label)


def _set_c2(C, policy):
    n_cols = max(policy.n_start, 1)

    def column(n, k):
        return C.entry(n, k) if n >= k else zero(C.mode)

    alphas, verdict = column_limits(column, n_cols, policy, C.mode, label="c2")
    verdict.estimate = None
    return verdict, alphas


def _set_c3(C, policy):
    """``lim_n Σ_k |c_{nk}| = Σ_k |lim_n c_{nk}|``.

    Checked as: the row sums of ``|c_{nk}|`` settle, and the mass sitting in
    the upper half ``k >= n/2`` of each row tends to zero (no mass escapes
    towards the diagonal).
    """
    total = limit_scan(C.section_values, policy, C.mode, label="c3:row-abs-sums")

    def escaping(lo, hi):
        out = []
        for n in range(lo, hi + 1):
            row = C.row(n, n)
            out.append(sum((abs(c) for c in row[(n + 1) // 2:]), zero(C.mode)))
        return out

    tail = limit_scan(escaping, policy, C.mode, label="c3:escaping-mass", to_zero=True)
    outcome = combine([total, tail])
    deciding = tail if total.holds else total
    return Verdict(outcome, total.estimate, deciding.checkpoints,
                   f"row sums: {total.outcome.value}; escaping mass: {tail.outcome.value}", "c3")


def _set_c4(C, policy):
    return limit_scan(C.row_sums, policy, C.mode, label="c4")


def beta_dual_membership(w: Weights, a: SequenceSpec, tag: SpaceTag | str,
                         policy: TruncationPolicy | None = None,
                         variant: Variant | str = Variant.DERIVED) -> BetaDualReport:
    """Test ``a`` against the condition sets of the β-dual of a wrapped domain.

    null domain: c1 ∩ c2; convergent domain: c1 ∩ c2 ∩ c4; bounded domain: c2 ∩ c3.
    """
    policy = policy or TruncationPolicy()
    if isinstance(tag, str):
        tag = SpaceTag.parse(tag)
    if not tag.wrapped:
        raise ValueError("β-duals are provided for the wrapped domains only")
    variant = Variant(variant)
    C = c_matrix(w, a, variant)
    required = REQUIRED_SETS[tag.base]
    sets = {}
    for name in required:
        if name == "c1":
            sets[name] = _set_c1(C, policy)
        elif name == "c2":
            sets[name] = _set_c2(C, policy)[0]
        elif name == "c3":
            sets[name] = _set_c3(C, policy)
        else:
            sets[name] = _set_c4(C, policy)
    outcome = combine(list(sets.values()))
    failed = [k for k, v in sets.items() if v.fails]
    return BetaDualReport(outcome, sets, required, failed, variant)
