"""Hausdorff measure of noncompactness of matrix operators on the wrapped domains.

The tail quantity ``‖A‖^(s) = sup_{n>s} r(n)`` (``r`` the per-row dual-norm
value of :class:`~nqdelta.classes.RowNorms`) is nonincreasing in ``s`` and its
limit bounds ``‖L_A‖_χ``:

* codomain c0: ``‖L_A‖_χ = lim``
* codomain c:  ``lim/2 <= ‖L_A‖_χ <= lim``
* codomain ℓ∞: ``0 <= ‖L_A‖_χ <= lim``
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .classes import ClassQuery, ConditionReport, RowNorms, _square_sup, class_membership
from .core import (NqDeltaError, Outcome, Scalar, TruncationPolicy, Verdict, Weights, check_modes,
                   format_scalar, zero)
from .duality import Variant
from .estimate import sup_scan
from .triangle import Matrix
from . import discrepancies


class Regime(str, enum.Enum):
    C0_EXACT = "c0-exact"
    C_SANDWICH = "c-sandwich"
    LINF_UPPER = "linf-upper"


REGIME_FOR = {"c0": Regime.C0_EXACT, "c": Regime.C_SANDWICH, "linf": Regime.LINF_UPPER}

DEFAULT_S_VALUES = (0, 1, 2, 4, 8, 16, 32)


class NotMemberError(NqDeltaError):
    def __init__(self, report: ConditionReport):
        self.report = report
        super().__init__(f"A is not in (wrapped {report.domain}, {report.codomain}): "
                         f"failed {', '.join(report.failed)}")


def a_norm_s(w: Weights, A: Matrix, s: int, policy: TruncationPolicy | None = None,
             variant: Variant | str = Variant.DERIVED):
    """``‖A‖^(s)`` by a growing-square scan over rows ``s < n <= N``.

    Returns ``(value, Verdict)``.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    policy = policy or TruncationPolicy()
    verdict = _square_sup(RowNorms(w, A, variant), policy, s=s, label=f"a_norm_s[{s}]")
    return verdict.estimate, verdict


@dataclass
class MncEstimate:
    per_s: dict
    limit: Scalar | None
    lower: Scalar | None
    upper: Scalar | None
    regime: Regime
    verdict: Verdict
    membership: ConditionReport | None = None
    variant: Variant = Variant.DERIVED
    notes: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)

    def to_json(self):
        f = lambda x: None if x is None else format_scalar(x)  # noqa: E731
        return {
            "regime": self.regime.value,
            "variant": self.variant.value,
            "per_s": {str(s): f(v) for s, v in self.per_s.items()},
            "limit": f(self.limit),
            "bounds": [f(self.lower), f(self.upper)],
            "limit_verdict": self.verdict.to_json(),
            "membership": None if self.membership is None else self.membership.to_json(),
            "notes": self.notes,
            "discrepancies": self.discrepancies,
        }


def _bounds(limit, regime):
    if limit is None:
        return None, None
    if regime is Regime.C0_EXACT:
        return limit, limit
    if regime is Regime.C_SANDWICH:
        return limit / 2, limit
    return zero_like(limit), limit


def zero_like(x):
    return x - x


def mnc_bounds(w: Weights, A: Matrix, X: str, Y: str, policy: TruncationPolicy | None = None,
               variant: Variant | str = Variant.DERIVED, *, assume_member: bool = False,
               s_values=DEFAULT_S_VALUES) -> MncEstimate:
    """Estimate ``lim_s ‖A‖^(s)`` and the resulting bounds on ``‖L_A‖_χ``.

    The limit is tracked through block maxima ``max_{N_prev < n <= N} r(n)``
    over the checkpoint blocks.  ``per_s`` is evaluated on one common row
    window so it is nonincreasing in ``s`` by construction.
    """
    policy = policy or TruncationPolicy()
    variant = Variant(variant)
    mode = check_modes(w, A)
    query = ClassQuery(A, X, Y, w, policy, variant)
    regime = REGIME_FOR[query.codomain]
    notes: list = []
    membership = None
    if not assume_member:
        membership = class_membership(query)
        if membership.outcome is Outcome.FAILS:
            raise NotMemberError(membership)
        if membership.outcome is Outcome.INCONCLUSIVE:
            notes.append("class membership not established within the window")

    rows = RowNorms(w, A, variant)
    state = {"lo": 0, "N": 0}

    def block_max(N):
        lo = state["lo"]
        best = zero(mode)
        for n in range(lo, N + 1):
            best = max(best, rows(n, N))
        state["lo"] = N + 1
        state["N"] = N
        return best

    verdict = sup_scan(block_max, policy, mode, label="mnc-limit")
    verdict.label = "mnc-limit"
    limit = verdict.estimate

    N_f = max(state["N"], 2 * max(s_values, default=0) + max(policy.n_start, 1))
    r = [rows(n, N_f) for n in range(N_f + 1)]
    suffix = [zero(mode)] * (N_f + 2)
    for n in range(N_f, -1, -1):
        suffix[n] = max(suffix[n + 1], r[n])
    per_s = {s: (suffix[s + 1] if s + 1 <= N_f else zero(mode)) for s in s_values}

    lower, upper = _bounds(limit, regime)
    est = MncEstimate(per_s, limit, lower, upper, regime, verdict, membership, variant, notes)
    if discrepancies.is_unit_column_example(w, A):
        est.discrepancies.append(discrepancies.unit_column_example(limit))
    return est


class Compactness(str, enum.Enum):
    COMPACT = "Compact"
    NOT_COMPACT = "NotCompact"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CompactnessVerdict:
    outcome: Compactness
    reason: str
    limit: Scalar | None
    estimate: MncEstimate

    def to_json(self):
        return {
            "outcome": self.outcome.value,
            "reason": self.reason,
            "limit": None if self.limit is None else format_scalar(self.limit),
            "mnc": self.estimate.to_json(),
        }


def classify_compact(w: Weights, A: Matrix, X: str, Y: str, policy: TruncationPolicy | None = None,
                     variant: Variant | str = Variant.DERIVED, *,
                     assume_member: bool = False) -> CompactnessVerdict:
    """Classify ``L_A`` from the limit of ``‖A‖^(s)``.

    For codomains c0 and c the limit condition is necessary and sufficient;
    for ℓ∞ it is only sufficient, so a nonzero limit gives Inconclusive.
    """
    policy = policy or TruncationPolicy()
    est = mnc_bounds(w, A, X, Y, policy, variant, assume_member=assume_member)
    tol = policy.tolerance(w.mode)
    L = est.limit
    stable = est.verdict.holds
    if est.membership is not None and est.membership.outcome is not Outcome.HOLDS:
        return CompactnessVerdict(Compactness.INCONCLUSIVE,
                                  "class membership not established; bounds do not apply", L, est)
    if not stable:
        return CompactnessVerdict(Compactness.INCONCLUSIVE,
                                  f"limit of ‖A‖^(s) not stable: {est.verdict.reason}", L, est)
    if abs(L) <= tol:
        return CompactnessVerdict(Compactness.COMPACT, "lim ‖A‖^(s) = 0", L, est)
    if est.regime is Regime.LINF_UPPER:
        return CompactnessVerdict(
            Compactness.INCONCLUSIVE,
            "lim ‖A‖^(s) > 0 but for codomain ℓ∞ the limit condition is only sufficient", L, est)
    if L > 2 * tol:
        return CompactnessVerdict(Compactness.NOT_COMPACT,
                                  "lim ‖A‖^(s) is bounded away from 0", L, est)
    return CompactnessVerdict(Compactness.INCONCLUSIVE, "limit within 2·tol of 0", L, est)
