"""Membership of a matrix ``A`` in the classes ``(X, Y)``.

``X`` is one of the wrapped domains (over c0, c, ℓ∞) and ``Y`` one of
c0, c, ℓ∞.  Seven pairs are characterized by the conditions below:

========  ===============================================================
Co1i      ``sup_{n,m}`` of the dual-norm sections of row ``A_n`` is finite
Co1ii     ``(a_{nk} Q_k / q_k)_k ∈ c0`` for every ``n``
Co2       ``(a_{nk} Q_k / q_k)_k ∈ c`` for every ``n``
Co3       ``lim_n a_{nk} = 0`` for every ``k``
Co4       ``lim_n a_{nk} = α_k`` exists for every ``k``
Co5       ``lim_n Σ_k a_{nk} = 0``
Co6       ``lim_n Σ_k a_{nk} = α`` exists
========  ===============================================================

"for every n/k" is checked on indices ``< policy.n_start``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .core import (NqDeltaError, Outcome, Scalar, TruncationPolicy, Verdict, Weights,
                   check_modes, combine, zero)
from .duality import Variant, column_limits
from .estimate import limit_scan, sup_scan
from .triangle import Matrix

DOMAINS = ("c0", "c", "linf")
CODOMAINS = ("c0", "c", "linf")

REQUIRED = {
    ("linf", "linf"): ("Co1i", "Co1ii"),
    ("c", "linf"): ("Co1i", "Co2"),
    ("c0", "linf"): ("Co1i",),
    ("c0", "c0"): ("Co1i", "Co3"),
    ("c0", "c"): ("Co1i", "Co4"),
    ("c", "c0"): ("Co1i", "Co1ii", "Co3", "Co5"),
    ("c", "c"): ("Co1i", "Co1ii", "Co4", "Co6"),
}


class UnsupportedClassError(NqDeltaError):
    def __init__(self, domain, codomain):
        super().__init__(f"class pair (wrapped {domain}, {codomain}) is not characterized; "
                         f"supported pairs: {sorted(REQUIRED)}")


class RowSumDivergenceError(NqDeltaError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row} has a non-convergent sum within the window")


class RowNorms:
    """Per-row values ``r(n)`` of the dual-norm evaluator, cached.

    ``derived``: the terminal section ``Σ_k |c_{mk}|`` of the C-matrix built
    from row ``A_n`` (``m`` = last column of the row's support), i.e. the norm
    of the functional ``x -> A_n(x)``.
    ``printed``: ``max_m`` of the printed section formula.

    Rows with unbounded support are cut at the current window ``N``.
    """

    def __init__(self, w: Weights, A: Matrix, variant: Variant | str = Variant.DERIVED):
        self.mode = check_modes(w, A)
        self.w, self.A = w, A
        self.variant = Variant(variant)
        self._cache: dict = {}

    def _slices(self, n, m):
        # columns before the row's support only see the total row sum, so
        # their contribution collapses to |P_m| * sum_{k<lo} |u_k|
        lo = min(max(self.A.support(n)[0], 0), m)
        a = self.A.row(n, m)[lo:]
        return lo, a, self.w.u_list(m, lo), self.w.v_slice(lo, m)

    def __call__(self, n: int, N: int) -> Scalar:
        hi = self.A.row_support(n)
        m = N if hi is None else hi
        key = (n, m)
        if key in self._cache:
            return self._cache[key]
        if m < 0:
            val = zero(self.mode)
        else:
            lo, a, u, v = self._slices(n, m)
            head = self.w.abs_u_prefix(lo)
            if self.variant is Variant.DERIVED:
                val = abs(sum(a, zero(self.mode))) * head + kernels.derived_section(a, u, v, m - lo, self.mode)
            else:
                prof = kernels.printed_profile(a, u, v, 0, m - lo, self.mode)
                total, best = zero(self.mode), zero(self.mode)
                for x, f in zip(a, prof):
                    total += x
                    best = max(best, abs(total) * head + f)
                val = best
        self._cache[key] = val
        return val

    def profile(self, n: int, m_hi: int) -> list:
        """Section values of row ``n`` for ``m = 0..m_hi`` in the active variant."""
        a = self.A.row(n, m_hi)
        u = self.w.u_list(m_hi)
        v = self.w.v_list(m_hi)
        if self.variant is Variant.DERIVED:
            return kernels.derived_profile(a, u, v, 0, m_hi, self.mode)
        return kernels.printed_profile(a, u, v, 0, m_hi, self.mode)


def _square_sup(rows: RowNorms, policy, *, s: int = -1, label: str):
    """Growing-square scan of ``sup_{s < n <= N} r(n)`` at the policy checkpoints ``N > s``.

    The window is absolute in ``N``, so values for different ``s`` at the same
    checkpoint are nested sups.
    """
    state = {"lo": s + 1, "best": zero(rows.mode), "unbounded": False}

    def value_at(N):
        if state["unbounded"]:
            state["best"] = zero(rows.mode)
            state["lo"] = s + 1
        for n in range(state["lo"], N + 1):
            if rows.A.row_support(n) is None:
                state["unbounded"] = True
            state["best"] = max(state["best"], rows(n, N))
        state["lo"] = N + 1
        return state["best"]

    return sup_scan(value_at, policy, rows.mode, label=label, after=s)


def cond_Co1i(w: Weights, A: Matrix, policy: TruncationPolicy | None = None,
              variant: Variant | str = Variant.DERIVED):
    policy = policy or TruncationPolicy()
    verdict = _square_sup(RowNorms(w, A, variant), policy, label="Co1i")
    return verdict.estimate, verdict


def operator_norm(w: Weights, A: Matrix, policy: TruncationPolicy | None = None):
    """``sup_n ‖A_n‖*`` with the functional norm of each row."""
    policy = policy or TruncationPolicy()
    verdict = _square_sup(RowNorms(w, A, Variant.DERIVED), policy, label="operator-norm")
    return verdict.estimate, verdict


def cond_row_tail(w: Weights, A: Matrix, n: int, target: str = "c0",
                  policy: TruncationPolicy | None = None) -> Verdict:
    """Test ``(a_{nk} Q_k / q_k)_k`` for membership in c0 or c."""
    if target not in ("c0", "c"):
        raise ValueError("target must be 'c0' or 'c'")
    policy = policy or TruncationPolicy()
    mode = check_modes(w, A)

    def block(lo, hi):
        row = A.row(n, hi)
        return [row[k] * w.v(k) for k in range(lo, hi + 1)]

    return limit_scan(block, policy, mode, label=f"{'Co1ii' if target == 'c0' else 'Co2'}[{n}]",
                      to_zero=target == "c0")


def _rows_condition(w, A, target, policy):
    verdicts = [cond_row_tail(w, A, n, target, policy) for n in range(max(policy.n_start, 1))]
    outcome = combine(verdicts)
    deciding = next((v for v in verdicts if v.outcome is outcome), verdicts[-1])
    label = "Co1ii" if target == "c0" else "Co2"
    reason = deciding.reason if outcome is Outcome.HOLDS else f"{deciding.label}: {deciding.reason}"
    return Verdict(outcome, None, deciding.checkpoints, reason, label)


def cond_column_limits(A: Matrix, mode: str = "exists", policy: TruncationPolicy | None = None):
    """Column limits ``α_k = lim_n a_{nk}`` for ``k < policy.n_start``.

    Returns ``(alphas, verdict)``.  ``mode="zero"`` also requires every α_k to vanish.
    """
    if mode not in ("zero", "exists"):
        raise ValueError("mode must be 'zero' or 'exists'")
    policy = policy or TruncationPolicy()
    label = "Co3" if mode == "zero" else "Co4"
    return column_limits(A.entry, max(policy.n_start, 1), policy, A.mode,
                         to_zero=mode == "zero", label=label)


def _row_sum(A: Matrix, n: int, policy) -> Scalar:
    lo, hi = A.support(n)
    if hi is not None:
        return sum(A.row(n, max(hi, 0))[max(lo, 0):hi + 1], zero(A.mode))

    def block(lo_, hi_):
        row = A.row(n, hi_)
        total = zero(A.mode)
        out = []
        for k, val in enumerate(row):
            total += val
            if k >= lo_:
                out.append(total)
        return out

    v = limit_scan(block, policy, A.mode, label=f"row-sum[{n}]")
    if v.fails:
        raise RowSumDivergenceError(n)
    if not v.holds:
        return None
    return v.estimate


def cond_row_sum_limit(A: Matrix, mode: str = "exists", policy: TruncationPolicy | None = None):
    """``lim_n Σ_k a_{nk}``; returns ``(limit, verdict)``."""
    if mode not in ("zero", "exists"):
        raise ValueError("mode must be 'zero' or 'exists'")
    policy = policy or TruncationPolicy()
    label = "Co5" if mode == "zero" else "Co6"
    undecided = []

    def block(lo, hi):
        out = []
        for n in range(lo, hi + 1):
            s = _row_sum(A, n, policy)
            if s is None:
                undecided.append(n)
                s = zero(A.mode)
            out.append(s)
        return out

    verdict = limit_scan(block, policy, A.mode, label=label, to_zero=mode == "zero")
    if undecided and verdict.holds:
        verdict = Verdict(Outcome.INCONCLUSIVE, verdict.estimate, verdict.checkpoints,
                          f"row sums undecided for rows {undecided[:5]}", label)
    return verdict.estimate, verdict


@dataclass
class ClassQuery:
    A: Matrix
    domain: str
    codomain: str
    weights: Weights
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    variant: Variant = Variant.DERIVED

    def __post_init__(self):
        self.domain = _norm_tag(self.domain)
        self.codomain = _norm_tag(self.codomain)
        if (self.domain, self.codomain) not in REQUIRED:
            raise UnsupportedClassError(self.domain, self.codomain)


def _norm_tag(tag) -> str:
    t = str(tag).strip().lower().replace("wrapped-", "").replace("ℓ∞", "linf").replace("l_inf", "linf")
    if t not in DOMAINS:
        raise ValueError(f"unknown space tag {tag!r}")
    return t


@dataclass
class ConditionReport:
    outcome: Outcome
    conditions: dict
    required: tuple
    estimates: dict
    domain: str
    codomain: str

    @property
    def failed(self) -> list:
        return [k for k, v in self.conditions.items() if v.fails]

    def to_json(self):
        from .core import format_scalar

        def fmt(x):
            if isinstance(x, list):
                return [None if y is None else format_scalar(y) for y in x]
            return None if x is None else format_scalar(x)

        return {
            "domain": self.domain,
            "codomain": self.codomain,
            "outcome": self.outcome.value,
            "required": list(self.required),
            "failed": self.failed,
            "conditions": {k: v.to_json() for k, v in self.conditions.items()},
            "estimates": {k: fmt(v) for k, v in self.estimates.items()},
        }


def class_membership(query: ClassQuery) -> ConditionReport:
    w, A, policy = query.weights, query.A, query.policy
    check_modes(w, A)
    required = REQUIRED[(query.domain, query.codomain)]
    conds: dict = {}
    estimates: dict = {}
    for name in required:
        if name == "Co1i":
            est, v = cond_Co1i(w, A, policy, query.variant)
            estimates["sup"] = est
        elif name == "Co1ii":
            v = _rows_condition(w, A, "c0", policy)
        elif name == "Co2":
            v = _rows_condition(w, A, "c", policy)
        elif name in ("Co3", "Co4"):
            alphas, v = cond_column_limits(A, "zero" if name == "Co3" else "exists", policy)
            estimates["alpha_k"] = alphas
        else:
            try:
                alpha, v = cond_row_sum_limit(A, "zero" if name == "Co5" else "exists", policy)
            except RowSumDivergenceError as exc:
                alpha, v = None, Verdict(Outcome.FAILS, None, [], str(exc), name)
            estimates["alpha"] = alpha
        conds[name] = v
    return ConditionReport(combine(list(conds.values())), conds, required, estimates,
                           query.domain, query.codomain)

