"""Known disagreements between published formulas/values and what this library computes.

Reports reference these entries by ``id``; each entry records the claimed
value next to the value that direct evaluation produces.
"""
from __future__ import annotations

from fractions import Fraction

from .core import Geometric, Weights, format_scalar

ENTRIES = {
    "unit-column-example": {
        "topic": "worked example: q_k = 3^k, every row equal to e^(1), domain wrapped ℓ∞, codomain ℓ∞",
        "claimed": {
            "Co1i": "< 2 (sup_n of 2/3 + (1 - 3^-n)/2)",
            "a_norm_s": "7/6 - 1/(2*3^(s+1))",
            "limit": "7/6",
            "compact": True,
        },
        "computed": {
            "Co1i": "2 (attained at m = 1: Q_1/q_1 = 4/3 plus 2/3)",
            "a_norm_s": "2 for every s",
            "limit": "2",
        },
        "note": "The operator x -> (x_1, x_1, ...) has rank one, hence is compact; the "
                "limit condition is sufficient only for codomain ℓ∞, so the classifier "
                "answers Inconclusive.",
    },
    "c-matrix-display": {
        "topic": "C-matrix entries below the diagonal",
        "claimed": "c_nk = Q_k (1/q_{k+1} - 1/q_k) Σ_{j=k+1..n} a_j for k < n",
        "computed": "c_nk = Q_k (1/q_{k+1} - 1/q_k) Σ_{j=k+1..n} a_j - Q_k a_k / q_k for k < n",
        "note": "Only the second form satisfies Σ_{k<=n} a_k x_k = (C y)_n; the first is "
                "available as variant 'printed'.",
    },
    "basis-display": {
        "topic": "basis vectors s^(k)",
        "claimed": "s_n^(k) = Σ_{j=1..k} Q_j (1/q_{j+1} - 1/q_j) for k < n",
        "computed": "s_n^(k) = Q_k (1/q_{k+1} - 1/q_k) for n > k (column k of the composed inverse)",
        "note": "The column form is the one with τ(s^(k)) = e^(k).",
    },
    "section-sup": {
        "topic": "dual norm as a sup over sections",
        "claimed": "‖a‖* = sup_n Σ_k |c_nk|",
        "computed": "the norm of x -> Σ a_k x_k is the terminal section (limit over n)",
        "note": "For q_k = 3^k, row 6 of riesz·delta-minus has section sup 4010/1093 while "
                "|τ_6(x)| <= ‖x‖; the derived variant uses the terminal section.",
    },
}


def entry(key: str) -> dict:
    return {"id": key, **ENTRIES[key]}


def is_unit_column_example(w: Weights, A) -> bool:
    ref = Geometric(3, 1, mode=w.mode)
    enc = getattr(A, "encoding", None)
    return w.seq == ref and enc == {"kind": "unit-column", "index": 1}


def unit_column_example(computed_limit=None, computed_co1i=None) -> dict:
    e = entry("unit-column-example")
    if computed_limit is not None:
        e["computed"] = dict(e["computed"], limit=format_scalar(computed_limit))
    if computed_co1i is not None:
        e["computed"] = dict(e["computed"], Co1i=format_scalar(computed_co1i))
    return e


# values asserted by the worked example, kept as numbers for tests and reports
CLAIMED_LIMIT = Fraction(7, 6)
CLAIMED_CO1I_BOUND = Fraction(2)
