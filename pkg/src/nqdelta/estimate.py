"""Finite-window estimates of infinite sups and limits.

Both drivers walk the policy's geometric checkpoints and stop at the first
checkpoint where a verdict is justified:

* a sup is *stable* when the running value has not moved by more than
  ``tol`` over the last ``window`` checkpoints;
* a sup is declared *divergent* when it passes ``divergence_threshold`` or
  when its last ``window`` increments are all positive and non-shrinking
  (growth at least logarithmic in the checkpoint index);
* a limit is *stable* when, over the last ``window`` blocks between
  checkpoints, the sequence oscillates by at most ``tol`` and the block
  levels agree within ``tol``;
* a limit is declared *divergent* when the block oscillation stops shrinking
  while staying above ``2 tol``, or when the terms run past the threshold.

Holds and Fails verdicts always carry at least ``window`` checkpoints.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .core import Mode, Outcome, Scalar, TruncationPolicy, Verdict, zero


def _growing(values: Sequence, window: int, tol) -> bool:
    if len(values) < window + 1:
        return False
    tail = values[-(window + 1):]
    incs = [b - a for a, b in zip(tail, tail[1:])]
    return all(d > tol for d in incs) and all(b >= a for a, b in zip(incs, incs[1:]))


def sup_scan(value_at: Callable[[int], Scalar], policy: TruncationPolicy, mode: Mode,
             *, label: str = "sup", after: int = -1) -> Verdict:
    """Estimate ``lim_N value_at(N)`` for a quantity nondecreasing in ``N``.

    ``value_at(N)`` is the sup over the finite window ending at ``N``; callers
    are expected to cache work between calls.  Checkpoints ``<= after`` are
    skipped (their windows are empty).
    """
    tol = policy.tolerance(mode)
    cps: list = []
    for N in policy.checkpoints():
        if N <= after:
            continue
        val = value_at(N)
        cps.append((N, val))
        if len(cps) < policy.window:
            continue
        vals = [v for _, v in cps]
        recent = vals[-policy.window:]
        if val > policy.divergence_threshold:
            return Verdict(Outcome.FAILS, val, cps, f"exceeds divergence threshold {policy.divergence_threshold:g}", label)
        if max(recent) - min(recent) <= tol:
            return Verdict(Outcome.HOLDS, val, cps, f"stable over {policy.window} checkpoints", label)
        if _growing(vals, policy.window, tol):
            return Verdict(Outcome.FAILS, val, cps, "running sup grows without shrinking increments", label)
    if not cps:
        return Verdict(Outcome.INCONCLUSIVE, None, cps, f"no checkpoint beyond {after}", label)
    return Verdict(Outcome.INCONCLUSIVE, cps[-1][1], cps, "not stable at n_max", label)


def limit_scan(block: Callable[[int, int], list], policy: TruncationPolicy, mode: Mode, *,
               label: str = "limit", to_zero: bool = False, start: int = 0) -> Verdict:
    """Estimate ``lim_n t_n`` where ``block(lo, hi)`` returns ``[t_lo, ..., t_hi]``.

    With ``to_zero`` the limit must additionally be within ``tol`` of 0; a
    stable limit bounded away from zero (``> 2 tol``) Fails.
    """
    tol = policy.tolerance(mode)
    cps: list = []
    oscs: list = []
    levels: list = []
    lo = start
    for N in policy.checkpoints():
        if N < lo:
            continue
        vals = block(lo, N)
        lo = N + 1
        level = vals[-1]
        oscs.append(max(vals) - min(vals))
        levels.append(level)
        cps.append((N, level))
        if len(cps) < policy.window:
            continue
        big = max(abs(v) for v in vals)
        if big > policy.divergence_threshold:
            return Verdict(Outcome.FAILS, level, cps, "terms exceed divergence threshold", label)
        recent_osc = oscs[-policy.window:]
        recent_lvl = levels[-policy.window:]
        settled = max(recent_osc) <= tol and max(recent_lvl) - min(recent_lvl) <= tol
        if settled:
            if not to_zero or abs(level) <= tol:
                return Verdict(Outcome.HOLDS, level, cps, f"settled over {policy.window} blocks", label)
            if abs(level) > 2 * tol:
                return Verdict(Outcome.FAILS, level, cps, "limit exists but is not zero", label)
        elif all(o > 2 * tol for o in recent_osc) and all(b >= a for a, b in zip(recent_osc, recent_osc[1:])):
            return Verdict(Outcome.FAILS, level, cps, "oscillation does not shrink", label)
    est = levels[-1] if levels else None
    return Verdict(Outcome.INCONCLUSIVE, est, cps, "not settled at n_max", label)


def bounded_scan(block: Callable[[int, int], list], policy: TruncationPolicy, mode: Mode, *,
                 label: str = "bounded") -> Verdict:
    """ℓ∞ test: the running max of ``|t_n|`` must stabilize."""
    state = {"lo": 0, "best": zero(mode)}

    def value_at(N):
        if N >= state["lo"]:
            vals = block(state["lo"], N)
            state["lo"] = N + 1
            state["best"] = max([state["best"], *(abs(v) for v in vals)])
        return state["best"]

    return sup_scan(value_at, policy, mode, label=label)
