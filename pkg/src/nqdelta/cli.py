"""nqdelta command-line front end.

Usage:
    nqdelta norm --spec problem.json
    nqdelta classify-compact --spec - --no-timestamp < example.json
    nqdelta dual-norm --spec a.json --float --nmax 1024 --format text

Exit status: 0 Holds / computed, 1 Fails, 2 Inconclusive, 3 and above for
input errors (see ``EXIT_CODES``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone

from . import __version__, discrepancies
from .classes import ClassQuery, UnsupportedClassError, class_membership
from .core import (InvalidWeightsError, ModeMismatchError, NqDeltaError, Outcome,
                   format_scalar, to_scalar)
from .duality import beta_dual_membership, dual_norm
from .mnc import Compactness, NotMemberError, classify_compact, mnc_bounds
from .spaces import SpaceTag, basis_vector, limit_vector, space_membership, space_norm, tau_transform
from .specjson import ProblemSpec, SpecError, parse_spec
from .triangle import SingularTriangleError, invert

COMMANDS = ("transform", "norm", "basis", "member", "beta-dual", "dual-norm", "class-check", "mnc",
            "classify-compact", "invert")

EXIT_CODES = {
    "usage": 3,
    "malformed-json": 4,
    "invalid-spec": 5,
    "invalid-weights": 6,
    "unsupported-class": 7,
    "singular-triangle": 8,
    "not-member": 9,
    "mode-mismatch": 10,
}

OUTCOME_EXIT = {Outcome.HOLDS: 0, Outcome.FAILS: 1, Outcome.INCONCLUSIVE: 2}
DEFAULT_N = 16


class InputError(Exception):
    def __init__(self, kind: str, msg: str):
        self.kind = kind
        super().__init__(msg)


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for Inconclusive
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CODES["usage"], f"{self.prog}: error[usage]: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nqdelta", description="Computations in the domains of the weighted-mean "
                                            "difference operator, driven by JSON problem specs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", required=True, help="problem spec file, or '-' for stdin")
    p.add_argument("--nmax", type=int, help="largest truncation index")
    p.add_argument("--tol", help="stabilization tolerance (number or 'p/q')")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="mode", action="store_const", const="exact")
    g.add_argument("--float", dest="mode", action="store_const", const="float")
    p.add_argument("--variant", choices=("derived", "printed"))
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--domain", help="domain tag: c0, c or linf (wrapped)")
    p.add_argument("--codomain", help="codomain tag: c0, c or linf")
    p.add_argument("--space", help="space tag for member / beta-dual")
    p.add_argument("-n", "--n", dest="N", type=int, help="number of terms for transform/basis/invert")
    p.add_argument("--index", type=int, help="basis index (-1 for the limit vector)")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generated_at field")
    return p


def load_spec(args) -> ProblemSpec:
    try:
        if args.spec == "-":
            text = sys.stdin.read()
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError("usage", f"cannot read spec: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("malformed-json", f"spec is not valid JSON: {exc}") from None
    spec = parse_spec(obj, args.mode)
    policy = spec.policy
    if args.nmax is not None:
        try:
            policy = replace(policy, n_max=args.nmax, n_start=min(policy.n_start, args.nmax))
        except ValueError as exc:
            raise SpecError("--nmax", str(exc)) from None
    if args.tol is not None:
        try:
            policy = replace(policy, tol=to_scalar(args.tol))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError("--tol", str(exc)) from None
    params = dict(spec.params)
    for key in ("domain", "codomain", "space", "N", "index"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    return replace(spec, policy=policy, variant=args.variant or spec.variant, params=params)


def _require(spec: ProblemSpec, what: str):
    obj = getattr(spec, what)
    if obj is None:
        raise SpecError(what, "required by this command")
    return obj


def _fmt(x):
    if isinstance(x, list):
        return [_fmt(y) for y in x]
    return None if x is None else format_scalar(x)


def _tag(spec, key, default=None):
    val = spec.params.get(key, default)
    if val is None:
        raise SpecError(key, "required by this command")
    return val


# --------------------------------------------------------------------------
# commands; each returns (outcome-or-None, result dict, verdicts, discrepancy entries)
# --------------------------------------------------------------------------


def cmd_transform(spec):
    x = _require(spec, "sequence")
    N = spec.params.get("N", DEFAULT_N)
    tau = tau_transform(spec.weights, x, N)
    return None, {"N": N, "tau": _fmt(list(tau.values))}, [], []


def cmd_norm(spec):
    x = _require(spec, "sequence")
    est, v = space_norm(spec.weights, x, spec.policy)
    return v.outcome, {"estimate": _fmt(est)}, [v], []


def cmd_basis(spec):
    w = spec.weights
    k = spec.params.get("index")
    if k is None:
        raise SpecError("index", "required by this command")
    if k < -1:
        raise SpecError("index", "must be >= -1")
    N = spec.params.get("N", DEFAULT_N)
    s = limit_vector(w) if k == -1 else basis_vector(w, k)
    tau = tau_transform(w, s, N).values
    expect = [1 if (k == -1 or n == k) else 0 for n in range(N + 1)]
    return None, {"index": k, "N": N, "terms": _fmt(s.terms(N)), "tau": _fmt(tau),
                  "tau_is_unit": all(t == e for t, e in zip(tau, expect))}, [], []


def cmd_member(spec):
    x = _require(spec, "sequence")
    tag = SpaceTag.parse(_tag(spec, "space", "c0"))
    v = space_membership(spec.weights, x, tag, spec.policy)
    return v.outcome, {"space": str(tag), "estimate": _fmt(v.estimate)}, [v], []


def cmd_beta_dual(spec):
    a = _require(spec, "sequence")
    tag = _tag(spec, "space", "c0")
    reps = {var: beta_dual_membership(spec.weights, a, tag, spec.policy, var)
            for var in ("derived", "printed")}
    main = reps[spec.variant]
    result = {"space": tag, "variant": spec.variant, "outcome": main.outcome.value,
              "derived": reps["derived"].to_json(), "printed": reps["printed"].to_json()}
    entries = []
    if reps["derived"].outcome is not reps["printed"].outcome:
        result["discrepancy"] = {"derived": reps["derived"].outcome.value,
                                 "printed": reps["printed"].outcome.value}
        entries.append(discrepancies.entry("c-matrix-display"))
    return main.outcome, result, list(main.sets.values()), entries


def cmd_dual_norm(spec):
    a = _require(spec, "sequence")
    vals = {var: dual_norm(spec.weights, a, spec.policy, var) for var in ("derived", "printed")}
    main_val, main_v = vals[spec.variant]
    result = {"variant": spec.variant, "value": _fmt(main_val.value)}
    for var, (dv, verdict) in vals.items():
        result[var] = {"value": _fmt(dv.value), "section_sup": _fmt(dv.sup), "argmax": dv.argmax,
                       "outcome": verdict.outcome.value}
    entries = []
    d, p = vals["derived"][0], vals["printed"][0]
    if d.value != p.value or d.sup != d.value:
        result["discrepancy"] = {"derived": _fmt(d.value), "printed": _fmt(p.value),
                                 "derived_section_sup": _fmt(d.sup)}
        entries.append(discrepancies.entry("c-matrix-display"))
        if d.sup != d.value:
            entries.append(discrepancies.entry("section-sup"))
    return main_v.outcome, result, [main_v], entries


def _query(spec):
    A = _require(spec, "matrix")
    return ClassQuery(A, _tag(spec, "domain"), _tag(spec, "codomain"), spec.weights, spec.policy,
                      spec.variant)


def cmd_class_check(spec):
    q = _query(spec)
    rep = class_membership(q)
    entries = []
    if discrepancies.is_unit_column_example(spec.weights, q.A):
        entries.append(discrepancies.unit_column_example(computed_co1i=rep.estimates.get("sup")))
    return rep.outcome, rep.to_json(), list(rep.conditions.values()), entries


def _s_values(spec):
    from .mnc import DEFAULT_S_VALUES
    return tuple(spec.params.get("s_values", DEFAULT_S_VALUES))


def cmd_mnc(spec):
    q = _query(spec)
    est = mnc_bounds(spec.weights, q.A, q.domain, q.codomain, spec.policy, spec.variant,
                     s_values=_s_values(spec))
    verdicts = [est.verdict] + ([] if est.membership is None else list(est.membership.conditions.values()))
    return est.verdict.outcome, est.to_json(), verdicts, list(est.discrepancies)


COMPACT_EXIT = {Compactness.COMPACT: 0, Compactness.NOT_COMPACT: 1, Compactness.INCONCLUSIVE: 2}


def cmd_classify_compact(spec):
    q = _query(spec)
    cv = classify_compact(spec.weights, q.A, q.domain, q.codomain, spec.policy, spec.variant)
    est = cv.estimate
    verdicts = [est.verdict] + ([] if est.membership is None else list(est.membership.conditions.values()))
    return cv.outcome, cv.to_json(), verdicts, list(est.discrepancies)


def cmd_invert(spec):
    A = _require(spec, "matrix")
    N = spec.params.get("N", DEFAULT_N)
    try:
        inv = invert(A, N)
    except ValueError as exc:
        raise SpecError("matrix", str(exc)) from None
    return None, {"N": N, "rows": [_fmt(inv.row(n, n)) for n in range(N + 1)]}, [], []


HANDLERS = {
    "transform": cmd_transform,
    "norm": cmd_norm,
    "basis": cmd_basis,
    "member": cmd_member,
    "beta-dual": cmd_beta_dual,
    "dual-norm": cmd_dual_norm,
    "class-check": cmd_class_check,
    "mnc": cmd_mnc,
    "classify-compact": cmd_classify_compact,
    "invert": cmd_invert,
}


def run(command: str, spec: ProblemSpec, *, timestamp: bool = True):
    """Run one command; returns ``(report dict, exit status)``."""
    outcome, result, verdicts, entries = HANDLERS[command](spec)
    if outcome is None:
        label, status = "computed", 0
    elif isinstance(outcome, Compactness):
        label, status = outcome.value, COMPACT_EXIT[outcome]
    else:
        label, status = outcome.value, OUTCOME_EXIT[outcome]
    policy = spec.policy.to_json()
    policy["tol"] = format_scalar(spec.policy.tolerance(spec.mode))
    report = {
        "command": command,
        "spec": spec.to_json(),
        "policy": policy,
        "outcome": label,
        "result": result,
        "verdicts": [v.to_json() for v in verdicts],
        "discrepancies": entries,
    }
    if timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report, status


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["label", "n", "value"])
        for v in report["verdicts"]:
            for n, val in v["checkpoints"]:
                wr.writerow([v["label"], n, val])
        return buf.getvalue()
    lines = [f"command   {report['command']}", f"outcome   {report['outcome']}"]
    for key, val in sorted(report["result"].items()):
        if isinstance(val, (dict, list)):
            val = json.dumps(val, ensure_ascii=False)
            if len(val) > 100:
                val = val[:97] + "..."
        lines.append(f"{key:<9} {val}")
    if report["verdicts"]:
        lines.append("")
        lines.append(f"{'check':<22} {'outcome':<13} {'estimate':<24} reason")
        for v in report["verdicts"]:
            est = "" if v["estimate"] is None else str(v["estimate"])
            lines.append(f"{v['label']:<22} {v['outcome']:<13} {est:<24} {v['reason']}")
    for e in report["discrepancies"]:
        lines.append("")
        lines.append(f"discrepancy [{e['id']}]: {e['topic']}")
    return "\n".join(lines) + "\n"


def _fail(kind: str, msg: str) -> int:
    sys.stderr.write(f"nqdelta: error[{kind}]: {msg}\n")
    return EXIT_CODES[kind]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args)
        report, status = run(args.command, spec, timestamp=not args.no_timestamp)
    except InputError as exc:
        return _fail(exc.kind, str(exc))
    except SpecError as exc:
        return _fail("invalid-spec", str(exc))
    except InvalidWeightsError as exc:
        return _fail("invalid-weights", str(exc))
    except UnsupportedClassError as exc:
        return _fail("unsupported-class", str(exc))
    except SingularTriangleError as exc:
        return _fail("singular-triangle", str(exc))
    except NotMemberError as exc:
        return _fail("not-member", str(exc))
    except ModeMismatchError as exc:
        return _fail("mode-mismatch", str(exc))
    except (NqDeltaError, ValueError) as exc:
        return _fail("invalid-spec", str(exc))
    sys.stdout.write(render(report, args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
