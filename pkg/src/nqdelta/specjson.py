"""JSON problem specs: weights, an optional matrix and sequence, a policy.

Sequences and matrices are tagged objects ``{"kind": ..., ...}``.  Kinds that
depend on the weights (``riesz``, ``basis``, ...) take them from the enclosing
spec.  ``ProblemSpec.to_json`` emits the normalized form, which decodes back
to an equivalent spec.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any

from .core import (Constant, Explicit, Geometric, InvalidWeightsError, Linear, Mode, Power,
                   SequenceSpec, TruncationPolicy, Unit, Weights, format_scalar, to_scalar)
from .spaces import basis_vector, limit_vector
from . import triangle as tri


class SpecError(ValueError):
    """A problem spec that is well-formed JSON but not a valid spec."""

    def __init__(self, path: str, msg: str):
        self.path = path
        super().__init__(f"{path}: {msg}")


SEQUENCE_KINDS = ("constant", "geometric", "power", "unit", "explicit", "linear", "basis", "image")
MATRIX_KINDS = ("identity", "zero", "delta-minus", "delta-minus-inverse", "riesz", "riesz-inverse",
                "nbar-delta", "composed-inverse", "unit-column", "diagonal", "explicit", "compose",
                "scaled")
PARAM_KEYS = ("N", "index", "space", "domain", "codomain", "target", "s_values")


def _need(obj, key, path):
    if not isinstance(obj, dict):
        raise SpecError(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SpecError(path, f"missing field {key!r}")
    return obj[key]


def _scalar(val, mode, path):
    try:
        return to_scalar(val, mode)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(path, f"bad scalar {val!r} ({exc})") from None


def _int(val, path):
    if isinstance(val, bool) or not isinstance(val, int):
        raise SpecError(path, f"expected an integer, got {val!r}")
    return val


def decode_sequence(obj, mode: Mode, w: Weights | None = None, path: str = "sequence") -> SequenceSpec:
    kind = _need(obj, "kind", path)
    p = f"{path}.{kind}"
    try:
        if kind == "constant":
            return Constant(_scalar(obj.get("value", 1), mode, p), mode)
        if kind == "geometric":
            return Geometric(_scalar(obj.get("ratio", 2), mode, p),
                             _scalar(obj.get("scale", 1), mode, p), mode)
        if kind == "power":
            return Power(_scalar(obj.get("exponent", 1), mode, p), mode)
        if kind == "unit":
            idx = _int(_need(obj, "index", p), p)
            if idx < 0:
                raise SpecError(p, "index must be >= 0")
            return Unit(idx, mode)
        if kind == "explicit":
            vals = _need(obj, "values", p)
            if not isinstance(vals, list):
                raise SpecError(p, "values must be a list")
            return Explicit(tuple(_scalar(v, mode, p) for v in vals), obj.get("tail", "zeros"), mode)
        if kind == "linear":
            terms = _need(obj, "terms", p)
            if not isinstance(terms, list) or not all(isinstance(t, list) and len(t) == 2 for t in terms):
                raise SpecError(p, "terms must be a list of [coefficient, sequence] pairs")
            return Linear(tuple((_scalar(c, mode, p), decode_sequence(s, mode, w, f"{p}[{i}]"))
                                for i, (c, s) in enumerate(terms)), mode)
        if kind == "basis":
            if w is None:
                raise SpecError(p, "basis vectors need weights")
            idx = _int(_need(obj, "index", p), p)
            if idx < -1:
                raise SpecError(p, "index must be >= -1")
            return limit_vector(w) if idx == -1 else basis_vector(w, idx)
        if kind == "image":
            mobj = _need(obj, "matrix", p)
            seq = decode_sequence(_need(obj, "seq", p), mode, w, f"{p}.seq")
            if isinstance(mobj, dict) and mobj.get("kind") == "composed-inverse":
                if w is None:
                    raise SpecError(p, "composed-inverse needs weights")
                return tri.composed_inverse_image(w, seq)
            return tri.image(decode_matrix(mobj, mode, w, f"{p}.matrix"), seq)
    except SpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise SpecError(p, str(exc)) from None
    raise SpecError(path, f"unknown sequence kind {kind!r}; expected one of {SEQUENCE_KINDS}")


def decode_matrix(obj, mode: Mode, w: Weights | None = None, path: str = "matrix"):
    kind = _need(obj, "kind", path)
    p = f"{path}.{kind}"

    def weights():
        if w is None:
            raise SpecError(p, f"{kind} needs weights")
        return w

    try:
        if kind == "identity":
            return tri.identity(mode)
        if kind == "zero":
            return tri.zero_matrix(mode)
        if kind == "delta-minus":
            return tri.make_delta_minus(mode)
        if kind == "delta-minus-inverse":
            return tri.make_delta_minus_inverse(mode)
        if kind == "riesz":
            return tri.make_riesz(weights())
        if kind == "riesz-inverse":
            return tri.make_riesz_inverse(weights())
        if kind == "nbar-delta":
            return tri.make_nbar_delta(weights())
        if kind == "composed-inverse":
            return tri.make_composed_inverse(weights())
        if kind == "unit-column":
            idx = _int(_need(obj, "index", p), p)
            if idx < 0:
                raise SpecError(p, "index must be >= 0")
            return tri.unit_column(idx, mode)
        if kind == "diagonal":
            return tri.diagonal(decode_sequence(_need(obj, "seq", p), mode, w, f"{p}.seq"))
        if kind == "explicit":
            rows = _need(obj, "rows", p)
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise SpecError(p, "rows must be a list of lists")
            if obj.get("tail", "zeros") != "zeros":
                raise SpecError(p, "explicit matrices only support tail 'zeros'")
            return tri.explicit_matrix([[_scalar(x, mode, p) for x in r] for r in rows], mode)
        if kind == "compose":
            parts = _need(obj, "of", p)
            if not isinstance(parts, list) or len(parts) < 2:
                raise SpecError(p, "'of' must list at least two matrices")
            mats = [decode_matrix(m, mode, w, f"{p}[{i}]") for i, m in enumerate(parts)]
            out = mats[-1]
            for m in reversed(mats[:-1]):
                out = tri.compose(m, out)
            return out
        if kind == "scaled":
            return tri.scaled(decode_matrix(_need(obj, "of", p), mode, w, f"{p}.of"),
                              _scalar(_need(obj, "factor", p), mode, p))
    except SpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise SpecError(p, str(exc)) from None
    raise SpecError(path, f"unknown matrix kind {kind!r}; expected one of {MATRIX_KINDS}")


def decode_policy(obj) -> TruncationPolicy:
    if obj is None:
        return TruncationPolicy()
    if not isinstance(obj, dict):
        raise SpecError("policy", "expected an object")
    allowed = {"n_start", "n_max", "growth", "window", "tol", "divergence_threshold"}
    extra = set(obj) - allowed
    if extra:
        raise SpecError("policy", f"unknown fields {sorted(extra)}")
    kw = dict(obj)
    if kw.get("tol") is not None:
        kw["tol"] = _scalar(kw["tol"], Mode.EXACT, "policy.tol")
    try:
        return TruncationPolicy(**kw)
    except (TypeError, ValueError) as exc:
        raise SpecError("policy", str(exc)) from None


# weights are checked on this prefix before any computation runs
VALIDATE_PREFIX = 64


@dataclass
class ProblemSpec:
    mode: Mode
    weights: Weights
    matrix: Any = None
    sequence: SequenceSpec | None = None
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    variant: str = "derived"
    params: dict = field(default_factory=dict)

    def with_overrides(self, **kw) -> "ProblemSpec":
        return replace(self, **kw)

    def to_json(self) -> dict:
        out = {
            "mode": self.mode.value,
            "weights": self.weights.to_json(),
            "policy": self.policy.to_json(),
            "variant": self.variant,
        }
        if self.matrix is not None:
            if self.matrix.encoding is None:
                raise TypeError("matrix has no JSON encoding")
            out["matrix"] = self.matrix.encoding
        if self.sequence is not None:
            out["sequence"] = self.sequence.to_json()
        out.update({k: v for k, v in self.params.items() if v is not None})
        return out


def parse_spec(obj, mode: Mode | str | None = None) -> ProblemSpec:
    """Decode and validate a problem spec; ``mode`` overrides the spec's own."""
    if not isinstance(obj, dict):
        raise SpecError("spec", "top level must be an object")
    known = {"mode", "weights", "matrix", "sequence", "policy", "variant", *PARAM_KEYS}
    extra = set(obj) - known
    if extra:
        raise SpecError("spec", f"unknown fields {sorted(extra)}")
    try:
        m = Mode(mode if mode is not None else obj.get("mode", "exact"))
    except ValueError:
        raise SpecError("mode", f"expected 'exact' or 'float', got {obj.get('mode')!r}") from None
    q = decode_sequence(_need(obj, "weights", "spec"), m, None, "weights")
    w = Weights(q)
    for k in range(VALIDATE_PREFIX + 1):
        val = q(k)
        if not val > 0:
            raise InvalidWeightsError(k, format_scalar(val))
    matrix = decode_matrix(obj["matrix"], m, w) if obj.get("matrix") is not None else None
    seq = decode_sequence(obj["sequence"], m, w) if obj.get("sequence") is not None else None
    policy = decode_policy(obj.get("policy"))
    variant = obj.get("variant", "derived")
    if variant not in ("derived", "printed"):
        raise SpecError("variant", f"expected 'derived' or 'printed', got {variant!r}")
    params = {k: obj[k] for k in PARAM_KEYS if k in obj}
    for key in ("N", "index"):
        if key in params:
            _int(params[key], key)
    if "s_values" in params:
        sv = params["s_values"]
        if not isinstance(sv, list) or not all(isinstance(s, int) and s >= 0 for s in sv):
            raise SpecError("s_values", "expected a list of integers >= 0")
    return ProblemSpec(m, w, matrix, seq, policy, variant, params)


def loads(text: str, mode: Mode | str | None = None) -> ProblemSpec:
    return parse_spec(json.loads(text), mode)
