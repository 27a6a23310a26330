"""JSON instance files: parsing, validation and serialization.

Every file is an object with a ``kind`` (laurent, toric, delzant or mutation),
the payload for that kind and an optional ``options`` object.  Rationals are
"p/q" strings or integers; series use the literal form
``{"terms": [["1/2", 3.0]], "trunc": "2"}`` or a bare number for a constant.

    {"kind": "laurent", "dim": 1,
     "terms": [{"coeff": 1, "exp": [1]}, {"coeff": {"terms": [[1, 1.0]]}, "exp": [-1]}]}
    {"kind": "toric", "rays": [[1, 0], [0, 1], [-1, -1]], "coeffs": [1, 1, 1]}
    {"kind": "delzant", "facets": [{"normal": [1, 0], "constant": 0}, ...]}
    {"kind": "delzant", "simplex": 3}
    {"kind": "mutation", "W": {...laurent payload...},
     "mutation": {"k": 0, "a": 1, "alpha": [0, 0], "b": {...}, "beta": [0, 1]}}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .mutation import Mutation
from .series import PuiseuxSeries, as_fraction
from .toric import DelzantInstance, ToricInstance
from .tropical import LaurentPoly

KINDS = ("laurent", "toric", "delzant", "mutation")
OPTION_KEYS = {"trunc_order", "tol", "seed", "points"}


@dataclass(frozen=True)
class Instance:
    kind: str
    payload: object
    options: dict = field(default_factory=dict)

    def __eq__(self, other):
        return isinstance(other, Instance) and dump_instance(self) == dump_instance(other)

    def __hash__(self):
        return hash(json.dumps(dump_instance(self), sort_keys=True))


# -- primitives -------------------------------------------------------------
def rat_str(x) -> str:
    return str(Fraction(x))


def coeff_num(c: float) -> float:
    """A coefficient rounded to 17 significant digits (lossless for doubles)."""
    return float(f"{float(c):.17g}")


def _rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"{where}: expected an integer or a 'p/q' string, got {x!r}")
    try:
        return as_fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _rvec(xs, where: str) -> tuple:
    if not isinstance(xs, list) or not xs:
        raise ParseError(f"{where}: expected a nonempty list")
    return tuple(_rational(x, f"{where}[{i}]") for i, x in enumerate(xs))


def _series(obj, where: str) -> PuiseuxSeries:
    try:
        if isinstance(obj, dict):
            for item in obj.get("terms", []):
                if isinstance(item, list) and item:
                    _rational(item[0], f"{where} exponent")
        return PuiseuxSeries.from_literal(obj)
    except ParseError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _series_literal(s: PuiseuxSeries) -> dict:
    out = {"terms": [[rat_str(e), coeff_num(c)] for e, c in s.terms]}
    if s.trunc != float("inf"):
        out["trunc"] = rat_str(s.trunc)
    return out


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


# -- payloads -----------------------------------------------------------------
def parse_laurent(obj, where: str = "W") -> LaurentPoly:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    terms = _require(obj, "terms", where)
    if not isinstance(terms, list) or not terms:
        raise ParseError(f"{where}.terms: expected a nonempty list")
    pairs = []
    for i, t in enumerate(terms):
        w = f"{where}.terms[{i}]"
        if isinstance(t, dict):
            coeff, exp = _require(t, "coeff", w), _require(t, "exp", w)
        elif isinstance(t, list) and len(t) == 2:
            coeff, exp = t
        else:
            raise ParseError(f"{w}: expected {{'coeff', 'exp'}} or [coeff, exp]")
        pairs.append((_series(coeff, f"{w}.coeff"), _rvec(exp, f"{w}.exp")))
    dim = obj.get("dim", len(pairs[0][1]))
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{where}.dim: expected a positive integer")
    if any(len(v) != dim for _, v in pairs):
        raise ParseError(f"{where}: exponent vectors must all have length {dim}")
    try:
        return LaurentPoly.from_terms(dim, pairs)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def dump_laurent(W: LaurentPoly) -> dict:
    return {
        "dim": W.dim,
        "terms": [{"coeff": _series_literal(g), "exp": [rat_str(x) for x in v]} for g, v in W.terms],
    }


def _parse_toric(obj) -> ToricInstance:
    rays = _require(obj, "rays", "toric")
    coeffs = _require(obj, "coeffs", "toric")
    if not isinstance(rays, list) or not isinstance(coeffs, list):
        raise ParseError("toric: rays and coeffs must be lists")
    rs = [_rvec(r, f"rays[{i}]") for i, r in enumerate(rays)]
    cs = [_rational(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)]
    if len({len(r) for r in rs}) != 1:
        raise ParseError("toric: rays must share one dimension")
    try:
        return ToricInstance.make(rs, cs)
    except ValueError as exc:
        raise ParseError(f"toric: {exc}") from None


def _parse_delzant(obj) -> DelzantInstance:
    try:
        if "simplex" in obj:
            r = obj["simplex"]
            if isinstance(r, bool) or not isinstance(r, int) or r < 1:
                raise ParseError("delzant.simplex: expected a positive integer")
            return DelzantInstance.simplex(r)
        if "box" in obj:
            return DelzantInstance.box(_rvec(obj["box"], "delzant.box"))
        facets = _require(obj, "facets", "delzant")
        if not isinstance(facets, list) or not facets:
            raise ParseError("delzant.facets: expected a nonempty list")
        pairs = []
        for i, f in enumerate(facets):
            w = f"facets[{i}]"
            if isinstance(f, dict):
                pairs.append((_rvec(_require(f, "normal", w), f"{w}.normal"),
                              _rational(_require(f, "constant", w), f"{w}.constant")))
            elif isinstance(f, list) and len(f) == 2:
                pairs.append((_rvec(f[0], f"{w}.normal"), _rational(f[1], f"{w}.constant")))
            else:
                raise ParseError(f"{w}: expected {{'normal', 'constant'}} or [normal, constant]")
        if len({len(v) for v, _ in pairs}) != 1:
            raise ParseError("delzant: facet normals must share one dimension")
        return DelzantInstance.make(pairs)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"delzant: {exc}") from None


def _parse_mutation(obj):
    W = parse_laurent(_require(obj, "W", "mutation"), "W")
    m = _require(obj, "mutation", "mutation")
    if not isinstance(m, dict):
        raise ParseError("mutation.mutation: expected an object")
    k = _require(m, "k", "mutation")
    if isinstance(k, bool) or not isinstance(k, int):
        raise ParseError("mutation.k: expected an integer")
    a = _series(_require(m, "a", "mutation"), "mutation.a")
    alpha = _rvec(_require(m, "alpha", "mutation"), "mutation.alpha")
    b = _series(m["b"], "mutation.b") if "b" in m else None
    beta = _rvec(m["beta"], "mutation.beta") if "beta" in m else None
    try:
        mu = Mutation.make(W.dim, k, a, alpha, b, beta)
    except ValueError as exc:
        raise ParseError(f"mutation: {exc}") from None
    return W, mu


def _dump_mutation(mu: Mutation) -> dict:
    out = {"k": mu.k, "a": _series_literal(mu.a), "alpha": [rat_str(x) for x in mu.alpha]}
    if mu.b is not None:
        out["b"] = _series_literal(mu.b)
        out["beta"] = [rat_str(x) for x in mu.beta]
    return out


def _parse_options(obj) -> dict:
    opts = obj.get("options", {})
    if not isinstance(opts, dict):
        raise ParseError("options: expected an object")
    unknown = set(opts) - OPTION_KEYS
    if unknown:
        raise ParseError(f"options: unknown keys {sorted(unknown)}")
    out = {}
    if "trunc_order" in opts:
        out["trunc_order"] = _rational(opts["trunc_order"], "options.trunc_order")
        if not out["trunc_order"] > 0:
            raise ParseError("options.trunc_order must be positive")
    if "tol" in opts:
        if isinstance(opts["tol"], bool) or not isinstance(opts["tol"], (int, float)) or opts["tol"] <= 0:
            raise ParseError("options.tol: expected a positive number")
        out["tol"] = float(opts["tol"])
    if "seed" in opts:
        if isinstance(opts["seed"], bool) or not isinstance(opts["seed"], int):
            raise ParseError("options.seed: expected an integer")
        out["seed"] = opts["seed"]
    if "points" in opts:
        if not isinstance(opts["points"], list):
            raise ParseError("options.points: expected a list of rational vectors")
        out["points"] = [_rvec(p, f"options.points[{i}]") for i, p in enumerate(opts["points"])]
    return out


def _dump_options(opts: dict) -> dict:
    out = {}
    if "trunc_order" in opts:
        out["trunc_order"] = rat_str(opts["trunc_order"])
    if "tol" in opts:
        out["tol"] = coeff_num(opts["tol"])
    if "seed" in opts:
        out["seed"] = int(opts["seed"])
    if "points" in opts:
        out["points"] = [[rat_str(x) for x in p] for p in opts["points"]]
    return out


# -- entry points ---------------------------------------------------------------
def parse_instance(obj) -> Instance:
    """Validate a decoded JSON object and build the typed instance."""
    if not isinstance(obj, dict):
        raise ParseError("instance: expected a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise ParseError(f"instance.kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    if kind == "laurent":
        payload = parse_laurent(obj, "W")
    elif kind == "toric":
        payload = _parse_toric(obj)
    elif kind == "delzant":
        payload = _parse_delzant(obj)
    else:
        payload = _parse_mutation(obj)
    return Instance(kind, payload, _parse_options(obj))


def dump_instance(inst: Instance) -> dict:
    """Canonical JSON form; ``parse_instance(dump_instance(x)) == x``."""
    out: dict = {"kind": inst.kind}
    if inst.kind == "laurent":
        out.update(dump_laurent(inst.payload))
    elif inst.kind == "toric":
        out["rays"] = [[rat_str(x) for x in r] for r in inst.payload.rays]
        out["coeffs"] = [rat_str(c) for c in inst.payload.coeffs]
    elif inst.kind == "delzant":
        out["facets"] = [
            {"normal": [rat_str(x) for x in v], "constant": rat_str(c)}
            for v, c in zip(inst.payload.normals, inst.payload.constants)
        ]
    else:
        W, mu = inst.payload
        out["W"] = dump_laurent(W)
        out["mutation"] = _dump_mutation(mu)
    if inst.options:
        out["options"] = _dump_options(inst.options)
    return out


def loads(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return parse_instance(obj)


def load(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)


def dumps(inst: Instance) -> str:
    return json.dumps(dump_instance(inst), indent=2, sort_keys=True)
