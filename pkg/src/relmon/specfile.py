"""JSON spec files: a finite category, named functors, optional payloads.

A spec is validated in two layers: :data:`SCHEMA` (structure; unknown keys
rejected) and :func:`load_spec` (indices in range, shapes consistent).  Both
raise :class:`SpecError` carrying a JSON pointer to the offending value.
Embedded categories, functors and payloads are law-checked by
:func:`check_spec` before anything is computed from them.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .endo import Compose, Const, Identity, Plus, Poly, Power, Powerset, SetEndo, Times
from .fincat import FinCat, FunctorData, check_category, check_functor, from_tables, functor, inclusion, subuniverse
from .finset import FinFn, FinSet, fn_count
from .report import Report

SCHEMA_VERSION = "relmon/1"

_NAT = {"type": "integer", "minimum": 0}
_TABLE = {"type": "array", "items": _NAT}
_TABLES = {"type": "array", "items": _TABLE}


def _obj(props: dict, required: list[str]) -> dict:
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


_ENDO = {
    "oneOf": [
        _obj({"identity": {"type": "object", "maxProperties": 0}}, ["identity"]),
        _obj({"const": _NAT}, ["const"]),
        _obj({"plus": _NAT}, ["plus"]),
        _obj({"times": _NAT}, ["times"]),
        _obj({"power": _NAT}, ["power"]),
        _obj({"poly": {"type": "array", "items": {"type": "array", "items": _NAT, "minItems": 2, "maxItems": 2}}}, ["poly"]),
        _obj({"powerset": {"type": "object", "maxProperties": 0}}, ["powerset"]),
        _obj({"compose": {"type": "array", "items": {"$ref": "#/$defs/endo"}, "minItems": 2, "maxItems": 2}}, ["compose"]),
    ]
}

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {"endo": _ENDO},
    **_obj(
        {
            "schema": {"const": SCHEMA_VERSION},
            "name": {"type": "string"},
            "category": {
                "oneOf": [
                    _obj({"subuniverse": _obj({"sizes": {"type": "array", "items": _NAT, "uniqueItems": True}}, ["sizes"])}, ["subuniverse"]),
                    _obj(
                        {
                            "objects": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
                            "homs": {"type": "array", "items": _obj({"src": {"type": "string"}, "tgt": {"type": "string"}, "count": _NAT}, ["src", "tgt", "count"])},
                            "compose": {
                                "type": "array",
                                "items": _obj(
                                    {"src": {"type": "string"}, "mid": {"type": "string"}, "tgt": {"type": "string"}, "table": _TABLES},
                                    ["src", "mid", "tgt", "table"],
                                ),
                            },
                            "identities": {"type": "object", "additionalProperties": _NAT},
                        },
                        ["objects", "homs", "compose", "identities"],
                    ),
                ]
            },
            "functors": {
                "type": "object",
                "additionalProperties": {
                    "oneOf": [
                        _obj({"inclusion": {"type": "object", "maxProperties": 0}}, ["inclusion"]),
                        _obj({"endo": {"$ref": "#/$defs/endo"}, "after": {"type": "string"}}, ["endo", "after"]),
                        _obj(
                            {
                                "table": _obj(
                                    {
                                        "sizes": {"type": "object", "additionalProperties": _NAT},
                                        "arrows": {
                                            "type": "array",
                                            "items": _obj({"src": {"type": "string"}, "tgt": {"type": "string"}, "maps": _TABLES}, ["src", "tgt", "maps"]),
                                        },
                                    },
                                    ["sizes", "arrows"],
                                )
                            },
                            ["table"],
                        ),
                    ]
                },
            },
            "relmon": {
                "oneOf": [
                    _obj({"along": {"type": "string"}, "monad": {"enum": ["identity", "maybe", "powerset"]}}, ["along", "monad"]),
                    _obj(
                        {
                            "along": {"type": "string"},
                            "T": {"type": "object", "additionalProperties": _NAT},
                            "unit": {"type": "object", "additionalProperties": _TABLE},
                            "star": {
                                "type": "array",
                                "items": _obj({"src": {"type": "string"}, "tgt": {"type": "string"}, "tables": _TABLES}, ["src", "tgt", "tables"]),
                            },
                        },
                        ["along", "T", "unit", "star"],
                    ),
                ]
            },
            "arrow": {
                "oneOf": [
                    _obj({"builtin": {"enum": ["function", "maybe", "powerset"]}}, ["builtin"]),
                    _obj({"builtin": {"const": "state"}, "states": {"type": "integer", "minimum": 1}}, ["builtin", "states"]),
                    _obj(
                        {
                            "R": {"type": "array", "items": _obj({"src": {"type": "string"}, "tgt": {"type": "string"}, "size": _NAT}, ["src", "tgt", "size"])},
                            "pure": {"type": "array", "items": _obj({"src": {"type": "string"}, "tgt": {"type": "string"}, "table": _TABLE}, ["src", "tgt", "table"])},
                            "comp": {
                                "type": "array",
                                "items": _obj(
                                    {"src": {"type": "string"}, "mid": {"type": "string"}, "tgt": {"type": "string"}, "table": _TABLES},
                                    ["src", "mid", "tgt", "table"],
                                ),
                            },
                        },
                        ["R", "pure", "comp"],
                    ),
                ]
            },
        },
        ["schema", "category"],
    ),
}


class SpecError(ValueError):
    """An invalid spec; ``pointer`` is a JSON pointer into the document."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


def _ptr(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class Spec:
    doc: dict
    category: FinCat
    functors: dict[str, FunctorData] = field(default_factory=dict)
    relmon: Any = None
    arrow: Any = None


def validate(doc: Any) -> None:
    """Schema check; the error names the deepest failing location."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = list(validator.iter_errors(doc))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise SpecError(err.message, _ptr(*err.absolute_path))


def _object(c: FinCat, name: str, pointer: str):
    for x in c.objects:
        if str(x) == name:
            return x
    raise SpecError(f"unknown object {name!r}", pointer)


def _array(rows, shape: tuple[int, int], bound: int, pointer: str) -> np.ndarray:
    a = np.asarray(rows, dtype=np.int64).reshape(-1) if rows else np.zeros(0, dtype=np.int64)
    if a.size != shape[0] * shape[1] or (rows and any(len(r) != shape[1] for r in rows)) or (not rows and shape[0] != 0):
        raise SpecError(f"expected a {shape[0]}×{shape[1]} table", pointer)
    if a.size and (a.min() < 0 or a.max() >= bound):
        raise SpecError(f"entry out of range 0..{bound - 1}", pointer)
    return a.reshape(shape)


def _category(doc: dict) -> FinCat:
    cat = doc["category"]
    if "subuniverse" in cat:
        try:
            return subuniverse(cat["subuniverse"]["sizes"])
        except ValueError as e:
            raise SpecError(str(e), "/category/subuniverse/sizes") from None
    objs = cat["objects"]
    homs: dict[tuple, int] = {}
    for i, h in enumerate(cat["homs"]):
        p = _ptr("category", "homs", i)
        if h["src"] not in objs or h["tgt"] not in objs:
            raise SpecError("unknown object", p)
        homs[(h["src"], h["tgt"])] = h["count"]
    for x in objs:
        for y in objs:
            homs.setdefault((x, y), 0)
    comp: dict[tuple, np.ndarray] = {}
    for i, e in enumerate(cat["compose"]):
        p = _ptr("category", "compose", i)
        x, y, z = e["src"], e["mid"], e["tgt"]
        if not {x, y, z} <= set(objs):
            raise SpecError("unknown object", p)
        comp[(x, y, z)] = _array(e["table"], (homs[(y, z)], homs[(x, y)]), max(homs[(x, z)], 1), p + "/table")
    for x in objs:
        for y in objs:
            for z in objs:
                if (x, y, z) not in comp:
                    if homs[(x, y)] * homs[(y, z)]:
                        raise SpecError(f"missing composition table for ({x}, {y}, {z})", "/category/compose")
                    comp[(x, y, z)] = np.zeros((homs[(y, z)], homs[(x, y)]), dtype=np.int64)
    ids = {}
    for x in objs:
        if x not in cat["identities"] or cat["identities"][x] >= homs[(x, x)]:
            raise SpecError(f"missing or out-of-range identity for {x!r}", _ptr("category", "identities", x))
        ids[x] = cat["identities"][x]
    extra = set(cat["identities"]) - set(objs)
    if extra:
        raise SpecError("unknown object", _ptr("category", "identities", sorted(extra)[0]))
    return from_tables(objs, homs, comp, ids, name=doc.get("name", "spec"))


def _endo(e: dict, pointer: str) -> SetEndo:
    match e:
        case {"identity": _}:
            return Identity()
        case {"const": k}:
            return Const(k)
        case {"plus": k}:
            return Plus(k)
        case {"times": s}:
            return Times(s)
        case {"power": s}:
            return Power(s)
        case {"poly": terms}:
            return Poly(tuple((c, x) for c, x in terms))
        case {"powerset": _}:
            return Powerset()
        case {"compose": [outer, inner]}:
            return Compose(_endo(outer, pointer + "/compose/0"), _endo(inner, pointer + "/compose/1"))
    raise SpecError("unknown endofunctor", pointer)


def _functors(doc: dict, c: FinCat) -> dict[str, FunctorData]:
    raw = doc.get("functors", {})
    out: dict[str, FunctorData] = {}
    visiting: set[str] = set()

    def build(name: str, pointer: str) -> FunctorData:
        if name in out:
            return out[name]
        if name == "inclusion" and name not in raw:
            return concrete_inclusion(c, pointer)
        if name not in raw:
            raise SpecError(f"unknown functor {name!r}", pointer)
        if name in visiting:
            raise SpecError(f"functor {name!r} is defined in terms of itself", pointer)
        visiting.add(name)
        p = _ptr("functors", name)
        f = raw[name]
        if "inclusion" in f:
            F = concrete_inclusion(c, p)
        elif "endo" in f:
            F = _endo(f["endo"], p + "/endo").after(build(f["after"], p + "/after"))
        else:
            F = _table_functor(c, f["table"], p + "/table")
        F = dataclasses.replace(F, name=name)
        out[name] = F
        visiting.discard(name)
        return F

    for name in raw:
        build(name, _ptr("functors", name))
    return out


def concrete_inclusion(c: FinCat, pointer: str) -> FunctorData:
    if c.sizes is None:
        raise SpecError("inclusion needs a subuniverse category", pointer)
    return inclusion(c)


def _table_functor(c: FinCat, t: dict, pointer: str) -> FunctorData:
    sizes = {}
    for key, n in t["sizes"].items():
        sizes[_object(c, key, pointer + _ptr("sizes", key))] = n
    missing = [x for x in c.objects if x not in sizes]
    if missing:
        raise SpecError(f"no size for object {missing[0]!r}", pointer + "/sizes")
    tables = {}
    for i, a in enumerate(t["arrows"]):
        p = pointer + _ptr("arrows", i)
        x, y = _object(c, a["src"], p + "/src"), _object(c, a["tgt"], p + "/tgt")
        tables[(x, y)] = _array(a["maps"], (c.homs[(x, y)], sizes[x]), max(sizes[y], 1), p + "/maps")
    for x, y in c.pairs():
        if (x, y) not in tables:
            if c.homs[(x, y)] and sizes[x]:
                raise SpecError(f"missing arrow tables for ({x}, {y})", pointer + "/arrows")
            tables[(x, y)] = np.zeros((c.homs[(x, y)], sizes[x]), dtype=np.int64)
    return functor(c, sizes, tables)


def _relmon(doc: dict, c: FinCat, functors: dict[str, FunctorData]):
    from .instances.vec import IDENTITY, MAYBE, POWERSET
    from .relmonad import RelMonadData, restrict

    r = doc["relmon"]
    if r["along"] not in functors:
        raise SpecError(f"unknown functor {r['along']!r}", "/relmon/along")
    J = functors[r["along"]]
    if "monad" in r:
        m = {"identity": IDENTITY, "maybe": MAYBE, "powerset": POWERSET}[r["monad"]]
        return restrict(m, J, name=f"{r['monad']}♭")
    T = {}
    for x in c.objects:
        if str(x) not in r["T"]:
            raise SpecError(f"no size for object {x!r}", "/relmon/T")
        T[x] = FinSet(r["T"][str(x)])
    unit = {}
    for x in c.objects:
        p = _ptr("relmon", "unit", x)
        if str(x) not in r["unit"]:
            raise SpecError("missing unit", p)
        row = _array([r["unit"][str(x)]], (1, J.obj[x].size), max(T[x].size, 1), p)[0]
        unit[x] = FinFn(J.obj[x], T[x], tuple(int(v) for v in row))
    star: dict[tuple, np.ndarray] = {}
    for i, s in enumerate(r["star"]):
        p = _ptr("relmon", "star", i)
        x, y = _object(c, s["src"], p + "/src"), _object(c, s["tgt"], p + "/tgt")
        star[(x, y)] = _array(s["tables"], (fn_count(J.obj[x].size, T[y].size), T[x].size), max(T[y].size, 1), p + "/tables")
    missing = [(x, y) for x in c.objects for y in c.objects if (x, y) not in star]
    if missing:
        raise SpecError(f"missing extension tables for {missing[0]}", "/relmon/star")

    def star_op(x, y, k: FinFn) -> FinFn:
        return FinFn(T[x], T[y], tuple(int(v) for v in star[(x, y)][k.index]))

    return RelMonadData(c, J, T, unit, star_op, name=doc.get("name", "spec-relmon"))


def _arrow(doc: dict, c: FinCat):
    from . import arrows as ar

    a = doc["arrow"]
    if "builtin" in a:
        if c.sizes is None:
            raise SpecError("builtin arrows need a subuniverse category", "/arrow/builtin")
        match a["builtin"]:
            case "function":
                return ar.function_arrow(c)
            case "maybe":
                return ar.maybe_arrow(c)
            case "powerset":
                return ar.powerset_arrow(c)
            case "state":
                return ar.state_arrow(a["states"], c)
    R: dict[tuple, int] = {}
    for i, e in enumerate(a["R"]):
        p = _ptr("arrow", "R", i)
        R[(_object(c, e["src"], p + "/src"), _object(c, e["tgt"], p + "/tgt"))] = e["size"]
    missing = [pr for pr in c.pairs() if pr not in R]
    if missing:
        raise SpecError(f"no size for pair {missing[0]}", "/arrow/R")
    pure = {}
    for i, e in enumerate(a["pure"]):
        p = _ptr("arrow", "pure", i)
        x, y = _object(c, e["src"], p + "/src"), _object(c, e["tgt"], p + "/tgt")
        pure[(x, y)] = _array([e["table"]], (1, c.homs[(x, y)]), max(R[(x, y)], 1), p + "/table")[0]
    comp = {}
    for i, e in enumerate(a["comp"]):
        p = _ptr("arrow", "comp", i)
        x, y, z = (_object(c, e[k], p + "/" + k) for k in ("src", "mid", "tgt"))
        comp[(x, y, z)] = _array(e["table"], (R[(y, z)], R[(x, y)]), max(R[(x, z)], 1), p + "/table")
    for x, y in c.pairs():
        pure.setdefault((x, y), np.zeros(0, dtype=np.int64))
        if len(pure[(x, y)]) != c.homs[(x, y)]:
            raise SpecError(f"missing pure table for ({x}, {y})", "/arrow/pure")
    for x in c.objects:
        for y in c.objects:
            for z in c.objects:
                if (x, y, z) not in comp:
                    if R[(x, y)] * R[(y, z)]:
                        raise SpecError(f"missing composition table for ({x}, {y}, {z})", "/arrow/comp")
                    comp[(x, y, z)] = np.zeros((R[(y, z)], R[(x, y)]), dtype=np.int64)
    return ar.ArrowData(c, R, pure, comp, doc.get("name", "spec-arrow"))


def load_spec(source: str | Path | dict) -> Spec:
    """Parse, schema-check and build a spec (without law-checking it)."""
    if isinstance(source, dict):
        doc = source
    else:
        try:
            doc = json.loads(Path(source).read_text(encoding="utf-8"))
        except OSError as e:
            raise SpecError(f"cannot read spec: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise SpecError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    validate(doc)
    c = _category(doc)
    spec = Spec(doc, c, _functors(doc, c))
    if "relmon" in doc:
        spec.relmon = _relmon(doc, c, spec.functors)
    if "arrow" in doc:
        spec.arrow = _arrow(doc, c)
    return spec


def check_spec(spec: Spec, functors: list[str] | None = None, payloads: bool = True) -> Report:
    """Category laws, functor laws, and the laws of any embedded payload."""
    from .arrows import check_arrow_laws
    from .relmonad import check_functor_action, check_relmonad_laws

    rep = Report()
    rep.extend(check_category(spec.category), prefix="spec/category")
    names = sorted(spec.functors) if functors is None else functors
    for name in names:
        rep.extend(check_functor(spec.functors[name]), prefix=f"spec/functor[{name}]")
    if payloads and spec.relmon is not None:
        rep.extend(check_relmonad_laws(spec.relmon), prefix="spec/relmon")
        rep.extend(check_functor_action(spec.relmon), prefix="spec/relmon")
    if payloads and spec.arrow is not None:
        rep.extend(check_arrow_laws(spec.arrow), prefix="spec/arrow")
    return rep
