"""Token values: the data universe tokens and the global store draw from.

Scalars use native Python types (int, bool, str). Structured values get
small dedicated wrappers so that a list value, a tuple value and a record
value can never collide as dict keys, and so every value stays hashable
(markings are multisets keyed by value).

Two serializations are provided:

* ``value_to_json`` / ``value_from_json``: a self-describing JSON form
  used by state snapshots, traces and the HTTP service.
* ``pretty``: the compact human-readable form used for token chips and
  logs, e.g. ``(1,[1,2])``.

``canon_key(v)`` is the canonical JSON string of ``v``; sets, multisets
and stores are always ordered by it, which makes every serialized
artifact byte-reproducible.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from .multiset import Multiset

__all__ = [
    "Unit",
    "UNIT",
    "VList",
    "VRec",
    "Pointer",
    "Value",
    "canon_key",
    "canon_dumps",
    "value_to_json",
    "value_from_json",
    "pretty",
    "multiset_to_json",
    "multiset_from_json",
]


class Unit:
    """The single value of the unit type (indistinguishable tokens)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Unit)

    def __hash__(self) -> int:
        return hash(("unit",))


UNIT = Unit()


class VList:
    """A list value. Distinct from tuple values even with equal items."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable = ()):
        self.items = tuple(items)

    def __eq__(self, other) -> bool:
        return isinstance(other, VList) and self.items == other.items

    def __hash__(self) -> int:
        return hash(("list", self.items))

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __repr__(self) -> str:
        return f"VList({list(self.items)!r})"


class VRec:
    """A record value with named fields; field order is normalized."""

    __slots__ = ("fields",)

    def __init__(self, fields: dict | Iterable[tuple[str, Any]]):
        items = fields.items() if isinstance(fields, dict) else fields
        self.fields = tuple(sorted(items, key=lambda kv: kv[0]))

    def get(self, name: str):
        for k, v in self.fields:
            if k == name:
                return v
        raise KeyError(name)

    def with_field(self, name: str, value) -> "VRec":
        return VRec([(k, value if k == name else v) for k, v in self.fields])

    def __eq__(self, other) -> bool:
        return isinstance(other, VRec) and self.fields == other.fields

    def __hash__(self) -> int:
        return hash(("rec", self.fields))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.fields)
        return f"VRec({inner})"


class Pointer:
    """A reference token component: an opaque name into the global store."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other) -> bool:
        return isinstance(other, Pointer) and self.name == other.name

    def __hash__(self) -> int:
        return hash(("ptr", self.name))

    def __repr__(self) -> str:
        return f"Pointer({self.name!r})"


# A Value is: int | bool | str | Unit | tuple[Value, ...] | frozenset |
# VList | VRec | Pointer.  Tuples and frozensets use the native types.
Value = Any


def value_to_json(v: Value):
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return v
    if isinstance(v, Unit):
        return None
    if isinstance(v, tuple):
        return {"tuple": [value_to_json(x) for x in v]}
    if isinstance(v, frozenset):
        return {"set": sorted((value_to_json(x) for x in v), key=_json_key)}
    if isinstance(v, VList):
        return {"list": [value_to_json(x) for x in v.items]}
    if isinstance(v, VRec):
        return {"rec": {k: value_to_json(x) for k, x in v.fields}}
    if isinstance(v, Pointer):
        return {"ptr": v.name}
    raise TypeError(f"not a token value: {v!r}")


def value_from_json(j) -> Value:
    if j is None:
        return UNIT
    if isinstance(j, (bool, int, str)):
        return j
    if isinstance(j, dict) and len(j) == 1:
        tag, body = next(iter(j.items()))
        if tag == "tuple":
            return tuple(value_from_json(x) for x in body)
        if tag == "set":
            return frozenset(value_from_json(x) for x in body)
        if tag == "list":
            return VList(value_from_json(x) for x in body)
        if tag == "rec":
            return VRec({k: value_from_json(x) for k, x in body.items()})
        if tag == "ptr":
            return Pointer(body)
    raise ValueError(f"not a serialized value: {j!r}")


def canon_dumps(j) -> str:
    """Canonical JSON text: sorted keys, no whitespace."""
    return json.dumps(j, sort_keys=True, separators=(",", ":"))


def _json_key(j) -> str:
    return canon_dumps(j)


def canon_key(v: Value) -> str:
    """Total order key for values; used wherever output must be stable."""
    return canon_dumps(value_to_json(v))


def pretty(v: Value) -> str:
    """Compact display form: ``(1,[1,2])``, ``{2,3}``, ``{completed: {1}}``."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, Unit):
        return "()"
    if isinstance(v, tuple):
        return "(" + ",".join(pretty(x) for x in v) + ")"
    if isinstance(v, frozenset):
        return "{" + ",".join(pretty(x) for x in sorted(v, key=canon_key)) + "}"
    if isinstance(v, VList):
        return "[" + ",".join(pretty(x) for x in v.items) + "]"
    if isinstance(v, VRec):
        return "{" + ", ".join(f"{k}: {pretty(x)}" for k, x in v.fields) + "}"
    if isinstance(v, Pointer):
        return v.name
    raise TypeError(f"not a token value: {v!r}")


def multiset_to_json(ms: Multiset) -> list:
    """Multiset as a list of {value, count}, ordered by element key."""
    out = []
    for elem, count in ms.items_sorted(key=canon_key):
        out.append({"value": value_to_json(elem), "count": count})
    return out


def multiset_from_json(j: list) -> Multiset:
    counts: dict = {}
    for entry in j:
        v = value_from_json(entry["value"])
        count = entry.get("count", 1)
        counts[v] = counts.get(v, 0) + count
    return Multiset(counts)
