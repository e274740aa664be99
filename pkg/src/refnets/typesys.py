"""Static types for places, variables, constants and pointers."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "Type",
    "INT",
    "BOOL",
    "STR",
    "UNITT",
    "TupleType",
    "SetType",
    "ListType",
    "RecordType",
    "RefType",
    "type_str",
    "contains_ref",
]


class Type:
    """Base class; concrete types are frozen dataclasses below."""

    __slots__ = ()


@dataclass(frozen=True)
class _Prim(Type):
    name: str

    def __repr__(self) -> str:
        return self.name


INT = _Prim("int")
BOOL = _Prim("bool")
STR = _Prim("str")
UNITT = _Prim("unit")


@dataclass(frozen=True)
class TupleType(Type):
    items: tuple  # tuple[Type, ...], arity >= 1

    def __post_init__(self):
        if len(self.items) < 1:
            raise ValueError("tuple type needs at least one component")


@dataclass(frozen=True)
class SetType(Type):
    elem: Type


@dataclass(frozen=True)
class ListType(Type):
    elem: Type


@dataclass(frozen=True)
class RecordType(Type):
    fields: tuple  # tuple[(name, Type), ...], normalized by name

    def __init__(self, fields):
        items = fields.items() if isinstance(fields, dict) else fields
        object.__setattr__(self, "fields", tuple(sorted(items, key=lambda kv: kv[0])))

    def field_type(self, name: str) -> Type | None:
        for k, t in self.fields:
            if k == name:
                return t
        return None


@dataclass(frozen=True)
class RefType(Type):
    pointee: Type

    def __post_init__(self):
        if isinstance(self.pointee, RefType):
            raise ValueError("pointers to pointers are not allowed")


def type_str(t: Type) -> str:
    if isinstance(t, _Prim):
        return t.name
    if isinstance(t, TupleType):
        if len(t.items) == 1:
            return f"tuple({type_str(t.items[0])})"
        return "(" + ", ".join(type_str(x) for x in t.items) + ")"
    if isinstance(t, SetType):
        return f"set({type_str(t.elem)})"
    if isinstance(t, ListType):
        return f"list({type_str(t.elem)})"
    if isinstance(t, RecordType):
        inner = ", ".join(f"{k}: {type_str(v)}" for k, v in t.fields)
        return "rec(" + inner + ")"
    if isinstance(t, RefType):
        return f"ref {type_str(t.pointee)}"
    raise TypeError(f"not a type: {t!r}")


def contains_ref(t: Type) -> bool:
    """True when any component of the type is a pointer type."""
    if isinstance(t, RefType):
        return True
    if isinstance(t, TupleType):
        return any(contains_ref(x) for x in t.items)
    if isinstance(t, (SetType, ListType)):
        return contains_ref(t.elem)
    if isinstance(t, RecordType):
        return any(contains_ref(v) for _, v in t.fields)
    return False
