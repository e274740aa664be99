"""Typed expression trees produced by the checker, consumed by the evaluator.

Every node carries its static type. Variable and pointer occurrences
carry a ``deref`` flag: a reference used in a value position reads the
store; used in a pointer position it denotes the pointer itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..typesys import Type


class TExpr:
    __slots__ = ()


@dataclass(frozen=True)
class TConst(TExpr):
    value: object
    type: Type


@dataclass(frozen=True)
class TVar(TExpr):
    name: str
    type: Type       # the type this occurrence evaluates to
    deref: bool      # True: evaluate to store[binding[name]]
    kind: str        # "var" | "ptr"


@dataclass(frozen=True)
class TWild(TExpr):
    type: Type


@dataclass(frozen=True)
class TTupleX(TExpr):
    items: tuple
    type: Type


@dataclass(frozen=True)
class TSetX(TExpr):
    items: tuple
    type: Type


@dataclass(frozen=True)
class TListX(TExpr):
    items: tuple
    type: Type


@dataclass(frozen=True)
class TRecX(TExpr):
    fields: tuple  # ((name, TExpr), ...)
    type: Type


@dataclass(frozen=True)
class TFieldX(TExpr):
    base: TExpr
    name: str
    type: Type


@dataclass(frozen=True)
class TUnX(TExpr):
    op: str
    operand: TExpr
    type: Type


@dataclass(frozen=True)
class TBinX(TExpr):
    op: str
    left: TExpr
    right: TExpr
    type: Type


@dataclass(frozen=True)
class TCondX(TExpr):
    cond: TExpr
    then: TExpr
    other: TExpr
    type: Type


@dataclass(frozen=True)
class TCallX(TExpr):
    fn: str
    args: tuple
    type: Type


@dataclass(frozen=True)
class TInscription:
    """Checked arc label: token expressions plus the multi flag."""

    items: tuple  # tuple[TExpr, ...]
    multi: bool


# ----------------------------------------------------------- operators

class TOp:
    __slots__ = ()


@dataclass(frozen=True)
class TSkip(TOp):
    pass


@dataclass(frozen=True)
class TSetField(TOp):
    ref: str
    fieldname: str
    value: TExpr


@dataclass(frozen=True)
class TAddTo(TOp):
    ref: str
    fieldname: str
    value: TExpr


@dataclass(frozen=True)
class TAppendTo(TOp):
    ref: str
    fieldname: str
    value: TExpr


@dataclass(frozen=True)
class TAllocate(TOp):
    var: str
    pointee: Type
    init: TExpr


def walk_vars(e: TExpr, spine: bool = True):
    """Yield (TVar occurrence, at_spine) over an expression tree.

    Spine positions are the ones reachable through tuple constructors
    only; pattern matching can bind variables there.
    """
    if isinstance(e, TVar):
        yield e, spine
    elif isinstance(e, TTupleX):
        for item in e.items:
            yield from walk_vars(item, spine)
    elif isinstance(e, (TSetX, TListX)):
        for item in e.items:
            yield from walk_vars(item, False)
    elif isinstance(e, TRecX):
        for _n, item in e.fields:
            yield from walk_vars(item, False)
    elif isinstance(e, TFieldX):
        yield from walk_vars(e.base, False)
    elif isinstance(e, TUnX):
        yield from walk_vars(e.operand, False)
    elif isinstance(e, TBinX):
        yield from walk_vars(e.left, False)
        yield from walk_vars(e.right, False)
    elif isinstance(e, TCondX):
        yield from walk_vars(e.cond, False)
        yield from walk_vars(e.then, False)
        yield from walk_vars(e.other, False)
    elif isinstance(e, TCallX):
        for a in e.args:
            yield from walk_vars(a, False)


def walk_wilds(e: TExpr, spine: bool = True):
    """Yield (TWild, at_spine); wildcards are legal only at spine."""
    if isinstance(e, TWild):
        yield e, spine
    elif isinstance(e, TTupleX):
        for item in e.items:
            yield from walk_wilds(item, spine)
    elif isinstance(e, (TSetX, TListX)):
        for item in e.items:
            yield from walk_wilds(item, False)
    elif isinstance(e, TRecX):
        for _n, item in e.fields:
            yield from walk_wilds(item, False)
    elif isinstance(e, TFieldX):
        yield from walk_wilds(e.base, False)
    elif isinstance(e, TUnX):
        yield from walk_wilds(e.operand, False)
    elif isinstance(e, TBinX):
        yield from walk_wilds(e.left, False)
        yield from walk_wilds(e.right, False)
    elif isinstance(e, TCondX):
        yield from walk_wilds(e.cond, False)
        yield from walk_wilds(e.then, False)
        yield from walk_wilds(e.other, False)
    elif isinstance(e, TCallX):
        for a in e.args:
            yield from walk_wilds(a, False)
