"""Abstract syntax for model files, plus the canonical pretty-printer.

Node equality ignores source positions, so parse -> pretty -> parse
round-trips compare structurally identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


def _pos_field():
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------- types

class TypeAst:
    __slots__ = ()


@dataclass(frozen=True)
class TName(TypeAst):
    name: str
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TPrim(TypeAst):
    kind: str  # "int" | "bool" | "str" | "unit"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TTuple(TypeAst):
    items: tuple
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TSet(TypeAst):
    elem: TypeAst
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TList(TypeAst):
    elem: TypeAst
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TRec(TypeAst):
    fields: tuple  # ((name, TypeAst), ...) in declared order
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TRef(TypeAst):
    pointee: TypeAst
    pos: Optional[Pos] = _pos_field()


# ----------------------------------------------------------- expressions

class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class StrLit(Expr):
    value: str
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class UnitLit(Expr):
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Name(Expr):
    """A variable, constant or pointer occurrence; resolved by the checker."""

    ident: str
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Wild(Expr):
    """Pattern wildcard ``_``; input patterns only."""

    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class TupleE(Expr):
    items: tuple
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class SetE(Expr):
    items: tuple
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class ListE(Expr):
    items: tuple
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class RecE(Expr):
    fields: tuple  # ((name, Expr), ...) declared order
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class FieldE(Expr):
    base: Expr
    name: str
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Un(Expr):
    op: str  # "-" | "not"
    operand: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Bin(Expr):
    op: str  # + - * == != < <= > >= and or in subset union
    left: Expr
    right: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Cond(Expr):
    cond: Expr
    then: Expr
    other: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class RefOf(Expr):
    """``ref(w)``: the pointer held by w itself, not the value behind it."""

    ident: str
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Call(Expr):
    fn: str  # builtin name; currently only "append"
    args: tuple
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Inscription:
    """An arc label: a single token expression or a multiset of them.

    ``[e1, e2]`` at the top of an arc always means a two-token multiset;
    a single list-valued token must be wrapped, e.g. ``[[1,2]]``.
    """

    items: tuple
    multi: bool
    pos: Optional[Pos] = _pos_field()


# ------------------------------------------------------------- operators

class OpStmt:
    __slots__ = ()


@dataclass(frozen=True)
class SkipOp(OpStmt):
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class SetFieldOp(OpStmt):
    ref: str
    fieldname: str
    value: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class AddOp(OpStmt):
    """``add e to w.f``: put e into the set field f of the record behind w."""

    ref: str
    fieldname: str
    value: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class AppendOp(OpStmt):
    """``append e to w.f``: append e to the list field f."""

    ref: str
    fieldname: str
    value: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class NewOp(OpStmt):
    """``new w = e``: allocate a fresh pointer, bind it to w, store e."""

    var: str
    init: Expr
    pos: Optional[Pos] = _pos_field()


# ----------------------------------------------------------- declarations

@dataclass(frozen=True)
class TransitionDecl:
    name: str
    guard: Optional[Expr]
    ops: Optional[tuple]  # tuple[OpStmt, ...] or None
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class ArcDecl:
    src: str
    dst: str
    inscription: Inscription
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Quantifier:
    pattern: Expr
    places: tuple  # place names the pattern ranges over
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Clause:
    quantifiers: tuple  # tuple[Quantifier, ...]
    guard: Expr
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class InvariantDecl:
    name: str
    clauses: tuple  # tuple[Clause, ...]
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class ModelAst:
    types: tuple      # ((name, TypeAst), ...)
    consts: tuple     # ((name, TypeAst, Expr), ...)
    pointers: tuple   # ((name, TypeAst pointee, Expr init), ...)
    vars: tuple       # ((name, TypeAst), ...)
    places: tuple     # ((name, TypeAst), ...)
    transitions: tuple
    arcs: tuple
    marking: tuple    # ((place, ((Expr, count), ...)), ...)
    invariants: tuple


# ------------------------------------------------------- pretty printing

_PREC = {
    "or": 1,
    "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4, "in": 4, "subset": 4,
    "union": 5,
    "+": 6, "-": 6,
    "*": 7,
}


def _name_token(name: str) -> str:
    if name.isidentifier() and not _is_keyword(name):
        return name
    return json.dumps(name)


_KEYWORDS = {
    "types", "consts", "pointers", "vars", "places", "transitions", "arcs",
    "marking", "invariants", "guard", "op", "true", "false", "if", "then",
    "else", "and", "or", "not", "in", "subset", "union", "ref", "rec",
    "set", "list", "int", "bool", "str", "unit", "skip", "add", "append",
    "to", "new", "forall", "also",
}


def _is_keyword(name: str) -> bool:
    return name in _KEYWORDS


def pp_type(t: TypeAst) -> str:
    if isinstance(t, TName):
        return t.name
    if isinstance(t, TPrim):
        return t.kind
    if isinstance(t, TTuple):
        return "(" + ", ".join(pp_type(x) for x in t.items) + ")"
    if isinstance(t, TSet):
        return f"set({pp_type(t.elem)})"
    if isinstance(t, TList):
        return f"list({pp_type(t.elem)})"
    if isinstance(t, TRec):
        return "rec(" + ", ".join(f"{n}: {pp_type(x)}" for n, x in t.fields) + ")"
    if isinstance(t, TRef):
        return f"ref {pp_type(t.pointee)}"
    raise TypeError(f"not a type node: {t!r}")


def pp_expr(e: Expr, parent_prec: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, StrLit):
        return json.dumps(e.value)
    if isinstance(e, UnitLit):
        return "()"
    if isinstance(e, Name):
        return e.ident
    if isinstance(e, Wild):
        return "_"
    if isinstance(e, TupleE):
        return "(" + ", ".join(pp_expr(x) for x in e.items) + ")"
    if isinstance(e, SetE):
        return "{" + ", ".join(pp_expr(x) for x in e.items) + "}"
    if isinstance(e, ListE):
        return "[" + ", ".join(pp_expr(x) for x in e.items) + "]"
    if isinstance(e, RecE):
        return "{" + ", ".join(f"{n}: {pp_expr(x)}" for n, x in e.fields) + "}"
    if isinstance(e, FieldE):
        return f"{pp_expr(e.base, 9)}.{e.name}"
    if isinstance(e, RefOf):
        return f"ref({e.ident})"
    if isinstance(e, Call):
        return f"{e.fn}(" + ", ".join(pp_expr(a) for a in e.args) + ")"
    if isinstance(e, Un):
        inner = pp_expr(e.operand, 8)
        text = f"-{inner}" if e.op == "-" else f"not {inner}"
        return f"({text})" if parent_prec > 3 and e.op == "not" else text
    if isinstance(e, Bin):
        prec = _PREC[e.op]
        text = f"{pp_expr(e.left, prec)} {e.op} {pp_expr(e.right, prec + 1)}"
        return f"({text})" if prec < parent_prec else text
    if isinstance(e, Cond):
        text = f"if {pp_expr(e.cond)} then {pp_expr(e.then)} else {pp_expr(e.other)}"
        return f"({text})" if parent_prec > 0 else text
    raise TypeError(f"not an expression node: {e!r}")


def pp_inscription(ins: Inscription) -> str:
    if ins.multi:
        return "[" + ", ".join(pp_expr(x) for x in ins.items) + "]"
    return pp_expr(ins.items[0])


def pp_op(op: OpStmt) -> str:
    if isinstance(op, SkipOp):
        return "skip"
    if isinstance(op, SetFieldOp):
        return f"set {op.ref}.{op.fieldname} = {pp_expr(op.value)}"
    if isinstance(op, AddOp):
        return f"add {pp_expr(op.value, 5)} to {op.ref}.{op.fieldname}"
    if isinstance(op, AppendOp):
        return f"append {pp_expr(op.value, 5)} to {op.ref}.{op.fieldname}"
    if isinstance(op, NewOp):
        return f"new {op.var} = {pp_expr(op.init)}"
    raise TypeError(f"not an operator node: {op!r}")


def pp_model(m: ModelAst) -> str:
    """Canonical normalized source: fixed layout, declared order kept."""
    out: list[str] = []

    def section(kw: str, lines: list[str]):
        if not lines:
            return
        out.append(kw + " {")
        out.extend(f"  {line}" for line in lines)
        out.append("}")

    section("types", [f"{n} = {pp_type(t)};" for n, t in m.types])
    section("consts", [f"{n}: {pp_type(t)} = {pp_expr(e)};" for n, t, e in m.consts])
    section("pointers", [f"{n}: {pp_type(t)} = {pp_expr(e)};" for n, t, e in m.pointers])
    section("vars", [f"{n}: {pp_type(t)};" for n, t in m.vars])
    section("places", [f"{_name_token(n)}: {pp_type(t)};" for n, t in m.places])

    tlines = []
    for tr in m.transitions:
        parts = [_name_token(tr.name)]
        if tr.guard is not None:
            parts.append(f"guard {pp_expr(tr.guard)}")
        if tr.ops is not None:
            parts.append("op " + ", ".join(pp_op(o) for o in tr.ops))
        tlines.append(" ".join(parts) + ";")
    section("transitions", tlines)

    section(
        "arcs",
        [f"{_name_token(a.src)} -> {_name_token(a.dst)}: {pp_inscription(a.inscription)};" for a in m.arcs],
    )

    mlines = []
    for place, entries in m.marking:
        toks = ", ".join(
            pp_expr(e) + (f" # {c}" if c != 1 else "") for e, c in entries
        )
        mlines.append(f"{_name_token(place)}: {toks};")
    section("marking", mlines)

    ilines = []
    for inv in m.invariants:
        clause_texts = []
        for cl in inv.clauses:
            qs = ", ".join(
                f"{pp_expr(q.pattern)} in [" + ", ".join(_name_token(p) for p in q.places) + "]"
                for q in cl.quantifiers
            )
            clause_texts.append(f"forall {qs}: {pp_expr(cl.guard)}")
        ilines.append(f"{_name_token(inv.name)}: " + " also ".join(clause_texts) + ";")
    section("invariants", ilines)

    return "\n".join(out) + "\n"
