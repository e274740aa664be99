"""Evaluation of checked expressions, guards and operators.

Evaluation is pure: expressions never mutate the store they read.
Operator application returns a fresh store (and the binding extended
with any freshly allocated reference variables).
"""

from __future__ import annotations

from typing import Mapping

from ..errors import DanglingPointer, EvalError, UnboundVariable
from ..values import Pointer, Value, VList, VRec, canon_dumps, value_to_json
from . import tast as t

__all__ = ["Store", "Binding", "eval_expr", "eval_guard", "apply_operator", "binding_key"]

Binding = dict  # variable name -> Value (reference variables map to Pointer)


class Store:
    """Immutable global data state: pointer name -> value."""

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping[str, Value] | None = None):
        self._data = dict(data or {})
        self._hash: int | None = None

    def get(self, name: str) -> Value:
        try:
            return self._data[name]
        except KeyError:
            raise DanglingPointer(f"pointer {name!r} is not allocated") from None

    def __contains__(self, name: str) -> bool:
        return name in self._data

    def set(self, name: str, value: Value) -> "Store":
        data = dict(self._data)
        data[name] = value
        return Store(data)

    def names(self) -> list[str]:
        return sorted(self._data)

    def items_sorted(self):
        return sorted(self._data.items())

    def fresh_name(self) -> str:
        """Next ``@<n>`` name; monotone within a run since nothing is freed."""
        top = 0
        for name in self._data:
            if name.startswith("@"):
                try:
                    top = max(top, int(name[1:]))
                except ValueError:
                    pass
        return f"@{top + 1}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Store) and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return f"Store({self._data!r})"


EMPTY_STORE = Store()


def eval_expr(e: t.TExpr, b: Binding, s: Store) -> Value:
    """Value of a checked expression under a binding and a store."""
    if isinstance(e, t.TConst):
        return e.value
    if isinstance(e, t.TVar):
        if e.kind == "ptr":
            val: Value = Pointer(e.name)
        else:
            try:
                val = b[e.name]
            except KeyError:
                raise UnboundVariable(f"variable {e.name!r} is not bound") from None
        if e.deref:
            if not isinstance(val, Pointer):
                raise EvalError(f"{e.name!r} does not hold a pointer: {val!r}")
            return s.get(val.name)
        return val
    if isinstance(e, t.TTupleX):
        return tuple(eval_expr(x, b, s) for x in e.items)
    if isinstance(e, t.TSetX):
        return frozenset(eval_expr(x, b, s) for x in e.items)
    if isinstance(e, t.TListX):
        return VList(eval_expr(x, b, s) for x in e.items)
    if isinstance(e, t.TRecX):
        return VRec({name: eval_expr(x, b, s) for name, x in e.fields})
    if isinstance(e, t.TFieldX):
        base = eval_expr(e.base, b, s)
        if not isinstance(base, VRec):
            raise EvalError(f"field access on non-record value: {base!r}")
        return base.get(e.name)
    if isinstance(e, t.TUnX):
        v = eval_expr(e.operand, b, s)
        if e.op == "-":
            return -v
        if e.op == "not":
            return not v
        raise EvalError(f"unknown unary operator {e.op!r}")
    if isinstance(e, t.TBinX):
        op = e.op
        if op == "and":
            return bool(eval_expr(e.left, b, s)) and bool(eval_expr(e.right, b, s))
        if op == "or":
            return bool(eval_expr(e.left, b, s)) or bool(eval_expr(e.right, b, s))
        lv = eval_expr(e.left, b, s)
        rv = eval_expr(e.right, b, s)
        if op == "+":
            return lv + rv
        if op == "-":
            return lv - rv
        if op == "*":
            return lv * rv
        if op == "==":
            return lv == rv
        if op == "!=":
            return lv != rv
        if op == "<":
            return lv < rv
        if op == "<=":
            return lv <= rv
        if op == ">":
            return lv > rv
        if op == ">=":
            return lv >= rv
        if op == "in":
            if isinstance(rv, VList):
                return lv in rv.items
            return lv in rv
        if op == "subset":
            return lv <= rv
        if op == "union":
            return lv | rv
        raise EvalError(f"unknown operator {op!r}")
    if isinstance(e, t.TCondX):
        if eval_expr(e.cond, b, s):
            return eval_expr(e.then, b, s)
        return eval_expr(e.other, b, s)
    if isinstance(e, t.TCallX):
        if e.fn == "append":
            lst = eval_expr(e.args[0], b, s)
            item = eval_expr(e.args[1], b, s)
            return VList((*lst.items, item))
        raise EvalError(f"unknown builtin {e.fn!r}")
    if isinstance(e, t.TWild):
        raise EvalError("wildcard cannot be evaluated")
    raise EvalError(f"unknown expression node {e!r}")


def eval_guard(g: t.TExpr | None, b: Binding, s: Store) -> bool:
    """Guards evaluate to a boolean; an absent guard is true."""
    if g is None:
        return True
    return bool(eval_expr(g, b, s))


def _target_pointer(name: str, b: Binding) -> str:
    try:
        val = b[name]
    except KeyError:
        raise UnboundVariable(f"reference variable {name!r} is not bound") from None
    if not isinstance(val, Pointer):
        raise EvalError(f"{name!r} does not hold a pointer: {val!r}")
    return val.name


def apply_operator(ops, b: Binding, s: Store) -> tuple[Store, Binding]:
    """Apply an operator (action sequence) to the store.

    Actions run in listed order. Returns the new store and the binding
    extended by freshly allocated reference variables; untouched pointers
    keep their values. ``ops=None`` is the default skip.
    """
    if not ops:
        return s, b
    binding = b
    store = s
    for op in ops:
        if isinstance(op, t.TSkip):
            continue
        elif isinstance(op, t.TAllocate):
            name = store.fresh_name()
            value = eval_expr(op.init, binding, store)
            store = store.set(name, value)
            binding = dict(binding)
            binding[op.var] = Pointer(name)
        elif isinstance(op, (t.TSetField, t.TAddTo, t.TAppendTo)):
            target = _target_pointer(op.ref, binding)
            rec = store.get(target)
            value = eval_expr(op.value, binding, store)
            if isinstance(op, t.TSetField):
                new_rec = rec.with_field(op.fieldname, value)
            elif isinstance(op, t.TAddTo):
                cur = rec.get(op.fieldname)
                new_rec = rec.with_field(op.fieldname, cur | frozenset([value]))
            else:
                cur = rec.get(op.fieldname)
                new_rec = rec.with_field(op.fieldname, VList((*cur.items, value)))
            store = store.set(target, new_rec)
        else:
            raise EvalError(f"unknown operator action {op!r}")
    return store, binding


def binding_key(b: Binding) -> str:
    """Canonical serialization of a binding, for mode ordering."""
    return canon_dumps({k: value_to_json(v) for k, v in b.items()})
