"""Type checker: turns a parsed model into a TypedModel.

Responsibilities beyond plain typing:

* resolve type aliases and evaluate constants, pointer initial values
  and the initial marking;
* annotate every reference occurrence with its dereference behavior
  (a reference in a value position reads the store, in a pointer
  position it is the pointer itself; ``ref(w)`` forces the latter);
* enforce the binding-feasibility rule: every variable used in a guard,
  an output arc or an operator must be bindable by pattern matching
  some input arc of the same transition, or be freshly allocated;
* reference discipline: a pointer-typed expression is a pointer name or
  a reference variable, nothing computed; no pointers inside sets,
  lists or records; value variables never range over pointer-carrying
  types.

All violations are collected; the checker raises one ModelTypeError
with the full issue list.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..errors import EvalError, ModelTypeError, TypeIssue
from ..multiset import Multiset
from ..typesys import (
    BOOL,
    INT,
    STR,
    UNITT,
    ListType,
    RecordType,
    RefType,
    SetType,
    TupleType,
    Type,
    contains_ref,
    type_str,
)
from ..values import UNIT, Value
from . import syntax as s
from . import tast as t
from .interp import Store, eval_expr
from .syntax import pp_model

__all__ = ["typecheck", "TypedModel", "TTransition", "TInvariant", "TClause"]

_ERR = RecordType((("<error>", INT),))  # sentinel; suppresses cascades


@dataclass
class TTransition:
    name: str
    guard: t.TExpr | None
    ops: tuple | None
    inputs: tuple   # ((place, TInscription), ...) in declared arc order
    outputs: tuple
    bindable: frozenset
    allocated: frozenset
    var_types: dict


@dataclass
class TClause:
    quantifiers: tuple  # ((pattern TExpr, places tuple[str]), ...)
    guard: t.TExpr


@dataclass
class TInvariant:
    name: str
    clauses: tuple


@dataclass
class TypedModel:
    source: str
    canonical: str
    model_hash: str
    types: dict
    consts: dict        # name -> (Type, Value)
    pointers: dict      # name -> (pointee Type, initial Value)
    var_types: dict     # name -> Type
    places: dict        # name -> Type, declared order
    transitions: dict   # name -> TTransition, declared order
    invariants: dict    # name -> TInvariant
    initial_marking: dict  # place -> Multiset
    has_refs: bool
    ast: s.ModelAst = field(repr=False, default=None)

    def initial_store(self) -> Store:
        return Store({name: val for name, (_t, val) in self.pointers.items()})

    def is_unit_classical(self) -> bool:
        """True when the model degenerates to a classical net."""
        if self.has_refs:
            return False
        for pt in self.places.values():
            if pt != UNITT:
                return False
        for tr in self.transitions.values():
            if tr.guard is not None:
                return False
            for _p, ins in tr.inputs + tr.outputs:
                for item in ins.items:
                    if not (isinstance(item, t.TConst) and item.value is UNIT):
                        return False
        return True


class _Checker:
    def __init__(self, ast: s.ModelAst):
        self.ast = ast
        self.issues: list[TypeIssue] = []
        self.types: dict[str, Type] = {}
        self.consts: dict[str, tuple[Type, Value]] = {}
        self.pointers: dict[str, tuple[Type, Value]] = {}
        self.var_types: dict[str, Type] = {}
        self.places: dict[str, Type] = {}

    # ---------------------------------------------------------- helpers

    def issue(self, where: str, message: str, pos: s.Pos | None = None):
        line = pos.line if pos else 0
        col = pos.col if pos else 0
        self.issues.append(TypeIssue(where, message, line, col))

    def resolve_type(self, ta: s.TypeAst, where: str, seen: tuple = ()) -> Type:
        if isinstance(ta, s.TPrim):
            return {"int": INT, "bool": BOOL, "str": STR, "unit": UNITT}[ta.kind]
        if isinstance(ta, s.TName):
            if ta.name in seen:
                self.issue(where, f"cyclic type alias {ta.name!r}", ta.pos)
                return _ERR
            decl = dict(self.ast.types).get(ta.name)
            if ta.name in self.types:
                return self.types[ta.name]
            if decl is None:
                self.issue(where, f"unknown type name {ta.name!r}", ta.pos)
                return _ERR
            resolved = self.resolve_type(decl, where, seen + (ta.name,))
            self.types[ta.name] = resolved
            return resolved
        if isinstance(ta, s.TTuple):
            return TupleType(tuple(self.resolve_type(x, where, seen) for x in ta.items))
        if isinstance(ta, s.TSet):
            return SetType(self.resolve_type(ta.elem, where, seen))
        if isinstance(ta, s.TList):
            return ListType(self.resolve_type(ta.elem, where, seen))
        if isinstance(ta, s.TRec):
            names = [n for n, _x in ta.fields]
            if len(names) != len(set(names)):
                self.issue(where, "duplicate record field", ta.pos)
            return RecordType(tuple((n, self.resolve_type(x, where, seen)) for n, x in ta.fields))
        if isinstance(ta, s.TRef):
            pointee = self.resolve_type(ta.pointee, where, seen)
            if isinstance(pointee, RefType):
                self.issue(where, "pointers to pointers are not allowed", ta.pos)
                return _ERR
            return RefType(pointee)
        raise TypeError(f"not a type node: {ta!r}")

    def check_ref_placement(self, ty: Type, where: str, allow_components: bool, pos=None):
        """Pointers may appear bare or as tuple components, nowhere else."""
        if isinstance(ty, RefType):
            if not allow_components:
                self.issue(where, "pointer type not allowed here", pos)
            if contains_ref(ty.pointee):
                self.issue(where, "stored values cannot contain pointers", pos)
            return
        if isinstance(ty, TupleType):
            for item in ty.items:
                self.check_ref_placement(item, where, allow_components, pos)
            return
        if contains_ref(ty):
            self.issue(where, "pointers may only appear as tuple components", pos)

    def unify(self, actual: Type, expected: Type | None, where: str, pos=None) -> Type:
        if expected is None or actual == _ERR or expected == _ERR:
            return actual
        if actual != expected:
            self.issue(where, f"expected {type_str(expected)}, got {type_str(actual)}", pos)
            return _ERR
        return actual

    # ------------------------------------------------------ expressions

    def check_expr(
        self,
        e: s.Expr,
        expected: Type | None,
        env: dict,
        where: str,
        pattern: bool = False,
        closed: bool = False,
    ) -> t.TExpr:
        """env maps variable names to types; consts/pointers are global."""
        if isinstance(e, s.IntLit):
            self.unify(INT, expected, where, e.pos)
            return t.TConst(e.value, INT)
        if isinstance(e, s.BoolLit):
            self.unify(BOOL, expected, where, e.pos)
            return t.TConst(e.value, BOOL)
        if isinstance(e, s.StrLit):
            self.unify(STR, expected, where, e.pos)
            return t.TConst(e.value, STR)
        if isinstance(e, s.UnitLit):
            self.unify(UNITT, expected, where, e.pos)
            return t.TConst(UNIT, UNITT)
        if isinstance(e, s.Wild):
            if not pattern:
                self.issue(where, "wildcard `_` is only allowed in input patterns", e.pos)
                return t.TWild(_ERR)
            if expected is None:
                self.issue(where, "wildcard needs a typed position", e.pos)
                return t.TWild(_ERR)
            return t.TWild(expected)
        if isinstance(e, s.Name):
            return self.check_name(e, expected, env, where, closed)
        if isinstance(e, s.RefOf):
            ident = e.ident
            if ident in env and isinstance(env[ident], RefType):
                ty = self.unify(env[ident], expected, where, e.pos)
                return t.TVar(ident, env[ident], deref=False, kind="var")
            if ident in self.pointers:
                ty = RefType(self.pointers[ident][0])
                self.unify(ty, expected, where, e.pos)
                return t.TVar(ident, ty, deref=False, kind="ptr")
            self.issue(where, f"ref() needs a reference variable or pointer, got {ident!r}", e.pos)
            return t.TConst(UNIT, _ERR)
        if isinstance(e, s.TupleE):
            if expected is not None and not isinstance(expected, TupleType):
                self.issue(where, f"tuple where {type_str(expected)} expected", e.pos)
                expected = None
            if expected is not None and len(expected.items) != len(e.items):
                self.issue(
                    where,
                    f"tuple arity {len(e.items)} does not match {type_str(expected)}",
                    e.pos,
                )
                expected = None
            comps = expected.items if expected is not None else [None] * len(e.items)
            items = tuple(
                self.check_expr(x, comp, env, where, pattern, closed)
                for x, comp in zip(e.items, comps)
            )
            ty = TupleType(tuple(i.type for i in items))
            return t.TTupleX(items, ty)
        if isinstance(e, s.SetE):
            elem_t = None
            if expected is not None:
                if not isinstance(expected, SetType):
                    self.issue(where, f"set literal where {type_str(expected)} expected", e.pos)
                else:
                    elem_t = expected.elem
            if elem_t is None and not e.items:
                self.issue(where, "cannot infer the element type of an empty set here", e.pos)
                return t.TSetX((), _ERR)
            items = []
            for x in e.items:
                checked = self.check_expr(x, elem_t, env, where, False, closed)
                if elem_t is None:
                    elem_t = checked.type
                items.append(checked)
            ty = SetType(elem_t if elem_t is not None else _ERR)
            if contains_ref(ty.elem):
                self.issue(where, "sets cannot contain pointers", e.pos)
            return t.TSetX(tuple(items), ty)
        if isinstance(e, s.ListE):
            elem_t = None
            if expected is not None:
                if not isinstance(expected, ListType):
                    self.issue(where, f"list literal where {type_str(expected)} expected", e.pos)
                else:
                    elem_t = expected.elem
            if elem_t is None and not e.items:
                self.issue(where, "cannot infer the element type of an empty list here", e.pos)
                return t.TListX((), _ERR)
            items = []
            for x in e.items:
                checked = self.check_expr(x, elem_t, env, where, False, closed)
                if elem_t is None:
                    elem_t = checked.type
                items.append(checked)
            ty = ListType(elem_t if elem_t is not None else _ERR)
            if contains_ref(ty.elem):
                self.issue(where, "lists cannot contain pointers", e.pos)
            return t.TListX(tuple(items), ty)
        if isinstance(e, s.RecE):
            names = [n for n, _x in e.fields]
            if len(names) != len(set(names)):
                self.issue(where, "duplicate field in record literal", e.pos)
            field_types: dict[str, Type | None] = {n: None for n in names}
            if expected is not None:
                if not isinstance(expected, RecordType):
                    self.issue(where, f"record literal where {type_str(expected)} expected", e.pos)
                else:
                    want = {n for n, _t2 in expected.fields}
                    if want != set(names):
                        self.issue(
                            where,
                            f"record fields {{{', '.join(sorted(names))}}} do not match {type_str(expected)}",
                            e.pos,
                        )
                    field_types = {n: expected.field_type(n) for n in names}
            fields = tuple(
                (n, self.check_expr(x, field_types.get(n), env, where, False, closed))
                for n, x in e.fields
            )
            ty = RecordType(tuple((n, fe.type) for n, fe in fields))
            if any(contains_ref(fe.type) for _n, fe in fields):
                self.issue(where, "records cannot contain pointers", e.pos)
            return t.TRecX(fields, ty)
        if isinstance(e, s.FieldE):
            base = self.check_expr(e.base, None, env, where, False, closed)
            if isinstance(base.type, RecordType):
                ft = base.type.field_type(e.name)
                if ft is None:
                    self.issue(where, f"record has no field {e.name!r}: {type_str(base.type)}", e.pos)
                    return t.TFieldX(base, e.name, _ERR)
                self.unify(ft, expected, where, e.pos)
                return t.TFieldX(base, e.name, ft)
            if base.type != _ERR:
                self.issue(where, f"field access on non-record type {type_str(base.type)}", e.pos)
            return t.TFieldX(base, e.name, _ERR)
        if isinstance(e, s.Un):
            if e.op == "-":
                operand = self.check_expr(e.operand, INT, env, where, False, closed)
                self.unify(INT, expected, where, e.pos)
                return t.TUnX("-", operand, INT)
            operand = self.check_expr(e.operand, BOOL, env, where, False, closed)
            self.unify(BOOL, expected, where, e.pos)
            return t.TUnX("not", operand, BOOL)
        if isinstance(e, s.Bin):
            return self.check_bin(e, expected, env, where, closed)
        if isinstance(e, s.Cond):
            cond = self.check_expr(e.cond, BOOL, env, where, False, closed)
            then = self.check_expr(e.then, expected, env, where, False, closed)
            other = self.check_expr(e.other, then.type if expected is None else expected, env, where, False, closed)
            if isinstance(then.type, RefType):
                self.issue(where, "a pointer-typed expression must be a pointer or reference variable", e.pos)
            return t.TCondX(cond, then, other, then.type)
        if isinstance(e, s.Call):
            if e.fn != "append":
                self.issue(where, f"unknown function {e.fn!r}", e.pos)
                return t.TConst(UNIT, _ERR)
            if len(e.args) != 2:
                self.issue(where, "append takes a list and an element", e.pos)
                return t.TConst(UNIT, _ERR)
            lst = self.check_expr(e.args[0], expected if isinstance(expected, ListType) else None, env, where, False, closed)
            if not isinstance(lst.type, ListType):
                if lst.type != _ERR:
                    self.issue(where, f"append needs a list, got {type_str(lst.type)}", e.pos)
                return t.TCallX("append", (lst, lst), _ERR)
            item = self.check_expr(e.args[1], lst.type.elem, env, where, False, closed)
            self.unify(lst.type, expected, where, e.pos)
            return t.TCallX("append", (lst, item), lst.type)
        raise TypeError(f"not an expression node: {e!r}")

    def check_name(self, e: s.Name, expected, env, where, closed) -> t.TExpr:
        ident = e.ident
        if ident in env:
            if closed:
                self.issue(where, f"variable {ident!r} not allowed in a closed expression", e.pos)
            declared = env[ident]
            if isinstance(declared, RefType):
                if isinstance(expected, RefType):
                    self.unify(declared, expected, where, e.pos)
                    return t.TVar(ident, declared, deref=False, kind="var")
                pointee = declared.pointee
                self.unify(pointee, expected, where, e.pos)
                return t.TVar(ident, pointee, deref=True, kind="var")
            self.unify(declared, expected, where, e.pos)
            return t.TVar(ident, declared, deref=False, kind="var")
        if ident in self.consts:
            ty, val = self.consts[ident]
            self.unify(ty, expected, where, e.pos)
            return t.TConst(val, ty)
        if ident in self.pointers:
            pointee = self.pointers[ident][0]
            if isinstance(expected, RefType):
                self.unify(RefType(pointee), expected, where, e.pos)
                return t.TVar(ident, RefType(pointee), deref=False, kind="ptr")
            self.unify(pointee, expected, where, e.pos)
            return t.TVar(ident, pointee, deref=True, kind="ptr")
        self.issue(where, f"unknown name {ident!r}", e.pos)
        return t.TConst(UNIT, _ERR)

    def check_bin(self, e: s.Bin, expected, env, where, closed) -> t.TExpr:
        op = e.op
        if op in ("+", "-", "*"):
            left = self.check_expr(e.left, INT, env, where, False, closed)
            right = self.check_expr(e.right, INT, env, where, False, closed)
            self.unify(INT, expected, where, e.pos)
            return t.TBinX(op, left, right, INT)
        if op in ("<", "<=", ">", ">="):
            left = self.check_expr(e.left, INT, env, where, False, closed)
            right = self.check_expr(e.right, INT, env, where, False, closed)
            self.unify(BOOL, expected, where, e.pos)
            return t.TBinX(op, left, right, BOOL)
        if op in ("and", "or"):
            left = self.check_expr(e.left, BOOL, env, where, False, closed)
            right = self.check_expr(e.right, BOOL, env, where, False, closed)
            self.unify(BOOL, expected, where, e.pos)
            return t.TBinX(op, left, right, BOOL)
        if op in ("==", "!="):
            left = self.check_expr(e.left, None, env, where, False, closed)
            right = self.check_expr(e.right, left.type, env, where, False, closed)
            self.unify(BOOL, expected, where, e.pos)
            return t.TBinX(op, left, right, BOOL)
        if op == "in":
            right = self.check_expr(e.right, None, env, where, False, closed)
            if isinstance(right.type, (SetType, ListType)):
                left = self.check_expr(e.left, right.type.elem, env, where, False, closed)
            else:
                if right.type != _ERR:
                    self.issue(where, f"`in` needs a set or list, got {type_str(right.type)}", e.pos)
                left = self.check_expr(e.left, None, env, where, False, closed)
            self.unify(BOOL, expected, where, e.pos)
            return t.TBinX("in", left, right, BOOL)
        if op == "subset":
            right = self.check_expr(e.right, None, env, where, False, closed)
            if isinstance(right.type, SetType):
                left = self.check_expr(e.left, right.type, env, where, False, closed)
            else:
                if right.type != _ERR:
                    self.issue(where, f"`subset` needs sets, got {type_str(right.type)}", e.pos)
                left = self.check_expr(e.left, None, env, where, False, closed)
            self.unify(BOOL, expected, where, e.pos)
            return t.TBinX("subset", left, right, BOOL)
        if op == "union":
            left = self.check_expr(e.left, expected if isinstance(expected, SetType) else None, env, where, False, closed)
            if isinstance(left.type, SetType):
                right = self.check_expr(e.right, left.type, env, where, False, closed)
                self.unify(left.type, expected, where, e.pos)
                return t.TBinX("union", left, right, left.type)
            if left.type != _ERR:
                self.issue(where, f"`union` needs sets, got {type_str(left.type)}", e.pos)
            right = self.check_expr(e.right, None, env, where, False, closed)
            return t.TBinX("union", left, right, _ERR)
        raise TypeError(f"unknown binary operator {op!r}")

    # ------------------------------------------------------ declarations

    def run(self) -> TypedModel:
        ast = self.ast

        for name, ta in ast.types:
            if name not in self.types:
                self.types[name] = self.resolve_type(ta, f"type {name}")

        for name, ta, init in ast.consts:
            ty = self.resolve_type(ta, f"const {name}")
            if contains_ref(ty):
                self.issue(f"const {name}", "constants cannot have pointer types")
            checked = self.check_expr(init, ty, {}, f"const {name}", closed=True)
            value: Value = UNIT
            try:
                value = eval_expr(checked, {}, Store())
            except EvalError as exc:
                self.issue(f"const {name}", f"initial value does not evaluate: {exc}")
            self.consts[name] = (ty, value)

        store = Store()
        for name, ta, init in ast.pointers:
            pointee = self.resolve_type(ta, f"pointer {name}")
            if isinstance(pointee, RefType):
                # `p: ref T = ...` also reads naturally; unwrap it
                pointee = pointee.pointee
            if contains_ref(pointee):
                self.issue(f"pointer {name}", "stored values cannot contain pointers")
            checked = self.check_expr(init, pointee, {}, f"pointer {name}", closed=True)
            value = UNIT
            try:
                value = eval_expr(checked, {}, store)
            except EvalError as exc:
                self.issue(f"pointer {name}", f"initial value does not evaluate: {exc}")
            self.pointers[name] = (pointee, value)
            store = store.set(name, value)

        for name, ta in ast.vars:
            ty = self.resolve_type(ta, f"var {name}")
            if not isinstance(ty, RefType) and contains_ref(ty):
                self.issue(
                    f"var {name}",
                    "value variables cannot range over pointer-carrying types; bind components instead",
                )
            if name in self.consts or name in self.pointers:
                self.issue(f"var {name}", "name already declared as a constant or pointer")
            self.var_types[name] = ty

        for name, ta in ast.places:
            ty = self.resolve_type(ta, f"place {name}")
            self.check_ref_placement(ty, f"place {name}", allow_components=True)
            self.places[name] = ty

        transitions = self.check_transitions()
        invariants = self.check_invariants()
        initial_marking = self.check_marking(store)

        if self.issues:
            raise ModelTypeError(self.issues)

        canonical = pp_model(ast)
        model_hash = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
        has_refs = bool(self.pointers) or any(
            contains_ref(ty) for ty in list(self.places.values()) + list(self.var_types.values())
        ) or any(tr.ops is not None for tr in transitions.values())

        return TypedModel(
            source="",
            canonical=canonical,
            model_hash=model_hash,
            types=self.types,
            consts=self.consts,
            pointers=self.pointers,
            var_types=self.var_types,
            places=self.places,
            transitions=transitions,
            invariants=invariants,
            initial_marking=initial_marking,
            has_refs=has_refs,
            ast=ast,
        )

    def check_transitions(self) -> dict:
        ast = self.ast
        trans_names = [tr.name for tr in ast.transitions]
        arcs_in: dict[str, list] = {name: [] for name in trans_names}
        arcs_out: dict[str, list] = {name: [] for name in trans_names}

        for arc in ast.arcs:
            src_place = arc.src in self.places
            dst_place = arc.dst in self.places
            src_trans = arc.src in arcs_in
            dst_trans = arc.dst in arcs_in
            if src_place and dst_trans:
                kind = "in"
            elif src_trans and dst_place:
                kind = "out"
            else:
                self.issue(
                    f"arc {arc.src} -> {arc.dst}",
                    "arcs must connect a place and a transition (both must be declared)",
                    arc.pos,
                )
                continue
            place = arc.src if kind == "in" else arc.dst
            tname = arc.dst if kind == "in" else arc.src
            place_type = self.places[place]
            where = f"arc {arc.src} -> {arc.dst}"
            items = tuple(
                self.check_expr(item, place_type, self.var_types, where, pattern=(kind == "in"))
                for item in arc.inscription.items
            )
            ins = t.TInscription(items, arc.inscription.multi)
            (arcs_in if kind == "in" else arcs_out)[tname].append((place, ins))

        out: dict[str, TTransition] = {}
        for tr in ast.transitions:
            where = f"transition {tr.name}"
            inputs = tuple(arcs_in[tr.name])
            outputs = tuple(arcs_out[tr.name])

            bindable: set[str] = set()
            input_vars: set[str] = set()
            for _p, ins in inputs:
                for item in ins.items:
                    for var, at_spine in t.walk_vars(item):
                        if var.kind != "var":
                            continue
                        input_vars.add(var.name)
                        if at_spine and not var.deref:
                            bindable.add(var.name)
                    for _w, _sp in t.walk_wilds(item):
                        # a demand must be a function of the binding, so
                        # wildcards live in invariant patterns only
                        self.issue(
                            where,
                            "wildcard not allowed on arcs; bind a variable instead",
                            tr.pos,
                        )

            guard = None
            if tr.guard is not None:
                guard = self.check_expr(tr.guard, BOOL, self.var_types, f"{where} guard")

            allocated: set[str] = set()
            ops = None
            if tr.ops is not None:
                checked_ops = []
                for op in tr.ops:
                    checked_ops.append(self.check_op(op, tr.name, bindable, allocated))
                ops = tuple(checked_ops)

            # feasibility: everything used must be bindable or allocated
            used: set[str] = set()
            if guard is not None:
                used.update(v.name for v, _sp in t.walk_vars(guard) if v.kind == "var")
            for _p, ins in outputs:
                for item in ins.items:
                    used.update(v.name for v, _sp in t.walk_vars(item) if v.kind == "var")
                    for _w, _sp in t.walk_wilds(item):
                        self.issue(where, "wildcard not allowed on output arcs", tr.pos)
            used.update(input_vars)
            for name in sorted(used - bindable - allocated):
                self.issue(
                    where,
                    f"unbindable variable {name!r}: it never appears at a pattern "
                    f"position of an input arc (and is not allocated)",
                    tr.pos,
                )

            var_types = {
                name: self.var_types[name]
                for name in sorted(bindable | allocated)
                if name in self.var_types
            }
            out[tr.name] = TTransition(
                name=tr.name,
                guard=guard,
                ops=ops,
                inputs=inputs,
                outputs=outputs,
                bindable=frozenset(bindable),
                allocated=frozenset(allocated),
                var_types=var_types,
            )
        return out

    def check_op(self, op: s.OpStmt, tname: str, bindable: set, allocated: set):
        where = f"transition {tname} op"
        if isinstance(op, s.SkipOp):
            return t.TSkip()
        if isinstance(op, s.NewOp):
            ty = self.var_types.get(op.var)
            if ty is None:
                self.issue(where, f"unknown variable {op.var!r}", op.pos)
                return t.TSkip()
            if not isinstance(ty, RefType):
                self.issue(where, f"new target {op.var!r} must be a reference variable", op.pos)
                return t.TSkip()
            if op.var in bindable:
                self.issue(where, f"{op.var!r} is both bound by an input arc and allocated", op.pos)
            if op.var in allocated:
                self.issue(where, f"{op.var!r} allocated twice", op.pos)
            init = self.check_expr(op.init, ty.pointee, self.var_types, where)
            self._check_op_reads(init, bindable, allocated, where, op.pos)
            allocated.add(op.var)
            return t.TAllocate(op.var, ty.pointee, init)

        ty = self.var_types.get(op.ref)
        if ty is None:
            self.issue(where, f"operator target must be a declared reference variable, got {op.ref!r}", op.pos)
            return t.TSkip()
        if not isinstance(ty, RefType):
            self.issue(where, f"operator target {op.ref!r} is not a reference variable", op.pos)
            return t.TSkip()
        if op.ref not in bindable and op.ref not in allocated:
            self.issue(where, f"operator target {op.ref!r} is not bound by this transition", op.pos)
        pointee = ty.pointee
        if not isinstance(pointee, RecordType):
            self.issue(where, f"operator target {op.ref!r} must point to a record", op.pos)
            return t.TSkip()
        ft = pointee.field_type(op.fieldname)
        if ft is None:
            self.issue(where, f"{type_str(pointee)} has no field {op.fieldname!r}", op.pos)
            return t.TSkip()
        if isinstance(op, s.SetFieldOp):
            value = self.check_expr(op.value, ft, self.var_types, where)
            self._check_op_reads(value, bindable, allocated, where, op.pos)
            return t.TSetField(op.ref, op.fieldname, value)
        if isinstance(op, s.AddOp):
            if not isinstance(ft, SetType):
                self.issue(where, f"`add ... to {op.ref}.{op.fieldname}` needs a set field", op.pos)
                return t.TSkip()
            value = self.check_expr(op.value, ft.elem, self.var_types, where)
            self._check_op_reads(value, bindable, allocated, where, op.pos)
            return t.TAddTo(op.ref, op.fieldname, value)
        if isinstance(op, s.AppendOp):
            if not isinstance(ft, ListType):
                self.issue(where, f"`append ... to {op.ref}.{op.fieldname}` needs a list field", op.pos)
                return t.TSkip()
            value = self.check_expr(op.value, ft.elem, self.var_types, where)
            self._check_op_reads(value, bindable, allocated, where, op.pos)
            return t.TAppendTo(op.ref, op.fieldname, value)
        raise TypeError(f"not an operator node: {op!r}")

    def _check_op_reads(self, e: t.TExpr, bindable: set, allocated: set, where: str, pos):
        for var, _sp in t.walk_vars(e):
            if var.kind == "var" and var.name not in bindable and var.name not in allocated:
                self.issue(where, f"unbindable variable {var.name!r} in operator", pos)

    def check_invariants(self) -> dict:
        out: dict[str, TInvariant] = {}
        for inv in self.ast.invariants:
            where = f"invariant {inv.name}"
            clauses = []
            for cl in inv.clauses:
                quantifiers = []
                for q in cl.quantifiers:
                    ptypes = []
                    for pname in q.places:
                        if pname not in self.places:
                            self.issue(where, f"unknown place {pname!r}", q.pos)
                        else:
                            ptypes.append(self.places[pname])
                    if ptypes and any(pt != ptypes[0] for pt in ptypes):
                        self.issue(where, "quantifier places must share one token type", q.pos)
                    ty = ptypes[0] if ptypes else _ERR
                    pattern = self.check_expr(q.pattern, ty, self.var_types, where, pattern=True)
                    quantifiers.append((pattern, tuple(q.places)))
                guard = self.check_expr(cl.guard, BOOL, self.var_types, where)
                bindable: set[str] = set()
                for pattern, _pl in quantifiers:
                    for var, at_spine in t.walk_vars(pattern):
                        if var.kind == "var" and at_spine and not var.deref:
                            bindable.add(var.name)
                for var, _sp in t.walk_vars(guard):
                    if var.kind == "var" and var.name not in bindable:
                        self.issue(where, f"unbindable variable {var.name!r} in invariant guard", cl.pos)
                clauses.append(TClause(tuple(quantifiers), guard))
            out[inv.name] = TInvariant(inv.name, tuple(clauses))
        return out

    def check_marking(self, store: Store) -> dict:
        out: dict[str, Multiset] = {}
        for place, entries in self.ast.marking:
            where = f"marking {place}"
            if place not in self.places:
                self.issue(where, f"unknown place {place!r}")
                continue
            ty = self.places[place]
            counts: dict = {}
            for expr, count in entries:
                if count < 1:
                    self.issue(where, "token count must be >= 1")
                    continue
                checked = self.check_expr(expr, ty, {}, where, closed=True)
                try:
                    val = eval_expr(checked, {}, store)
                except EvalError as exc:
                    self.issue(where, f"token does not evaluate: {exc}")
                    continue
                counts[val] = counts.get(val, 0) + count
            out[place] = Multiset(counts)
        return out


def typecheck(ast: s.ModelAst, source: str = "") -> TypedModel:
    """Check a parsed model; returns the typed model or raises ModelTypeError."""
    model = _Checker(ast).run()
    model.source = source
    return model
