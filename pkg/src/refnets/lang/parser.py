"""Recursive-descent parser for the model language.

Grammar sketch (see README for the full reference):

    model       := section*
    section     := "types" "{" (NAME "=" type ";")* "}"
                 | "consts" "{" (NAME ":" type "=" expr ";")* "}"
                 | "pointers" "{" (NAME ":" type "=" expr ";")* "}"
                 | "vars" "{" (NAME ":" type ";")* "}"
                 | "places" "{" (node ":" type ";")* "}"
                 | "transitions" "{" (node ["guard" expr] ["op" ops] ";")* "}"
                 | "arcs" "{" (node "->" node ":" inscription ";")* "}"
                 | "marking" "{" (node ":" token ("," token)* ";")* "}"
                 | "invariants" "{" (node ":" clause ("also" clause)* ";")* "}"
    inscription := "[" [expr ("," expr)*] "]" | expr
    token       := expr ["#" INT]
    clause      := "forall" quant ("," quant)* ":" expr
    quant       := pattern "in" "[" node ("," node)* "]"
    ops         := opstmt ("," opstmt)*
    opstmt      := "skip" | "set" NAME "." NAME "=" expr
                 | "add" expr "to" NAME "." NAME
                 | "append" expr "to" NAME "." NAME
                 | "new" NAME "=" expr

``node`` is a bare identifier or a quoted string (names with spaces).
"""

from __future__ import annotations

from ..errors import ParseError
from . import syntax as s
from .lexer import Token, tokenize

_BIN_PREC = {
    "or": 1,
    "and": 2,
    "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4, "in": 4, "subset": 4,
    "union": 5,
    "+": 6, "-": 6,
    "*": 7,
}


class _Stream:
    def __init__(self, source: str):
        self.tokens = list(tokenize(source))
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.cur
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        want = text if text is not None else kind
        got = self.cur.text or self.cur.kind
        raise ParseError(f"expected {want!r}, found {got!r}", self.cur.line, self.cur.col)

    def pos(self) -> s.Pos:
        return s.Pos(self.cur.line, self.cur.col)


def _parse_node_name(st: _Stream) -> str:
    tok = st.cur
    if tok.kind in ("ident", "string"):
        st.advance()
        return tok.text
    raise ParseError(f"expected a name, found {tok.text or tok.kind!r}", tok.line, tok.col)


# ------------------------------------------------------------------ types

def _parse_type(st: _Stream) -> s.TypeAst:
    pos = st.pos()
    tok = st.cur
    if tok.kind == "keyword" and tok.text in ("int", "bool", "str", "unit"):
        st.advance()
        return s.TPrim(tok.text, pos)
    if st.accept("keyword", "set"):
        st.expect("symbol", "(")
        elem = _parse_type(st)
        st.expect("symbol", ")")
        return s.TSet(elem, pos)
    if st.accept("keyword", "list"):
        st.expect("symbol", "(")
        elem = _parse_type(st)
        st.expect("symbol", ")")
        return s.TList(elem, pos)
    if st.accept("keyword", "rec"):
        st.expect("symbol", "(")
        fields = []
        while not st.at("symbol", ")"):
            fname = st.expect("ident").text
            st.expect("symbol", ":")
            fields.append((fname, _parse_type(st)))
            if not st.accept("symbol", ","):
                break
        st.expect("symbol", ")")
        if not fields:
            raise ParseError("record type needs at least one field", pos.line, pos.col)
        return s.TRec(tuple(fields), pos)
    if st.accept("keyword", "ref"):
        return s.TRef(_parse_type(st), pos)
    if st.accept("symbol", "("):
        items = [_parse_type(st)]
        while st.accept("symbol", ","):
            items.append(_parse_type(st))
        st.expect("symbol", ")")
        if len(items) == 1:
            return items[0]  # parenthesized type, not a 1-tuple
        return s.TTuple(tuple(items), pos)
    if tok.kind == "ident":
        st.advance()
        return s.TName(tok.text, pos)
    raise ParseError(f"expected a type, found {tok.text or tok.kind!r}", tok.line, tok.col)


# ------------------------------------------------------------ expressions

def _parse_expr(st: _Stream, min_prec: int = 1) -> s.Expr:
    if st.at("keyword", "if"):
        pos = st.pos()
        st.advance()
        cond = _parse_expr(st)
        st.expect("keyword", "then")
        then = _parse_expr(st)
        st.expect("keyword", "else")
        other = _parse_expr(st)
        return s.Cond(cond, then, other, pos)

    left = _parse_unary(st)
    while True:
        tok = st.cur
        op = tok.text if tok.kind in ("symbol", "keyword") else None
        prec = _BIN_PREC.get(op or "")
        if prec is None or prec < min_prec:
            return left
        st.advance()
        right = _parse_expr(st, prec + 1)
        left = s.Bin(op, left, right, s.Pos(tok.line, tok.col))


def _parse_unary(st: _Stream) -> s.Expr:
    pos = st.pos()
    if st.accept("keyword", "not"):
        return s.Un("not", _parse_unary(st), pos)
    if st.accept("symbol", "-"):
        return s.Un("-", _parse_unary(st), pos)
    return _parse_postfix(st)


def _parse_postfix(st: _Stream) -> s.Expr:
    e = _parse_atom(st)
    while st.at("symbol", "."):
        pos = st.pos()
        st.advance()
        name = st.expect("ident").text
        e = s.FieldE(e, name, pos)
    return e


def _parse_atom(st: _Stream) -> s.Expr:
    tok = st.cur
    pos = st.pos()
    if tok.kind == "int":
        st.advance()
        return s.IntLit(int(tok.text), pos)
    if tok.kind == "string":
        st.advance()
        return s.StrLit(tok.text, pos)
    if st.accept("keyword", "true"):
        return s.BoolLit(True, pos)
    if st.accept("keyword", "false"):
        return s.BoolLit(False, pos)
    if st.accept("symbol", "_"):
        return s.Wild(pos)
    if st.accept("keyword", "ref"):
        st.expect("symbol", "(")
        ident = st.expect("ident").text
        st.expect("symbol", ")")
        return s.RefOf(ident, pos)
    if st.accept("keyword", "append"):
        st.expect("symbol", "(")
        args = [_parse_expr(st)]
        while st.accept("symbol", ","):
            args.append(_parse_expr(st))
        st.expect("symbol", ")")
        return s.Call("append", tuple(args), pos)
    if tok.kind == "ident":
        st.advance()
        return s.Name(tok.text, pos)
    if st.accept("symbol", "("):
        if st.accept("symbol", ")"):
            return s.UnitLit(pos)
        items = [_parse_expr(st)]
        while st.accept("symbol", ","):
            items.append(_parse_expr(st))
        st.expect("symbol", ")")
        if len(items) == 1:
            return items[0]
        return s.TupleE(tuple(items), pos)
    if st.accept("symbol", "["):
        items = []
        while not st.at("symbol", "]"):
            items.append(_parse_expr(st))
            if not st.accept("symbol", ","):
                break
        st.expect("symbol", "]")
        return s.ListE(tuple(items), pos)
    if st.accept("symbol", "{"):
        # record if it opens with `ident :`, otherwise a set
        if st.at("ident") and st.tokens[st.i + 1].kind == "symbol" and st.tokens[st.i + 1].text == ":":
            fields = []
            while not st.at("symbol", "}"):
                fname = st.expect("ident").text
                st.expect("symbol", ":")
                fields.append((fname, _parse_expr(st)))
                if not st.accept("symbol", ","):
                    break
            st.expect("symbol", "}")
            return s.RecE(tuple(fields), pos)
        items = []
        while not st.at("symbol", "}"):
            items.append(_parse_expr(st))
            if not st.accept("symbol", ","):
                break
        st.expect("symbol", "}")
        return s.SetE(tuple(items), pos)
    raise ParseError(f"expected an expression, found {tok.text or tok.kind!r}", tok.line, tok.col)


def _parse_inscription(st: _Stream) -> s.Inscription:
    pos = st.pos()
    if st.at("symbol", "["):
        st.advance()
        items = []
        while not st.at("symbol", "]"):
            items.append(_parse_expr(st))
            if not st.accept("symbol", ","):
                break
        st.expect("symbol", "]")
        return s.Inscription(tuple(items), True, pos)
    return s.Inscription((_parse_expr(st),), False, pos)


# -------------------------------------------------------------- operators

def _parse_opstmt(st: _Stream) -> s.OpStmt:
    pos = st.pos()
    if st.accept("keyword", "skip"):
        return s.SkipOp(pos)
    if st.accept("keyword", "set"):
        ref = st.expect("ident").text
        st.expect("symbol", ".")
        fieldname = st.expect("ident").text
        st.expect("symbol", "=")
        return s.SetFieldOp(ref, fieldname, _parse_expr(st), pos)
    if st.accept("keyword", "add"):
        value = _parse_expr(st)
        st.expect("keyword", "to")
        ref = st.expect("ident").text
        st.expect("symbol", ".")
        fieldname = st.expect("ident").text
        return s.AddOp(ref, fieldname, value, pos)
    if st.accept("keyword", "append"):
        if st.at("symbol", "("):
            # function-call form appeared where a statement was expected
            raise ParseError("expected `append <expr> to <ref>.<field>`", pos.line, pos.col)
        value = _parse_expr(st)
        st.expect("keyword", "to")
        ref = st.expect("ident").text
        st.expect("symbol", ".")
        fieldname = st.expect("ident").text
        return s.AppendOp(ref, fieldname, value, pos)
    if st.accept("keyword", "new"):
        var = st.expect("ident").text
        st.expect("symbol", "=")
        return s.NewOp(var, _parse_expr(st), pos)
    tok = st.cur
    raise ParseError(f"expected an operator action, found {tok.text or tok.kind!r}", tok.line, tok.col)


# ----------------------------------------------------------------- model

def parse_model(source: str) -> s.ModelAst:
    """Parse model source into an AST; raises ParseError with location."""
    st = _Stream(source)
    types: list = []
    consts: list = []
    pointers: list = []
    variables: list = []
    places: list = []
    transitions: list = []
    arcs: list = []
    marking: list = []
    invariants: list = []

    def check_dup(seen: dict, name: str, what: str, tok: Token):
        if name in seen:
            raise ParseError(f"duplicate {what} {name!r}", tok.line, tok.col)
        seen[name] = True

    seen_decl: dict = {}
    seen_places: dict = {}
    seen_trans: dict = {}
    seen_arcs: dict = {}
    seen_marks: dict = {}
    seen_invs: dict = {}

    while not st.at("eof"):
        tok = st.cur
        if tok.kind != "keyword":
            raise ParseError(f"expected a section keyword, found {tok.text or tok.kind!r}", tok.line, tok.col)
        section = tok.text
        st.advance()
        st.expect("symbol", "{")
        while not st.at("symbol", "}"):
            head = st.cur
            if section == "types":
                name = st.expect("ident").text
                check_dup(seen_decl, name, "declaration of", head)
                st.expect("symbol", "=")
                types.append((name, _parse_type(st)))
            elif section in ("consts", "pointers"):
                name = st.expect("ident").text
                check_dup(seen_decl, name, "declaration of", head)
                st.expect("symbol", ":")
                t = _parse_type(st)
                st.expect("symbol", "=")
                e = _parse_expr(st)
                (consts if section == "consts" else pointers).append((name, t, e))
            elif section == "vars":
                name = st.expect("ident").text
                check_dup(seen_decl, name, "declaration of", head)
                st.expect("symbol", ":")
                variables.append((name, _parse_type(st)))
            elif section == "places":
                name = _parse_node_name(st)
                check_dup(seen_places, name, "place", head)
                st.expect("symbol", ":")
                places.append((name, _parse_type(st)))
            elif section == "transitions":
                name = _parse_node_name(st)
                check_dup(seen_trans, name, "transition", head)
                guard = None
                ops = None
                if st.accept("keyword", "guard"):
                    guard = _parse_expr(st)
                if st.accept("keyword", "op"):
                    stmts = [_parse_opstmt(st)]
                    while st.accept("symbol", ","):
                        stmts.append(_parse_opstmt(st))
                    ops = tuple(stmts)
                transitions.append(s.TransitionDecl(name, guard, ops, s.Pos(head.line, head.col)))
            elif section == "arcs":
                src = _parse_node_name(st)
                st.expect("symbol", "->")
                dst = _parse_node_name(st)
                check_dup(seen_arcs, (src, dst), "arc", head)
                st.expect("symbol", ":")
                ins = _parse_inscription(st)
                arcs.append(s.ArcDecl(src, dst, ins, s.Pos(head.line, head.col)))
            elif section == "marking":
                place = _parse_node_name(st)
                check_dup(seen_marks, place, "marking entry for", head)
                st.expect("symbol", ":")
                entries = []
                while True:
                    e = _parse_expr(st)
                    count = 1
                    if st.accept("symbol", "#"):
                        count = int(st.expect("int").text)
                    entries.append((e, count))
                    if not st.accept("symbol", ","):
                        break
                marking.append((place, tuple(entries)))
            elif section == "invariants":
                name = _parse_node_name(st)
                check_dup(seen_invs, name, "invariant", head)
                st.expect("symbol", ":")
                clauses = [_parse_clause(st)]
                while st.accept("keyword", "also"):
                    clauses.append(_parse_clause(st))
                invariants.append(s.InvariantDecl(name, tuple(clauses), s.Pos(head.line, head.col)))
            else:
                raise ParseError(f"unknown section {section!r}", tok.line, tok.col)
            st.expect("symbol", ";")
        st.expect("symbol", "}")

    return s.ModelAst(
        types=tuple(types),
        consts=tuple(consts),
        pointers=tuple(pointers),
        vars=tuple(variables),
        places=tuple(places),
        transitions=tuple(transitions),
        arcs=tuple(arcs),
        marking=tuple(marking),
        invariants=tuple(invariants),
    )


def _parse_clause(st: _Stream) -> s.Clause:
    pos = st.pos()
    st.expect("keyword", "forall")
    quantifiers = [_parse_quantifier(st)]
    while st.accept("symbol", ","):
        quantifiers.append(_parse_quantifier(st))
    st.expect("symbol", ":")
    guard = _parse_expr(st)
    return s.Clause(tuple(quantifiers), guard, pos)


def _parse_quantifier(st: _Stream) -> s.Quantifier:
    pos = st.pos()
    # parse the pattern above comparison precedence so `in` stays free
    pattern = _parse_expr(st, _BIN_PREC["in"] + 1)
    st.expect("keyword", "in")
    st.expect("symbol", "[")
    places = [_parse_node_name(st)]
    while st.accept("symbol", ","):
        places.append(_parse_node_name(st))
    st.expect("symbol", "]")
    return s.Quantifier(pattern, tuple(places), pos)


def parse_expression(source: str) -> s.Expr:
    """Parse a standalone expression (for tests and programmatic use)."""
    st = _Stream(source)
    e = _parse_expr(st)
    if not st.at("eof"):
        tok = st.cur
        raise ParseError(f"trailing input after expression: {tok.text!r}", tok.line, tok.col)
    return e
