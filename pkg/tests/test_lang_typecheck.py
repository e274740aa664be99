import pytest

from refnets import corpus
from refnets.errors import ModelTypeError
from refnets.lang import parse_model, typecheck
from refnets.typesys import INT, ListType, TupleType


def check(src):
    return typecheck(parse_model(src), src)


def issues_of(src):
    with pytest.raises(ModelTypeError) as err:
        check(src)
    return [str(i) for i in err.value.issues]


def test_arc_type_mismatch_names_arc_and_types():
    msgs = issues_of(
        """
        vars { x: int; }
        places { p: str; }
        transitions { t; }
        arcs { p -> t: x; t -> p: 7; }
        """
    )
    assert any("arc t -> p" in m and "expected str, got int" in m for m in msgs)


def test_guard_must_be_boolean():
    msgs = issues_of(
        """
        vars { x: int; }
        places { p: int; }
        transitions { t guard x + 1; }
        arcs { p -> t: x; }
        """
    )
    assert any("guard" in m and "expected bool" in m for m in msgs)


def test_unbindable_output_variable():
    msgs = issues_of(
        """
        vars { x: int; y: int; }
        places { p: int; q: int; }
        transitions { t; }
        arcs { p -> t: x; t -> q: y; }
        """
    )
    assert any("unbindable variable 'y'" in m for m in msgs)


def test_deref_position_variable_is_not_bindable():
    # x appears only inside a computed demand (a field access), never at
    # a pattern position
    msgs = issues_of(
        """
        types { R = rec(n: int); }
        pointers { P: R = {n: 1}; }
        places { p: int; }
        transitions { t; }
        arcs { p -> t: P.n + x; }
        vars { x: int; }
        """
    )
    assert any("unbindable variable 'x'" in m for m in msgs)


def test_fig3_guard_accepted():
    model, _state = corpus.load_corpus("fig3")
    tr = model.transitions["choose course"]
    assert tr.guard is not None
    assert tr.bindable == {"id", "p", "c", "nm", "pr"}


def test_place_type_from_alias():
    model = check(
        """
        types { STUDENT = (int, list(int)); }
        vars { id: int; r: list(int); }
        places { "student pool": STUDENT; }
        transitions { t; }
        arcs { "student pool" -> t: (id, r); }
        """
    )
    assert model.places["student pool"] == TupleType((INT, ListType(INT)))


def test_wildcard_rejected_outside_patterns():
    msgs = issues_of(
        """
        vars { x: int; }
        places { p: int; q: int; }
        transitions { t; }
        arcs { p -> t: x; t -> q: _; }
        """
    )
    assert any("wildcard" in m for m in msgs)


def test_wildcard_rejected_on_input_arcs():
    # a wildcard demand would not be a function of the binding
    msgs = issues_of(
        """
        vars { x: int; }
        places { p: (int, int); q: int; }
        transitions { t; }
        arcs { p -> t: (x, _); t -> q: x; }
        """
    )
    assert any("wildcard not allowed on arcs" in m for m in msgs)


def test_wildcard_fine_in_invariant_patterns():
    model = check(
        """
        vars { x: int; y: int; }
        places { p: (int, int); }
        transitions { t; }
        arcs { p -> t: (x, y); }
        invariants { diag: forall (x, _) in [p]: x >= 0; }
        """
    )
    assert "diag" in model.invariants


def test_pointer_expressions_must_be_names():
    msgs = issues_of(
        """
        types { R = rec(n: int); }
        pointers { P: R = {n: 0}; Q: R = {n: 1}; }
        vars { b: bool; w: ref R; }
        places { p: bool; q: ref R; }
        transitions { t; }
        arcs { p -> t: b; t -> q: if b then ref(w) else ref(w); }
        """
    )
    assert any("must be a pointer" in m for m in msgs)


def test_no_pointers_inside_sets():
    msgs = issues_of(
        """
        types { R = rec(n: int); }
        places { p: set(ref R); }
        transitions { t; }
        arcs { p -> t: {}; }
        """
    )
    assert any("pointer" in m for m in msgs)


def test_value_variables_cannot_carry_pointers():
    msgs = issues_of(
        """
        types { R = rec(n: int); }
        vars { tok: (int, ref R); }
        places { p: (int, ref R); }
        transitions { t; }
        arcs { p -> t: tok; }
        """
    )
    assert any("bind components" in m for m in msgs)


def test_operator_field_kinds():
    msgs = issues_of(
        """
        types { R = rec(ns: set(int), log: list(int)); }
        pointers { P: R = {ns: {}, log: []}; }
        vars { w: ref R; x: int; }
        places { p: (int, ref R); }
        transitions {
          t op append x to w.ns, add x to w.log;
        }
        arcs { p -> t: (x, w); }
        """
    )
    assert any("needs a list field" in m for m in msgs)
    assert any("needs a set field" in m for m in msgs)


def test_operator_target_must_be_bound():
    msgs = issues_of(
        """
        types { R = rec(n: int); }
        pointers { P: R = {n: 0}; }
        vars { w: ref R; x: int; }
        places { p: int; }
        transitions { t op set w.n = x; }
        arcs { p -> t: x; }
        """
    )
    assert any("not bound by this transition" in m for m in msgs)


def test_allocate_checks():
    model = check(
        """
        types { R = rec(n: int); }
        vars { x: int; w: ref R; }
        places { p: int; q: (int, ref R); }
        transitions { t op new w = {n: x}; }
        arcs { p -> t: x; t -> q: (x, w); }
        """
    )
    tr = model.transitions["t"]
    assert tr.allocated == {"w"}

    msgs = issues_of(
        """
        types { R = rec(n: int); }
        vars { x: int; w: ref R; }
        places { p: (int, ref R); }
        transitions { t op new w = {n: x}; }
        arcs { p -> t: (x, w); }
        """
    )
    assert any("both bound" in m for m in msgs)


def test_guard_comparison_on_pointers_restricted():
    # equality through ref() is fine, ordering is not
    check(
        """
        types { R = rec(n: int); }
        vars { w: ref R; u: ref R; x: int; y: int; }
        places { p: (int, ref R); q: (int, ref R); }
        transitions { t guard ref(w) == ref(u); }
        arcs { p -> t: (x, w); q -> t: (y, u); }
        """
    )
    msgs = issues_of(
        """
        types { R = rec(n: int); }
        vars { w: ref R; u: ref R; x: int; y: int; }
        places { p: (int, ref R); q: (int, ref R); }
        transitions { t guard ref(w) < ref(u); }
        arcs { p -> t: (x, w); q -> t: (y, u); }
        """
    )
    assert any("expected int" in m for m in msgs)


def test_empty_set_needs_context():
    msgs = issues_of(
        """
        vars { x: int; }
        places { p: int; }
        transitions { t guard {} == {}; }
        arcs { p -> t: x; }
        """
    )
    assert any("empty set" in m for m in msgs)


def test_marking_tokens_checked():
    msgs = issues_of(
        """
        places { p: int; }
        transitions { t; }
        arcs { p -> t: 1; }
        marking { p: "nope"; }
        """
    )
    assert any("expected int, got str" in m for m in msgs)


def test_unit_classical_detection():
    model = check(
        """
        places { p: unit; q: unit; }
        transitions { t; }
        arcs { p -> t: (); t -> q: [(), ()]; }
        marking { p: () # 2; }
        """
    )
    assert model.is_unit_classical()
    model2, _ = corpus.load_corpus("fig2")
    assert not model2.is_unit_classical()


def test_invariant_quantifier_types_must_agree():
    msgs = issues_of(
        """
        vars { x: int; }
        places { p: int; q: str; }
        transitions { t; }
        arcs { p -> t: x; }
        invariants { mixed: forall x in [p, q]: x == x; }
        """
    )
    assert any("share one token type" in m for m in msgs)
