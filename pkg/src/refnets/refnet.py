"""Reference-data net engine: tokens may point into a shared store.

A state is a pair (marking, store). Guards and arc expressions can read
the store through reference variables; transitions carry operators that
rewrite it. One firing is atomic and proceeds in a fixed order:

1. guard and input demands are evaluated against the pre-firing store,
2. input tokens are consumed,
3. the operator transforms the store (and may allocate fresh pointers),
4. output expressions are evaluated against the new store,
5. output tokens are produced.

Evaluating outputs after the operator lets produced tokens carry freshly
written data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .cpn import ColoredMarking, _candidate_bindings, _demands, _productions
from .errors import FiringError, RefnetError, ScriptError
from .lang.check import TTransition, TypedModel
from .lang.interp import Binding, Store, apply_operator, binding_key, eval_guard
from .typesys import (
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
)
from .values import Pointer, Unit, VList, VRec

__all__ = [
    "RefState",
    "RefNet",
    "enumerate_bindings",
    "ref_enabled",
    "ref_fire",
    "ref_enabled_modes",
    "ref_run",
    "dangling_pointers",
    "value_conforms",
]


@dataclass(frozen=True)
class RefState:
    marking: ColoredMarking
    store: Store


class RefNet:
    """Engine over a typed model; also runs store-free (colored) models."""

    def __init__(self, model: TypedModel):
        self.model = model

    def initial_state(self) -> RefState:
        return RefState(ColoredMarking(self.model.initial_marking), self.model.initial_store())

    def transition(self, name: str) -> TTransition:
        try:
            return self.model.transitions[name]
        except KeyError:
            raise RefnetError(f"unknown transition: {name!r}") from None


def enumerate_bindings(net: RefNet, state: RefState, t: str) -> list[Binding]:
    """Modes of t in (m, s); guards may read the store."""
    tr = net.transition(t)
    m, s = state.marking, state.store
    seen: dict[str, Binding] = {}
    for b in _candidate_bindings(tr, m, s):
        key = binding_key(b)
        if key in seen:
            continue
        if not eval_guard(tr.guard, b, s):
            continue
        if all(demand <= m.get(place) for place, demand in _demands(tr, b, s)):
            seen[key] = b
    return [seen[k] for k in sorted(seen)]


def ref_enabled(net: RefNet, state: RefState, t: str, b: Binding) -> bool:
    tr = net.transition(t)
    missing = sorted(tr.bindable - set(b))
    if missing:
        raise RefnetError(f"incomplete binding for {t!r}: missing {missing}")
    if not eval_guard(tr.guard, b, state.store):
        return False
    return all(
        demand <= state.marking.get(place) for place, demand in _demands(tr, b, state.store)
    )


def ref_fire(net: RefNet, state: RefState, t: str, b: Binding) -> RefState:
    """One atomic firing; see the module docstring for the step order."""
    tr = net.transition(t)
    if not ref_enabled(net, state, t, b):
        raise FiringError(f"transition {t!r} is not enabled under {b!r}")
    m, s = state.marking, state.store
    for place, demand in _demands(tr, b, s):
        m = m.set(place, m.get(place) - demand)
    s2, b2 = apply_operator(tr.ops, b, s)
    for place, produced in _productions(tr, b2, s2):
        m = m.set(place, m.get(place) + produced)
    return RefState(m, s2)


def ref_enabled_modes(net: RefNet, state: RefState) -> list[tuple[str, Binding]]:
    modes: list[tuple[str, Binding]] = []
    for t in sorted(net.model.transitions):
        modes.extend((t, b) for b in enumerate_bindings(net, state, t))
    return modes


def ref_run(
    net: RefNet,
    state: RefState,
    max_steps: int,
    seed: int | None = None,
    script: Iterable[tuple[str, Binding]] | None = None,
) -> list[tuple[tuple[str, Binding], RefState]]:
    """A run: scripted modes replayed exactly, or seeded random choice.

    Random policy picks uniformly among the canonical enabled modes, so
    a (model, state, seed) triple always produces the same run.
    """
    steps: list[tuple[tuple[str, Binding], RefState]] = []
    if script is not None:
        for i, (t, b) in enumerate(script):
            if len(steps) >= max_steps:
                break
            if not ref_enabled(net, state, t, b):
                raise ScriptError(f"step {i}: mode ({t!r}, {b!r}) is not enabled")
            state = ref_fire(net, state, t, b)
            steps.append(((t, b), state))
        return steps

    rng = random.Random(seed)
    while len(steps) < max_steps:
        modes = ref_enabled_modes(net, state)
        if not modes:
            break
        t, b = modes[rng.randrange(len(modes))]
        state = ref_fire(net, state, t, b)
        steps.append(((t, b), state))
    return steps


def _pointers_in(value) -> Iterable[str]:
    if isinstance(value, Pointer):
        yield value.name
    elif isinstance(value, tuple):
        for v in value:
            yield from _pointers_in(v)
    elif isinstance(value, frozenset):
        for v in value:
            yield from _pointers_in(v)
    elif isinstance(value, VList):
        for v in value.items:
            yield from _pointers_in(v)
    elif isinstance(value, VRec):
        for _k, v in value.fields:
            yield from _pointers_in(v)


def dangling_pointers(state: RefState) -> list[str]:
    """Pointers referenced by tokens but absent from the store."""
    missing = set()
    for place in state.marking.marked_places():
        for tok in state.marking.get(place):
            for name in _pointers_in(tok):
                if name not in state.store:
                    missing.add(name)
    return sorted(missing)


def value_conforms(value, ty: Type) -> bool:
    """Runtime check that a value inhabits a type."""
    if ty == INT:
        return isinstance(value, int) and not isinstance(value, bool)
    if ty == BOOL:
        return isinstance(value, bool)
    if ty == STR:
        return isinstance(value, str)
    if ty == UNITT:
        return isinstance(value, Unit)
    if isinstance(ty, TupleType):
        return (
            isinstance(value, tuple)
            and len(value) == len(ty.items)
            and all(value_conforms(v, sub) for v, sub in zip(value, ty.items))
        )
    if isinstance(ty, SetType):
        return isinstance(value, frozenset) and all(value_conforms(v, ty.elem) for v in value)
    if isinstance(ty, ListType):
        return isinstance(value, VList) and all(value_conforms(v, ty.elem) for v in value.items)
    if isinstance(ty, RecordType):
        if not isinstance(value, VRec):
            return False
        names = [k for k, _v in value.fields]
        if names != [k for k, _t in ty.fields]:
            return False
        return all(value_conforms(v, ty.field_type(k)) for k, v in value.fields)
    if isinstance(ty, RefType):
        return isinstance(value, Pointer)
    return False


def check_marking_types(model: TypedModel, marking: ColoredMarking) -> list[str]:
    """Type violations in a marking; empty when all tokens conform."""
    out = []
    for place in marking.marked_places():
        ty = model.places.get(place)
        if ty is None:
            out.append(f"unknown place {place!r}")
            continue
        for tok in marking.get(place):
            if not value_conforms(tok, ty):
                out.append(f"token {tok!r} does not inhabit {place!r}")
    return out
