"""Colored Petri net engine: typed tokens, bindings, modes.

Tokens carry data; a transition fires in a mode (a binding of its
variables) found by matching input-arc patterns against the tokens
actually present. There is no global store at this level: all data
travels inside tokens.
"""

from __future__ import annotations

from typing import Mapping

from .errors import FiringError, RefnetError
from .lang.check import TTransition, TypedModel
from .lang.interp import Binding, Store, binding_key, eval_expr, eval_guard
from .lang.patterns import match_pattern
from .multiset import EMPTY, Multiset
from .values import canon_key

__all__ = [
    "ColoredMarking",
    "ColoredNet",
    "enumerate_bindings",
    "cpn_enabled",
    "cpn_fire",
    "cpn_enabled_modes",
]

_NO_STORE = Store()


class ColoredMarking:
    """Immutable mapping place -> multiset of tokens; empty places dropped."""

    __slots__ = ("_tokens", "_hash")

    def __init__(self, tokens: Mapping[str, Multiset] | None = None):
        self._tokens = {p: ms for p, ms in (tokens or {}).items() if ms}
        self._hash: int | None = None

    def get(self, place: str) -> Multiset:
        return self._tokens.get(place, EMPTY)

    def set(self, place: str, ms: Multiset) -> "ColoredMarking":
        tokens = dict(self._tokens)
        if ms:
            tokens[place] = ms
        else:
            tokens.pop(place, None)
        return ColoredMarking(tokens)

    def marked_places(self) -> list[str]:
        return sorted(self._tokens)

    def total_tokens(self) -> int:
        return sum(len(ms) for ms in self._tokens.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, ColoredMarking) and self._tokens == other._tokens

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((p, ms) for p, ms in self._tokens.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"ColoredMarking({self._tokens!r})"


class ColoredNet:
    """A typed model run with pure colored-net semantics (no store)."""

    def __init__(self, model: TypedModel):
        if model.has_refs:
            raise RefnetError(
                "model uses pointers or operators; load it with the reference engine"
            )
        self.model = model

    def initial_marking(self) -> ColoredMarking:
        return ColoredMarking(self.model.initial_marking)

    def transition(self, name: str) -> TTransition:
        try:
            return self.model.transitions[name]
        except KeyError:
            raise RefnetError(f"unknown transition: {name!r}") from None


def _candidate_bindings(tr: TTransition, m: ColoredMarking, store: Store) -> list[Binding]:
    """All bindings obtainable by matching input patterns against tokens.

    Loose on multiplicity (the same token instance may back two patterns);
    the inclusion check in *_enabled filters those out.
    """
    pairs = [(place, item) for place, ins in tr.inputs for item in ins.items]
    results: list[Binding] = []

    def rec(i: int, binding: Binding):
        if i == len(pairs):
            results.append(binding)
            return
        place, pattern = pairs[i]
        for tok in sorted(m.get(place), key=canon_key):
            nb = match_pattern(pattern, tok, binding, store)
            if nb is not None:
                rec(i + 1, nb)

    rec(0, {})
    return results


def _demands(tr: TTransition, b: Binding, store: Store) -> list[tuple[str, Multiset]]:
    out = []
    for place, ins in tr.inputs:
        out.append((place, Multiset([eval_expr(item, b, store) for item in ins.items])))
    return out


def _productions(tr: TTransition, b: Binding, store: Store) -> list[tuple[str, Multiset]]:
    out = []
    for place, ins in tr.outputs:
        out.append((place, Multiset([eval_expr(item, b, store) for item in ins.items])))
    return out


def _check_complete(tr: TTransition, b: Binding):
    missing = sorted(tr.bindable - set(b))
    if missing:
        raise RefnetError(f"incomplete binding for {tr.name!r}: missing {missing}")


def enumerate_bindings(cpn: ColoredNet, m: ColoredMarking, t: str) -> list[Binding]:
    """All modes of t in m: guard-filtered, deduplicated, canonical order."""
    tr = cpn.transition(t)
    seen: dict[str, Binding] = {}
    for b in _candidate_bindings(tr, m, _NO_STORE):
        key = binding_key(b)
        if key in seen:
            continue
        if not eval_guard(tr.guard, b, _NO_STORE):
            continue
        if all(demand <= m.get(place) for place, demand in _demands(tr, b, _NO_STORE)):
            seen[key] = b
    return [seen[k] for k in sorted(seen)]


def cpn_enabled(cpn: ColoredNet, m: ColoredMarking, t: str, b: Binding) -> bool:
    """Enabled: evaluated input demands fit in every input place."""
    tr = cpn.transition(t)
    _check_complete(tr, b)
    if not eval_guard(tr.guard, b, _NO_STORE):
        return False
    return all(demand <= m.get(place) for place, demand in _demands(tr, b, _NO_STORE))


def cpn_fire(cpn: ColoredNet, m: ColoredMarking, t: str, b: Binding) -> ColoredMarking:
    """Fire t in mode b: subtract input demands, add output productions."""
    tr = cpn.transition(t)
    if not cpn_enabled(cpn, m, t, b):
        raise FiringError(f"transition {t!r} is not enabled under {b!r}")
    out = m
    for place, demand in _demands(tr, b, _NO_STORE):
        out = out.set(place, out.get(place) - demand)
    for place, produced in _productions(tr, b, _NO_STORE):
        out = out.set(place, out.get(place) + produced)
    return out


def cpn_enabled_modes(cpn: ColoredNet, m: ColoredMarking) -> list[tuple[str, Binding]]:
    """All (transition, binding) modes, ordered by (transition, binding)."""
    modes: list[tuple[str, Binding]] = []
    for t in sorted(cpn.model.transitions):
        modes.extend((t, b) for b in enumerate_bindings(cpn, m, t))
    return modes


def as_classical_net(model: TypedModel):
    """Degenerate a unit-typed, guard-free model to (PetriNet, marking).

    Arc weight = number of unit tokens in the inscription; token counts
    become plain naturals.
    """
    from .net import PetriNet

    if not model.is_unit_classical():
        raise RefnetError("model does not degenerate to a classical net")
    flow = {}
    for tname, tr in model.transitions.items():
        for place, ins in tr.inputs:
            flow[(place, tname)] = len(ins.items)
        for place, ins in tr.outputs:
            flow[(tname, place)] = len(ins.items)
    net = PetriNet(model.places.keys(), model.transitions.keys(), flow)
    m0 = Multiset({p: len(ms) for p, ms in model.initial_marking.items() if len(ms)})
    return net, m0
