"""Canonical state snapshots: JSON form, hashing, loading.

The snapshot layout is diff-friendly and fully ordered: places sorted by
name, tokens by their canonical key, store entries by pointer name.
Hashes chain traces and state graphs to concrete states.
"""

from __future__ import annotations

import hashlib

from .cpn import ColoredMarking
from .errors import RefnetError
from .lang.check import TypedModel
from .lang.interp import Store
from .refnet import RefState, value_conforms
from .values import (
    canon_dumps,
    multiset_from_json,
    multiset_to_json,
    value_from_json,
    value_to_json,
)

__all__ = [
    "state_to_json",
    "state_from_json",
    "state_hash",
    "marking_to_json",
    "marking_from_json",
]


def marking_to_json(m: ColoredMarking) -> dict:
    return {p: multiset_to_json(m.get(p)) for p in m.marked_places()}


def marking_from_json(j: dict) -> ColoredMarking:
    return ColoredMarking({p: multiset_from_json(entries) for p, entries in j.items()})


def store_to_json(s: Store) -> dict:
    return {name: value_to_json(v) for name, v in s.items_sorted()}


def store_from_json(j: dict) -> Store:
    return Store({name: value_from_json(v) for name, v in j.items()})


def state_to_json(state: RefState) -> dict:
    return {"marking": marking_to_json(state.marking), "store": store_to_json(state.store)}


def state_from_json(j: dict, model: TypedModel | None = None) -> RefState:
    state = RefState(marking_from_json(j.get("marking", {})), store_from_json(j.get("store", {})))
    if model is not None:
        problems = validate_against_model(state, model)
        if problems:
            raise RefnetError("snapshot does not fit the model: " + "; ".join(problems))
    return state


def validate_against_model(state: RefState, model: TypedModel) -> list[str]:
    problems = []
    for place in state.marking.marked_places():
        ty = model.places.get(place)
        if ty is None:
            problems.append(f"unknown place {place!r}")
            continue
        for tok in state.marking.get(place):
            if not value_conforms(tok, ty):
                problems.append(f"token does not fit place {place!r}")
    return problems


def state_hash(state: RefState) -> str:
    text = canon_dumps(state_to_json(state))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
