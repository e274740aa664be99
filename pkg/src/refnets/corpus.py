"""The bundled learnflow corpus: four course-study models plus scenarios.

Model sources live under ``models/paper/`` as package data. Scenario
files hold scripted mode sequences with expected outcomes; the runner
here replays them through the reference engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import RefnetError, ScriptError
from .lang import parse_model, typecheck
from .lang.check import TypedModel
from .lang.interp import Binding
from .multiset import Multiset
from .refnet import RefNet, RefState, ref_enabled_modes, ref_fire, value_conforms
from .values import VList, value_from_json

__all__ = [
    "CORPUS_IDS",
    "corpus_source",
    "load_corpus",
    "wf_ends",
    "exploration_state",
    "scenarios",
    "run_scenario",
    "Scenario",
    "fig4_without_role_guard",
]

CORPUS_IDS = ("fig1", "fig2", "fig3", "fig4")

# workflow source/sink places (fig1 is the only workflow-net entry)
_WF_ENDS = {"fig1": ("student pool", "portfolio record")}

_cache: dict[str, TypedModel] = {}


def _read(name: str) -> str:
    return resources.files("refnets").joinpath("models/paper").joinpath(name).read_text("utf-8")


def corpus_source(corpus_id: str) -> str:
    if corpus_id not in CORPUS_IDS:
        raise RefnetError(f"unknown corpus id {corpus_id!r}; have {CORPUS_IDS}")
    return _read(f"{corpus_id}.lfn")


def load_corpus(corpus_id: str) -> tuple[TypedModel, RefState]:
    """Parsed, type-checked model plus its declared initial state."""
    if corpus_id not in _cache:
        source = corpus_source(corpus_id)
        _cache[corpus_id] = typecheck(parse_model(source), source)
    model = _cache[corpus_id]
    return model, RefNet(model).initial_state()


def wf_ends(corpus_id: str) -> tuple[str, str]:
    try:
        return _WF_ENDS[corpus_id]
    except KeyError:
        raise RefnetError(f"{corpus_id} is not a workflow-net entry") from None


def exploration_state(corpus_id: str) -> RefState:
    """Initial state trimmed to the scale meant for full exploration.

    fig2's declared marking has six students mid-flight; exploration uses
    the three whose stage the narrative pins down the least (the pool
    pair plus the enrolled student). Other entries explore as declared.
    """
    model, state = load_corpus(corpus_id)
    if corpus_id == "fig2":
        m = state.marking
        m = m.set("student on course", Multiset())
        m = m.set("student on exam", Multiset())
        return RefState(m, state.store)
    return state


def fig4_without_role_guard() -> tuple[TypedModel, RefState]:
    """fig4 with the role-distinctness conjuncts stripped from create team.

    Mutation fixture: the "roles distinct" invariant must find a
    counterexample on this variant.
    """
    source = corpus_source("fig4")
    needle = "\n                      and r1 != r2 and r1 != r3 and r2 != r3"
    if needle not in source:
        raise RefnetError("fig4 guard text changed; update the mutation fixture")
    mutated = source.replace(needle, "")
    model = typecheck(parse_model(mutated), mutated)
    return model, RefNet(model).initial_state()


# ---------------------------------------------------------------- scenarios

@dataclass
class Scenario:
    name: str
    script: list  # [(transition, partial Binding), ...]
    expect: list
    expect_before: list = field(default_factory=list)
    marking_add: dict = field(default_factory=dict)


def scenarios(corpus_id: str) -> list[Scenario]:
    try:
        raw = json.loads(_read(f"{corpus_id}_scenarios.json"))
    except FileNotFoundError:
        return []
    out = []
    for sc in raw["scenarios"]:
        script = [
            (step["transition"], {k: value_from_json(v) for k, v in step.get("binding", {}).items()})
            for step in sc.get("script", [])
        ]
        out.append(
            Scenario(
                name=sc["name"],
                script=script,
                expect=sc.get("expect", []),
                expect_before=sc.get("expect_before", []),
                marking_add=sc.get("marking_add", {}),
            )
        )
    return out


def _binding_extends(partial: Binding, full: Binding) -> bool:
    return all(k in full and full[k] == v for k, v in partial.items())


def resolve_mode(net: RefNet, state: RefState, transition: str, partial: Binding):
    """The unique enabled mode matching a partial binding."""
    matches = [
        (t, b)
        for t, b in ref_enabled_modes(net, state)
        if t == transition and _binding_extends(partial, b)
    ]
    if not matches:
        raise ScriptError(f"no enabled mode for {transition!r} matching {partial!r}")
    if len(matches) > 1:
        raise ScriptError(f"ambiguous mode for {transition!r}: {len(matches)} matches")
    return matches[0]


def _apply_marking_add(model: TypedModel, state: RefState, marking_add: dict) -> RefState:
    m = state.marking
    for place, tokens in marking_add.items():
        ty = model.places.get(place)
        if ty is None:
            raise RefnetError(f"scenario adds tokens to unknown place {place!r}")
        ms = m.get(place)
        for tok_json in tokens:
            tok = value_from_json(tok_json)
            if not value_conforms(tok, ty):
                raise RefnetError(f"scenario token does not fit {place!r}: {tok!r}")
            ms = ms.add(tok)
        m = m.set(place, ms)
    return RefState(m, state.store)


def _run_checks(model: TypedModel, net: RefNet, state: RefState, checks: list, context: str):
    for chk in checks:
        kind = chk["check"]
        if kind == "mode_count":
            have = sum(1 for t, _b in ref_enabled_modes(net, state) if t == chk["transition"])
            if have != chk["count"]:
                raise ScriptError(
                    f"{context}: expected {chk['count']} modes of {chk['transition']!r}, found {have}"
                )
        elif kind in ("mode_present", "mode_absent"):
            partial = {k: value_from_json(v) for k, v in chk.get("binding", {}).items()}
            found = any(
                t == chk["transition"] and _binding_extends(partial, b)
                for t, b in ref_enabled_modes(net, state)
            )
            if kind == "mode_present" and not found:
                raise ScriptError(f"{context}: missing mode {chk['transition']!r} {partial!r}")
            if kind == "mode_absent" and found:
                raise ScriptError(f"{context}: unexpected mode {chk['transition']!r} {partial!r}")
        elif kind == "place_contains":
            tok = value_from_json(chk["value"])
            if tok not in state.marking.get(chk["place"]):
                raise ScriptError(f"{context}: {chk['place']!r} does not hold {tok!r}")
        elif kind == "place_count":
            have = len(state.marking.get(chk["place"]))
            if have != chk["count"]:
                raise ScriptError(
                    f"{context}: expected {chk['count']} tokens in {chk['place']!r}, found {have}"
                )
        elif kind == "store_field_contains":
            rec = state.store.get(chk["pointer"])
            value = value_from_json(chk["value"])
            fieldval = rec.get(chk["field"])
            items = fieldval.items if isinstance(fieldval, VList) else fieldval
            if value not in items:
                raise ScriptError(
                    f"{context}: {chk['pointer']}.{chk['field']} does not contain {value!r}"
                )
        else:
            raise RefnetError(f"unknown scenario check {kind!r}")


def run_scenario(corpus_id: str, scenario: Scenario) -> RefState:
    """Replay one scenario; raises ScriptError on any failed step or check."""
    model, state = load_corpus(corpus_id)
    net = RefNet(model)
    if scenario.marking_add:
        state = _apply_marking_add(model, state, scenario.marking_add)
    _run_checks(model, net, state, scenario.expect_before, f"{scenario.name} (before)")
    for i, (transition, partial) in enumerate(scenario.script):
        t, b = resolve_mode(net, state, transition, partial)
        state = ref_fire(net, state, t, b)
    _run_checks(model, net, state, scenario.expect, scenario.name)
    return state
