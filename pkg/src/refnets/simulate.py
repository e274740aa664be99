"""Seeded simulation over any engine level, traces, and log export.

A trace records the fired mode and a hash chain of states; replaying the
mode script through the engine must reproduce every hash. Identical
(model, seed, max_steps) inputs give byte-identical trace files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import random
from dataclasses import dataclass

from .errors import RefnetError, ReplayError, ScriptError
from .lang.check import TypedModel
from .lang.interp import Binding
from .multiset import Multiset
from .net import PetriNet, pn_enabled_set, pn_fire
from .refnet import RefNet, RefState, ref_enabled_modes, ref_fire
from .snapshot import state_hash, state_to_json
from .values import canon_dumps, pretty, value_from_json, value_to_json

__all__ = [
    "Mode",
    "Trace",
    "ModelEngine",
    "ClassicalEngine",
    "simulate",
    "replay",
    "trace_from_script",
    "save_traces",
    "load_traces",
    "export_log",
]

Mode = tuple  # (transition, Binding)


class ModelEngine:
    """Uniform stepping interface over a typed model (colored or reference)."""

    def __init__(self, model: TypedModel):
        self.model = model
        self.net = RefNet(model)
        self.model_ref = model.model_hash

    def initial_state(self) -> RefState:
        return self.net.initial_state()

    def modes(self, state: RefState) -> list[Mode]:
        return ref_enabled_modes(self.net, state)

    def fire(self, state: RefState, mode: Mode) -> RefState:
        t, b = mode
        return ref_fire(self.net, state, t, b)

    def state_hash(self, state: RefState) -> str:
        return state_hash(state)

    def state_json(self, state: RefState) -> dict:
        return state_to_json(state)


class ClassicalEngine:
    """The same interface over a plain net; modes carry empty bindings."""

    def __init__(self, net: PetriNet):
        self.net = net
        self.model_ref = _net_hash(net)

    def modes(self, m: Multiset) -> list[Mode]:
        return [(t, {}) for t in sorted(pn_enabled_set(self.net, m))]

    def fire(self, m: Multiset, mode: Mode) -> Multiset:
        return pn_fire(self.net, m, mode[0])

    def state_hash(self, m: Multiset) -> str:
        text = canon_dumps({p: m.count(p) for p in sorted(m)})
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def state_json(self, m: Multiset) -> dict:
        return {"marking": {p: m.count(p) for p in sorted(m)}}


def _net_hash(net: PetriNet) -> str:
    from .net import net_to_json

    return hashlib.sha256(canon_dumps(net_to_json(net)).encode("utf-8")).hexdigest()


@dataclass
class TraceStep:
    index: int
    transition: str
    binding: Binding
    pre: str
    post: str


@dataclass
class Trace:
    model_ref: str
    seed: int | None
    steps: list[TraceStep]
    terminal: str  # "deadlock" | "step-limit" | "scripted-end"

    def modes(self) -> list[Mode]:
        return [(s.transition, s.binding) for s in self.steps]

    def to_json(self) -> dict:
        return {
            "model": self.model_ref,
            "seed": self.seed,
            "terminal": self.terminal,
            "steps": [
                {
                    "index": s.index,
                    "transition": s.transition,
                    "binding": {k: value_to_json(v) for k, v in sorted(s.binding.items())},
                    "pre": s.pre,
                    "post": s.post,
                }
                for s in self.steps
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Trace":
        steps = [
            TraceStep(
                index=s["index"],
                transition=s["transition"],
                binding={k: value_from_json(v) for k, v in s["binding"].items()},
                pre=s["pre"],
                post=s["post"],
            )
            for s in data["steps"]
        ]
        return cls(data["model"], data.get("seed"), steps, data["terminal"])


def simulate(engine, state, seed: int | None, max_steps: int) -> Trace:
    """Random walk: uniform choice among canonical modes, seeded.

    Stops at a deadlock or after max_steps. The uniform choice is over
    modes, not transitions: a transition enabled in three modes is three
    times as likely as one enabled in a single mode.
    """
    if max_steps < 0:
        raise RefnetError("max_steps must be >= 0")
    rng = random.Random(seed)
    steps: list[TraceStep] = []
    terminal = "step-limit"
    for i in range(max_steps):
        modes = engine.modes(state)
        if not modes:
            terminal = "deadlock"
            break
        t, b = modes[rng.randrange(len(modes))]
        pre = engine.state_hash(state)
        state = engine.fire(state, (t, b))
        steps.append(TraceStep(i, t, b, pre, engine.state_hash(state)))
    return Trace(engine.model_ref, seed, steps, terminal)


def trace_from_script(engine, state, script: list[Mode]) -> Trace:
    """Deterministic trace from an explicit mode list."""
    steps: list[TraceStep] = []
    for i, (t, b) in enumerate(script):
        modes = engine.modes(state)
        if (t, b) not in modes:
            raise ScriptError(f"step {i}: mode ({t!r}, {b!r}) is not enabled")
        pre = engine.state_hash(state)
        state = engine.fire(state, (t, b))
        steps.append(TraceStep(i, t, b, pre, engine.state_hash(state)))
    return Trace(engine.model_ref, None, steps, "scripted-end")


def replay(engine, state, trace: Trace) -> list:
    """Re-fire a trace's modes, checking every recorded hash; returns states."""
    states = [state]
    for step in trace.steps:
        have = engine.state_hash(state)
        if have != step.pre:
            raise ReplayError(f"step {step.index}: pre-state hash mismatch")
        state = engine.fire(state, (step.transition, step.binding))
        have = engine.state_hash(state)
        if have != step.post:
            raise ReplayError(f"step {step.index}: post-state hash mismatch")
        states.append(state)
    return states


def save_traces(traces: list[Trace], path: str):
    data = [t.to_json() for t in traces]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canon_dumps(data))
        fh.write("\n")


def load_traces(path: str) -> list[Trace]:
    with open(path, encoding="utf-8") as fh:
        return [Trace.from_json(item) for item in json.load(fh)]


def export_log(traces: list[Trace], path: str):
    """Event log as CSV: one row per step, logical timestamp = step index.

    Binding variables become columns (union over all steps, sorted).
    """
    refs = {t.model_ref for t in traces}
    if len(refs) > 1:
        raise RefnetError("traces come from different models")
    var_names = sorted({k for t in traces for s in t.steps for k in s.binding})
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trace", "step", "transition", "timestamp", *var_names])
        for ti, trace in enumerate(traces):
            for s in trace.steps:
                row = [ti, s.index, s.transition, s.index]
                row.extend(pretty(s.binding[k]) if k in s.binding else "" for k in var_names)
                writer.writerow(row)
