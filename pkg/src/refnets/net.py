"""Classical Petri nets and workflow nets.

Markings over indistinguishable tokens are plain multisets of place ids,
so the firing rule is literally marking algebra: consume the preset,
produce the postset.
"""

from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Mapping

from .errors import FiringError, RefnetError
from .multiset import Multiset

__all__ = [
    "PetriNet",
    "WorkflowNet",
    "WfViolation",
    "marking",
    "pn_enabled",
    "pn_fire",
    "pn_enabled_set",
    "wf_validate",
    "net_from_json",
    "net_to_json",
    "load_net_file",
]


class PetriNet:
    """A net (P, T, F) with natural arc weights. Immutable once built."""

    def __init__(
        self,
        places: Iterable[str],
        transitions: Iterable[str],
        flow: Mapping[tuple[str, str], int],
        labels: Mapping[str, str] | None = None,
    ):
        self.places = frozenset(places)
        self.transitions = frozenset(transitions)
        if not self.places or not self.transitions:
            raise RefnetError("a net needs at least one place and one transition")
        if any(not p for p in self.places) or any(not t for t in self.transitions):
            raise RefnetError("node ids must be nonempty")
        overlap = self.places & self.transitions
        if overlap:
            raise RefnetError(f"places and transitions overlap: {sorted(overlap)}")
        self.labels = dict(labels or {})

        self.flow: dict[tuple[str, str], int] = {}
        for (src, dst), w in flow.items():
            if not isinstance(w, int) or w < 0:
                raise RefnetError(f"arc weight must be a natural number: {(src, dst)} -> {w!r}")
            if w == 0:
                continue
            if src in self.places and dst in self.transitions:
                pass
            elif src in self.transitions and dst in self.places:
                pass
            else:
                raise RefnetError(f"arc endpoints must be place->transition or transition->place: {(src, dst)}")
            self.flow[(src, dst)] = w

        self.sorted_places = sorted(self.places)
        self.sorted_transitions = sorted(self.transitions)
        self._pre: dict[str, Multiset] = {t: Multiset() for t in self.transitions}
        self._post: dict[str, Multiset] = {t: Multiset() for t in self.transitions}
        for (src, dst), w in self.flow.items():
            if src in self.places:
                self._pre[dst] = self._pre[dst].add(src, w)
            else:
                self._post[src] = self._post[src].add(dst, w)

    def weight(self, src: str, dst: str) -> int:
        return self.flow.get((src, dst), 0)

    def preset(self, t: str) -> Multiset:
        """Input demand of t as a multiset over places."""
        return self._pre[t]

    def postset(self, t: str) -> Multiset:
        """Output production of t as a multiset over places."""
        return self._post[t]

    def _check_transition(self, t: str):
        if t not in self.transitions:
            raise RefnetError(f"unknown transition: {t!r}")

    def reversed(self) -> "PetriNet":
        """Net with every arc direction flipped (presets become postsets)."""
        rflow = {(dst, src): w for (src, dst), w in self.flow.items()}
        return PetriNet(self.places, self.transitions, rflow, self.labels)


def marking(counts: Mapping[str, int]) -> Multiset:
    """Marking constructor from a place -> count mapping."""
    return Multiset(counts)


def pn_enabled(net: PetriNet, m: Multiset, t: str) -> bool:
    """t is enabled iff its preset is included in the marking."""
    net._check_transition(t)
    return net.preset(t) <= m


def pn_fire(net: PetriNet, m: Multiset, t: str) -> Multiset:
    """Fire t: consume the preset, produce the postset."""
    if not pn_enabled(net, m, t):
        raise FiringError(f"transition {t!r} is not enabled")
    return (m - net.preset(t)) + net.postset(t)


def pn_enabled_set(net: PetriNet, m: Multiset) -> set[str]:
    return {t for t in net.transitions if net.preset(t) <= m}


class WfViolation:
    """One failed workflow-net condition."""

    def __init__(self, kind: str, node: str, detail: str):
        self.kind = kind      # "source-input" | "sink-output" | "off-path" | "unknown-node"
        self.node = node
        self.detail = detail

    def __str__(self) -> str:
        return self.detail

    def __repr__(self) -> str:
        return f"WfViolation({self.kind!r}, {self.node!r})"


def _reachable(start: str, succ: dict[str, set[str]]) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        n = queue.popleft()
        for nxt in succ.get(n, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def wf_validate(net: PetriNet, source: str, sink: str) -> list[WfViolation]:
    """Check the structural workflow-net conditions.

    Returns the list of violations; empty means (net, source, sink) is a
    workflow net: no input arcs into the source, no output arcs out of
    the sink, and every node on some directed path from source to sink.
    """
    out: list[WfViolation] = []
    for name, role in ((source, "source"), (sink, "sink")):
        if name not in net.places:
            raise RefnetError(f"unknown {role} place: {name!r}")

    succ: dict[str, set[str]] = {}
    pred: dict[str, set[str]] = {}
    for (src, dst) in net.flow:
        succ.setdefault(src, set()).add(dst)
        pred.setdefault(dst, set()).add(src)

    for t in sorted(pred.get(source, ())):
        out.append(WfViolation("source-input", t, f"source place {source!r} has an input arc from {t!r}"))
    for t in sorted(succ.get(sink, ())):
        out.append(WfViolation("sink-output", t, f"sink place {sink!r} has an output arc to {t!r}"))

    fwd = _reachable(source, succ)
    bwd = _reachable(sink, pred)
    for node in sorted(net.places | net.transitions):
        if node not in fwd or node not in bwd:
            out.append(WfViolation("off-path", node, f"node {node!r} is not on any path from {source!r} to {sink!r}"))
    return out


class WorkflowNet:
    """A validated workflow net: unique source and sink, connected."""

    def __init__(self, net: PetriNet, source: str, sink: str):
        violations = wf_validate(net, source, sink)
        if violations:
            raise RefnetError("not a workflow net: " + "; ".join(str(v) for v in violations))
        self.net = net
        self.source = source
        self.sink = sink

    def initial_marking(self) -> Multiset:
        """One token in the source place (one case of the workflow)."""
        return Multiset({self.source: 1})


def net_from_json(data: dict) -> tuple[PetriNet, Multiset | None, str | None, str | None]:
    """Structural JSON format: places, transitions, arcs with weights.

    Optional keys: ``marking`` (place -> count), ``source``, ``sink``.
    """
    places = []
    labels = {}
    for p in data["places"]:
        if isinstance(p, str):
            places.append(p)
        else:
            places.append(p["id"])
            if "label" in p:
                labels[p["id"]] = p["label"]
    transitions = []
    for t in data["transitions"]:
        if isinstance(t, str):
            transitions.append(t)
        else:
            transitions.append(t["id"])
            if "label" in t:
                labels[t["id"]] = t["label"]
    flow = {}
    for arc in data.get("arcs", []):
        flow[(arc["from"], arc["to"])] = flow.get((arc["from"], arc["to"]), 0) + arc.get("weight", 1)
    net = PetriNet(places, transitions, flow, labels)
    m0 = None
    if "marking" in data:
        m0 = Multiset({p: c for p, c in data["marking"].items() if c})
        unknown = set(m0) - net.places
        if unknown:
            raise RefnetError(f"marking names unknown places: {sorted(unknown)}")
    return net, m0, data.get("source"), data.get("sink")


def net_to_json(net: PetriNet, m: Multiset | None = None) -> dict:
    data: dict = {
        "places": [
            {"id": p, **({"label": net.labels[p]} if p in net.labels else {})}
            for p in net.sorted_places
        ],
        "transitions": [
            {"id": t, **({"label": net.labels[t]} if t in net.labels else {})}
            for t in net.sorted_transitions
        ],
        "arcs": [
            {"from": src, "to": dst, "weight": w}
            for (src, dst), w in sorted(net.flow.items())
        ],
    }
    if m is not None:
        data["marking"] = {p: m.count(p) for p in net.sorted_places if m.count(p)}
    return data


def load_net_file(path: str) -> tuple[PetriNet, Multiset | None, str | None, str | None]:
    with open(path, encoding="utf-8") as fh:
        return net_from_json(json.load(fh))
