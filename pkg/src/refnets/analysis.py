"""Bounded exploration of high-level states, invariants, deadlocks.

States are (marking, store) pairs; two states differing only in an
unreferenced pointer's value are still distinct, since the store is part
of the state. Invariants quantify patterns over the tokens of named
places and may read the store; a violation comes back with a shortest
replayable path from the root.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import RefnetError
from .lang.check import TClause, TInvariant
from .lang.interp import Binding, eval_expr
from .lang.patterns import match_pattern
from .multiset import Multiset
from .refnet import RefNet, RefState, ref_enabled_modes, ref_fire
from .snapshot import state_to_json
from .statespace import DEFAULT_MAX_STATES, StateGraph
from .values import canon_key, pretty, value_to_json

__all__ = [
    "explore_hl",
    "find_deadlocks",
    "check_invariant",
    "InvariantResult",
    "graph_to_json",
    "graph_to_dot",
]


def explore_hl(
    net: RefNet,
    state0: RefState,
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int | None = None,
) -> StateGraph[RefState]:
    """Breadth-first graph over high-level states, canonical mode order."""
    if max_states <= 0:
        raise RefnetError("max_states must be positive")
    if max_depth is not None and max_depth <= 0:
        raise RefnetError("max_depth must be positive when given")

    states: list[RefState] = [state0]
    index: dict[RefState, int] = {state0: 0}
    depth = [0]
    edges: list[tuple[int, tuple, int]] = []
    expanded = [False]
    parents: list[tuple[int, tuple] | None] = [None]
    truncated = False

    queue = deque([0])
    while queue:
        src = queue.popleft()
        state = states[src]
        modes = ref_enabled_modes(net, state)
        if max_depth is not None and depth[src] >= max_depth:
            if modes:
                truncated = True
            continue
        expanded[src] = True
        for mode in modes:
            succ = ref_fire(net, state, mode[0], mode[1])
            dst = index.get(succ)
            if dst is None:
                if len(states) >= max_states:
                    # successor dropped: this node's expansion is incomplete
                    truncated = True
                    expanded[src] = False
                    continue
                dst = len(states)
                index[succ] = dst
                states.append(succ)
                depth.append(depth[src] + 1)
                expanded.append(False)
                parents.append((src, mode))
                queue.append(dst)
            edges.append((src, mode, dst))
    return StateGraph(states, edges, truncated, expanded, parents)


def find_deadlocks(graph: StateGraph) -> list[int]:
    """Nodes with no enabled mode. Unexpanded frontier nodes don't count."""
    has_out = [False] * len(graph.states)
    for src, _label, _dst in graph.edges:
        has_out[src] = True
    return [i for i in range(len(graph.states)) if graph.expanded[i] and not has_out[i]]


@dataclass
class InvariantResult:
    holds: bool
    prefix_only: bool                 # graph was truncated; verdict is partial
    node: int | None = None           # violating node
    path: list | None = None          # modes from the root to the violation
    witness: Binding | None = None    # quantifier binding that fails

    def __bool__(self) -> bool:
        return self.holds


def _clause_violation(clause: TClause, state: RefState) -> Binding | None:
    """A binding of the clause patterns that makes the guard false.

    Quantifier instances are resources: the combined demand of the chosen
    token instances must fit the marking (two quantifiers over one place
    need two distinct token instances unless a token has multiplicity).
    """
    m, s = state.marking, state.store
    pairs = []  # (pattern, candidate places)
    for pattern, places in clause.quantifiers:
        pairs.append((pattern, places))

    result: Binding | None = None

    def rec(i: int, binding: Binding, picked: list[tuple[str, object]]):
        nonlocal result
        if result is not None:
            return
        if i == len(pairs):
            demand: dict[str, Multiset] = {}
            for place, tok in picked:
                demand[place] = demand.get(place, Multiset()).add(tok)
            if any(not (need <= m.get(place)) for place, need in demand.items()):
                return
            if not eval_expr(clause.guard, binding, s):
                result = dict(binding)
            return
        pattern, places = pairs[i]
        for place in places:
            for tok in sorted(m.get(place), key=canon_key):
                nb = match_pattern(pattern, tok, binding, s)
                if nb is not None:
                    rec(i + 1, nb, picked + [(place, tok)])

    rec(0, {}, [])
    return result


def check_invariant(graph: StateGraph, invariant: TInvariant) -> InvariantResult:
    """Evaluate an invariant at every explored node.

    On failure returns the shortest path (BFS discovery order) from the
    root to a violating state. With a truncated graph a positive answer
    only covers the explored prefix.
    """
    for node in range(len(graph.states)):
        state = graph.states[node]
        for clause in invariant.clauses:
            witness = _clause_violation(clause, state)
            if witness is not None:
                path = [label for label, _n in graph.path_to(node)]
                return InvariantResult(
                    holds=False,
                    prefix_only=graph.truncated,
                    node=node,
                    path=path,
                    witness=witness,
                )
    return InvariantResult(holds=True, prefix_only=graph.truncated)


# ------------------------------------------------------------- exports

def _label_json(label) -> dict:
    if isinstance(label, tuple):
        t, b = label
        return {"transition": t, "binding": {k: value_to_json(v) for k, v in sorted(b.items())}}
    return {"transition": label, "binding": {}}


def _label_text(label) -> str:
    if isinstance(label, tuple):
        t, b = label
        if b:
            inner = ",".join(f"{k}={pretty(v)}" for k, v in sorted(b.items()))
            return f"{t} [{inner}]"
        return t
    return str(label)


def _state_json(state) -> dict:
    if isinstance(state, RefState):
        return state_to_json(state)
    if isinstance(state, Multiset):
        return {"marking": {p: state.count(p) for p in sorted(state)}}
    raise TypeError(f"unknown state kind: {state!r}")


def graph_to_json(graph: StateGraph) -> dict:
    return {
        "root": graph.root,
        "truncated": graph.truncated,
        "nodes": [
            {"id": i, "expanded": graph.expanded[i], "state": _state_json(s)}
            for i, s in enumerate(graph.states)
        ],
        "edges": [
            {"src": src, "label": _label_json(label), "dst": dst}
            for src, label, dst in graph.edges
        ],
    }


def graph_to_dot(graph: StateGraph) -> str:
    lines = ["digraph statespace {", "  rankdir=LR;", '  node [shape=box, fontsize=10];']
    for i in range(len(graph.states)):
        shape = "" if graph.expanded[i] else ", style=dashed"
        lines.append(f'  s{i} [label="s{i}"{shape}];')
    for src, label, dst in graph.edges:
        text = _label_text(label).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  s{src} -> s{dst} [label="{text}"];')
    if graph.truncated:
        lines.append('  truncated [label="truncated", shape=plaintext];')
    lines.append("}")
    return "\n".join(lines) + "\n"
