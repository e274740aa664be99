"""State graphs, bounded exploration and workflow-net soundness.

The classical-net hot loop lives in a kernel with two interchangeable
implementations: a compiled extension (``refnets._kernel``) and a pure
Python fallback (``refnets._kernel_py``). Both produce bit-identical
graphs; ``KERNEL_KIND`` says which one got picked at import.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Generic, TypeVar

from .errors import RefnetError
from .multiset import Multiset
from .net import PetriNet, wf_validate

try:  # pragma: no cover - depends on build environment
    from . import _kernel as _impl

    KERNEL_KIND = "compiled"
except ImportError:  # pragma: no cover
    from . import _kernel_py as _impl

    KERNEL_KIND = "python"

from . import _kernel_py

__all__ = [
    "StateGraph",
    "explore",
    "wf_soundness",
    "SoundnessVerdict",
    "KERNEL_KIND",
    "DEFAULT_MAX_STATES",
]

S = TypeVar("S")
DEFAULT_MAX_STATES = 100_000

# counts beyond this could overflow the compiled kernel's fixed-width
# integers; such runs are routed to the pure-Python kernel instead
_KERNEL_COUNT_LIMIT = 2**62


@dataclass
class StateGraph(Generic[S]):
    """Reachability graph with deterministic node and edge order.

    ``states[0]`` is the root. ``edges`` are (src, label, dst) with labels
    supplied by the exploring engine (transition ids, or modes).
    ``parents[i]`` is the discovery edge of node i, for shortest paths.
    """

    states: list
    edges: list[tuple[int, Any, int]]
    truncated: bool
    expanded: list[bool]
    parents: list[tuple[int, Any] | None]
    root: int = 0

    def __len__(self) -> int:
        return len(self.states)

    def successors(self, node: int) -> list[tuple[Any, int]]:
        return [(label, dst) for src, label, dst in self.edges if src == node]

    def path_to(self, node: int) -> list[tuple[Any, int]]:
        """Labels and nodes along the BFS discovery path from the root."""
        path: list[tuple[Any, int]] = []
        cur = node
        while cur != self.root:
            parent = self.parents[cur]
            if parent is None:
                raise RefnetError(f"node {cur} has no discovery parent")
            src, label = parent
            path.append((label, cur))
            cur = src
        path.reverse()
        return path


def explore(
    net: PetriNet,
    m0: Multiset,
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int | None = None,
) -> StateGraph[Multiset]:
    """Breadth-first reachability graph of a classical net.

    Deterministic: places and transitions are processed in sorted order,
    nodes are numbered by discovery. Hitting a bound sets ``truncated``
    instead of raising.
    """
    if max_states <= 0:
        raise RefnetError("max_states must be positive")
    if max_depth is not None and max_depth <= 0:
        raise RefnetError("max_depth must be positive when given")
    unknown = set(m0) - net.places
    if unknown:
        raise RefnetError(f"marking names unknown places: {sorted(unknown)}")

    places = net.sorted_places
    transitions = net.sorted_transitions
    init = tuple(m0.count(p) for p in places)
    pre = [tuple(net.weight(p, t) for p in places) for t in transitions]
    post = [tuple(net.weight(t, p) for p in places) for t in transitions]

    # Route runs that could overflow fixed-width counts to the
    # unbounded-int Python kernel.
    impl = _impl
    max_post = max((max(v) for v in post if v), default=0)
    worst = (max(init) if init else 0) + max_states * max_post
    if worst >= _KERNEL_COUNT_LIMIT:
        impl = _kernel_py

    depth_arg = -1 if max_depth is None else max_depth
    vec_states, vec_edges, truncated, expanded = impl.explore_vectors(
        len(places), init, pre, post, max_states, depth_arg
    )

    states = [Multiset({p: v[i] for i, p in enumerate(places) if v[i]}) for v in vec_states]
    edges = [(src, transitions[ti], dst) for src, ti, dst in vec_edges]
    parents: list[tuple[int, Any] | None] = [None] * len(states)
    for src, label, dst in edges:
        if dst != 0 and parents[dst] is None and dst > src:
            parents[dst] = (src, label)
    return StateGraph(states, edges, truncated, list(expanded), parents)


@dataclass
class SoundnessVerdict:
    status: str  # "sound" | "unsound" | "inconclusive"
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.status == "sound"


def wf_soundness(
    net: PetriNet,
    source: str,
    sink: str,
    max_states: int = DEFAULT_MAX_STATES,
) -> SoundnessVerdict:
    """Classical three-condition soundness of a workflow net.

    From the initial marking (one token in the source): the final marking
    (one token in the sink) stays reachable from every reachable marking,
    any marking that touches the sink is exactly the final marking, and
    no transition is dead. Structural violations short-circuit to
    unsound; truncated exploration gives an inconclusive verdict.
    """
    structural = wf_validate(net, source, sink)
    if structural:
        return SoundnessVerdict("unsound", [f"structural: {v}" for v in structural])

    graph = explore(net, Multiset({source: 1}), max_states=max_states)
    if graph.truncated:
        return SoundnessVerdict(
            "inconclusive", [f"state space exceeds {max_states} states"]
        )

    final = Multiset({sink: 1})
    reasons: list[str] = []

    final_node = None
    for i, m in enumerate(graph.states):
        if m.count(sink) and m != final:
            reasons.append(f"improper completion: reachable marking {dict(m.items())} marks the sink")
        if m == final:
            final_node = i

    if final_node is None:
        reasons.append("final marking is unreachable")
    else:
        # backward reachability from the final marking
        rev: dict[int, set[int]] = {}
        for src, _t, dst in graph.edges:
            rev.setdefault(dst, set()).add(src)
        can_finish = {final_node}
        queue = deque([final_node])
        while queue:
            n = queue.popleft()
            for p in rev.get(n, ()):
                if p not in can_finish:
                    can_finish.add(p)
                    queue.append(p)
        stuck = [i for i in range(len(graph.states)) if i not in can_finish]
        for i in stuck[:5]:
            reasons.append(
                f"final marking unreachable from reachable marking {dict(graph.states[i].items())}"
            )
        if len(stuck) > 5:
            reasons.append(f"... and {len(stuck) - 5} more stuck markings")

    fired = {label for _s, label, _d in graph.edges}
    for t in net.sorted_transitions:
        if t not in fired:
            reasons.append(f"dead transition: {t!r} never fires")

    if reasons:
        return SoundnessVerdict("unsound", reasons)
    return SoundnessVerdict("sound")
