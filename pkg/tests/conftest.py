"""Shared generators and independent oracles.

The brute-force reachability enumerator here is the reference the
engine's explore() is judged against; it is deliberately written in a
different style (recursive set closure over frozen dicts, no indices,
no queues) and must stay independent of refnets.statespace.
"""

from __future__ import annotations

import random

from refnets.net import PetriNet
from refnets.multiset import Multiset


def random_conserving_net(rng: random.Random, max_places=6, max_transitions=6, max_tokens=5):
    """Random net where no transition increases the token count.

    Keeps the reachable space finite, so exhaustive oracles terminate.
    """
    n_places = rng.randint(1, max_places)
    n_trans = rng.randint(1, max_transitions)
    places = [f"p{i}" for i in range(n_places)]
    transitions = [f"t{i}" for i in range(n_trans)]
    flow = {}
    for t in transitions:
        consumed = 0
        for p in rng.sample(places, rng.randint(1, n_places)):
            w = rng.randint(1, 2)
            flow[(p, t)] = w
            consumed += w
        produced = 0
        for p in rng.sample(places, rng.randint(0, n_places)):
            if produced >= consumed:
                break
            w = min(rng.randint(1, 2), consumed - produced)
            flow[(t, p)] = w
            produced += w
    net = PetriNet(places, transitions, flow)
    counts = {}
    for _ in range(rng.randint(0, max_tokens)):
        p = rng.choice(places)
        counts[p] = counts.get(p, 0) + 1
    return net, Multiset(counts)


def brute_force_reachability(net: PetriNet, m0: Multiset):
    """Independent enumerator: reachable markings and labeled edges.

    Returns (set of marking keys, set of (src key, transition, dst key))
    where a key is the tuple of counts over sorted places.
    """

    def key(m: Multiset):
        return tuple(m.count(p) for p in net.sorted_places)

    def enabled(m: Multiset, t: str) -> bool:
        return all(m.count(p) >= w for (p, tt), w in net.flow.items() if tt == t and p in net.places)

    def fire(m: Multiset, t: str) -> Multiset:
        counts = {p: m.count(p) for p in net.sorted_places}
        for (src, dst), w in net.flow.items():
            if src in net.places and dst == t:
                counts[src] -= w
            if src == t and dst in net.places:
                counts[dst] += w
        return Multiset({p: c for p, c in counts.items() if c})

    seen = {key(m0): m0}
    edges = set()
    frontier = [m0]
    while frontier:
        new_frontier = []
        for m in frontier:
            for t in net.transitions:
                if not enabled(m, t):
                    continue
                nxt = fire(m, t)
                edges.add((key(m), t, key(nxt)))
                if key(nxt) not in seen:
                    seen[key(nxt)] = nxt
                    new_frontier.append(nxt)
        frontier = new_frontier
    return set(seen), edges


def unit_model_source(net: PetriNet, m0: Multiset) -> str:
    """The unit-typed model-language rendering of a classical net."""
    import json

    lines = ["places {"]
    for p in net.sorted_places:
        lines.append(f"  {json.dumps(p)}: unit;")
    lines.append("}")
    lines.append("transitions {")
    for t in net.sorted_transitions:
        lines.append(f"  {json.dumps(t)};")
    lines.append("}")
    lines.append("arcs {")
    for (src, dst), w in sorted(net.flow.items()):
        tokens = ", ".join(["()"] * w)
        lines.append(f"  {json.dumps(src)} -> {json.dumps(dst)}: [{tokens}];")
    lines.append("}")
    if m0:
        lines.append("marking {")
        for p in net.sorted_places:
            if m0.count(p):
                lines.append(f"  {json.dumps(p)}: () # {m0.count(p)};")
        lines.append("}")
    return "\n".join(lines) + "\n"
