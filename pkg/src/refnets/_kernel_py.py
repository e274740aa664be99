"""Pure-Python reachability kernel for classical nets.

Same contract and identical output as the compiled kernel in
``_kernel.pyx``; ``refnets.statespace`` picks whichever is available.
Markings are tuples of counts indexed by the caller's place order.
"""

from __future__ import annotations

from collections import deque

KERNEL = "python"


def explore_vectors(
    n_places: int,
    init: tuple[int, ...],
    pre: list[tuple[int, ...]],
    post: list[tuple[int, ...]],
    max_states: int,
    max_depth: int,
):
    """Breadth-first reachability over count vectors.

    Returns (states, edges, truncated, expanded):
      states:   list of marking tuples, index = node id, BFS discovery order
      edges:    list of (src_node, transition_index, dst_node)
      truncated: True when max_states or max_depth cut exploration short
      expanded: per node, whether its successors were generated
    ``max_depth < 0`` means unbounded depth.
    """
    n_trans = len(pre)
    states: list[tuple[int, ...]] = [init]
    index: dict[tuple[int, ...], int] = {init: 0}
    depth = [0]
    edges: list[tuple[int, int, int]] = []
    expanded = [False]
    truncated = False

    queue = deque([0])
    while queue:
        src = queue.popleft()
        m = states[src]
        if max_depth >= 0 and depth[src] >= max_depth:
            # not expanded; only counts as truncation if something was enabled
            if not truncated:
                for ti in range(n_trans):
                    pv = pre[ti]
                    if all(m[i] >= pv[i] for i in range(n_places)):
                        truncated = True
                        break
            continue
        expanded[src] = True
        for ti in range(n_trans):
            pv = pre[ti]
            enabled = True
            for i in range(n_places):
                if m[i] < pv[i]:
                    enabled = False
                    break
            if not enabled:
                continue
            qv = post[ti]
            succ = tuple(m[i] - pv[i] + qv[i] for i in range(n_places))
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
                queue.append(dst)
            edges.append((src, ti, dst))
    return states, edges, truncated, expanded
