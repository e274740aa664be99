# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reachability kernel for classical nets.

Bit-identical output to ``refnets._kernel_py.explore_vectors``; the
enablement/firing arithmetic runs over C integer arrays.
"""

from collections import deque

from cpython.mem cimport PyMem_Free, PyMem_Malloc

KERNEL = "compiled"


def explore_vectors(
    int n_places,
    tuple init,
    list pre,
    list post,
    long long max_states,
    long long max_depth,
):
    cdef int n_trans = len(pre)
    cdef long long *pre_w = NULL
    cdef long long *post_w = NULL
    cdef long long *cur = NULL
    cdef long long *succ = NULL
    cdef int ti, i, src, entry_i
    cdef long long src_depth
    cdef bint enabled
    cdef bint truncated = False

    pre_w = <long long *> PyMem_Malloc(n_trans * n_places * sizeof(long long))
    post_w = <long long *> PyMem_Malloc(n_trans * n_places * sizeof(long long))
    cur = <long long *> PyMem_Malloc(n_places * sizeof(long long))
    succ = <long long *> PyMem_Malloc(n_places * sizeof(long long))
    if pre_w == NULL or post_w == NULL or cur == NULL or succ == NULL:
        PyMem_Free(pre_w)
        PyMem_Free(post_w)
        PyMem_Free(cur)
        PyMem_Free(succ)
        raise MemoryError()

    try:
        for ti in range(n_trans):
            for i in range(n_places):
                pre_w[ti * n_places + i] = pre[ti][i]
                post_w[ti * n_places + i] = post[ti][i]

        states = [init]
        index = {init: 0}
        depth = [0]
        edges = []
        expanded = [False]
        queue = deque([0])

        while queue:
            src = queue.popleft()
            m = states[src]
            for i in range(n_places):
                cur[i] = m[i]
            src_depth = depth[src]
            if max_depth >= 0 and src_depth >= max_depth:
                if not truncated:
                    for ti in range(n_trans):
                        enabled = True
                        for i in range(n_places):
                            if cur[i] < pre_w[ti * n_places + i]:
                                enabled = False
                                break
                        if enabled:
                            truncated = True
                            break
                continue
            expanded[src] = True
            for ti in range(n_trans):
                enabled = True
                for i in range(n_places):
                    if cur[i] < pre_w[ti * n_places + i]:
                        enabled = False
                        break
                if not enabled:
                    continue
                for i in range(n_places):
                    succ[i] = cur[i] - pre_w[ti * n_places + i] + post_w[ti * n_places + i]
                succ_t = tuple([succ[i] for i in range(n_places)])
                entry = index.get(succ_t)
                if entry is None:
                    if len(states) >= max_states:
                        # successor dropped: expansion of src is incomplete
                        truncated = True
                        expanded[src] = False
                        continue
                    entry = len(states)
                    index[succ_t] = entry
                    states.append(succ_t)
                    depth.append(src_depth + 1)
                    expanded.append(False)
                    queue.append(entry)
                edges.append((src, ti, entry))
        return states, edges, truncated, expanded
    finally:
        PyMem_Free(pre_w)
        PyMem_Free(post_w)
        PyMem_Free(cur)
        PyMem_Free(succ)
