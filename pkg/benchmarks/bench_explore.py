#!/usr/bin/env python3
"""Compare the compiled and pure-Python reachability kernels.

The workload is a parametric fork-join pipeline whose state space grows
combinatorially with the token count, plus the bundled workflow model.
Both kernels must produce identical graphs; the table reports wall time
and speedup.

Usage: python benchmarks/bench_explore.py [--tokens 8 10 12]
"""

import argparse
import time

from refnets import _kernel_py
from refnets.corpus import load_corpus
from refnets.cpn import as_classical_net
from refnets.multiset import Multiset
from refnets.net import PetriNet
from refnets.statespace import KERNEL_KIND

try:
    from refnets import _kernel
except ImportError:
    _kernel = None


def pipeline_net(stages: int = 6) -> PetriNet:
    """Fork-join pipeline: each stage moves tokens forward or sideways."""
    places = [f"s{i}" for i in range(stages)] + [f"buf{i}" for i in range(stages - 1)]
    transitions = []
    flow = {}
    for i in range(stages - 1):
        t_fwd = f"fwd{i}"
        transitions.append(t_fwd)
        flow[(f"s{i}", t_fwd)] = 1
        flow[(t_fwd, f"s{i+1}")] = 1
        t_side = f"side{i}"
        transitions.append(t_side)
        flow[(f"s{i}", t_side)] = 1
        flow[(t_side, f"buf{i}")] = 1
        t_back = f"drain{i}"
        transitions.append(t_back)
        flow[(f"buf{i}", t_back)] = 1
        flow[(t_back, f"s{i+1}")] = 1
    return PetriNet(places, transitions, flow)


def vectorize(net: PetriNet, m0: Multiset):
    places = net.sorted_places
    transitions = net.sorted_transitions
    init = tuple(m0.count(p) for p in places)
    pre = [tuple(net.weight(p, t) for p in places) for t in transitions]
    post = [tuple(net.weight(t, p) for p in places) for t in transitions]
    return len(places), init, pre, post


def run_kernel(impl, args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = impl.explore_vectors(*args, 2_000_000, -1)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_case(name, net, m0):
    args = vectorize(net, m0)
    py_time, py_res = run_kernel(_kernel_py, args)
    row = {"case": name, "states": len(py_res[0]), "edges": len(py_res[1]), "python": py_time}
    if _kernel is not None:
        cy_time, cy_res = run_kernel(_kernel, args)
        assert list(py_res[0]) == list(cy_res[0]), "kernels disagree on states"
        assert list(py_res[1]) == list(cy_res[1]), "kernels disagree on edges"
        row["compiled"] = cy_time
        row["speedup"] = py_time / cy_time
    return row


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--tokens", nargs="*", type=int, default=[6, 8, 10])
    opts = parser.parse_args()

    print(f"active kernel: {KERNEL_KIND}")
    if _kernel is None:
        print("compiled kernel unavailable; timing the fallback only")

    rows = []
    model, _state = load_corpus("fig1")
    net, _m0 = as_classical_net(model)
    for tokens in opts.tokens:
        rows.append(bench_case(f"course workflow, {tokens} students", net, Multiset({"student pool": tokens})))
    pipe = pipeline_net(6)
    for tokens in opts.tokens:
        rows.append(bench_case(f"pipeline(6), {tokens} tokens", pipe, Multiset({"s0": tokens})))

    header = f"{'case':<32} {'states':>8} {'edges':>9} {'python':>9}"
    if _kernel is not None:
        header += f" {'compiled':>9} {'speedup':>8}"
    print(header)
    for row in rows:
        line = f"{row['case']:<32} {row['states']:>8} {row['edges']:>9} {row['python']:>8.3f}s"
        if "compiled" in row:
            line += f" {row['compiled']:>8.3f}s {row['speedup']:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
