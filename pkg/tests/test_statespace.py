import random

from refnets.multiset import Multiset
from refnets.net import PetriNet
from refnets.statespace import KERNEL_KIND, explore, wf_soundness
from refnets import _kernel_py

from conftest import brute_force_reachability, random_conserving_net


def graph_key_sets(net, graph):
    def key(m):
        return tuple(m.count(p) for p in net.sorted_places)

    nodes = {key(m) for m in graph.states}
    edges = {(key(graph.states[s]), t, key(graph.states[d])) for s, t, d in graph.edges}
    return nodes, edges


def test_smallest_workflow_net():
    net = PetriNet(["i", "f"], ["t"], {("i", "t"): 1, ("t", "f"): 1})
    graph = explore(net, Multiset({"i": 1}))
    assert len(graph.states) == 2
    assert len(graph.edges) == 1
    assert not graph.truncated
    src, label, dst = graph.edges[0]
    assert (src, label, dst) == (0, "t", 1)


def test_unbounded_producer_truncates():
    net = PetriNet(["p"], ["make"], {("make", "p"): 1})
    graph = explore(net, Multiset(), max_states=10)
    assert graph.truncated
    assert len(graph.states) == 10


def test_depth_bound_truncates():
    net = PetriNet(["p"], ["make"], {("make", "p"): 1})
    graph = explore(net, Multiset(), max_depth=3)
    assert graph.truncated
    assert len(graph.states) == 4  # depths 0..3


def test_explore_matches_brute_force_enumerator():
    rng = random.Random(21)
    for _ in range(30):
        net, m0 = random_conserving_net(rng)
        graph = explore(net, m0)
        assert not graph.truncated
        nodes, edges = graph_key_sets(net, graph)
        oracle_nodes, oracle_edges = brute_force_reachability(net, m0)
        assert nodes == oracle_nodes
        assert edges == oracle_edges


def test_explore_deterministic_and_kernels_agree():
    rng = random.Random(22)
    for _ in range(20):
        net, m0 = random_conserving_net(rng)
        g1 = explore(net, m0)
        g2 = explore(net, m0)
        assert g1.states == g2.states
        assert g1.edges == g2.edges

        places = net.sorted_places
        transitions = net.sorted_transitions
        init = tuple(m0.count(p) for p in places)
        pre = [tuple(net.weight(p, t) for p in places) for t in transitions]
        post = [tuple(net.weight(t, p) for p in places) for t in transitions]
        py = _kernel_py.explore_vectors(len(places), init, pre, post, 100_000, -1)
        if KERNEL_KIND == "compiled":
            from refnets import _kernel

            cy = _kernel.explore_vectors(len(places), init, pre, post, 100_000, -1)
            assert list(py[0]) == list(cy[0])
            assert list(py[1]) == list(cy[1])
            assert py[2] == cy[2]
            assert list(py[3]) == list(cy[3])


def test_kernels_agree_under_bounds():
    import pytest

    _kernel = pytest.importorskip("refnets._kernel")
    rng = random.Random(24)
    for _ in range(15):
        net, m0 = random_conserving_net(rng)
        places = net.sorted_places
        transitions = net.sorted_transitions
        init = tuple(m0.count(p) for p in places)
        pre = [tuple(net.weight(p, t) for p in places) for t in transitions]
        post = [tuple(net.weight(t, p) for p in places) for t in transitions]
        for max_states, max_depth in ((3, -1), (10, 2), (100_000, 1)):
            py = _kernel_py.explore_vectors(len(places), init, pre, post, max_states, max_depth)
            cy = _kernel.explore_vectors(len(places), init, pre, post, max_states, max_depth)
            assert list(py[0]) == list(cy[0])
            assert list(py[1]) == list(cy[1])
            assert py[2] == cy[2]
            assert list(py[3]) == list(cy[3])


def test_huge_counts_fall_back_to_python_kernel():
    # counts near 2^62 would overflow the compiled kernel's integers;
    # explore must route such runs to the unbounded-int kernel
    net = PetriNet(["p", "q"], ["move"], {("p", "move"): 1, ("move", "q"): 1})
    m0 = Multiset({"p": 2**62})
    graph = explore(net, m0, max_states=10)
    assert len(graph.states) == 10
    assert graph.truncated
    assert graph.states[1].count("p") == 2**62 - 1
    assert graph.states[1].count("q") == 1


def test_fig1_explore_matches_enumerator():
    from refnets import corpus
    from refnets.cpn import as_classical_net

    model, _state = corpus.load_corpus("fig1")
    net, _m0 = as_classical_net(model)
    m0 = Multiset({"student pool": 1})
    graph = explore(net, m0)

    def key(m):
        return tuple(m.count(p) for p in net.sorted_places)

    nodes = {key(m) for m in graph.states}
    edges = {(key(graph.states[s]), t, key(graph.states[d])) for s, t, d in graph.edges}
    oracle_nodes, oracle_edges = brute_force_reachability(net, m0)
    assert nodes == oracle_nodes
    assert edges == oracle_edges


def test_parent_paths_replay():
    rng = random.Random(23)
    net, m0 = random_conserving_net(rng)
    graph = explore(net, m0)
    from refnets.net import pn_fire

    for node in range(len(graph.states)):
        m = m0
        for label, _n in graph.path_to(node):
            m = pn_fire(net, m, label)
        assert m == graph.states[node]


def test_soundness_sound_net():
    net = PetriNet(
        ["i", "mid", "f"],
        ["a", "b", "retry"],
        {("i", "a"): 1, ("a", "mid"): 1, ("mid", "b"): 1, ("b", "f"): 1, ("mid", "retry"): 1, ("retry", "mid"): 1},
    )
    verdict = wf_soundness(net, "i", "f")
    assert verdict.status == "sound"
    assert bool(verdict)


def test_soundness_dead_transition():
    # t2 needs two tokens in i; with one initial token it never fires
    net = PetriNet(["i", "f"], ["t1", "t2"], {("i", "t1"): 1, ("t1", "f"): 1, ("i", "t2"): 2, ("t2", "f"): 1})
    verdict = wf_soundness(net, "i", "f")
    assert verdict.status == "unsound"
    assert any("dead transition" in r for r in verdict.reasons)


def test_soundness_improper_completion():
    # b marks the sink while leaving a second token behind
    net = PetriNet(
        ["i", "q", "f"],
        ["a", "b"],
        {("i", "a"): 1, ("a", "q"): 2, ("q", "b"): 1, ("b", "f"): 1},
    )
    verdict = wf_soundness(net, "i", "f")
    assert verdict.status == "unsound"
    assert any("improper completion" in r or "unreachable from" in r for r in verdict.reasons)


def test_soundness_structural_violation_reported_first():
    # sink has an outgoing arc: structural failure, reported as unsound
    net = PetriNet(
        ["i", "f", "q"],
        ["a", "leak"],
        {("i", "a"): 1, ("a", "f"): 1, ("f", "leak"): 1, ("leak", "q"): 1, ("q", "a"): 0},
    )
    verdict = wf_soundness(net, "i", "f")
    assert verdict.status == "unsound"
    assert any(r.startswith("structural") for r in verdict.reasons)


def test_soundness_inconclusive_when_truncated():
    # structurally fine, but the internal place p is unbounded
    net = PetriNet(
        ["i", "p", "f"],
        ["start", "grow", "done"],
        {
            ("i", "start"): 1,
            ("start", "p"): 1,
            ("p", "grow"): 1,
            ("grow", "p"): 2,
            ("p", "done"): 1,
            ("done", "f"): 1,
        },
    )
    verdict = wf_soundness(net, "i", "f", max_states=20)
    assert verdict.status == "inconclusive"
