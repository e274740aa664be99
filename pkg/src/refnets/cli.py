"""Command-line interface.

Model arguments accept a corpus id (fig1..fig4), a model file (.lfn) or
a classical net in the structural JSON format (.json).
"""

from __future__ import annotations

import sys

import click

from . import corpus as corpus_mod
from .analysis import check_invariant, explore_hl, find_deadlocks, graph_to_dot, graph_to_json
from .errors import ModelTypeError, ParseError, RefnetError
from .lang import parse_model, typecheck
from .multiset import Multiset
from .net import load_net_file, wf_validate
from .refnet import RefNet
from .simulate import ModelEngine, ClassicalEngine, export_log, load_traces, save_traces, simulate
from .statespace import DEFAULT_MAX_STATES, explore, wf_soundness
from .values import canon_dumps


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load(model_arg: str):
    """Returns ("hl", model, state) or ("pn", net, marking, source, sink)."""
    try:
        if model_arg in corpus_mod.CORPUS_IDS:
            model, state = corpus_mod.load_corpus(model_arg)
            return ("hl", model, state)
        if model_arg.endswith(".json"):
            net, m0, source, sink = load_net_file(model_arg)
            return ("pn", net, m0 if m0 is not None else Multiset(), source, sink)
        with open(model_arg, encoding="utf-8") as fh:
            source_text = fh.read()
        model = typecheck(parse_model(source_text), source_text)
        state = RefNet(model).initial_state()
        return ("hl", model, state)
    except FileNotFoundError:
        _fail(f"no such file: {model_arg}")
    except ParseError as exc:
        _fail(f"parse error at {exc.line}:{exc.col}: {exc.message}")
    except ModelTypeError as exc:
        for issue in exc.issues:
            click.echo(f"type error: {issue}", err=True)
        sys.exit(1)
    except RefnetError as exc:
        _fail(str(exc))


@click.group()
def main():
    """Petri nets, colored nets and reference-data nets."""


@main.command()
@click.argument("model")
@click.option("--wf-source", default=None, help="check workflow-net structure with this source place")
@click.option("--wf-sink", default=None, help="sink place for the workflow-net check")
def validate(model, wf_source, wf_sink):
    """Parse and type-check a model; optionally check WF-net structure."""
    loaded = _load(model)
    if loaded[0] == "pn":
        _kind, net, _m0, source, sink = loaded
        click.echo(f"net ok: {len(net.places)} places, {len(net.transitions)} transitions")
        wf_source = wf_source or source
        wf_sink = wf_sink or sink
    else:
        _kind, m, _state = loaded
        click.echo(
            f"model ok: {len(m.places)} places, {len(m.transitions)} transitions, "
            f"{len(m.pointers)} pointers"
        )
        if model in corpus_mod.CORPUS_IDS and wf_source is None:
            try:
                wf_source, wf_sink = corpus_mod.wf_ends(model)
            except RefnetError:
                pass
        if wf_source:
            from .cpn import as_classical_net

            net, _m0 = as_classical_net(m)
    if wf_source and wf_sink:
        violations = wf_validate(net, wf_source, wf_sink)
        if violations:
            for v in violations:
                click.echo(f"wf violation: {v}")
            sys.exit(1)
        click.echo(f"workflow net ok: source={wf_source!r} sink={wf_sink!r}")


def _explore_any(loaded, max_states, max_depth):
    if loaded[0] == "pn":
        _kind, net, m0, _s, _f = loaded
        return explore(net, m0, max_states=max_states, max_depth=max_depth)
    _kind, model, state = loaded
    return explore_hl(RefNet(model), state, max_states=max_states, max_depth=max_depth)


@main.command("explore")
@click.argument("model")
@click.option("--max-states", default=DEFAULT_MAX_STATES, show_default=True)
@click.option("--max-depth", default=None, type=int)
@click.option("--dot", "dot_path", default=None, help="write the graph in DOT format")
@click.option("--json", "json_path", default=None, help="write the graph as JSON")
def explore_cmd(model, max_states, max_depth, dot_path, json_path):
    """Bounded breadth-first state-space exploration."""
    graph = _explore_any(_load(model), max_states, max_depth)
    click.echo(
        f"{len(graph.states)} states, {len(graph.edges)} edges"
        + (" (truncated)" if graph.truncated else "")
    )
    if dot_path:
        with open(dot_path, "w", encoding="utf-8") as fh:
            fh.write(graph_to_dot(graph))
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(canon_dumps(graph_to_json(graph)))
            fh.write("\n")


@main.command()
@click.argument("model")
@click.option("--source", default=None, help="source place (defaults to the file's source)")
@click.option("--sink", default=None, help="sink place")
@click.option("--max-states", default=DEFAULT_MAX_STATES, show_default=True)
def soundness(model, source, sink, max_states):
    """Workflow-net soundness of a classical (or unit-typed) model."""
    loaded = _load(model)
    if loaded[0] == "pn":
        _kind, net, _m0, file_source, file_sink = loaded
        source = source or file_source
        sink = sink or file_sink
    else:
        _kind, m, _state = loaded
        if model in corpus_mod.CORPUS_IDS and source is None:
            source, sink = corpus_mod.wf_ends(model)
        from .cpn import as_classical_net

        try:
            net, _m0 = as_classical_net(m)
        except RefnetError as exc:
            _fail(str(exc))
    if not source or not sink:
        _fail("need --source and --sink")
    verdict = wf_soundness(net, source, sink, max_states=max_states)
    click.echo(verdict.status)
    for reason in verdict.reasons:
        click.echo(f"  {reason}")
    if verdict.status != "sound":
        sys.exit(1)


@main.command("simulate")
@click.argument("model")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--max-steps", default=100, show_default=True, type=int)
@click.option("--traces", "n_traces", default=1, show_default=True, type=int)
@click.option("--out", "out_path", required=True)
def simulate_cmd(model, seed, max_steps, n_traces, out_path):
    """Seeded random simulation; writes a canonical trace file."""
    loaded = _load(model)
    if loaded[0] == "pn":
        _kind, net, m0, _s, _f = loaded
        engine = ClassicalEngine(net)
        state = m0
    else:
        _kind, m, state = loaded
        engine = ModelEngine(m)
    traces = [simulate(engine, state, seed + i, max_steps) for i in range(n_traces)]
    save_traces(traces, out_path)
    total = sum(len(t.steps) for t in traces)
    click.echo(f"wrote {len(traces)} trace(s), {total} steps -> {out_path}")


@main.command("export-log")
@click.argument("traces", nargs=-1, required=True)
@click.option("--format", "fmt", default="csv", show_default=True, type=click.Choice(["csv"]))
@click.option("--out", "out_path", required=True)
def export_log_cmd(traces, fmt, out_path):
    """Flatten trace files into an event-log CSV."""
    all_traces = []
    for path in traces:
        all_traces.extend(load_traces(path))
    export_log(all_traces, out_path)
    click.echo(f"wrote {sum(len(t.steps) for t in all_traces)} events -> {out_path}")


@main.command()
@click.argument("model")
@click.option("--invariant", "invariant_name", required=True)
@click.option("--max-states", default=DEFAULT_MAX_STATES, show_default=True)
def check(model, invariant_name, max_states):
    """Check a model-declared invariant over the reachable states."""
    loaded = _load(model)
    if loaded[0] != "hl":
        _fail("invariants need a typed model, not a classical net file")
    _kind, m, state = loaded
    if invariant_name not in m.invariants:
        _fail(f"model declares no invariant {invariant_name!r}; have {sorted(m.invariants)}")
    graph = explore_hl(RefNet(m), state, max_states=max_states)
    result = check_invariant(graph, m.invariants[invariant_name])
    if result.holds:
        scope = "explored prefix" if result.prefix_only else "full state space"
        click.echo(f"holds over the {scope} ({len(graph.states)} states)")
    else:
        click.echo(f"violated at state {result.node}; path of {len(result.path)} step(s):")
        for mode in result.path:
            t, b = mode
            inner = ", ".join(f"{k}={v!r}" for k, v in sorted(b.items()))
            click.echo(f"  {t} [{inner}]")
        sys.exit(1)


@main.command()
@click.argument("model")
@click.option("--max-states", default=DEFAULT_MAX_STATES, show_default=True)
def deadlocks(model, max_states):
    """List reachable states with no enabled mode."""
    graph = _explore_any(_load(model), max_states, None)
    dead = find_deadlocks(graph)
    click.echo(
        f"{len(dead)} deadlock state(s) in {len(graph.states)} explored"
        + (" (truncated)" if graph.truncated else "")
    )
    for node in dead[:20]:
        click.echo(f"  state {node}")


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", default=None, help="directory with the built stepper UI")
def serve(port, host, static_dir):
    """Run the interactive stepping service."""
    import uvicorn

    from .service import create_app, mount_static

    app = create_app()
    if static_dir:
        mount_static(app, static_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
