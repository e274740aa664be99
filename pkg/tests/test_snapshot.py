import pytest

from refnets import corpus
from refnets.errors import RefnetError
from refnets.refnet import RefNet, ref_enabled_modes, ref_fire
from refnets.snapshot import state_from_json, state_hash, state_to_json
from refnets.values import canon_dumps


@pytest.mark.parametrize("corpus_id", corpus.CORPUS_IDS)
def test_snapshot_roundtrip(corpus_id):
    model, state = corpus.load_corpus(corpus_id)
    data = state_to_json(state)
    back = state_from_json(data, model)
    assert back == state
    assert state_hash(back) == state_hash(state)


def test_snapshot_ordering_is_canonical():
    _model, state = corpus.load_corpus("fig3")
    a = canon_dumps(state_to_json(state))
    b = canon_dumps(state_to_json(state))
    assert a == b
    # place keys sorted, store keys sorted
    data = state_to_json(state)
    assert list(data["marking"]) == sorted(data["marking"])
    assert list(data["store"]) == sorted(data["store"])


def test_snapshot_hash_tracks_state_changes():
    model, state = corpus.load_corpus("fig3")
    net = RefNet(model)
    seen = {state_hash(state)}
    for mode in ref_enabled_modes(net, state)[:3]:
        nxt = ref_fire(net, state, mode[0], mode[1])
        h = state_hash(nxt)
        assert h not in seen
        seen.add(h)


def test_snapshot_validation_against_model():
    model, state = corpus.load_corpus("fig2")
    data = state_to_json(state)
    data["marking"]["student pool"] = [{"value": "oops", "count": 1}]
    with pytest.raises(RefnetError):
        state_from_json(data, model)
    data2 = state_to_json(state)
    data2["marking"]["no such place"] = [{"value": 1, "count": 1}]
    with pytest.raises(RefnetError):
        state_from_json(data2, model)
