import importlib.resources as resources
import json

import numpy as np
import pytest

from steercert import documents, gallery
from steercert.channel_assemblages import to_choi_assemblage, verify_ns_channel
from steercert.documents import Document, DocumentError, Realization, parse, serialize


def data_bytes(name: str) -> bytes:
    return resources.files("steercert").joinpath("data").joinpath(name).read_bytes()


def roundtrip(obj):
    first = documents.dumps(obj)
    doc = parse(first)
    second = documents.dumps(serialize(doc.payload))
    assert first == second
    return doc


def test_roundtrip_state_povm_channel():
    rho, povms, channel, _ = gallery.bell_cnot_realization()
    assert roundtrip(rho).kind == "state"
    assert roundtrip(povms[0]).kind == "povm"
    doc = roundtrip(channel)
    assert doc.kind == "channel"
    np.testing.assert_allclose(doc.payload.op.data, channel.op.data)


def test_roundtrip_assemblages():
    l = gallery.bell_cnot_assemblage()
    assert roundtrip(l).kind == "channel_assemblage"
    assert roundtrip(to_choi_assemblage(l)).kind == "assemblage"


def test_roundtrip_realization():
    rho, povms, channel, scen = gallery.bell_cnot_realization()
    doc = roundtrip(Realization(scen, rho, povms, channel))
    assert doc.kind == "realization"
    assert doc.payload.scenario == scen


def test_zero_members_are_implicit():
    l = gallery.bell_cnot_assemblage()
    raw = serialize(l)
    listed = {(tuple(m["a"]), tuple(m["x"])) for m in raw["payload"]["members"]}
    assert ((0, 1), (0, 0)) not in listed and ((1, 0), (0, 0)) not in listed
    parsed = parse(raw).payload
    zero = parsed.members[((0, 1), (0, 0))].op.data
    np.testing.assert_allclose(zero, 0)


def test_bundled_fixtures_parse():
    real = parse(data_bytes("example1.json")).payload
    assert isinstance(real, Realization)
    assert real.channel is not None
    chanasm = parse(data_bytes("example1_channel_assemblage.json")).payload
    assert verify_ns_channel(chanasm).ok
    appendix = parse(data_bytes("appendix.json")).payload
    assert appendix.scenario == gallery.bell_cnot_scenario()


def test_parse_rejects_malformed_json():
    with pytest.raises(DocumentError, match="byte offset"):
        parse(b'{"kind": "state",')


def test_parse_rejects_unknown_kind():
    with pytest.raises(DocumentError):
        parse({"kind": "wavefunction", "version": 1, "payload": {}})


def test_parse_rejects_wrong_version():
    with pytest.raises(DocumentError):
        parse({"kind": "state", "version": 2,
               "payload": {"dims": [2], "matrix": []}})


def test_schema_errors_carry_paths():
    bad = {"kind": "povm", "version": 1,
           "payload": {"dim": 2, "effects": [[[[1, 0]]]]}}
    with pytest.raises(DocumentError) as err:
        parse(bad)
    assert err.value.path.startswith("$")


def test_parse_rejects_invalid_state():
    bad = {"kind": "state", "version": 1,
           "payload": {"dims": [2],
                       "matrix": [[[1.0, 0.0], [0.0, 0.0]],
                                  [[0.0, 0.0], [0.5, 0.0]]]}}
    with pytest.raises(DocumentError):
        parse(bad)


def test_parse_rejects_position_outside_scenario():
    raw = serialize(to_choi_assemblage(gallery.bell_cnot_assemblage()))
    raw["payload"]["members"][0]["a"] = [5, 0]
    with pytest.raises(DocumentError, match="outside the scenario"):
        parse(raw)


def test_channel_needs_kraus_or_choi():
    with pytest.raises(DocumentError, match="kraus.*choi|choi.*kraus"):
        parse({"kind": "channel", "version": 1,
               "payload": {"in_dim": 2, "out_dim": 2}})


def test_dumps_is_deterministic():
    l = gallery.bell_cnot_assemblage()
    assert documents.dumps(l) == documents.dumps(l)
    assert json.loads(documents.dumps(l))["version"] == 1
