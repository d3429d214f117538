"""JSON document schema, parsing and serialization.

One envelope for every payload kind::

    {"kind": "...", "version": 1, "payload": {...}}

Complex scalars serialize as two-element ``[re, im]`` arrays, matrices as
row-major nested arrays, dims as integer arrays.  Missing assemblage
positions are zero members.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod

import jsonschema
import numpy as np

from .core import Ket, Op
from .channels import ChoiOp, KrausChannel, Povm, State, choi_of_kraus
from .assemblages import Assemblage, Scenario
from .channel_assemblages import ChannelAssemblage


class DocumentError(ValueError):
    """Schema violation or inconsistent payload, with a JSON-path location."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _COMPLEX}}
_DIMS = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_SCENARIO = {
    "type": "object",
    "required": ["settings", "outcomes", "trusted_dims"],
    "properties": {
        "settings": _DIMS,
        "outcomes": _DIMS,
        "trusted_dims": _DIMS,
    },
}
_POVM_PAYLOAD = {
    "type": "object",
    "required": ["dim", "effects"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "effects": {"type": "array", "items": {"type": "array", "items": _MATRIX}},
    },
}
_CHANNEL_PAYLOAD = {
    "type": "object",
    "required": ["in_dim", "out_dim"],
    "properties": {
        "in_dim": {"type": "integer", "minimum": 1},
        "out_dim": {"type": "integer", "minimum": 1},
        "in_dims": _DIMS,
        "out_dims": _DIMS,
        "kraus": {"type": "array", "items": _MATRIX},
        "choi": _MATRIX,
    },
}
_INDEX_VEC = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_MEMBER = {
    "type": "object",
    "required": ["a", "x"],
    "properties": {
        "a": _INDEX_VEC,
        "x": _INDEX_VEC,
        "member": _MATRIX,
        "choi": _MATRIX,
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "version", "payload"],
    "properties": {
        "kind": {
            "enum": ["state", "povm", "channel", "assemblage",
                     "channel_assemblage", "realization"],
        },
        "version": {"const": 1},
        "payload": {"type": "object"},
    },
    "$defs": {
        "state": {
            "type": "object",
            "required": ["dims", "matrix"],
            "properties": {
                "dims": {"type": "array",
                         "items": {"type": "integer", "minimum": 1}},
                "matrix": _MATRIX,
            },
        },
        "povm": _POVM_PAYLOAD,
        "channel": _CHANNEL_PAYLOAD,
        "assemblage": {
            "type": "object",
            "required": ["scenario", "members"],
            "properties": {
                "scenario": _SCENARIO,
                "members": {"type": "array", "items": _MEMBER},
            },
        },
        "channel_assemblage": {
            "type": "object",
            "required": ["scenario", "members"],
            "properties": {
                "scenario": _SCENARIO,
                "members": {"type": "array", "items": _MEMBER},
            },
        },
        "realization": {
            "type": "object",
            "required": ["scenario", "state", "povms"],
            "properties": {
                "scenario": _SCENARIO,
                "state": {"type": "object"},
                "povms": {"type": "array", "items": _POVM_PAYLOAD},
                "channel": _CHANNEL_PAYLOAD,
            },
        },
    },
}


@dataclass(frozen=True)
class Document:
    kind: str
    version: int
    payload: object  # parsed domain object
    raw: dict


def _complex_in(pair, path):
    re, im = pair
    if not (np.isfinite(re) and np.isfinite(im)):
        raise DocumentError("non-finite entry", path)
    return complex(re, im)


def _matrix_in(rows, path) -> np.ndarray:
    mat = [[_complex_in(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)]
           for i, row in enumerate(rows)]
    arr = np.array(mat, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DocumentError("matrix must be square", path)
    return arr


def _matrix_out(arr) -> list:
    arr = np.asarray(arr, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in arr]


def _scenario_in(obj, path) -> Scenario:
    try:
        return Scenario(tuple(obj["settings"]), tuple(obj["outcomes"]),
                        tuple(obj["trusted_dims"]))
    except ValueError as exc:
        raise DocumentError(str(exc), path)


def _scenario_out(s: Scenario) -> dict:
    return {"settings": list(s.settings), "outcomes": list(s.outcomes),
            "trusted_dims": list(s.trusted_dims)}


def _state_in(obj, path) -> State:
    mat = _matrix_in(obj["matrix"], f"{path}.matrix")
    dims = tuple(obj.get("dims", [mat.shape[0]]))
    try:
        return State(Op(dims, mat))
    except ValueError as exc:
        raise DocumentError(str(exc), path)


def _povm_in(obj, path) -> Povm:
    dim = obj["dim"]
    effects = []
    for x, row in enumerate(obj["effects"]):
        effects.append(tuple(
            Op((dim,), _matrix_in(m, f"{path}.effects[{x}][{a}]"))
            for a, m in enumerate(row)))
    try:
        return Povm(dim, tuple(effects))
    except ValueError as exc:
        raise DocumentError(str(exc), path)


def _povm_out(p: Povm) -> dict:
    return {"dim": p.dim,
            "effects": [[_matrix_out(e.data) for e in row] for row in p.effects]}


def _channel_in(obj, path) -> ChoiOp:
    in_dims = tuple(obj.get("in_dims", [obj["in_dim"]]))
    out_dims = tuple(obj.get("out_dims", [obj["out_dim"]]))
    if prod(in_dims) != obj["in_dim"] or prod(out_dims) != obj["out_dim"]:
        raise DocumentError("dims products disagree with in_dim/out_dim", path)
    if "choi" in obj:
        mat = _matrix_in(obj["choi"], f"{path}.choi")
        try:
            return ChoiOp(in_dims, out_dims, Op(out_dims + in_dims, mat))
        except ValueError as exc:
            raise DocumentError(str(exc), path)
    if "kraus" in obj:
        ops = tuple(
            np.array([[_complex_in(v, f"{path}.kraus[{k}]") for v in row]
                      for row in m], dtype=complex)
            for k, m in enumerate(obj["kraus"]))
        try:
            k = KrausChannel(obj["in_dim"], obj["out_dim"], ops)
        except ValueError as exc:
            raise DocumentError(str(exc), f"{path}.kraus")
        return choi_of_kraus(k, in_dims, out_dims)
    raise DocumentError("channel needs either 'kraus' or 'choi'", path)


def _channel_out(c: ChoiOp) -> dict:
    return {"in_dim": c.in_dim, "out_dim": c.out_dim,
            "in_dims": list(c.in_dims), "out_dims": list(c.out_dims),
            "choi": _matrix_out(c.op.data)}


def _assemblage_in(obj, path, as_channel: bool):
    scen = _scenario_in(obj["scenario"], f"{path}.scenario")
    key = "choi" if as_channel else "member"
    d = scen.trusted_dim
    members = {pos: np.zeros((d, d), dtype=complex) for pos in scen.positions()}
    for i, entry in enumerate(obj["members"]):
        pos = (tuple(entry["a"]), tuple(entry["x"]))
        if pos not in members:
            raise DocumentError(f"position {pos} outside the scenario",
                                f"{path}.members[{i}]")
        mat = entry.get(key, entry.get("member"))
        if mat is None:
            raise DocumentError(f"missing '{key}' matrix", f"{path}.members[{i}]")
        members[pos] = _matrix_in(mat, f"{path}.members[{i}].{key}")
    try:
        if as_channel:
            d_out, d_in = scen.trusted_dims
            return ChannelAssemblage(scen, {
                pos: ChoiOp((d_in,), (d_out,), Op(scen.trusted_dims, m))
                for pos, m in members.items()})
        return Assemblage(scen, {pos: Op(scen.trusted_dims, m)
                                 for pos, m in members.items()})
    except ValueError as exc:
        raise DocumentError(str(exc), path)


@dataclass(frozen=True)
class Realization:
    scenario: Scenario
    state: State
    povms: tuple
    channel: ChoiOp = None  # None for plain state-assemblage realizations


def _realization_in(obj, path) -> Realization:
    scen = _scenario_in(obj["scenario"], f"{path}.scenario")
    state = _state_in(obj["state"], f"{path}.state")
    povms = tuple(_povm_in(p, f"{path}.povms[{i}]")
                  for i, p in enumerate(obj["povms"]))
    channel = (_channel_in(obj["channel"], f"{path}.channel")
               if "channel" in obj else None)
    return Realization(scen, state, povms, channel)


_PARSERS = {
    "state": lambda obj: _state_in(obj, "$.payload"),
    "povm": lambda obj: _povm_in(obj, "$.payload"),
    "channel": lambda obj: _channel_in(obj, "$.payload"),
    "assemblage": lambda obj: _assemblage_in(obj, "$.payload", as_channel=False),
    "channel_assemblage": lambda obj: _assemblage_in(obj, "$.payload",
                                                     as_channel=True),
    "realization": lambda obj: _realization_in(obj, "$.payload"),
}


def parse(data) -> Document:
    """Parse and validate document bytes (or str, or an already-loaded dict)."""
    if isinstance(data, (bytes, str)):
        try:
            raw = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON at byte offset {exc.pos}: {exc.msg}")
    else:
        raw = data
    try:
        jsonschema.validate(raw, SCHEMA)
        kind = raw["kind"]
        jsonschema.validate(raw["payload"], SCHEMA["$defs"][kind])
    except jsonschema.ValidationError as exc:
        loc = "$." + ".".join(str(p) for p in exc.absolute_path)
        raise DocumentError(exc.message, loc)
    payload = _PARSERS[kind](raw["payload"])
    return Document(kind=kind, version=raw["version"], payload=payload, raw=raw)


def serialize(obj) -> dict:
    """Turn a domain object into a document dict."""
    if isinstance(obj, State):
        payload = {"dims": list(obj.dims), "matrix": _matrix_out(obj.op.data)}
        kind = "state"
    elif isinstance(obj, Povm):
        payload, kind = _povm_out(obj), "povm"
    elif isinstance(obj, ChoiOp):
        payload, kind = _channel_out(obj), "channel"
    elif isinstance(obj, Assemblage):
        payload = {
            "scenario": _scenario_out(obj.scenario),
            "members": [
                {"a": list(a), "x": list(x), "member": _matrix_out(m.data)}
                for (a, x), m in sorted(obj.members.items())
                if np.max(np.abs(m.data)) > 0
            ],
        }
        kind = "assemblage"
    elif isinstance(obj, ChannelAssemblage):
        payload = {
            "scenario": _scenario_out(obj.scenario),
            "members": [
                {"a": list(a), "x": list(x), "choi": _matrix_out(c.op.data)}
                for (a, x), c in sorted(obj.members.items())
                if np.max(np.abs(c.op.data)) > 0
            ],
        }
        kind = "channel_assemblage"
    elif isinstance(obj, Realization):
        payload = {
            "scenario": _scenario_out(obj.scenario),
            "state": {"dims": list(obj.state.dims),
                      "matrix": _matrix_out(obj.state.op.data)},
            "povms": [_povm_out(p) for p in obj.povms],
        }
        if obj.channel is not None:
            payload["channel"] = _channel_out(obj.channel)
        kind = "realization"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"kind": kind, "version": 1, "payload": payload}


def dumps(obj, indent=None) -> str:
    doc = serialize(obj) if not isinstance(obj, dict) else obj
    return json.dumps(doc, indent=indent, sort_keys=True)
