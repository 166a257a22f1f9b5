"""JSON interchange documents for structures.

Layout (version 1)::

    {"version": 1, "kind": "mobi", "name": "...",
     "carrier": {"finite": ["0", "½", "1"]},
     "constants": {"zero": "0", "half": "½", "one": "1"},
     "ops": {"p": {"table": [[["0", ...], ...], ...]}}}

Rational-domain carriers use ``{"rational": {"domain": ..., "params": {...}}}``
and formula ops ``{"formula": name, "params": {...}}``. Rationals are strings
``"p/q"`` in lowest terms with the sign on the numerator; infinity is ``"1/0"``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .core import (
    INF, SIGNATURES, Carrier, OpImpl, ParseError, Structure, format_rational,
    make_structure, parse_element, parse_rational,
)
from .formulas import FORMULAS
from .sampling import SampleSpec

VERSION = 1


def _param_to_json(value):
    if isinstance(value, OpImpl):
        return _op_to_json(value, None)
    if isinstance(value, tuple):
        return [format_rational(c) for c in value]
    if value is INF or isinstance(value, (Fraction, int)):
        return format_rational(value)
    raise TypeError(f"cannot serialize parameter {value!r}")


def _param_from_json(raw):
    if isinstance(raw, dict):
        return _op_from_json(raw, None, None)
    if isinstance(raw, list):
        return tuple(parse_rational(str(c)) for c in raw)
    if isinstance(raw, bool):
        raise ParseError(f"bad parameter {raw!r}")
    if isinstance(raw, (int, str)):
        return parse_rational(str(raw))
    raise ParseError(f"bad parameter {raw!r}")


def _table_to_labels(table, labels):
    return np.asarray(labels, dtype=object)[table].tolist()


def _op_to_json(op: OpImpl, labels):
    if op.table is not None:
        if labels is None:
            return {"table": op.table.tolist()}
        return {"table": _table_to_labels(op.table, labels)}
    return {"formula": op.formula, "params": {k: _param_to_json(v) for k, v in sorted(op.params.items())}}


def _op_from_json(raw, arity, index):
    if not isinstance(raw, dict):
        raise ParseError(f"operation must be an object, got {raw!r}")
    if "table" in raw:
        table = raw["table"]
        if index is None:
            arr = np.asarray(table)
        else:
            arr = _positions(table, index)
        if arity is None:
            arity = np.ndim(arr)
        return OpImpl(arity, arr)
    if "formula" in raw:
        name = raw["formula"]
        if name not in FORMULAS:
            raise ParseError(f"unknown formula {name!r}")
        params = {k: _param_from_json(v) for k, v in (raw.get("params") or {}).items()}
        return OpImpl(FORMULAS[name].arity if arity is None else arity, formula=name, params=params)
    raise ParseError("operation needs 'table' or 'formula'")


def _positions(table, index):
    if isinstance(table, list):
        return [_positions(x, index) for x in table]
    try:
        return index[str(table)]
    except KeyError:
        raise ParseError(f"unknown label {table!r}") from None


def structure_to_dict(s: Structure) -> dict:
    doc: dict[str, Any] = {"version": VERSION, "kind": s.kind}
    if s.name:
        doc["name"] = s.name
    if s.is_finite:
        labels = s.carrier.labels
        doc["carrier"] = {"finite": list(labels)}
        doc["constants"] = {k: labels[v] for k, v in s.constants.items()}
    else:
        doc["carrier"] = {"rational": {"domain": s.carrier.domain,
                                       "params": {k: _param_to_json(v) for k, v in s.carrier.params}}}
        doc["constants"] = {k: _param_to_json(v) for k, v in s.constants.items()}
        labels = None
    doc["ops"] = {k: _op_to_json(op, labels) for k, op in s.ops.items()}
    if s.sampling is not None:
        doc["sampling"] = s.sampling.to_json()
    return doc


def serialize_structure(s: Structure) -> bytes:
    """Canonical bytes: sorted keys, compact separators, row-major tables."""
    return (json.dumps(structure_to_dict(s), sort_keys=True, ensure_ascii=False,
                       separators=(",", ":")) + "\n").encode("utf-8")


def structure_from_dict(doc: dict) -> Structure:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    for key in ("version", "kind", "carrier", "constants", "ops"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    if doc["version"] != VERSION:
        raise ParseError(f"unsupported version {doc['version']!r}")
    kind = doc["kind"]
    if kind not in SIGNATURES:
        raise ParseError(f"unknown kind {kind!r}")
    op_arity, _ = SIGNATURES[kind]
    carrier_doc = doc["carrier"]
    if not isinstance(carrier_doc, dict) or len(carrier_doc) != 1:
        raise ParseError("carrier must have exactly one of 'finite' or 'rational'")
    if "finite" in carrier_doc:
        carrier = Carrier.finite(carrier_doc["finite"])
        index = {lab: i for i, lab in enumerate(carrier.labels)}
        constants = {}
        for role, lab in doc["constants"].items():
            if str(lab) not in index:
                raise ParseError(f"constant {role} = {lab!r} is not in the carrier")
            constants[role] = index[str(lab)]
    elif "rational" in carrier_doc:
        spec = carrier_doc["rational"]
        params = {k: _param_from_json(v) for k, v in (spec.get("params") or {}).items()}
        carrier = Carrier.rational(spec["domain"], **params)
        index = None
        constants = {role: parse_element(v, carrier.dimension) for role, v in doc["constants"].items()}
    else:
        raise ParseError("carrier must have exactly one of 'finite' or 'rational'")
    ops = {}
    for name, raw in doc["ops"].items():
        if name not in op_arity:
            raise ParseError(f"{kind} has no operation {name!r}")
        ops[name] = _op_from_json(raw, op_arity[name], index)
    sampling = None
    if doc.get("sampling") is not None:
        sampling = SampleSpec(seed=int(doc["sampling"]["seed"]), count=int(doc["sampling"]["count"]))
    return make_structure(kind, carrier, ops, constants, doc.get("name", ""), sampling)


def parse_structure(data: bytes | str) -> Structure:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("document is not UTF-8") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    return structure_from_dict(doc)


def load_structure(path) -> Structure:
    with open(path, "rb") as fh:
        return parse_structure(fh.read())


def dump_structure(s: Structure, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_structure(s))


def structures_equal(a: Structure, b: Structure) -> bool:
    """Structural equality: same kind, carrier, constants, operations, sampling."""
    return a.kind == b.kind and a.same_as(b) and a.sampling == b.sampling
