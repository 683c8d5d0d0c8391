"""Canonical instance file format and report serialization helpers.

Instance files are JSON documents with exactly the keys ``nodes``,
``terminals`` and ``edges``; thresholds are rational-valued strings such as
"3/2" or decimal/integer literals, parsed exactly.  Files written by
:func:`save_instance` are canonical: loading and re-saving one reproduces the
bytes.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Union

from .core import Assignment, Instance, as_fraction
from .errors import InvalidInstance

SCHEMA_VERSION = 1

_INSTANCE_KEYS = {"nodes", "terminals", "edges"}
_EDGE_KEYS = {"u", "v", "tu", "tv"}


def format_fraction(x: Fraction) -> str:
    return str(x)


def format_float(x: float) -> str:
    return f"{x:.4f}"


def parse_instance_doc(doc: Mapping[str, Any]) -> Instance:
    unknown = set(doc) - _INSTANCE_KEYS
    if unknown:
        raise InvalidInstance(f"unknown instance keys: {sorted(unknown)}")
    missing = _INSTANCE_KEYS - set(doc)
    if missing:
        raise InvalidInstance(f"missing instance keys: {sorted(missing)}")
    for key in ("nodes", "terminals"):
        if not all(isinstance(x, str) for x in doc[key]):
            raise InvalidInstance(f"{key} must be strings")
    edges = []
    for rec in doc["edges"]:
        bad = set(rec) - _EDGE_KEYS
        if bad:
            raise InvalidInstance(f"unknown edge keys: {sorted(bad)}")
        if set(rec) != _EDGE_KEYS:
            raise InvalidInstance(f"incomplete edge record: {rec}")
        if not isinstance(rec["u"], str) or not isinstance(rec["v"], str):
            raise InvalidInstance(f"edge endpoints must be strings: {rec}")
        edges.append((rec["u"], rec["v"], as_fraction(rec["tu"]), as_fraction(rec["tv"])))
    return Instance.from_data(doc["nodes"], doc["terminals"], edges)


def loads_instance(text: str) -> Instance:
    # parse_float hands the raw literal to Fraction, so "0.1" loads as 1/10.
    doc = json.loads(text, parse_float=Fraction)
    return parse_instance_doc(doc)


def load_instance(path: Union[str, Path]) -> Instance:
    return loads_instance(Path(path).read_text())


def instance_doc(inst: Instance) -> dict[str, Any]:
    return {
        "nodes": list(inst.nodes),
        "terminals": list(inst.terminal_list),
        "edges": [
            {"u": e.u, "v": e.v, "tu": format_fraction(e.tu), "tv": format_fraction(e.tv)}
            for e in inst.edges
        ],
    }


def canonical_bytes(doc: Mapping[str, Any]) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()


def dumps_instance(inst: Instance) -> str:
    return canonical_bytes(instance_doc(inst)).decode()


def save_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_bytes(canonical_bytes(instance_doc(inst)))


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(canonical_bytes(instance_doc(inst))).hexdigest()


def assignment_doc(a: Assignment) -> dict[str, str]:
    return {node: format_fraction(x) for node, x in sorted(a.values.items())}
