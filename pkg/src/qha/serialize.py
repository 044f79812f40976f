"""Module records: a JSON document with exact rational entries written as ``"p/q"``."""
from __future__ import annotations

import json

from .cartan import build_cartan
from .linalg import qq, qstr
from .modules import GradedModule, ModuleError
from .rewrite import QTable

FORMAT = "qha-module/1"


def _mat_out(m: dict) -> dict:
    return {str(j): {str(i): qstr(c) for i, c in sorted(col.items())} for j, col in sorted(m.items()) if col}


def _mat_in(m: dict) -> dict:
    try:
        return {int(j): {int(i): qq(c) for i, c in col.items()} for j, col in m.items()}
    except (TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
        raise ModuleError(f"malformed matrix entry: {exc}") from None


def to_record(M: GradedModule) -> dict:
    c = M.cartan
    return {
        "format": FORMAT,
        "cartan": {"name": c.name, "labels": list(c.labels), "matrix": [list(r) for r in c.matrix],
                   "symmetrizer": list(c.sym)},
        "qtable": json.loads(M.q.to_json()),
        "name": M.name,
        "basis": [[list(w), d] for w, d in M.basis],
        "x": [_mat_out(m) for m in M.x],
        "tau": [_mat_out(m) for m in M.tau],
    }


def serialize(M: GradedModule) -> str:
    """Stable text: keys sorted, no whitespace variation."""
    return json.dumps(to_record(M), sort_keys=True, separators=(",", ":"))


def from_record(rec: dict) -> GradedModule:
    if not isinstance(rec, dict) or rec.get("format") != FORMAT:
        raise ModuleError("not a module record")
    try:
        cd = rec["cartan"]
        cartan = build_cartan(cd["matrix"], cd["symmetrizer"], cd["labels"], cd.get("name", ""))
        q = QTable.from_json(cartan, json.dumps(rec["qtable"]))
        basis = [(tuple(int(a) for a in w), int(d)) for w, d in rec["basis"]]
        x = [_mat_in(m) for m in rec["x"]]
        tau = [_mat_in(m) for m in rec["tau"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModuleError):
            raise
        raise ModuleError(f"malformed record: {exc}") from None
    dim = len(basis)
    for m in x + tau:
        for j, col in m.items():
            if not 0 <= j < dim or any(not 0 <= i < dim for i in col):
                raise ModuleError("matrix index out of range")
    return GradedModule(q, basis, x, tau, name=rec.get("name", ""), verify=True)


def deserialize(text: str) -> GradedModule:
    """Parse a record and re-verify every defining relation."""
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModuleError(f"malformed record: {exc}") from None
    return from_record(rec)


__all__ = ["serialize", "deserialize", "to_record", "from_record", "FORMAT"]
