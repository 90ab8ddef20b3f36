"""JSON records for bases.

A basis record::

    {"d": 4, "kind": "W", "labels": {"a": 0, "b": 1}, "mode": "exact", "ring_d": 2,
     "vectors": [{"label": [0, 0], "entries": [...]}, ...]}

Float entries are ``{"re": x, "im": y}``.  Exact entries are
``{"omega_exponents": {"k": coeff, ...}, "scale_s": s}`` meaning
``ring_d**(-s/2) * sum coeff * exp(i*pi*k/ring_d)``.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .mub import Basis
from .phasering import ExactArray

SCHEMA_VERSION = 1


def _float(x: float) -> float:
    # 17 significant digits always round-trip a double
    return float(f"{x:.17g}")


def basis_to_dict(b: Basis) -> dict[str, Any]:
    labels = b.labels or tuple(range(b.d))
    vectors = []
    if b.exact:
        amps: ExactArray = b.amps
        for i in range(b.d):
            entries = []
            for row in amps.coeffs[i]:
                nz = np.flatnonzero(row)
                entries.append({"omega_exponents": {str(int(k)): int(row[k]) for k in nz}, "scale_s": amps.scale})
            vectors.append({"label": _label(labels[i]), "entries": entries})
        ring = amps.d
    else:
        m = b.matrix
        for i in range(b.d):
            entries = [{"re": _float(z.real), "im": _float(z.imag)} for z in m[i]]
            vectors.append({"label": _label(labels[i]), "entries": entries})
        ring = None
    out = {
        "d": b.d,
        "kind": b.kind,
        "labels": dict(b.params),
        "mode": "exact" if b.exact else "float",
        "vectors": vectors,
    }
    if ring is not None:
        out["ring_d"] = ring
    return out


def _label(x):
    return list(x) if isinstance(x, tuple) else x


def basis_from_dict(rec: dict[str, Any]) -> Basis:
    d = int(rec["d"])
    labels = tuple(tuple(v["label"]) if isinstance(v["label"], list) else v["label"] for v in rec["vectors"])
    if rec["mode"] == "exact":
        ring = int(rec["ring_d"])
        coeffs = np.zeros((d, d, 2 * ring), dtype=np.int64)
        scales = {e["scale_s"] for v in rec["vectors"] for e in v["entries"]}
        if len(scales) != 1:
            raise ValueError("exact record mixes scales")
        for i, v in enumerate(rec["vectors"]):
            for n, e in enumerate(v["entries"]):
                for k, c in e["omega_exponents"].items():
                    coeffs[i, n, int(k)] = c
        amps: Any = ExactArray(ring, coeffs, scales.pop())
    else:
        amps = np.array([[complex(e["re"], e["im"]) for e in v["entries"]] for v in rec["vectors"]])
    return Basis(d, rec["kind"], dict(rec["labels"]), amps, labels)


def bases_document(bases: list[Basis], command: str) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "bases": [basis_to_dict(b) for b in bases],
    }


def bases_from_document(doc: dict[str, Any]) -> list[Basis]:
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return [basis_from_dict(r) for r in doc["bases"]]
