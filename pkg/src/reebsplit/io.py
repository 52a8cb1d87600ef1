"""Shared file formats: the mesh+field JSON object and OFF import.

All JSON emitted by the package carries the schema string ``reeb-split/1``
and is serialized deterministically (sorted keys, no whitespace variation),
so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .field import ScalarField
from .mesh import TriangleMesh

SCHEMA = "reeb-split/1"


def dumps_canonical(obj) -> str:
    """Deterministic JSON text (sorted keys, compact separators)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def mesh_field_to_dict(mesh: TriangleMesh, field: ScalarField) -> dict:
    return {
        "schema": SCHEMA,
        "vertices": [[float(x) for x in row] for row in mesh.vertices],
        "triangles": [list(t) for t in mesh.triangles],
        "values": [float(v) for v in field.values],
    }


def save_mesh_field(path, mesh: TriangleMesh, field: ScalarField) -> None:
    Path(path).write_text(dumps_canonical(mesh_field_to_dict(mesh, field)) + "\n")


def mesh_field_from_dict(data: dict) -> tuple[TriangleMesh, ScalarField]:
    for key in ("vertices", "triangles", "values"):
        if key not in data:
            raise ValueError(f"mesh+field object lacks '{key}'")
    if len(data["values"]) != len(data["vertices"]):
        raise ValueError("values and vertices have different lengths")
    mesh = TriangleMesh(np.asarray(data["vertices"], dtype=float),
                        data["triangles"])
    field = ScalarField(np.asarray(data["values"], dtype=float))
    return mesh, field


def load_mesh_field(path, values_path=None) -> tuple[TriangleMesh, ScalarField]:
    """Load a mesh+field JSON file, or an OFF file with a sidecar value file."""
    path = Path(path)
    if path.suffix.lower() == ".off":
        return load_off(path, values_path)
    data = json.loads(path.read_text())
    return mesh_field_from_dict(data)


def load_off(path, values_path=None) -> tuple[TriangleMesh, ScalarField]:
    """OFF import: positions only; one value per line in the sidecar file."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise ValueError("not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4
    verts = []
    for _ in range(nv):
        verts.append([float(tokens[pos]), float(tokens[pos + 1]), float(tokens[pos + 2])])
        pos += 3
    tris = []
    for _ in range(nf):
        k = int(tokens[pos])
        if k != 3:
            raise ValueError("OFF import supports triangles only")
        tris.append([int(tokens[pos + 1]), int(tokens[pos + 2]), int(tokens[pos + 3])])
        pos += 4
    if values_path is None:
        raise ValueError("OFF input needs a sidecar value file")
    vals = [float(s) for s in Path(values_path).read_text().split()]
    if len(vals) != nv:
        raise ValueError("sidecar value count does not match vertex count")
    return TriangleMesh(np.asarray(verts), tris), ScalarField(np.asarray(vals))
