"""JSON formats for groups, complexes, maps, and cube diagrams.

One object per file.  Groups are multiplication tables or permutation
generators; complexes reference their group inline or by path; maps
reference complexes the same way, resolved relative to the map file.
All parse failures raise ValueError so the CLI can report bad input
uniformly.
"""

from __future__ import annotations

import hashlib
import json
import os
from itertools import combinations
from typing import Dict, Optional, Tuple

from .cubelim import Cube, CubeMap, Subset
from .gcomplex import GComplex
from .gmap import GMap
from .group import FiniteGroup
from .linking import IsovariantCellStructure


def canonical_dumps(obj) -> str:
    """Sorted keys, tight separators, trailing newline: byte-stable output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _as_dict(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise ValueError(f"{what} JSON must be an object")
    return obj


# -- groups ------------------------------------------------------------------


def parse_group(obj) -> FiniteGroup:
    obj = _as_dict(obj, "group")
    if "table" in obj:
        table = obj["table"]
        if "order" in obj and len(table) != obj["order"]:
            raise ValueError("group order does not match table size")
        return FiniteGroup(tuple(tuple(row) for row in table))
    if "generators" in obj:
        degree = obj.get("degree")
        if degree is None:
            raise ValueError("generator form needs a degree")
        return FiniteGroup.from_generators(
            int(degree), [tuple(p) for p in obj["generators"]]
        )
    raise ValueError("group JSON needs 'table' or 'generators'")


def group_to_json(g: FiniteGroup) -> dict:
    return {"order": g.order, "table": [list(row) for row in g.table]}


def _resolve_group(value, base_dir: str) -> FiniteGroup:
    if isinstance(value, str):
        return parse_group(load_json(os.path.join(base_dir, value)))
    return parse_group(value)


# -- complexes ---------------------------------------------------------------


def parse_complex(
    obj, base_dir: str = ".", group: Optional[FiniteGroup] = None
) -> GComplex:
    obj = _as_dict(obj, "complex")
    if "vertices" not in obj or "facets" not in obj:
        raise ValueError("complex JSON needs 'vertices' and 'facets'")
    n = int(obj["vertices"])
    facets = [tuple(int(v) for v in f) for f in obj["facets"]]
    if "group" in obj:
        group = _resolve_group(obj["group"], base_dir)
    elif group is None:
        group = FiniteGroup(((0,),))
    action: Dict[int, Tuple[int, ...]] = {}
    for key, perm in obj.get("action", {}).items():
        try:
            elem = int(key)
        except (TypeError, ValueError):
            raise ValueError(f"action key {key!r} is not a group element index")
        action[elem] = tuple(int(v) for v in perm)
    names = obj.get("names")
    if names is not None:
        names = tuple(str(s) for s in names)
    return GComplex(n, facets, action, group, names=names)


def complex_to_json(x: GComplex) -> dict:
    return {
        "vertices": x.n_vertices,
        "facets": [list(f) for f in x.facets],
        "action": {str(g): list(x.action[g]) for g in x.group.elements},
        "group": group_to_json(x.group),
        "names": list(x.names),
    }


# -- maps --------------------------------------------------------------------


def _resolve_complex(value, base_dir: str, group: Optional[FiniteGroup]) -> GComplex:
    if isinstance(value, str):
        path = os.path.join(base_dir, value)
        return parse_complex(load_json(path), os.path.dirname(path) or ".", group)
    return parse_complex(value, base_dir, group)


def parse_map(obj, base_dir: str = ".") -> GMap:
    obj = _as_dict(obj, "map")
    for key in ("source", "target", "vertices"):
        if key not in obj:
            raise ValueError(f"map JSON needs '{key}'")
    group = _resolve_group(obj["group"], base_dir) if "group" in obj else None
    source = _resolve_complex(obj["source"], base_dir, group)
    target = _resolve_complex(obj["target"], base_dir, group)
    return GMap(source, target, tuple(int(v) for v in obj["vertices"]))


def map_to_json(f: GMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "vertices": list(f.vertices),
    }


# -- cube diagrams -----------------------------------------------------------


def subset_key(s: Subset) -> str:
    return ",".join(str(i) for i in sorted(s))


def parse_subset_key(key: str) -> Subset:
    if key == "":
        return frozenset()
    try:
        return frozenset(int(p) for p in key.split(","))
    except ValueError:
        raise ValueError(f"bad subset key {key!r}")


def _parse_cube(obj, n: int, what: str) -> Cube:
    obj = _as_dict(obj, what)
    sizes = {}
    for key, size in _as_dict(obj.get("vertices"), f"{what}.vertices").items():
        sizes[parse_subset_key(key)] = int(size)
    covers = {}
    for key, mapping in _as_dict(obj.get("maps"), f"{what}.maps").items():
        if "+" not in key:
            raise ValueError(f"cube map key {key!r} must look like 'S+j'")
        skey, _, jkey = key.rpartition("+")
        covers[(parse_subset_key(skey), int(jkey))] = tuple(
            int(v) for v in mapping
        )
    try:
        return Cube(n, sizes, covers)
    except ValueError as exc:
        raise ValueError(f"{what}: {exc}")


def parse_cube_map(obj) -> CubeMap:
    obj = _as_dict(obj, "cube map")
    if "dim" not in obj:
        raise ValueError("cube map JSON needs 'dim'")
    n = int(obj["dim"])
    source = _parse_cube(obj.get("source"), n, "source")
    target = _parse_cube(obj.get("target"), n, "target")
    components = {}
    for key, mapping in _as_dict(obj.get("components"), "components").items():
        components[parse_subset_key(key)] = tuple(int(v) for v in mapping)
    try:
        return CubeMap(source, target, components)
    except ValueError as exc:
        raise ValueError(f"cube map: {exc}")


def _cube_to_json(c: Cube) -> dict:
    return {
        "vertices": {subset_key(s): c.sizes[s] for s in c.vertices()},
        "maps": {
            f"{subset_key(s)}+{j}": list(m) for (s, j), m in sorted(
                c.covers.items(), key=lambda kv: (sorted(kv[0][0]), kv[0][1])
            )
        },
    }


def cube_map_to_json(m: CubeMap) -> dict:
    return {
        "dim": m.n,
        "source": _cube_to_json(m.source),
        "target": _cube_to_json(m.target),
        "components": {
            subset_key(s): list(m.components[s]) for s in m.source.vertices()
        },
    }


# -- cell structures ---------------------------------------------------------


def cells_to_json(c: IsovariantCellStructure) -> dict:
    """Cell-structure report: one record per cell with its disk dimension,
    chain label, vertex assignment, and the orbit faces it attaches along."""
    cells = []
    for cell in c.cells:
        phi_records = []
        for (l, u), v in cell.phi:
            slot, coset = cell.phi_map.linking_vertices[u]
            phi_records.append(
                {
                    "disk": list(l),
                    "slot": slot,
                    "coset": sorted(coset),
                    "vertex": v,
                }
            )
        faces = sorted(
            s
            for k in range(1, len(cell.orbit_simplex))
            for s in combinations(cell.orbit_simplex, k)
        )
        cells.append(
            {
                "m": cell.disk_dim,
                "chain": cell.label(),
                "orbit": list(cell.orbit_simplex),
                "base": list(cell.base_simplex),
                "disk_dims": list(cell.disk_dims),
                "phi": phi_records,
                "attach": [list(f) for f in faces],
            }
        )
    return {
        "cells": cells,
        "skeleta": [len(s) for s in c.skeleta],
    }
