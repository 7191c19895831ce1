"""JSON and CSV input/output for complexes, maps, presentations and reports."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from .complex import MetricComplex, SimplicialComplex, SimplicialMap
from .errors import InvalidSpec


def complex_from_json(data: dict) -> MetricComplex:
    """``{"vertices": N, "edges": [[u, v, length?], ...], "triangles": [...]}``.

    Missing edge lengths default to 1.  Faces of listed triangles and
    tetrahedra are added when absent.
    """
    try:
        n = int(data["vertices"])
        raw_edges = data.get("edges", [])
        tris = [tuple(t) for t in data.get("triangles", [])]
        tets = [tuple(t) for t in data.get("tetrahedra", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed complex: {exc}") from exc
    given: dict[tuple[int, int], float] = {}
    cells = []
    for e in raw_edges:
        if len(e) not in (2, 3):
            raise InvalidSpec(f"bad edge {e}")
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise InvalidSpec(f"edge {e} has equal endpoints")
        key = (min(u, v), max(u, v))
        given[key] = float(e[2]) if len(e) == 3 else 1.0
        cells.append(key)
    cells += tris + tets
    for c in cells:
        if any(not 0 <= int(v) < n for v in c):
            raise InvalidSpec(f"cell {c} uses a vertex outside 0..{n - 1}")
    sc = SimplicialComplex.from_cells(cells, n)
    lengths = tuple(given.get(e, 1.0) for e in sc.edges)
    try:
        return MetricComplex(sc, lengths)
    except ValueError as exc:
        raise InvalidSpec(str(exc)) from exc


def load_complex(path) -> tuple[MetricComplex, dict[str, SimplicialMap]]:
    """Complex plus any maps declared under ``"maps"`` (targets resolved relative to the file)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSpec(f"cannot read {path}: {exc}") from exc
    metric = complex_from_json(data)
    maps = {}
    for name, spec in data.get("maps", {}).items():
        target = spec["target"]
        if isinstance(target, str):
            tmetric, _ = load_complex(path.parent / target)
        else:
            tmetric = complex_from_json(target)
        try:
            maps[name] = SimplicialMap(metric.complex, tmetric.complex, tuple(spec["vertex_image"]))
        except ValueError as exc:
            raise InvalidSpec(f"map {name!r}: {exc}") from exc
    return metric, maps


def complex_to_json(metric: MetricComplex | SimplicialComplex, maps: dict | None = None) -> dict:
    out = metric.to_json()
    if maps:
        out["maps"] = {name: {"target": m.target.to_json(), "vertex_image": list(m.vertex_image)}
                       for name, m in maps.items()}
    return out


def _clean(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bytes):
        return list(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(_clean(config), sort_keys=True).encode()).hexdigest()[:16]


def write_text(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
