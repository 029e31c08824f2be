"""Reading group and body files, writing reports."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import tol
from .convex import ConvexBody
from .errors import DeterminantZero, SchemaError
from .fixtures import BUILDERS, data_path
from .projective import ProjMap

log = logging.getLogger("projends.io")


@dataclass
class GroupInput:
    dimension: int
    generators: list[ProjMap]
    vertex: np.ndarray | None
    ball_radius: int | None
    extra: dict = field(default_factory=dict)
    rescaled: list[tuple[int, float]] = field(default_factory=list)  # (generator index, factor)
    source: str = ""

    def matrix(self, key: str) -> np.ndarray | None:
        val = self.extra.get(key)
        if val is None:
            return None
        a = np.asarray(val, dtype=float)
        side = int(round(np.sqrt(a.size)))
        return a.reshape(side, side)

    def matrices(self, key: str) -> list[np.ndarray]:
        return [np.asarray(m, dtype=float).reshape(self.dimension + 1, self.dimension + 1)
                for m in self.extra.get(key, [])]


def resolve_input(name: str) -> Path:
    """A path on disk, or the name of a bundled fixture."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in BUILDERS:
        return data_path(stem)
    raise FileNotFoundError(name)


def _load_json(path: Path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _real_list(value, where: str, length: int | None = None) -> np.ndarray:
    if not isinstance(value, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
        raise SchemaError(f"{where}: expected a list of numbers")
    if length is not None and len(value) != length:
        raise SchemaError(f"{where}: expected {length} entries, got {len(value)}")
    a = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(a)):
        raise SchemaError(f"{where}: entries must be finite")
    return a


def parse_group_payload(data, source: str = "<input>") -> GroupInput:
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: top level must be an object")
    for key in ("dimension", "generators"):
        if key not in data:
            raise SchemaError(f"{source}: missing field '{key}'")
    n = data["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"{source}: field 'dimension' must be a positive integer")
    gens = data["generators"]
    if not isinstance(gens, list) or not gens:
        raise SchemaError(f"{source}: field 'generators' must be a nonempty list")
    size = n + 1
    out, rescaled = [], []
    for i, g in enumerate(gens):
        m = _real_list(g, f"{source}: generators[{i}]", size * size).reshape(size, size)
        d = abs(np.linalg.det(m))
        if d == 0 or d < 1e-300 or not np.isfinite(d):
            raise DeterminantZero(f"{source}: generators[{i}] has zero determinant")
        if abs(d - 1.0) > tol().det:
            factor = d ** (-1.0 / size)
            log.info("generator %d rescaled by |det|^(-1/%d) = %.12g", i, size, factor)
            rescaled.append((i, float(factor)))
            m = m * factor
        out.append(ProjMap.normalized(m))
    vertex = None
    if data.get("vertex") is not None:
        vertex = _real_list(data["vertex"], f"{source}: vertex", size)
        if np.linalg.norm(vertex) == 0:
            raise SchemaError(f"{source}: vertex must be nonzero")
        vertex = vertex / np.linalg.norm(vertex)
    radius = data.get("ball_radius")
    if radius is not None and (not isinstance(radius, int) or isinstance(radius, bool) or radius < 1):
        raise SchemaError(f"{source}: field 'ball_radius' must be an integer >= 1")
    extra = {k: v for k, v in data.items() if k not in ("dimension", "generators", "vertex", "ball_radius")}
    return GroupInput(n, out, vertex, radius, extra, rescaled, source)


def parse_group_file(path) -> GroupInput:
    p = resolve_input(str(path))
    return parse_group_payload(_load_json(p), str(path))


# ---------------------------------------------------------------- bodies


def body_to_dict(body: ConvexBody) -> dict:
    if body.is_polytope:
        return {"kind": "polytope", "vertices": body.vertices.tolist(), "chart": body.chart.tolist()}
    return {"kind": "ellipsoid", "center": body.center_chart.tolist(), "form": body.form.tolist(),
            "chart": body.chart.tolist()}


def body_from_dict(data, source: str = "<body>") -> ConvexBody:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError(f"{source}: body needs a 'kind' field")
    chart = data.get("chart")
    if chart is not None:
        chart = _real_list(chart, f"{source}: chart")
    if data["kind"] == "polytope":
        verts = data.get("vertices")
        if not isinstance(verts, list) or not verts:
            raise SchemaError(f"{source}: polytope needs a nonempty 'vertices' list")
        rows = [_real_list(v, f"{source}: vertices[{i}]") for i, v in enumerate(verts)]
        if len({r.size for r in rows}) != 1:
            raise SchemaError(f"{source}: vertices have inconsistent lengths")
        return ConvexBody.polytope(np.array(rows), chart=chart)
    if data["kind"] == "ellipsoid":
        if "center" not in data or "form" not in data:
            raise SchemaError(f"{source}: ellipsoid needs 'center' and 'form'")
        center = _real_list(data["center"], f"{source}: center")
        form = data["form"]
        if not isinstance(form, list):
            raise SchemaError(f"{source}: form must be a matrix")
        q = np.array([_real_list(r, f"{source}: form") for r in form])
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise SchemaError(f"{source}: form must be square")
        return ConvexBody.ellipsoid(center, q, chart=chart)
    raise SchemaError(f"{source}: unknown body kind {data['kind']!r}")


def parse_body_file(path) -> ConvexBody:
    return body_from_dict(_load_json(Path(path)), str(path))


def parse_point(text: str) -> np.ndarray:
    try:
        vals = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise SchemaError(f"cannot parse point {text!r}") from exc
    if not vals:
        raise SchemaError("empty point")
    return np.array(vals)


# ---------------------------------------------------------------- reports


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else None
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value
    return obj


def render(report: dict, fmt: str = "json") -> str:
    data = to_jsonable(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix, val):
        if isinstance(val, dict):
            for k in sorted(val):
                walk(f"{prefix}.{k}" if prefix else k, val[k])
        elif isinstance(val, list) and val and isinstance(val[0], (dict, list)):
            for i, item in enumerate(val):
                walk(f"{prefix}[{i}]", item)
        else:
            lines.append(f"{prefix}: {json.dumps(val)}")

    walk("", data)
    return "\n".join(lines) + "\n"
