"""Model files, the registry, and JSON/CSV/SVG emission.

Model files are JSON with exact rationals only: integers or "p/q" strings.
Floats are rejected outright so golden outputs are bit-identical across
platforms.  Canonical JSON output sorts keys and keeps every exact value as a
string; floating point appears only inside SVG path data.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .errors import InputError
from .lattice import (
    BlowupCones,
    DivisorClass,
    PointProfile,
    SurfaceModel,
    validate_model,
)
from .models import builtin_model, is_builtin
from .polygon import PiecewiseRationalFunction, Polygon
from .rational import format_rational, parse_rational

SCHEMA_VERSION = 1
MODEL_PATH_ENV = "NOCT_MODEL_PATH"


@dataclass(frozen=True)
class ParsedModel:
    model: SurfaceModel
    points: dict[str, PointProfile] = field(default_factory=dict)

    def point(self, label: Optional[str]) -> PointProfile:
        if label is None:
            if len(self.points) == 1:
                return next(iter(self.points.values()))
            raise InputError(
                f"model {self.model.name!r} has points {sorted(self.points)}; pick one with --point"
            )
        if label not in self.points:
            raise InputError(
                f"model {self.model.name!r} has no point {label!r}; available: {sorted(self.points)}"
            )
        return self.points[label]


def _parse_class(data, rank: int) -> DivisorClass:
    if not isinstance(data, (list, tuple)) or len(data) != rank:
        raise InputError(f"expected a length-{rank} coordinate list, got {data!r}")
    return DivisorClass(tuple(parse_rational(x) for x in data))


def _parse_class_list(data, rank: int) -> tuple[DivisorClass, ...]:
    if not isinstance(data, list):
        raise InputError(f"expected a list of classes, got {data!r}")
    return tuple(_parse_class(entry, rank) for entry in data)


def _parse_index_map(data, size: int, what: str) -> tuple[int, ...]:
    values = [0] * size
    if data is None:
        return tuple(values)
    if not isinstance(data, dict):
        raise InputError(f"{what} must map curve indices to integers")
    for key, value in data.items():
        try:
            index = int(key)
        except (TypeError, ValueError):
            raise InputError(f"{what} key {key!r} is not a curve index") from None
        if not 0 <= index < size:
            raise InputError(f"{what} index {index} out of range 0..{size - 1}")
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise InputError(f"{what} value for index {index} must be a nonnegative integer")
        values[index] = value
    return tuple(values)


def parse_model_data(data: dict) -> ParsedModel:
    """Parse the dict form of a model file into a validated model bundle."""
    if not isinstance(data, dict):
        raise InputError("model file must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    raw = data.get("model")
    if not isinstance(raw, dict):
        raise InputError("model file needs a 'model' object")
    try:
        rank = int(raw["rank"])
        name = str(raw["name"])
        labels = tuple(str(x) for x in raw["basis_labels"])
        matrix_rows = raw["intersection_matrix"]
    except KeyError as missing:
        raise InputError(f"model is missing required field {missing}") from None
    if not isinstance(matrix_rows, list) or len(matrix_rows) != rank:
        raise InputError("intersection_matrix must have one row per basis element")
    matrix = tuple(
        tuple(parse_rational(x) for x in row) if isinstance(row, list) and len(row) == rank
        else _bad_row(row)
        for row in matrix_rows
    )
    canonical = raw.get("canonical_class")
    model = SurfaceModel(
        name=name,
        rank=rank,
        basis_labels=labels,
        intersection_matrix=matrix,
        negative_curves=_parse_class_list(raw.get("negative_curves", []), rank),
        effective_generators=_parse_class_list(raw.get("effective_generators", []), rank),
        nef_generators=_parse_class_list(raw.get("nef_generators", []), rank),
        canonical_class=None if canonical is None else _parse_class(canonical, rank),
        dimension_of_variety=int(raw.get("dimension_of_variety", 2)),
    )
    report = validate_model(model)
    if not report.ok:
        raise InputError(f"model {name!r} fails validation:\n{report}")

    cones_data = data.get("blowup_cones", {})
    if not isinstance(cones_data, dict):
        raise InputError("blowup_cones must map point labels to cone data")
    points: dict[str, PointProfile] = {}
    for entry in data.get("points", []):
        if not isinstance(entry, dict) or "label" not in entry:
            raise InputError("each point needs at least a 'label'")
        label = str(entry["label"])
        mults = _parse_index_map(
            entry.get("multiplicities"), len(model.negative_curves), f"point {label!r} multiplicities"
        )
        cones = None
        n_blowup_curves = None
        if label in cones_data:
            cone_entry = cones_data[label]
            if not isinstance(cone_entry, dict):
                raise InputError(f"blowup_cones[{label!r}] must be an object")
            cones = BlowupCones(
                negative_curves=_parse_class_list(cone_entry.get("negative_curves", []), rank + 1),
                effective_generators=_parse_class_list(
                    cone_entry.get("effective_generators", []), rank + 1
                ),
                nef_generators=_parse_class_list(cone_entry.get("nef_generators", []), rank + 1),
            )
            n_blowup_curves = len(cones.negative_curves)
        incidence = None
        if entry.get("flag_incidence") is not None:
            if n_blowup_curves is None:
                raise InputError(
                    f"point {label!r} has flag incidence data but no blow-up cone data"
                )
            incidence = _parse_index_map(
                entry.get("flag_incidence"), n_blowup_curves, f"point {label!r} flag_incidence"
            )
        points[label] = PointProfile(
            label=label, multiplicities=mults, flag_incidence=incidence, blowup=cones
        )
    return ParsedModel(model=model, points=points)


def _bad_row(row):
    raise InputError(f"bad intersection matrix row {row!r}")


def emit_model_data(parsed: ParsedModel) -> dict:
    """Canonical dict form of a model bundle; parse_model_data round-trips it."""
    model = parsed.model

    def classes(items: Sequence[DivisorClass]):
        return [[format_rational(c) for c in cls.coords] for cls in items]

    data = {
        "schema_version": SCHEMA_VERSION,
        "model": {
            "name": model.name,
            "rank": model.rank,
            "basis_labels": list(model.basis_labels),
            "intersection_matrix": [[format_rational(x) for x in row] for row in model.intersection_matrix],
            "negative_curves": classes(model.negative_curves),
            "effective_generators": classes(model.effective_generators),
            "nef_generators": classes(model.nef_generators),
            "canonical_class": None
            if model.canonical_class is None
            else [format_rational(c) for c in model.canonical_class.coords],
            "dimension_of_variety": model.dimension_of_variety,
        },
        "points": [],
        "blowup_cones": {},
    }
    for label in sorted(parsed.points):
        point = parsed.points[label]
        entry = {
            "label": label,
            "multiplicities": {str(i): m for i, m in enumerate(point.multiplicities) if m},
        }
        if point.flag_incidence is not None:
            entry["flag_incidence"] = {
                str(i): m for i, m in enumerate(point.flag_incidence) if m
            }
        data["points"].append(entry)
        if point.blowup is not None:
            data["blowup_cones"][label] = {
                "negative_curves": classes(point.blowup.negative_curves),
                "effective_generators": classes(point.blowup.effective_generators),
                "nef_generators": classes(point.blowup.nef_generators),
            }
    return data


def _registry_paths() -> list[Path]:
    raw = os.environ.get(MODEL_PATH_ENV, "")
    return [Path(p) for p in raw.split(os.pathsep) if p]


def load_model(name_or_path: str) -> ParsedModel:
    """Resolve a model by registry name, registry-extension file, or path."""
    if is_builtin(name_or_path):
        model, points = builtin_model(name_or_path)
        return ParsedModel(model=model, points=points)
    for directory in _registry_paths():
        candidate = directory / f"{name_or_path}.json"
        if candidate.is_file():
            return load_model_file(candidate)
    path = Path(name_or_path)
    if path.is_file():
        return load_model_file(path)
    raise InputError(
        f"{name_or_path!r} is neither a built-in model, a registered name, nor a file"
    )


def load_model_file(path) -> ParsedModel:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise InputError(f"cannot read model file {path}: {err}") from None
    try:
        data = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as err:
        raise InputError(f"model file {path} is not valid JSON: {err}") from None
    return parse_model_data(data)


def _reject_float(text):
    raise InputError(f"float literal {text!r} rejected; encode rationals as 'p/q' strings")


# ---------------------------------------------------------------------------
# canonical JSON / CSV / SVG emission


def jsonable(value):
    """Recursively convert exact values into canonical JSON-compatible data."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, DivisorClass):
        return [format_rational(c) for c in value.coords]
    if isinstance(value, Polygon):
        return [[format_rational(x), format_rational(y)] for x, y in value.vertices]
    if isinstance(value, PiecewiseRationalFunction):
        return {
            "breakpoints": [format_rational(t) for t in value.breakpoints],
            "pieces": [
                {
                    "from": format_rational(lo),
                    "to": format_rational(hi),
                    "slope": format_rational(slope),
                    "intercept": format_rational(intercept),
                }
                for lo, hi, slope, intercept in value.pieces()
            ],
        }
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = list(value)
        if isinstance(value, (set, frozenset)):
            items = sorted(items)
        return [jsonable(v) for v in items]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):  # enums
        return value.value
    raise InputError(f"cannot serialise {value!r}")


def emit_json(payload) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, indent=2)


def profile_rows(base, point, profile) -> list[tuple[str, str, str]]:
    """CSV rows (t, value, regime) at the significant parameters of a profile."""
    from .positivity import profile_regime_at

    ts = sorted(set(profile.pieces.breakpoints) | set(profile.breakpoints()))
    rows = []
    for t in ts:
        rows.append(
            (
                format_rational(t),
                format_rational(profile.value(t)),
                profile_regime_at(base, point, profile, t),
            )
        )
    return rows


def write_csv(rows: Sequence[tuple], path, header=("t", "value", "regime")) -> None:
    import csv

    try:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as err:
        raise OSError(f"cannot write CSV to {path}: {err}") from err


class _Canvas:
    """Shared plot transform; rationals become floats only at this point."""

    def __init__(self, xs, ys, width=480, height=360):
        self.width = width
        self.height = height
        x0, x1 = min(0.0, *xs), max(1.0, *xs)
        y0, y1 = min(0.0, *ys), max(1.0, *ys)
        pad_x = max((x1 - x0) * 0.08, 0.25)
        pad_y = max((y1 - y0) * 0.08, 0.25)
        self.x0, self.x1 = x0 - pad_x, x1 + pad_x
        self.y0, self.y1 = y0 - pad_y, y1 + pad_y
        self.sx = width / (self.x1 - self.x0)
        self.sy = height / (self.y1 - self.y0)

    def cx(self, x: float) -> float:
        return (x - self.x0) * self.sx

    def cy(self, y: float) -> float:
        return self.height - (y - self.y0) * self.sy

    def points(self, pts) -> str:
        return " ".join(f"{self.cx(x):.2f},{self.cy(y):.2f}" for x, y in pts)

    def document(self, body: str) -> str:
        axes = (
            f'<line x1="{self.cx(self.x0):.2f}" y1="{self.cy(0):.2f}" '
            f'x2="{self.cx(self.x1):.2f}" y2="{self.cy(0):.2f}" stroke="#888" stroke-width="1"/>\n'
            f'<line x1="{self.cx(0):.2f}" y1="{self.cy(self.y0):.2f}" '
            f'x2="{self.cx(0):.2f}" y2="{self.cy(self.y1):.2f}" stroke="#888" stroke-width="1"/>'
        )
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n{axes}\n{body}\n</svg>\n'
        )


def polygon_svg(polygon: Polygon) -> str:
    pts = [(float(x), float(y)) for x, y in polygon.vertices]
    canvas = _Canvas([x for x, _ in pts], [y for _, y in pts])
    body = (
        f'<polygon points="{canvas.points(pts)}" fill="#7fbfdf" fill-opacity="0.6" '
        'stroke="#1f5f8f" stroke-width="1.5"/>'
    )
    return canvas.document(body)


def profile_svg(profile) -> str:
    knots = []
    for lo, hi, slope, intercept in profile.pieces.pieces():
        knots.append((float(lo), float(slope * lo + intercept)))
        knots.append((float(hi), float(slope * hi + intercept)))
    canvas = _Canvas([x for x, _ in knots], [y for _, y in knots])
    body = f'<polyline points="{canvas.points(knots)}" fill="none" stroke="#b03030" stroke-width="2"/>'
    return canvas.document(body)


def write_text(text: str, path) -> None:
    try:
        Path(path).write_text(text)
    except OSError as err:
        raise OSError(f"cannot write {path}: {err}") from err
