"""Vector layer input/output.

Reads and writes a GeoJSON subset (Point / LineString / Polygon feature
collections) whose coordinates are planar meters in one metric system, not
lon/lat. Also provides the CSV table writer used by the zonal and profile
reports.
"""

import csv
import json
import math

import numpy as np

from ._files import atomic_write
from .predicates import orient2d

CRS_NOTE = "coordinates are planar meters in a single projected system, not lon/lat"

# layer_kind -> geometry kind of every feature in the layer
LAYER_GEOMETRY = {
    "contours": "polyline",
    "spot_heights": "point",
    "polygons": "polygon",
    "polylines": "polyline",
}

_GEOJSON_TYPE = {"point": "Point", "polyline": "LineString", "polygon": "Polygon"}
_KIND_FROM_GEOJSON = {v: k for k, v in _GEOJSON_TYPE.items()}


class LayerError(ValueError):
    """Raised for unreadable files or rejected features.

    ``diagnostics`` holds (feature_index, message) pairs; index -1 marks
    file-level problems.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class Geometry:
    """A point, polyline, or polygon with rings stored as (n, 2) arrays.

    Polygon rings are explicitly closed (first vertex repeated last);
    ring 0 is the outer ring, any further rings are holes.
    """

    __slots__ = ("kind", "rings")

    def __init__(self, kind, rings):
        self.kind = kind
        self.rings = [np.asarray(r, dtype=np.float64).reshape(-1, 2) for r in rings]

    def __eq__(self, other):
        return (isinstance(other, Geometry) and self.kind == other.kind
                and len(self.rings) == len(other.rings)
                and all(np.array_equal(a, b) for a, b in zip(self.rings, other.rings)))

    def __repr__(self):
        sizes = [len(r) for r in self.rings]
        return f"Geometry({self.kind!r}, rings={sizes})"


class Feature:
    __slots__ = ("geometry", "properties")

    def __init__(self, geometry, properties=None):
        self.geometry = geometry
        self.properties = dict(properties or {})

    def __eq__(self, other):
        return (isinstance(other, Feature) and self.geometry == other.geometry
                and self.properties == other.properties)


class VectorLayer:
    """Homogeneous feature list; read-only once loaded."""

    __slots__ = ("layer_kind", "features", "crs_note")

    def __init__(self, layer_kind, features, crs_note=CRS_NOTE):
        if layer_kind not in LAYER_GEOMETRY:
            raise LayerError(f"unknown layer kind {layer_kind!r}")
        self.layer_kind = layer_kind
        self.features = list(features)
        self.crs_note = crs_note

    def __len__(self):
        return len(self.features)

    def __iter__(self):
        return iter(self.features)


class ContourSummary:
    """Totals returned by validate_contours."""

    __slots__ = ("features", "vertices", "z_min", "z_max")

    def __init__(self, features, vertices, z_min, z_max):
        self.features = features
        self.vertices = vertices
        self.z_min = z_min
        self.z_max = z_max

    def __repr__(self):
        return (f"ContourSummary(features={self.features}, vertices={self.vertices}, "
                f"z_min={self.z_min}, z_max={self.z_max})")


def _dedup_consecutive(coords):
    """Drop consecutive duplicate vertices (digitizing artifacts)."""
    if len(coords) < 2:
        return coords
    keep = [0]
    for i in range(1, len(coords)):
        if coords[i][0] != coords[keep[-1]][0] or coords[i][1] != coords[keep[-1]][1]:
            keep.append(i)
    return [coords[i] for i in keep]


def _segments_properly_intersect(p1, p2, q1, q2):
    """True when segment p1p2 intersects q1q2 away from shared endpoints."""
    o1 = orient2d(p1[0], p1[1], p2[0], p2[1], q1[0], q1[1])
    o2 = orient2d(p1[0], p1[1], p2[0], p2[1], q2[0], q2[1])
    o3 = orient2d(q1[0], q1[1], q2[0], q2[1], p1[0], p1[1])
    o4 = orient2d(q1[0], q1[1], q2[0], q2[1], p2[0], p2[1])
    if o1 != o2 and o3 != o4:
        return True
    # Collinear overlap counts as a self-intersection too.
    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        lo_p, hi_p = sorted((tuple(p1), tuple(p2)))
        lo_q, hi_q = sorted((tuple(q1), tuple(q2)))
        return max(lo_p, lo_q) < min(hi_p, hi_q)
    return False


def _ring_self_intersects(ring):
    """Exact O(n^2) self-intersection test on a closed ring."""
    n = len(ring) - 1  # closing vertex excluded from the edge count
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if _segments_properly_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1]):
                return True
    return False


def _validate_coords(coords):
    for x, y in coords:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError("non-finite coordinate")


def _parse_geometry(geo, expected_geom_kind):
    if not isinstance(geo, dict) or "type" not in geo:
        raise ValueError("feature has no geometry")
    kind = _KIND_FROM_GEOJSON.get(geo["type"])
    if kind is None:
        raise ValueError(f"unsupported geometry type {geo['type']!r}")
    if kind != expected_geom_kind:
        raise ValueError(f"kind mismatch: got {kind}, expected {expected_geom_kind}")
    coords = geo.get("coordinates")
    if kind == "point":
        _validate_coords([coords])
        return Geometry("point", [[coords]])
    if kind == "polyline":
        _validate_coords(coords)
        line = _dedup_consecutive([list(c) for c in coords])
        if len(line) < 2:
            raise ValueError("polyline has fewer than 2 distinct vertices")
        return Geometry("polyline", [line])
    rings = []
    for ring in coords:
        _validate_coords(ring)
        ring = _dedup_consecutive([list(c) for c in ring])
        if len(ring) < 4 or ring[0] != ring[-1]:
            raise ValueError("polygon ring not closed or has fewer than 3 distinct vertices")
        if _ring_self_intersects(ring):
            raise ValueError("polygon ring is self-intersecting")
        rings.append(ring)
    if not rings:
        raise ValueError("polygon has no rings")
    return Geometry("polygon", rings)


def load_vector_layer(path, expected_kind, elevation_property="elevation",
                      lenient=False):
    """Load a GeoJSON FeatureCollection as one homogeneous layer.

    Every feature is either accepted or recorded as a (index, message)
    diagnostic; by default any diagnostic raises LayerError. With
    ``lenient=True`` returns (layer, diagnostics) instead, so
    accepted + rejected always equals the input feature count.

    Contour features must carry a finite numeric ``elevation_property``.
    """
    if expected_kind not in LAYER_GEOMETRY:
        raise LayerError(f"unknown layer kind {expected_kind!r}")
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise LayerError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LayerError(f"malformed JSON in {path}: {exc}",
                         [(-1, str(exc))]) from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise LayerError(f"{path}: not a GeoJSON FeatureCollection",
                         [(-1, "not a FeatureCollection")])

    geom_kind = LAYER_GEOMETRY[expected_kind]
    features = []
    diagnostics = []
    for index, raw in enumerate(doc.get("features", [])):
        try:
            if not isinstance(raw, dict) or raw.get("type") != "Feature":
                raise ValueError("not a Feature object")
            geometry = _parse_geometry(raw.get("geometry"), geom_kind)
            properties = raw.get("properties") or {}
            if not isinstance(properties, dict):
                raise ValueError("properties is not an object")
            if expected_kind in ("contours", "spot_heights"):
                z = properties.get(elevation_property)
                if not isinstance(z, (int, float)) or isinstance(z, bool) \
                        or not math.isfinite(z):
                    raise ValueError(
                        f"missing or non-finite {elevation_property!r} property")
                if elevation_property != "elevation":
                    properties = dict(properties)
                    properties["elevation"] = float(z)
            features.append(Feature(geometry, properties))
        except ValueError as exc:
            diagnostics.append((index, str(exc)))

    layer = VectorLayer(expected_kind, features,
                        doc.get("crs_note", CRS_NOTE))
    if lenient:
        return layer, diagnostics
    if diagnostics:
        lines = "; ".join(f"feature {i}: {msg}" for i, msg in diagnostics)
        raise LayerError(f"{path}: {len(diagnostics)} invalid feature(s): {lines}",
                         diagnostics)
    return layer


def write_vector_layer(layer, path):
    """Write a layer back to GeoJSON; coordinates keep full float precision."""
    features = []
    for feature in layer.features:
        geometry = feature.geometry
        if geometry.kind == "point":
            coords = list(geometry.rings[0][0])
        elif geometry.kind == "polyline":
            coords = geometry.rings[0].tolist()
        else:
            coords = [ring.tolist() for ring in geometry.rings]
        features.append({
            "type": "Feature",
            "geometry": {"type": _GEOJSON_TYPE[geometry.kind], "coordinates": coords},
            "properties": feature.properties,
        })
    doc = {
        "type": "FeatureCollection",
        "crs_note": layer.crs_note,
        "features": features,
    }
    atomic_write(path, lambda f: json.dump(doc, f, sort_keys=True))


def validate_contours(layer):
    """Check contour or spot-height features and return their totals.

    Every vertex of a feature carries that feature's elevation. Consecutive
    duplicate vertices have already been removed at load time; degenerate
    or non-finite features raise LayerError.
    """
    if layer.layer_kind not in ("contours", "spot_heights"):
        raise LayerError(
            f"expected contours or spot_heights, got {layer.layer_kind!r}")
    z_min = math.inf
    z_max = -math.inf
    vertices = 0
    for index, feature in enumerate(layer.features):
        z = feature.properties.get("elevation")
        if z is None or not math.isfinite(z):
            raise LayerError(f"feature {index}: non-finite elevation",
                             [(index, "non-finite elevation")])
        ring = feature.geometry.rings[0]
        if layer.layer_kind == "contours" and len(ring) < 2:
            raise LayerError(f"feature {index}: fewer than 2 distinct vertices",
                             [(index, "fewer than 2 distinct vertices")])
        vertices += len(ring)
        z_min = min(z_min, z)
        z_max = max(z_max, z)
    if not layer.features:
        raise LayerError("layer has no features")
    return ContourSummary(len(layer.features), vertices, z_min, z_max)


def elevation_points(*layers):
    """Gather (x, y, z) samples from contour and spot-height layers."""
    rows = []
    for layer in layers:
        if layer is None:
            continue
        validate_contours(layer)
        for feature in layer.features:
            z = float(feature.properties["elevation"])
            ring = feature.geometry.rings[0]
            for x, y in ring:
                rows.append((x, y, z))
    return np.array(rows, dtype=np.float64).reshape(-1, 3)


def _format_cell(value, precision):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return f"{value:.{precision}f}"


def write_csv_table(rows, path, precision=6):
    """Write records as RFC-4180-style CSV (header row, LF endings).

    Floats are serialized with ``precision`` decimals (default 6); all rows
    must share the schema of the first row. NaN / None become empty fields.
    """
    rows = list(rows)
    if rows:
        header = list(rows[0].keys())
        for i, row in enumerate(rows):
            if list(row.keys()) != header:
                raise ValueError(f"row {i} does not match the header schema")
    else:
        header = []

    def writer(handle):
        out = csv.writer(handle, lineterminator="\n")
        if header:
            out.writerow(header)
            for row in rows:
                out.writerow([_format_cell(row[k], precision) for k in header])

    atomic_write(path, writer)


def write_csv_header_only(header, path):
    """Header-only CSV for empty result sets."""

    def writer(handle):
        csv.writer(handle, lineterminator="\n").writerow(list(header))

    atomic_write(path, writer)


def read_csv_table(path):
    """Read a CSV written by write_csv_table; numeric fields become floats."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            return []
        rows = []
        for record in reader:
            row = {}
            for key, cell in zip(header, record):
                if cell == "":
                    row[key] = None
                else:
                    try:
                        row[key] = float(cell)
                    except ValueError:
                        row[key] = cell
            rows.append(row)
    return rows
