"""Reference implementations used only by tests.

Nothing here imports the package; each function restates a rule directly
so that agreement with the production code means something.
"""

from __future__ import annotations

import ast
import json
import math
import re

# -- geometry ---------------------------------------------------------------


def winding_number(x: float, y: float, ring: list[tuple[float, float]]) -> int:
    """Signed winding number of a closed ring around (x, y)."""
    wn = 0
    for (x1, y1), (x2, y2) in zip(ring, ring[1:]):
        side = (x2 - x1) * (y - y1) - (x - x1) * (y2 - y1)
        if y1 <= y < y2 and side > 0:
            wn += 1
        elif y2 <= y < y1 and side < 0:
            wn -= 1
    return wn


def segment_distance(x: float, y: float, a: tuple[float, float], b: tuple[float, float]) -> float:
    (x1, y1), (x2, y2) = a, b
    dx, dy = x2 - x1, y2 - y1
    length2 = dx * dx + dy * dy
    t = 0.0 if length2 == 0 else max(0.0, min(1.0, ((x - x1) * dx + (y - y1) * dy) / length2))
    return math.hypot(x - (x1 + t * dx), y - (y1 + t * dy))


def near_boundary(x: float, y: float, ring: list[tuple[float, float]], eps: float = 1e-9) -> bool:
    return any(segment_distance(x, y, a, b) < eps for a, b in zip(ring, ring[1:]))


def _segments_cross(a, b, c, d) -> bool:
    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return (v > 0) - (v < 0)

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    # collinear overlap
    def on(p, q, r):
        return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])

    return (o1 == 0 and on(a, b, c)) or (o2 == 0 and on(a, b, d)) or (o3 == 0 and on(c, d, a)) or (o4 == 0 and on(c, d, b))


def is_simple(ring: list[tuple[float, float]]) -> bool:
    """True when no two non-adjacent edges of the closed ring touch."""
    edges = list(zip(ring, ring[1:]))
    n = len(edges)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return False
    return True


def convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Counter-clockwise hull (monotone chain), closed ring."""
    pts = sorted(set(points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull + [hull[0]]


def inside_half_planes(x: float, y: float, ccw_ring: list[tuple[float, float]]) -> bool:
    """Point lies on the inner side of (or on) every edge of a CCW convex ring."""
    return all(
        (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) >= 0 for (x1, y1), (x2, y2) in zip(ccw_ring, ccw_ring[1:])
    )


# -- validation -------------------------------------------------------------

# (name, kind, required, allowed) per category, typed out again independently
TRANSCRIPTION: dict[str, list[tuple[str, str, bool, tuple[str, ...]]]] = {
    "Weather": [
        ("Name of Dataset/ Website", "text", True, ()),
        ("Timestamp format", "timestamp", True, ()),
        ("Constant Interval?", "bool", True, ()),
        ("Time interval", "interval", True, ()),
        ("Interpolation Methodology", "text", False, ()),
        ("Location of weather collection", "coordinate", False, ()),
        ("Effective coverage", "coverage", False, ()),
        ("EPW or not", "bool", True, ()),
        ("AMY/TMY/Others", "enum", True, ("AMY", "TMY", "Others")),
    ],
    "BuildingStockGIS": [
        ("Name of Dataset/ Website", "text", True, ()),
        ("Resolution", "enum", True, ("Building", "Community")),
        ("3D or 2D", "enum", True, ("3D", "2D")),
        ("Data Format", "enum", True, ("Shapefile", "FileGDB", "GeoJSON", "CityGML")),
        ("Levels of detail (LoD)", "lod", True, ("LoD1", "LoD2", "LoD3", "LoD4")),
    ],
    "OccupantBehavior": [
        ("Name of Dataset/ Website", "text", True, ()),
        ("Timestamp format", "timestamp", True, ()),
        ("Constant Interval?", "bool", True, ()),
        ("Time interval", "interval", True, ()),
        ("Building Type", "list", False, ()),
        ("Behavior Type", "list", False, ()),
        ("Control Action", "list", False, ()),
        ("Behavior Relevant Factors", "list", False, ()),
        ("Effective coverage", "coverage", False, ()),
    ],
    "BuildingCharacteristics": [
        ("Name of Dataset/ Website", "text", True, ()),
        ("Effective coverage", "coverage", True, ()),
        ("Sample or Probability", "enum", True, ("Sample", "Probability")),
        ("Building characteristics distribution list", "list", True, ()),
        ("Joint distribution list", "pairs", True, ()),
    ],
    "MacroscopicEnergy": [
        ("Name of Dataset/ Website", "text", True, ()),
        ("Sector", "enum", True, ("Residential", "Commercial", "All", "Unknown")),
        ("Timeseries", "bool", True, ()),
        ("Timestamp format", "timestamp", True, ()),
        ("Constant Interval", "bool", True, ()),
        ("Time interval", "interval", True, ()),
        ("Interpolation Methodology", "text", True, ()),
        ("Effective coverage", "coverage", True, ()),
        ("Energy Data List", "list", True, ()),
    ],
    "MicroscopicEnergy": [
        ("Name of Dataset/ Website", "text", True, ()),
        ("Timestamp format", "timestamp", True, ()),
        ("Constant Interval?", "bool", True, ()),
        ("Time interval", "interval", True, ()),
        ("Interpolation Methodology", "text", False, ()),
        ("Geographic information", "coverage", False, ()),
        ("Existing Metadata Schema?", "bool", True, ()),
    ],
}

_PATTERN = re.compile(r"(?:YYYY|MM|DD|HH|SS|[ \-/:.T,])+")
_INTERVAL = re.compile(r"(\d+(?:\.\d+)?) (min|day|month|year)")
_COORD = re.compile(r"\((-?[\d.e+-]+), (-?[\d.e+-]+)\)")
_QUALIFIED = re.compile(r"(\w+) \(([^()]*)\)")


def _enum_member(cell: str, allowed: tuple[str, ...]) -> str | None:
    for a in allowed:
        if cell.strip().lower() == a.lower():
            return a
    return None


def _coverage_ok(cell: str) -> bool:
    text = cell.strip()
    if not text:
        return False
    if text.startswith("{") and '"type"' in text:
        geom = json.loads(text)
        if geom.get("type") == "Feature":
            geom = geom["geometry"]
        polys = [geom["coordinates"]] if geom["type"] == "Polygon" else geom["coordinates"]
        return all(len(r) >= 4 and r[0] == r[-1] for p in polys for r in p)
    return True


def naive_errors(category: str, cells: dict[str, str]) -> list[tuple[str, str]]:
    """Restate R1-R9 over raw metadata cells; return sorted (field, rule) error pairs."""
    errors: list[tuple[str, str]] = []
    fields = TRANSCRIPTION[category]
    parsed_ok: dict[str, bool] = {}
    for name, kind, required, allowed in fields:
        if name not in cells:
            if required:
                errors.append((name, "R1"))
            continue
        cell = cells[name]
        ok = True
        if kind == "text":
            ok = bool(cell.strip())
        elif kind == "bool":
            ok = cell.strip().lower() in ("true", "false")
        elif kind == "interval":
            ok = cell.strip().lower() == "nan" or (
                bool(_INTERVAL.fullmatch(cell.strip())) and float(_INTERVAL.fullmatch(cell.strip()).group(1)) > 0
            )
        elif kind == "coverage":
            ok = _coverage_ok(cell)
        elif kind == "pairs":
            try:
                value = ast.literal_eval(cell.strip())
                ok = isinstance(value, list) and all(isinstance(g, (list, set, tuple)) for g in value)
            except (ValueError, SyntaxError):
                ok = False
        elif kind == "coordinate":
            ok = bool(_COORD.fullmatch(cell.strip()))
        parsed_ok[name] = ok
        if not ok:
            errors.append((name, "R2"))
            continue
        if kind == "coordinate":
            m = _COORD.fullmatch(cell.strip())
            if not -90 <= float(m.group(1)) <= 90:
                errors.append((name, "R6"))
            if not -180 <= float(m.group(2)) <= 180:
                errors.append((name, "R6"))
        if kind == "timestamp" and cell.strip().lower() != "nan":
            pattern = cell.strip()
            units_ok = all(pattern.count(t) <= 1 for t in ("YYYY", "DD", "HH", "SS")) and pattern.count("MM") <= 2
            if not (_PATTERN.fullmatch(pattern) and units_ok):
                errors.append((name, "R7"))
        if kind in ("enum", "lod"):
            text = cell.strip()
            m = _QUALIFIED.fullmatch(text)
            base = m.group(1) if m else text
            if _enum_member(base, allowed) is None:
                errors.append((name, "R9" if kind == "lod" else "R8"))

    names = {n for n, *_ in fields}
    constant_name = "Constant Interval" if "Constant Interval" in names else "Constant Interval?"
    if parsed_ok.get(constant_name) and parsed_ok.get("Time interval"):
        constant = cells[constant_name].strip().lower() == "true"
        is_nan = cells["Time interval"].strip().lower() == "nan"
        if constant == is_nan:
            errors.append(("Time interval", "R3"))

    dist_name, joint_name = "Building characteristics distribution list", "Joint distribution list"
    if parsed_ok.get(joint_name) and dist_name in cells:
        dist = set(ast.literal_eval(cells[dist_name].strip()))
        missing = []
        for group in ast.literal_eval(cells[joint_name].strip()):
            for member in group:
                if member not in dist and member not in missing:
                    missing.append(member)
        errors.extend((joint_name, "R4") for _ in missing)

    mode = cells.get("Sample or Probability", "").strip()
    m = _QUALIFIED.fullmatch(mode)
    if m and m.group(1).lower() == "probability":
        p = float(m.group(2))
        if not 0 < p < 1:
            errors.append(("Sample or Probability", "R5"))

    order = {n: i for i, (n, *_) in enumerate(fields)}
    return sorted(errors, key=lambda e: (order[e[0]], int(e[1][1:])))
