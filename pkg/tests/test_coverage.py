from __future__ import annotations

import json
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from generators import star_polygon
from oracles import convex_hull, inside_half_planes, is_simple, near_boundary, winding_number

from metaurban.coverage import (
    Containment,
    GeoArea,
    GeoCoordinate,
    GeographyLevel,
    NamedGeography,
    contains_point,
    parse_coverage,
    point_in_polygon,
)
from metaurban.errors import EmptyCoverage, MalformedGeometry

UNIT_SQUARE = json.dumps({"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]]})
SQUARE_RING = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]


def test_country():
    cov = parse_coverage("U.S.")
    assert cov == NamedGeography(GeographyLevel.COUNTRY, ("U.S.",))


def test_region_and_division_lists():
    raw = "Regions: [3 4 1 2], Census divisions: [5 9 7 2 8 3 6 1 4]"
    cov = parse_coverage(raw)
    assert isinstance(cov, NamedGeography)
    assert cov.level is GeographyLevel.REGION
    assert cov.values == ("3", "4", "1", "2")
    assert cov.lists["Census divisions"] == ("5", "9", "7", "2", "8", "3", "6", "1", "4")


def test_mapping_literal():
    raw = "{'Region': ['WEST', 'SOUTH'], 'Division': ['Pacific', 'New England']}"
    cov = parse_coverage(raw)
    assert cov.level is GeographyLevel.REGION
    assert cov.values == ("WEST", "SOUTH")
    assert cov.lists == {"Division": ("Pacific", "New England")}


def test_unit_square_polygon():
    cov = parse_coverage(UNIT_SQUARE)
    assert isinstance(cov, GeoArea)
    assert len(cov.polygons) == 1
    (polygon,) = cov.polygons
    assert len(polygon) == 1 and len(polygon[0]) == 5


def test_feature_and_multipolygon():
    feature = {
        "type": "Feature",
        "properties": {"name": "x"},
        "geometry": {
            "type": "MultiPolygon",
            "coordinates": [
                [[[0, 0], [1, 0], [1, 1], [0, 0]]],
                [[[5, 5], [6, 5], [6, 6], [5, 5]]],
            ],
        },
    }
    cov = parse_coverage(json.dumps(feature))
    assert isinstance(cov, GeoArea) and len(cov.polygons) == 2


@pytest.mark.parametrize(
    "raw, level, values",
    [
        ("02139", GeographyLevel.ZIPCODE, ("02139",)),
        ("02139, 85721", GeographyLevel.ZIPCODE, ("02139", "85721")),
        ("California", GeographyLevel.STATE, ("California",)),
        ("Pima County", GeographyLevel.COUNTY, ("Pima County",)),
        ("Downtown core", GeographyLevel.FREEFORM, ("Downtown core",)),
        ("United States", GeographyLevel.COUNTRY, ("United States",)),
    ],
)
def test_level_detection(raw, level, values):
    cov = parse_coverage(raw)
    assert (cov.level, cov.values) == (level, values)


@pytest.mark.parametrize("raw", ["", "   ", "\n"])
def test_empty_coverage(raw):
    with pytest.raises(EmptyCoverage):
        parse_coverage(raw)


@pytest.mark.parametrize(
    "geometry",
    [
        {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 1]]]},
        {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [0, 0]]]},
        {"type": "Polygon", "coordinates": []},
        {"type": "Point", "coordinates": [0, 0]},
        {"type": "Polygon", "coordinates": [[["a", 0], [1, 0], [1, 1], ["a", 0]]]},
    ],
)
def test_malformed_geometry(geometry):
    with pytest.raises(MalformedGeometry):
        parse_coverage(json.dumps(geometry))


@pytest.mark.parametrize(
    "raw",
    [
        "U.S.",
        "  Regions: [3 4 1 2], Census divisions: [5 9]",
        UNIT_SQUARE,
        "{'Region': ['WEST']}",
        "Downtown, near the river ",
    ],
)
def test_raw_text_kept_verbatim(raw):
    assert str(parse_coverage(raw)) == raw


@given(st.text(min_size=1).filter(lambda s: s.strip()))
def test_reserialization_is_exact(raw):
    try:
        cov = parse_coverage(raw)
    except (MalformedGeometry, EmptyCoverage):
        return
    assert str(cov) == raw


def test_unit_square_grid_against_winding_oracle():
    cov = parse_coverage(UNIT_SQUARE)
    for i in range(100):
        for j in range(100):
            x, y = -0.5 + 2 * i / 99, -0.5 + 2 * j / 99
            on_edge = near_boundary(x, y, SQUARE_RING)
            expected = on_edge or winding_number(x, y, SQUARE_RING) != 0
            got = contains_point(cov, GeoCoordinate(y, x)) is Containment.INSIDE
            assert got == expected, (x, y)


def test_unit_square_examples():
    cov = parse_coverage(UNIT_SQUARE)
    # oracle value frozen from the grid check above
    assert contains_point(cov, GeoCoordinate(0.5, 0.5)) is Containment.INSIDE
    assert contains_point(cov, GeoCoordinate(2.0, 2.0)) is Containment.OUTSIDE


@pytest.mark.parametrize("point", [(0.0, 0.0), (0.0, 0.5), (1.0, 1.0), (0.5, 1.0)])
def test_boundary_counts_inside(point):
    lat, lon = point
    assert contains_point(parse_coverage(UNIT_SQUARE), GeoCoordinate(lat, lon)) is Containment.INSIDE


def test_named_geography_is_unknown():
    cov = parse_coverage("U.S.")
    assert contains_point(cov, GeoCoordinate(40.0, -100.0)) is Containment.UNKNOWN


def test_hole_is_outside():
    donut = {
        "type": "Polygon",
        "coordinates": [
            [[0, 0], [10, 0], [10, 10], [0, 10], [0, 0]],
            [[4, 4], [6, 4], [6, 6], [4, 6], [4, 4]],
        ],
    }
    cov = parse_coverage(json.dumps(donut))
    assert contains_point(cov, GeoCoordinate(5, 5)) is Containment.OUTSIDE
    assert contains_point(cov, GeoCoordinate(2, 2)) is Containment.INSIDE


def test_out_of_range_point_rejected():
    with pytest.raises(ValueError):
        contains_point(parse_coverage(UNIT_SQUARE), GeoCoordinate(91.0, 0.0))


def test_convex_polygon_matches_half_planes():
    rng = random.Random(20240601)
    hull = convex_hull([(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(30)])
    polygon = (tuple(hull),)
    for _ in range(1000):
        x, y = rng.uniform(-6, 6), rng.uniform(-6, 6)
        assert point_in_polygon(x, y, polygon) == inside_half_planes(x, y, hull), (x, y)


@pytest.mark.parametrize("seed", range(10))
def test_random_simple_polygons_match_winding(seed):
    rng = random.Random(seed)
    ring = star_polygon(rng, rng.randint(4, 25))
    assert is_simple(ring)
    polygon = (tuple(ring),)
    for _ in range(500):
        x, y = rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)
        if near_boundary(x, y, ring):
            continue
        assert point_in_polygon(x, y, polygon) == (winding_number(x, y, ring) != 0)
