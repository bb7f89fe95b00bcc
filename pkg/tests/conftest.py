"""Shared helpers: independent geometry oracles and gene/data builders."""

from __future__ import annotations

import json

import pytest

from genii import parse_dataset, parse_gene


def shoelace(points) -> float:
    """Signed polygon area, positive for counter-clockwise rings.

    Deliberately hand-rolled: it is the independent oracle that checks the
    areas coming out of the geometry library's boolean operations.
    """
    area2 = 0.0
    n = len(points)
    for i in range(n):
        ax, ay = points[i][0], points[i][1]
        bx, by = points[(i + 1) % n][0], points[(i + 1) % n][1]
        area2 += ax * by - bx * ay
    return area2 / 2.0


def mark_area(mark) -> float:
    """Area of a closed mark: shell minus holes, via the shoelace oracle."""
    area = abs(shoelace(mark.outline))
    for hole in mark.holes:
        area -= abs(shoelace(hole))
    return area


def perimeter(points, closed=True) -> float:
    total = 0.0
    n = len(points)
    last = n if closed else n - 1
    for i in range(last):
        ax, ay = points[i][0], points[i][1]
        bx, by = points[(i + 1) % n][0], points[(i + 1) % n][1]
        total += ((bx - ax) ** 2 + (by - ay) ** 2) ** 0.5
    return total


def gene_from(obj) -> "genii.Gene":
    return parse_gene(json.dumps(obj).encode("utf-8"))


def dataset_from(obj) -> "genii.Dataset":
    return parse_dataset(json.dumps(obj).encode("utf-8"))


def bar_gene_obj(n_points=6, shape="rect", **mark_extra):
    return {
        "name": "test-bars",
        "path": {"mode": "inline_linear", "pointCount": n_points},
        "mark": {"shape": shape, **mark_extra},
        "mappings": [
            {"channel": "mark_height", "source": "value_over_range"},
            {"channel": "colour", "source": "index"},
        ],
    }


def values_dataset_obj(values, range_=100):
    return {
        "categories": [
            {"name": f"c{i}", "value": v, "range": range_}
            for i, v in enumerate(values)
        ]
    }


@pytest.fixture
def bar_gene():
    return gene_from(bar_gene_obj())


@pytest.fixture
def five_values():
    return dataset_from(values_dataset_obj([30, 55, 80, 45, 62]))
