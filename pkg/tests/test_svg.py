import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from graspsyn.svg import line_svg, radar_svg, scatter_svg

NS = "{http://www.w3.org/2000/svg}"


def parse(text):
    root = ET.fromstring(text.encode())
    assert root.tag == NS + "svg"
    return root


def test_radar_is_valid_and_stable():
    series = {"SG": [1, 2, 3, 2, 1], "A&B <x>": [0.5] * 5}
    a = radar_svg(series, list("ABCDE"), "Forces & more")
    assert a == radar_svg(series, list("ABCDE"), "Forces & more")
    root = parse(a)
    polys = root.findall(f"{NS}polygon")
    assert len(polys) == 2
    first = [tuple(map(float, p.split(","))) for p in polys[0].get("points").split()]
    # first spoke points straight up from the centre
    assert first[0][0] == pytest.approx(260.0) and first[0][1] < 260.0


def test_radar_rejects_bad_input():
    with pytest.raises(ValueError):
        radar_svg({"x": [1, 2]}, ["a", "b"], "t")
    with pytest.raises(ValueError):
        radar_svg({"x": [1, 2, 3]}, ["a", "b", "c", "d"], "t")


def test_line_breaks_at_nan():
    root = parse(line_svg([1, 2, 3, 4, 5], {"s": [1, 2, math.nan, 4, 5]}, "t", bars=[0.5] * 5, marker=3))
    assert len(root.findall(f"{NS}polyline")) == 2
    assert len(root.findall(f"{NS}circle")) == 4


def test_scatter_groups():
    pts = np.random.default_rng(0).normal(size=(12, 2))
    groups = ["a"] * 6 + ["b"] * 6
    root = parse(scatter_svg(pts, groups, "t"))
    circles = root.findall(f"{NS}circle")
    assert len(circles) == 12
    assert len({c.get("fill") for c in circles}) == 2
    with pytest.raises(ValueError):
        scatter_svg(pts[:, :1], groups, "t")
