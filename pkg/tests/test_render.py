"""SVG rendering: structure, determinism, filtering, and file output."""

import numpy as np
import pytest

from fockpr.lattice import Lattice
from fockpr.pointset import IndexedPointSet
from fockpr.render import TAG_COLORS, render_points_svg, render_svg


def circle_count(svg: str) -> int:
    return svg.count("<circle")


def test_document_structure():
    svg = render_points_svg({"A": [0.5 + 0.5j]}, radius=2.0, title="demo")
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg"')
    assert svg.endswith("</svg>\n")
    assert 'width="1000.00"' in svg
    assert ">demo</text>" in svg
    # white background, frame, two axes
    assert svg.count("<rect") == 2
    assert svg.count('stroke="#bbbbbb"') == 2


def test_circle_counts_and_window_filter():
    groups = {"A": [0.0, 1.0 + 1.0j], "B": [-1.0j, 10.0, 1.0 + 3.0j]}
    svg = render_points_svg(groups, radius=2.0)
    # 3 points inside the window plus one legend marker per tag
    assert circle_count(svg) == 3 + 2
    assert svg.count(TAG_COLORS["A"]) >= 2
    assert svg.count(TAG_COLORS["B"]) >= 1


def test_determinism_and_group_order_independence():
    a = {"A": [0.3, -0.4j], "B": [1.0]}
    b = {"B": [1.0], "A": [0.3, -0.4j]}
    r1 = render_points_svg(a, radius=1.5)
    r2 = render_points_svg(a, radius=1.5)
    r3 = render_points_svg(b, radius=1.5)
    assert r1 == r2 == r3


def test_mesh_lines_present_only_when_requested():
    lat = Lattice(1.0, 1.0j)
    with_mesh = render_points_svg({"1": [0.2]}, 2.0, mesh_lattice=lat)
    without = render_points_svg({"1": [0.2]}, 2.0)
    assert with_mesh.count('stroke="#dddddd"') > 10
    assert without.count('stroke="#dddddd"') == 0


def test_unknown_tags_get_fallback_colors():
    svg = render_points_svg({"points": [0.1], "extra": [0.2]}, radius=1.0)
    assert "#ff7f0e" in svg and "#17becf" in svg


def test_validation():
    with pytest.raises(ValueError, match="radius"):
        render_points_svg({"A": [0.0]}, radius=0.0)
    with pytest.raises(ValueError, match="nothing"):
        render_svg(np.array([], dtype=complex))


def test_array_route_autoscales():
    pts = np.array([3.0 + 0.0j, -1.0 + 2.0j])
    svg = render_svg(pts)
    # both points plus the single legend marker
    assert circle_count(svg) == 3


def test_point_set_route_with_mesh_and_file(tmp_path):
    lat = Lattice(1.0, 1.0j)
    ps = IndexedPointSet(lat, window_radius=2.0)
    ps.add((0, 0), "1", 0.01 + 0.02j)
    ps.add((1, 0), "2", -0.01j)
    out = tmp_path / "set.svg"
    text = render_svg(ps, path=out, mesh=True, title="window")
    assert out.read_text(encoding="ascii") == text
    assert circle_count(text) == 2 + 2
    assert TAG_COLORS["1"] in text and TAG_COLORS["2"] in text
    assert text.count('stroke="#dddddd"') > 10
