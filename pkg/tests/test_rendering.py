import pytest

from gasket.addresses import enumerate_level
from gasket.exceptions import EnumerationTooLargeError
from gasket.rendering import VIEW_HEIGHT, render, triangle_paths
from gasket.settings import get_settings, settings_context

settings = get_settings()


def test_depth_zero_is_one_triangle():
    assert triangle_paths(0) == [
        '<path d="M 0.5000000 0.0000000 L 0.0000000 0.8660254 L 1.0000000 0.8660254 Z"/>'
    ]


@pytest.mark.parametrize("depth", [0, 1, 2, 4])
def test_one_path_per_triangle(depth: int):
    svg = render(depth, "svg")
    assert svg.count("<path ") == 3**depth


def test_svg_document():
    svg = render(1)
    assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>\n')
    assert f'viewBox="0 0 1 {VIEW_HEIGHT}"' in svg
    assert VIEW_HEIGHT == "0.8660254"
    assert f'fill="{settings.SVG_FILL}"' in svg
    assert svg.endswith("</svg>\n")


def test_svg_is_byte_stable():
    assert render(5) == render(5)


def test_fill_override():
    assert 'fill="#ff0000"' in render(1, fill="#ff0000")
    with settings_context(svg_fill="#00ff00"):
        assert 'fill="#00ff00"' in render(1)


def test_no_negative_zero():
    assert "-0.0000000" not in render(6)


def test_points_csv():
    text = render(2, "points")
    lines = text.strip().split("\n")
    assert lines[0] == "word,corner,x,y"
    assert len(lines) == len(enumerate_level(2)) + 1
    assert lines[1] == "aa,T,0.5,0.866025403784439"


@pytest.mark.parametrize("depth", [-1, 13])
def test_depth_out_of_range(depth: int):
    with pytest.raises(EnumerationTooLargeError):
        render(depth)


def test_unknown_format():
    with pytest.raises(ValueError):
        render(1, "png")
