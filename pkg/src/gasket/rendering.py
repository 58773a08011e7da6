import itertools
from typing import List, Optional, Union

import structlog

from gasket.euclidean import SQRT3_2, VERTICES, apply_word, points_frame
from gasket.exceptions import EnumerationTooLargeError
from gasket.settings import get_settings
from gasket.types.main import LETTERS, RenderFormat

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = ["render", "render_svg", "render_points", "triangle_paths"]

COORDINATE_DIGITS = 7
VIEW_HEIGHT = f"{SQRT3_2:.{COORDINATE_DIGITS}f}"


def _coordinate(value: float) -> str:
    text = f"{value:.{COORDINATE_DIGITS}f}"
    # no "-0.0000000"
    return "0.0000000" if text.startswith("-") and float(text) == 0 else text


def triangle_paths(depth: int) -> List[str]:
    """One SVG path per word of length `depth`, in lexicographic word order."""
    paths = []
    for letters in itertools.product(LETTERS, repeat=depth):
        word = "".join(letters)
        corners = [apply_word(word, VERTICES[z]) for z in ("T", "L", "R")]
        # SVG's y axis points down
        points = [(_coordinate(p.x), _coordinate(SQRT3_2 - p.y)) for p in corners]
        moves = " L ".join(f"{x} {y}" for x, y in points)
        paths.append(f'<path d="M {moves} Z"/>')
    return paths


def render_svg(depth: int, fill: Optional[str] = None) -> str:
    fill = fill or settings.SVG_FILL
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="0 0 1 {VIEW_HEIGHT}">'
        ),
        f'<g fill="{fill}" stroke="none">',
        *triangle_paths(depth),
        "</g>",
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def render_points(depth: int) -> str:
    """CSV ``word,corner,x,y`` for every canonical address of `depth`."""
    frame = points_frame(depth)
    return frame.to_csv(index=False, float_format=settings.FLOAT_FORMAT)


def render(
    depth: int,
    fmt: Union[RenderFormat, str] = RenderFormat.svg,
    fill: Optional[str] = None,
) -> str:
    """The gasket at `depth`: 3ⁿ filled triangles (svg) or the level-n point cloud (points)."""
    if depth < 0 or depth > settings.RENDER_MAX_DEPTH:
        raise EnumerationTooLargeError(depth, settings.RENDER_MAX_DEPTH)
    fmt = RenderFormat(str(fmt))
    logger.debug(f"rendering {fmt} at {depth=}")
    if fmt == RenderFormat.svg:
        return render_svg(depth, fill=fill)
    return render_points(depth)
