"""
``gasket`` command line.

    gasket dist a:T b:L
    gasket render --depth 5 --out gasket.svg
    gasket blowup --j 8 --depth 5
    gasket props metric --seed 0

Exit codes: 0 on success, 1 when a property check fails, 2 on usage errors.
"""
import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional

import pandas as pd
import structlog

from gasket.addresses import enumerate_level, parse_address
from gasket.coalgebras import load_coalgebra, parse_point
from gasket.completion import format_stream, parse_stream, truncate
from gasket.euclidean import address_to_point
from gasket.exceptions import GasketError
from gasket.metrics import address_distance
from gasket.oracle import oracle_distance
from gasket.props import run_props
from gasket.rendering import render
from gasket.sampling import get_rng
from gasket.settings import get_settings, set_log_level
from gasket.types.main import OutputFormat, Suite
from gasket.universal_maps import (
    blowup_experiment,
    check_square,
    depth_for_final_tolerance,
    final_morphism,
    theta,
)
from gasket.utils.formatting import distance_record, format_distance, format_float, format_point

logger = structlog.get_logger(__name__)
settings = get_settings()

__all__ = ["main", "build_parser"]

FORMATS = [fmt.value for fmt in OutputFormat]
EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--tol", type=float, default=None, help="tolerance for certified values")
    parent.add_argument("--depth", type=int, default=None, help="level, truncation or render depth")
    parent.add_argument("--samples", type=int, default=None, help="samples per randomized check")
    parent.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    parent.add_argument("--format", choices=FORMATS, default=None, help="output format")
    parent.add_argument("--out", default=None, help="write to FILE instead of stdout")
    parent.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return parent


def _distance_output(args, x, y, distance) -> str:
    if args.format == "json":
        return json.dumps(distance_record(x, y, distance))
    return format_distance(distance)


def cmd_dist(args) -> str:
    x, y = parse_address(args.x), parse_address(args.y)
    return _distance_output(args, x, y, address_distance(x, y))


def cmd_oracle(args) -> str:
    x, y = parse_address(args.x), parse_address(args.y)
    return _distance_output(args, x, y, oracle_distance(x, y))


def cmd_enum(args) -> str:
    level = 0 if args.depth is None else args.depth
    addresses = enumerate_level(level)
    if args.format == "json":
        return json.dumps([str(addr) for addr in addresses])
    if args.format == "csv":
        frame = pd.DataFrame(
            [(addr.word, addr.corner.value) for addr in addresses], columns=["word", "corner"]
        )
        return frame.to_csv(index=False)
    return "\n".join(str(addr) for addr in addresses)


def cmd_render(args) -> str:
    depth = 0 if args.depth is None else args.depth
    fmt = "points" if args.format in ("points", "csv") else "svg"
    return render(depth, fmt, fill=args.fill)


def _final_depth(args) -> int:
    if args.depth is not None:
        return args.depth
    tol = settings.DEFAULT_TOLERANCE if args.tol is None else args.tol
    return depth_for_final_tolerance(tol)


def cmd_address_of(args) -> str:
    """The address of a point of the gasket: the letters σ emits, to the requested depth."""
    point = parse_point(args.point)
    co = load_coalgebra("gasket")
    depth = _final_depth(args)
    stream = final_morphism(co, point)
    if args.format == "json":
        return json.dumps(
            {
                "point": format_point(point),
                "depth": depth,
                "prefix": stream.prefix(depth),
                "address": str(theta(co, point, depth)),
            }
        )
    return format_stream(stream, depth)


def cmd_point_of(args) -> str:
    """The point of the gasket named by an address, or by a stream truncated to the depth."""
    text = args.address
    if "(" in text:
        depth = _final_depth(args)
        addr = truncate(parse_stream(text), depth)
    else:
        addr = parse_address(text)
    point = address_to_point(addr)
    if args.format == "json":
        return json.dumps({"address": str(addr), "x": point.x, "y": point.y})
    return f"{format_float(point.x)},{format_float(point.y)}"


def cmd_finality(args) -> str:
    co = load_coalgebra(json.loads(args.coalgebra))
    if not args.points:
        report = check_square(co, samples=args.samples, tol=args.tol, rng=get_rng(args.seed))
        args.failed = not report.passed
        return report.json()

    depth = _final_depth(args)
    records = []
    for text in args.points:
        point = parse_point(text)
        records.append(
            {"point": format_point(point), "image": format_stream(final_morphism(co, point), depth)}
        )
    if args.format == "json":
        return json.dumps({"coalgebra": co.name, "depth": depth, "images": records})
    return "\n".join(f"{record['point']}\t{record['image']}" for record in records)


def cmd_blowup(args) -> str:
    depth = 5 if args.depth is None else args.depth
    frame = blowup_experiment(args.j, depth, lipschitz_constant=args.K)
    if args.format == "json":
        return frame.to_json(orient="records")
    return frame.to_csv(index=False, float_format=settings.FLOAT_FORMAT)


def cmd_props(args) -> str:
    try:
        suite = Suite(args.suite)
    except ValueError:
        raise GasketError(
            f"unknown suite `{args.suite}`; choose from {[s.value for s in Suite]}"
        ) from None
    report = run_props(
        suite,
        seed=args.seed,
        samples=args.samples,
        tol=args.tol,
        strict=args.strict,
    )
    args.failed = not report.passed
    return report.to_json(indent=2)


COMMANDS: Dict[str, Callable[[Any], str]] = {
    "dist": cmd_dist,
    "oracle": cmd_oracle,
    "enum": cmd_enum,
    "render": cmd_render,
    "address-of": cmd_address_of,
    "point-of": cmd_point_of,
    "finality": cmd_finality,
    "blowup": cmd_blowup,
    "props": cmd_props,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gasket",
        description="Address spaces, universal maps and metrics for the Sierpinski gasket.",
    )
    common = _common_flags()
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("dist", "exact distance d_G between two addresses"),
        ("oracle", "brute-force distance on the level graph"),
    ):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("x", help="address, e.g. abc:L")
        sub.add_argument("y", help="address, e.g. :T")

    commands.add_parser("enum", parents=[common], help="canonical addresses of one level")

    render_parser = commands.add_parser("render", parents=[common], help="SVG or point cloud")
    render_parser.add_argument("--fill", default=None, help="SVG fill colour")

    address_of = commands.add_parser(
        "address-of", parents=[common], help="address of a point of the gasket"
    )
    address_of.add_argument("point", help="x,y")

    point_of = commands.add_parser(
        "point-of", parents=[common], help="point named by an address or stream"
    )
    point_of.add_argument("address", help="address `ab:L` or stream `ab(c)`")

    finality = commands.add_parser(
        "finality", parents=[common], help="final morphism of a coalgebra"
    )
    finality.add_argument(
        "--coalgebra", default='"gasket"', help='JSON config, e.g. \'{"cantor": {"j": 8}}\''
    )
    finality.add_argument("points", nargs="*", help="points to map; none runs the square check")

    blowup = commands.add_parser("blowup", parents=[common], help="Lipschitz blow-up table")
    blowup.add_argument("--j", type=int, default=8, help="staircase parameter, >= 4")
    blowup.add_argument(
        "--K", type=float, default=1.0, help="bilipschitz constant of a candidate target"
    )

    props = commands.add_parser("props", parents=[common], help="run the property suites")
    props.add_argument("suite", nargs="?", default="all", help="suite name or `all`")
    props.add_argument(
        "--strict", action="store_true", help="raise every failed check as an exception group"
    )
    return parser


def _write(text: str, out: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.debug(f"wrote {len(text)} characters to {out}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_log_level("DEBUG")
    args.failed = False
    try:
        output = COMMANDS[args.command](args)
    except ValueError as exc:
        # GasketError is a ValueError
        sys.stderr.write(f"gasket {args.command}: {exc}\n")
        return EXIT_USAGE
    _write(output, args.out)
    return EXIT_PROPERTY_FAILURE if args.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
