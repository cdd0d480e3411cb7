"""Command-line entry point: render, potential, roots and verify."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import verify as checks
from .bottcher import direct_limit_h, make_context, potential_h
from .cplx import format_complex, parse_complex, parse_point
from .errors import SecantError
from .kernels import BACKEND_ENV, WORKERS_ENV, available_backends
from .mero import certify_root, find_roots, parse_function
from .render import SLICE_KINDS, RenderConfig, SliceSpec, compute_field, draw, resolve_roots
from .dynamics import PlanePoint


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _point_arg(text):
    try:
        return parse_point(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    p = _Parser(prog="secantpot", description="Secant-method dynamics on C^2 and its potential.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    r = sub.add_parser("render", help="render a basin/potential image")
    r.add_argument("--config", help="JSON render config")
    r.add_argument("--fn", help="function of z (inline mode)")
    r.add_argument("--slice", choices=SLICE_KINDS, default="Diagonal")
    r.add_argument("--window", type=float, nargs=4, metavar=("RE0", "RE1", "IM0", "IM1"))
    r.add_argument("--resolution", type=int, nargs=2, metavar=("W", "H"), default=(400, 400))
    r.add_argument("--base", type=_point_arg, help="ComplexLine base point x,y")
    r.add_argument("--direction", type=_point_arg, help="ComplexLine direction x,y")
    r.add_argument("--budget", type=int)
    r.add_argument("--out", help="output path")
    r.add_argument("--format", choices=("PPM", "PNG"))
    r.add_argument("--workers", type=int, help=f"worker threads (default ${WORKERS_ENV} or CPU count)")
    r.add_argument("--backend", choices=("cython", "python"), help=f"kernel backend (default ${BACKEND_ENV})")

    q = sub.add_parser("potential", help="potential and modulus at one point")
    q.add_argument("--fn", required=True)
    q.add_argument("--root", required=True, type=_complex_arg, help="root guess a+bi")
    q.add_argument("--point", required=True, type=_point_arg, help="point x,y as a+bi,c+di")
    q.add_argument("--json", action="store_true")

    t = sub.add_parser("roots", help="certified simple roots")
    t.add_argument("--fn", required=True)
    t.add_argument("--window", type=float, nargs=4, metavar=("RE0", "RE1", "IM0", "IM1"))

    v = sub.add_parser("verify", help="run the invariant suite at one root")
    v.add_argument("--fn", required=True)
    v.add_argument("--root", required=True, type=_complex_arg)
    v.add_argument("--seed", type=int, default=checks.DEFAULT_SEED)
    v.add_argument("--count-scale", type=float, default=1.0, help="multiply every sample count")
    v.add_argument("--json", action="store_true")
    return p


def _ordered_roots(f, guess):
    """The certified root first, then the remaining roots of ``f``."""
    root = certify_root(f, guess)
    others = [r for r in find_roots(f) if abs(r.z0 - root.z0) > 1e-8 * max(1.0, abs(root.z0))]
    return [root] + others


def _render_config(args):
    if args.config:
        cfg = RenderConfig.from_json(args.config)
        data = cfg.to_dict()
        if args.out:
            data["out_path"] = args.out
        if args.format:
            data["format"] = args.format
        if args.budget:
            data["budget"] = args.budget
        return RenderConfig.from_dict(data)
    if not args.fn or not args.window:
        raise UsageError("render needs --config, or --fn with --window")
    base = PlanePoint(*args.base) if args.base else None
    direction = PlanePoint(*args.direction) if args.direction else None
    fmt = args.format or "PPM"
    kwargs = {}
    if args.budget:
        kwargs["budget"] = args.budget
    return RenderConfig(
        args.fn,
        SliceSpec(args.slice, tuple(args.window), base, direction),
        tuple(args.resolution),
        out_path=args.out or ("render.png" if fmt == "PNG" else "render.ppm"),
        format=fmt,
        **kwargs,
    )


def cmd_render(args, out):
    try:
        config = _render_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.backend and args.backend not in available_backends():
        raise UsageError(f"backend {args.backend!r} is not available")
    t0 = time.perf_counter()
    f = parse_function(config.function)
    roots = resolve_roots(f, config)
    grid = compute_field(f, roots, config, workers=args.workers, backend=args.backend)
    t1 = time.perf_counter()
    path = draw(grid, config)
    t2 = time.perf_counter()
    basins = sorted(int(b) for b in set(grid.basin.ravel().tolist()) if b >= 0)
    print(f"wrote {path} ({config.resolution[0]}x{config.resolution[1]})", file=out)
    print(f"basins: {basins}", file=out)
    print(f"compute {t1 - t0:.3f} s, draw {t2 - t1:.3f} s", file=out)
    return 0


def cmd_potential(args, out):
    f = parse_function(args.fn)
    roots = _ordered_roots(f, args.root)
    ctx = make_context(f, roots[0])
    sample = potential_h(ctx, f, roots, args.point)
    try:
        direct = direct_limit_h(f, roots, args.point)
    except SecantError as exc:
        direct = None
        direct_note = type(exc).__name__
    else:
        direct_note = None
    record = {
        "root": format_complex(roots[0].z0),
        "point": [format_complex(args.point[0]), format_complex(args.point[1])],
        "basin": sample.basin,
        "h": sample.h,
        "hhat": sample.hhat,
        "N": sample.n_used,
        "direct_limit_h": direct,
    }
    if direct is not None:
        record["direct_rel_diff"] = abs(direct - sample.h) / sample.h if sample.h else abs(direct)
    if direct_note:
        record["direct_limit_error"] = direct_note
    if args.json:
        print(json.dumps(record), file=out)
    else:
        for key, value in record.items():
            print(f"{key}: {value}", file=out)
    return 0


def cmd_roots(args, out):
    f = parse_function(args.fn)
    window = tuple(args.window) if args.window else None
    for k, r in enumerate(find_roots(f, window)):
        flag = "  exceptional" if r.exceptional else ""
        print(f"{k}: {format_complex(r.z0)}  f'={format_complex(r.d1)}{flag}", file=out)
    return 0


def cmd_verify(args, out):
    f = parse_function(args.fn)
    roots = _ordered_roots(f, args.root)
    results = checks.run_suite(f, roots, 0, seed=args.seed, scale=args.count_scale)
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"root": format_complex(roots[0].z0), "seed": args.seed, "passed": ok,
                          "checks": [r.as_dict() for r in results]}), file=out)
    else:
        print(f"function {f.text}  root {format_complex(roots[0].z0)}  seed {args.seed}", file=out)
        for r in results:
            print(r.line(), file=out)
        print("all checks passed" if ok else f"{sum(not r.passed for r in results)} check(s) failed", file=out)
    return 0 if ok else 1


COMMANDS = {"render": cmd_render, "potential": cmd_potential, "roots": cmd_roots, "verify": cmd_verify}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        text = str(exc)
        if "usage:" not in text:
            text = f"{parser.format_usage()}secantpot: error: {text}"
        print(text, file=err)
        return 2
    except (SecantError, ValueError, OSError) as exc:
        where = f" at offset {exc.position}" if hasattr(exc, "position") else ""
        print(f"secantpot: {type(exc).__name__}{where}: {exc}", file=err)
        print(parser.format_usage(), file=err, end="")
        return 2


if __name__ == "__main__":
    sys.exit(main())
