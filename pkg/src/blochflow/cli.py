"""Command-line front end: census, invariants, windings, sweeps, dumps.

Exit codes: 0 success, 1 usage/validation error (message names the flag),
2 model or domain error (gapless model, degenerate field, ...).  Each
subcommand writes exactly the owning module's serialization, either to
stdout or to --out.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .chern import chern_direct, chern_json, chern_plaquette
from .errors import TopologyError
from .model import KPoint, ModelParams, write_surface_csv
from .sweep import SweepAxis, sweep_chern, sweep_euler, grid_to_csv, grid_to_json, write_grid
from .winding import LoopSpec, winding_hermitian, winding_json
from .zeromode import WeightMode, euler_characteristic, zero_modes_json


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_model_flags(sp):
    sp.add_argument("--R", type=float, default=3.0, help="torus major radius")
    sp.add_argument("--r", type=float, default=1.0, help="torus tube radius")
    sp.add_argument("--c", type=float, default=1.0, help="axis shift of the image surface")


def _add_out_flag(sp):
    sp.add_argument("--out", type=str, default=None, help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="blochflow",
        description="Topological invariants of the two-band quantum torus from its velocity field",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser(
        "zeros",
        help="zero-mode census with weights and the Euler characteristic",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_model_flags(sp)
    sp.add_argument("--seeds", type=int, default=64, help="Newton seed nodes per axis")
    sp.add_argument("--tol", type=float, default=1e-12, help="convergence tolerance on |v|")
    sp.add_argument(
        "--weight-mode",
        choices=["closed", "canonical"],
        default="closed",
        help="closed-zone fractional weights or one entry per canonical zero",
    )
    _add_out_flag(sp)

    sp = sub.add_parser(
        "chern",
        help="Chern number of the gapped model",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_model_flags(sp)
    sp.add_argument(
        "--method",
        choices=["plaquette", "direct"],
        default="plaquette",
        help="solid-angle plaquette sum or direct quadrature",
    )
    sp.add_argument(
        "--grid-n",
        type=int,
        default=None,
        help="grid nodes per axis (default 64 plaquette, 256 direct)",
    )
    _add_out_flag(sp)

    sp = sub.add_parser(
        "euler",
        help="Euler characteristic from the weighted zero-mode index sum",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_model_flags(sp)
    sp.add_argument("--seeds", type=int, default=64, help="Newton seed nodes per axis")
    sp.add_argument("--tol", type=float, default=1e-12, help="convergence tolerance on |v|")
    _add_out_flag(sp)

    sp = sub.add_parser(
        "winding",
        help="winding of the velocity field along a circular loop",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_model_flags(sp)
    sp.add_argument("--center", type=str, default="0,0", help="loop center as 'kx,ky'")
    sp.add_argument("--radius", type=float, default=0.3, help="loop radius in radians")
    sp.add_argument("--samples", type=int, default=256, help="initial loop samples (auto-densified)")
    _add_out_flag(sp)

    sp = sub.add_parser(
        "phase-diagram",
        help="sweep parameters and write a phase-diagram grid",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_model_flags(sp)
    sp.add_argument(
        "--axis",
        action="append",
        required=True,
        metavar="NAME:START:STOP:STEPS",
        help="sweep axis, e.g. c:0.2:5.8:57 (repeat for a 2-D sweep)",
    )
    sp.add_argument("--quantity", choices=["chern", "euler"], default="chern")
    sp.add_argument("--grid-n", type=int, default=64, help="plaquette grid for per-cell Chern numbers")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_out_flag(sp)

    sp = sub.add_parser(
        "field-dump",
        help="dump h and the velocity on a uniform grid as CSV",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_model_flags(sp)
    sp.add_argument("--grid-n", type=int, default=64, help="grid nodes per axis")
    _add_out_flag(sp)

    return parser


def _model_params(args) -> ModelParams:
    try:
        return ModelParams(args.R, args.r, args.c)
    except ValueError as e:
        raise _UsageError(f"--R/--r/--c: {e}") from e


class _UsageError(Exception):
    pass


def _parse_axis(text: str) -> SweepAxis:
    parts = text.split(":")
    if len(parts) != 4:
        raise _UsageError(f"--axis: expected NAME:START:STOP:STEPS, got {text!r}")
    name, start, stop, steps = parts
    try:
        return SweepAxis(name, float(start), float(stop), int(steps))
    except ValueError as e:
        raise _UsageError(f"--axis: {e}") from e


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_zeros(args) -> int:
    p = _model_params(args)
    if args.seeds < 2:
        raise _UsageError(f"--seeds: must be at least 2, got {args.seeds}")
    mode = WeightMode.CLOSED_BZ if args.weight_mode == "closed" else WeightMode.CANONICAL_CELL
    result = euler_characteristic(p, seeds_per_axis=args.seeds, tol=args.tol, weight_mode=mode)
    _emit(zero_modes_json(result.modes), args.out)
    sys.stdout.write(f"chi {result.chi}\n")
    return 0


def _cmd_chern(args) -> int:
    p = _model_params(args)
    if args.method == "plaquette":
        n = 64 if args.grid_n is None else args.grid_n
        if n < 16:
            raise _UsageError(f"--grid-n: plaquette method needs n >= 16, got {n}")
        res = chern_plaquette(p, n)
    else:
        n = 256 if args.grid_n is None else args.grid_n
        if n < 32:
            raise _UsageError(f"--grid-n: direct quadrature needs n >= 32, got {n}")
        res = chern_direct(p, n)
    _emit(chern_json(res), args.out)
    return 0


def _cmd_euler(args) -> int:
    p = _model_params(args)
    if args.seeds < 2:
        raise _UsageError(f"--seeds: must be at least 2, got {args.seeds}")
    result = euler_characteristic(p, seeds_per_axis=args.seeds, tol=args.tol)
    _emit(json.dumps({"chi": result.chi, "zero_modes": len(result.modes)}, indent=2), args.out)
    return 0


def _cmd_winding(args) -> int:
    p = _model_params(args)
    try:
        cx, cy = (float(v) for v in args.center.split(","))
    except ValueError as e:
        raise _UsageError(f"--center: expected 'kx,ky', got {args.center!r}") from e
    try:
        loop = LoopSpec.circle(KPoint(cx, cy), args.radius, args.samples)
    except ValueError as e:
        raise _UsageError(f"--radius/--samples: {e}") from e
    res = winding_hermitian(loop, p)
    _emit(winding_json(res), args.out)
    return 0


def _cmd_phase_diagram(args) -> int:
    p = _model_params(args)
    axes = [_parse_axis(text) for text in args.axis]
    if len(axes) > 2:
        raise _UsageError(f"--axis: at most 2 axes, got {len(axes)}")
    if args.grid_n < 16:
        raise _UsageError(f"--grid-n: needs n >= 16, got {args.grid_n}")
    try:
        if args.quantity == "chern":
            grid = sweep_chern(axes, p, n_grid=args.grid_n)
        else:
            grid = sweep_euler(axes, p)
    except ValueError as e:
        raise _UsageError(f"--axis: {e}") from e
    if args.out is None:
        text = grid_to_csv(grid) if args.format == "csv" else grid_to_json(grid)
        _emit(text, None)
    else:
        write_grid(grid, args.out, args.format)
    return 0


def _cmd_field_dump(args) -> int:
    p = _model_params(args)
    if args.grid_n < 2:
        raise _UsageError(f"--grid-n: must be at least 2, got {args.grid_n}")
    if args.out is None:
        write_surface_csv(p, args.grid_n, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_surface_csv(p, args.grid_n, fh)
    return 0


_HANDLERS = {
    "zeros": _cmd_zeros,
    "chern": _cmd_chern,
    "euler": _cmd_euler,
    "winding": _cmd_winding,
    "phase-diagram": _cmd_phase_diagram,
    "field-dump": _cmd_field_dump,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except _UsageError as e:
        sys.stderr.write(f"blochflow {args.command}: error: {e}\n")
        return 1
    except TopologyError as e:
        sys.stderr.write(f"blochflow {args.command}: {type(e).__name__}: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
