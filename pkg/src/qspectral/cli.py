"""Command-line driver: ``qspectral <subcommand> ...``.

Exit codes: 0 on success, 1 on numerical failure or a failed ``verify``, 2 on
bad arguments or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import funcalc, io, perturb, schatten, spectrum, verify
from .errors import QSpectralError
from .quat import Quaternion, parse_unit


def _ranged(kind, low=None, high=None, inclusive=True, allow_inf=False):
    def parse(text):
        try:
            value = kind(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        if isinstance(value, float) and math.isinf(value) and allow_inf:
            return value
        if isinstance(value, float) and not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"{text!r} is not finite")
        if low is not None and (value < low or (not inclusive and value == low)):
            raise argparse.ArgumentTypeError(f"{text!r} out of range (must be {'>=' if inclusive else '>'} {low})")
        if high is not None and value > high:
            raise argparse.ArgumentTypeError(f"{text!r} out of range (must be <= {high})")
        return value

    return parse


def _quaternion(text: str) -> Quaternion:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected x0,x1,x2,x3")
    return Quaternion(*parts)


def _unit(text: str) -> Quaternion:
    try:
        return parse_unit(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _seed(args) -> int:
    env = os.environ.get("QSPECTRAL_SEED")
    if env is not None and env.strip():
        return int(env)
    return args.seed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qspectral", description="Quaternionic spectral theory toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="S-spectrum spheres with multiplicities")
    p.add_argument("matrix")
    p.add_argument("--out")

    p = sub.add_parser("resolvent", help="pseudo-resolvent or left/right S-resolvent")
    p.add_argument("matrix")
    p.add_argument("--s", type=_quaternion, required=True, help="x0,x1,x2,x3")
    p.add_argument("--side", choices=["left", "right", "pseudo"], default="left")
    p.add_argument("--out")

    p = sub.add_parser("funcalc", help="S-functional calculus of a power series")
    p.add_argument("matrix")
    p.add_argument("--series", required=True)
    p.add_argument("--slice", type=_unit, default="e1")
    p.add_argument("--radius", type=_ranged(float, 0.0, inclusive=False))
    p.add_argument("--center", type=_ranged(float), default=0.0)
    p.add_argument("--nodes", type=_ranged(int, 3), default=funcalc.DEFAULT_NODES)
    p.add_argument("--out")

    p = sub.add_parser("schatten", help="Schatten p-norm")
    p.add_argument("matrix")
    p.add_argument("--p", type=_ranged(float, 1.0, allow_inf=True), default=2.0)
    p.add_argument("--out")

    p = sub.add_parser("delta", help="regularised determinant delta_k")
    p.add_argument("matrix")
    p.add_argument("--k", type=_ranged(int, 1), default=2)
    p.add_argument("--slice", type=_unit, default="e1")
    p.add_argument("--out")

    p = sub.add_parser("perturb", help="perturbation experiments")
    psub = p.add_subparsers(dest="experiment", required=True)
    g = psub.add_parser("growth", help="resolvent growth along a probe segment")
    g.add_argument("--config", help="JSON file with any of the options below")
    g.add_argument("--arc", choices=sorted(perturb.ARCS), default=None)
    g.add_argument("--n", type=_ranged(int, 1), default=None)
    g.add_argument("--k", type=_ranged(int, 1), default=None)
    g.add_argument("--bnorm", type=_ranged(float, 0.0), default=None)
    g.add_argument("--index", type=_ranged(int, 0), default=None)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--threads", type=_ranged(int, 1), default=1)
    g.add_argument("--out")

    p = sub.add_parser("verify", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    return parser


GROWTH_DEFAULTS = {"arc": "halfcircle", "n": 8, "k": 2, "bnorm": 0.05, "index": 0, "seed": 7}


def _growth_config(args, parser) -> dict:
    cfg = dict(GROWTH_DEFAULTS)
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        unknown = set(loaded) - set(GROWTH_DEFAULTS)
        if unknown:
            parser.error(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in GROWTH_DEFAULTS:
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    env = os.environ.get("QSPECTRAL_SEED")
    if env is not None and env.strip():
        cfg["seed"] = int(env)
    if cfg["arc"] not in perturb.ARCS or int(cfg["n"]) < 1 or int(cfg["k"]) < 1 or float(cfg["bnorm"]) < 0:
        parser.error(f"invalid growth configuration: {cfg}")
    if not 0 <= int(cfg["index"]) < int(cfg["n"]):
        parser.error("index must select one of the n arc spheres")
    return cfg


def _run(args, parser) -> int:
    cmd = args.command
    if cmd == "spectrum":
        T = io.read_matrix(args.matrix)
        _emit(io.dumps({"spheres": spectrum.s_spectrum(T).to_list()}), args.out)
    elif cmd == "resolvent":
        T = io.read_matrix(args.matrix)
        if args.side == "pseudo":
            R = spectrum.pseudo_resolvent(T, args.s).value
        elif args.side == "left":
            R = spectrum.s_resolvent_left(T, args.s)
        else:
            R = spectrum.s_resolvent_right(T, args.s)
        _emit(io.dumps(R), args.out)
    elif cmd == "funcalc":
        T = io.read_matrix(args.matrix)
        f = io.read_series(args.series)
        radius = args.radius if args.radius is not None else 2.0 * T.norm() + 1.0
        contour = funcalc.SliceContour.circle(radius, args.center, args.slice, args.nodes)
        _emit(io.dumps(funcalc.functional_calculus(T, f, contour)), args.out)
    elif cmd == "schatten":
        T = io.read_matrix(args.matrix)
        _emit(io.dumps(schatten.schatten_norm(T, args.p)), args.out)
    elif cmd == "delta":
        T = io.read_matrix(args.matrix)
        z = schatten.delta_k_complex(T, args.k)
        _emit(io.dumps({"re": z.real, "im": z.imag, "unit": args.slice.to_list()[1:]}), args.out)
    elif cmd == "perturb":
        cfg = _growth_config(args, parser)
        report = perturb.run_growth(
            n=int(cfg["n"]),
            k=int(cfg["k"]),
            bnorm=float(cfg["bnorm"]),
            seed=int(cfg["seed"]),
            arc=cfg["arc"],
            index=int(cfg["index"]),
            threads=args.threads,
        )
        _emit(report.to_csv(), args.out)
        summary = {
            "fitted_K": report.fitted_K,
            "loglog_slope": report.loglog_slope,
            "fitted_exponent": report.fitted_exponent,
            "exponent_bound": report.exponent_bound - 0.5,
            "passed": report.passed,
        }
        sys.stderr.write(io.dumps(summary) + "\n")
        return 0 if report.passed else 1
    elif cmd == "verify":
        seed = _seed(args)
        for res in verify.run_all(seed):
            if not res.ok:
                print(f"FAIL {res.name} (value={res.value:.3e})")
                print(io.dumps(res.inputs))
                return 1
            print(f"ok   {res.name} (worst={res.value:.3e})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, parser)
    except QSpectralError as exc:
        sys.stderr.write(f"qspectral: {type(exc).__name__}: {exc}\n")
        return 1
    except np.linalg.LinAlgError as exc:
        sys.stderr.write(f"qspectral: numerical failure: {exc}\n")
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(f"qspectral: bad input: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
