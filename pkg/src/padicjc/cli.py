"""Command-line entry point: ``padicjc <subcommand> [options]``.

Results go to standard output (or --output) as compact JSON, or CSV with
--format csv.  Domain errors exit with status 2 and a JSON error object;
usage errors exit with status 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .errors import PadicError, UnsupportedPrime
from .padic import PadicScalar, check_prime, parse_scalar

SCHEMA_VERSION = 1

MODULES = {
    "eval": "jaynes-cummings",
    "classify": "jaynes-cummings",
    "fiber": "jaynes-cummings",
    "image": "jaynes-cummings",
    "orbits": "quadratic",
    "spin": "spin",
    "normal-form": "normal-forms",
    "flow": "flows",
    "viz": "viz",
    "oracle": "oracle",
    "verify": "verification",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# argument helpers


def _scalar(args, text: str) -> PadicScalar:
    try:
        return parse_scalar(args.prime, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"expected a rational, got {text!r}") from exc


def _point(args, text: str):
    """Five coordinates separated by ';', or by ',' when no truncated scalar is present."""
    from .jc import PhasePoint

    parts = text.split(";") if (";" in text or ":" in text) else text.split(",")
    if len(parts) != 5:
        raise UsageError("--point needs five coordinates x,y,z,u,v (use ';' with truncated scalars)")
    return PhasePoint(*(_scalar(args, c) for c in parts))


def _s(x) -> str:
    return x.to_string() if isinstance(x, PadicScalar) else str(x)


# subcommands


def cmd_eval(args):
    from .jc import evaluate_F

    F = evaluate_F(_point(args, args.point))
    return {"j": _s(F.j), "h": _s(F.h)}


def cmd_classify(args):
    from .jc import classify_point, jacobian_rank

    q = _point(args, args.point)
    c = classify_point(q)
    out = {"variant": c.variant}
    if c.pole is not None:
        out["pole"] = c.pole
    if c.a is not None:
        out["a"] = _s(c.a)
    out["jacobianRank"] = jacobian_rank(q)
    return out


def _momentum(args):
    from .jc import MomentumValue

    return MomentumValue(_scalar(args, args.j), _scalar(args, args.h))


def cmd_fiber(args):
    from .jc import fiber_descriptor, predict_z_projection, sample_fiber, subfiber_type, v_set_membership

    jh = _momentum(args)
    out = fiber_descriptor(jh, args.precision).to_json()
    if args.z is not None:
        z = _scalar(args, args.z)
        mem = v_set_membership(jh, z, args.precision)
        entry = {
            "z": _s(z),
            "membership": mem.kind,
            "b": [_s(b) for b in mem.values],
            "predicted": predict_z_projection(jh, z),
        }
        if mem.nonempty:
            entry["subfiber"] = subfiber_type(jh, z, mem.b).value
            if args.samples and z != jh.j:
                pts = sample_fiber(jh, z, mem.b, args.samples, args.precision)
                entry["samples"] = [[_s(c) for c in q] for q in pts]
        out["z"] = entry
    return out


def cmd_image(args):
    from .jc import jc_image_test

    return jc_image_test(_momentum(args), args.precision).to_json()


def cmd_orbits(args):
    from .quadratic import orbit_count

    res = orbit_count(args.r, _scalar(args, args.k))
    out = {"count": res.count}
    if res.family is not None:
        out["family"] = "InfiniteFamily"
    if args.enumerate:
        from .oracle import CensusConfig, census_orbits

        cen = census_orbits(CensusConfig(args.prime, args.mod_exp, shard_count=args.shards), _rational(args.k), args.r)
        out["labels"] = [[args.r, a, b] for a, b in cen.labels]
    return out


def cmd_spin(args):
    from .spin import spin_fiber_classify, spin_image_contains

    zs = [_scalar(args, z) for z in args.z or []]
    if args.range:
        lo, hi = args.range
        zs += [PadicScalar(args.prime, z) for z in range(lo, hi + 1)]
    if not zs:
        raise UsageError("spin needs --z or --range")
    return [
        {"z": _s(z), "class": spin_fiber_classify(z).value, "inImage": spin_image_contains(z)} for z in zs
    ]


def cmd_normal_form(args):
    from . import normal_forms as nf

    if args.pole is not None:
        if args.lam is not None or args.mu is not None:
            if args.lam is None or args.mu is None:
                raise UsageError("--lam and --mu go together")
            return nf.nondegeneracy_charpoly(args.pole, _rational(args.lam), _rational(args.mu)).to_json()
        return nf.verify_rank0_normal_form(args.pole).to_json()
    if args.a is None:
        raise UsageError("normal-form needs --a or --pole")
    a = _rational(args.a)
    frame = nf.rank1_frame(a)
    if args.u is not None and args.v is not None:
        u, v = _scalar(args, args.u), _scalar(args, args.v)
    else:
        from .quadratic import solve_two_squares

        w = solve_two_squares(PadicScalar(args.prime, (1 - a**4) / (a * a)), args.precision)
        u, v = w.x, w.y
    report = nf.verify_rank1_identities(a, u, v)
    return {"frame": frame.to_json(), "u": _s(u), "v": _s(v), "report": report.to_json()}


def cmd_flow(args):
    from .flows import oscillator_flow_series, rotation_matrix

    if args.t is not None:
        M = rotation_matrix(_scalar(args, args.t), args.precision)
        return {"rotation": [[_s(M[i, j]) for j in range(2)] for i in range(2)]}
    xs, ys = oscillator_flow_series(_rational(args.x0), _rational(args.y0), args.degree)
    return {"x": xs.to_strings(), "y": ys.to_strings()}


def cmd_viz(args):
    from . import viz

    if args.prime not in viz.SUPPORTED:
        raise UnsupportedPrime(f"no picture defined for p={args.prime}", operation="viz", value=args.prime)
    if args.dataset == "critical-set":
        data, mapping = viz.critical_set_dataset(args.prime), "2d"
    elif args.dataset == "fiber":
        if args.j is None or args.h is None:
            raise UsageError("the fiber dataset needs --j and --h")
        data, mapping = viz.fiber_z_dataset(args.prime, _rational(args.j), _rational(args.h), args.mod_exp), "1d"
    else:
        data, mapping = viz.circle_sector_dataset(args.prime), "2d"
    return _Raw(viz.export_figure(data, args.mapping or mapping, args.depth, fmt=args.format))


def cmd_oracle(args):
    from . import oracle

    cfg = oracle.CensusConfig(args.prime, args.mod_exp, lift_filter=not args.no_lift_filter, shard_count=args.shards)
    if args.task == "squares":
        return oracle.census_squares(cfg).to_json()
    if args.task == "orbits":
        if args.k is None:
            raise UsageError("--task orbits needs --k")
        return oracle.census_orbits(cfg, _rational(args.k), args.r).to_json()
    if args.task == "spin":
        if args.z is None:
            raise UsageError("--task spin needs --z")
        return oracle.census_spin_fiber(cfg, _rational(args.z)).to_json()
    if args.j is None or args.h is None:
        raise UsageError("--task jc needs --j and --h")
    return oracle.census_jc(cfg, _rational(args.j), _rational(args.h)).to_json()


def cmd_verify(args):
    from .verification import run_all

    numbers = None
    if args.criteria:
        try:
            numbers = [int(x) for x in args.criteria.split(",")]
        except ValueError as exc:
            raise UsageError("--criteria takes comma-separated numbers") from exc
        if any(n < 1 or n > 12 for n in numbers):
            raise UsageError("criteria are numbered 1 to 12")
    results = run_all(numbers, seed=args.seed, quick=args.quick, report=lambda r: print(r.line(), file=sys.stderr))
    out = {"passed": all(r.passed for r in results), "quick": args.quick, "seed": args.seed,
           "results": [r.to_json() for r in results]}
    return _Verdict(out, 0 if out["passed"] else 3)


class _Raw(str):
    """Text already in its final format."""


class _Verdict:
    def __init__(self, payload, code):
        self.payload, self.code = payload, code


COMMANDS = {
    "eval": cmd_eval,
    "classify": cmd_classify,
    "fiber": cmd_fiber,
    "image": cmd_image,
    "orbits": cmd_orbits,
    "spin": cmd_spin,
    "normal-form": cmd_normal_form,
    "flow": cmd_flow,
    "viz": cmd_viz,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    def common(suppress: bool):
        # subcommands accept the global flags too, without overwriting values given earlier
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = _Parser(add_help=False)
        g.add_argument("--prime", type=int, default=dflt(None), help="the prime p")
        g.add_argument("--precision", type=int, default=dflt(None), help="digits of working precision (>= 8)")
        g.add_argument("--format", choices=("json", "csv"), default=dflt(None), help="json by default, csv for viz")
        g.add_argument("--output", default=dflt(None), help="write the result here instead of standard output")
        g.add_argument("--seed", type=int, default=dflt(0), help="seed for random sampling")
        g.add_argument("--shards", type=int, default=dflt(1), help="census shard count")
        return g

    parser = _Parser(prog="padicjc", description="Exact p-adic Jaynes-Cummings workbench.", parents=[common(False)])
    parser.add_argument("--version", action="version", version=f"padicjc {__version__} (schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common(True)])

    for name in ("eval", "classify"):
        sp = add(name, "evaluate F" if name == "eval" else "classify a phase-space point")
        sp.add_argument("--point", required=True, help="x,y,z,u,v (';' separated if any is truncated)")

    sp = add("fiber", "fiber descriptor of (j, h)")
    sp.add_argument("--j", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--z", default=None, help="also report the (z, b) data over this z")
    sp.add_argument("--samples", type=int, default=0, help="fiber points to sample over --z")

    sp = add("image", "is (j, h) in the image of F")
    sp.add_argument("--j", required=True)
    sp.add_argument("--h", required=True)

    sp = add("orbits", "number of order-r rotation orbits on x^2 + y^2 = k")
    sp.add_argument("--k", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--enumerate", action="store_true", help="also list orbit labels from the census")
    sp.add_argument("--mod-exp", type=int, default=6)

    sp = add("spin", "spin fiber classes over z values")
    sp.add_argument("--z", action="append", help="a z value (repeatable)")
    sp.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), help="all integers LO..HI")

    sp = add("normal-form", "normal-form frames and identity checks")
    sp.add_argument("--a", default=None, help="rank-1 parameter")
    sp.add_argument("--u", default=None)
    sp.add_argument("--v", default=None)
    sp.add_argument("--pole", type=int, choices=(1, -1), default=None)
    sp.add_argument("--lam", default=None, help="pencil coefficient of d^2J")
    sp.add_argument("--mu", default=None, help="pencil coefficient of d^2H")

    sp = add("flow", "oscillator flow series, or the rotation matrix at time t")
    sp.add_argument("--x0", default="1")
    sp.add_argument("--y0", default="0")
    sp.add_argument("--degree", type=int, default=12)
    sp.add_argument("--t", default=None, help="p-adic time for the rotation matrix")

    sp = add("viz", "export a figure dataset")
    sp.add_argument("--dataset", choices=("critical-set", "fiber", "circle-sectors"), required=True)
    sp.add_argument("--mapping", choices=("1d", "2d"), default=None)
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--j", default=None)
    sp.add_argument("--h", default=None)
    sp.add_argument("--mod-exp", type=int, default=6)

    sp = add("oracle", "brute-force census modulo p^m")
    sp.add_argument("--task", choices=("squares", "orbits", "spin", "jc"), required=True)
    sp.add_argument("--mod-exp", type=int, required=True)
    sp.add_argument("--k", default=None)
    sp.add_argument("--r", type=int, default=0)
    sp.add_argument("--z", default=None)
    sp.add_argument("--j", default=None)
    sp.add_argument("--h", default=None)
    sp.add_argument("--no-lift-filter", action="store_true")

    sp = add("verify", "run the acceptance suite")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    return parser


def _render(result, fmt: str) -> str:
    if isinstance(result, _Raw):
        return str(result)
    if fmt == "json":
        return json.dumps(result, separators=(",", ":")) + "\n"
    rows = result if isinstance(result, list) else [result]
    keys: List[str] = []
    for row in rows:
        keys += [k for k in row if k not in keys]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for row in rows:
        cells = []
        for k in keys:
            v = row.get(k, "")
            cells.append(v if isinstance(v, str) else json.dumps(v, separators=(",", ":")))
        w.writerow(cells)
    return buf.getvalue()


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _resolve(args):
    env = os.environ.get("PADICJC_PRECISION")
    if args.precision is None and env is not None:
        try:
            args.precision = int(env)
        except ValueError as exc:
            raise UsageError("PADICJC_PRECISION must be an integer") from exc
    if args.precision is None:
        args.precision = 32
    if args.precision < 8:
        raise UsageError("precision must be >= 8")
    os.environ["PADICJC_PRECISION"] = str(args.precision)
    if args.format is None:
        args.format = "csv" if args.command == "viz" else "json"
    if args.shards < 1:
        raise UsageError("--shards must be >= 1")
    if args.prime is None:
        if args.command not in ("verify",):
            raise UsageError("--prime is required")
    else:
        try:
            check_prime(args.prime)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        _resolve(args)
        result = COMMANDS[args.command](args)
        code = 0
        if isinstance(result, _Verdict):
            result, code = result.payload, result.code
        _emit(_render(result, args.format), args.output)
        return code
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except PadicError as exc:
        command = getattr(args, "command", None)
        err = {
            "error": type(exc).__name__,
            "module": MODULES.get(command, "cli"),
            "operation": exc.operation or command,
            "input": None if exc.value is None else _s(exc.value) if isinstance(exc.value, PadicScalar) else str(exc.value),
            "message": str(exc),
        }
        sys.stdout.write(json.dumps(err, separators=(",", ":")) + "\n")
        return 2
    except ValueError as exc:
        print(f"padicjc: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"padicjc: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
