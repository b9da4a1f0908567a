"""``mvlsync`` command line: analyze, pin, simulate, masb, sast."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .dsl import parse_network
from .dynamics import attractors
from .errors import (DimensionError, ExpressionError, InfeasibleError, NotSynchronousError,
                     ParseError, SynthesisError)
from .examples import NAMES, example_source
from .network import AugmentedSystem, augmented_from_network, encode_scalars, simulate
from .pinning import POLICIES, synthesize_pinning, verify_plan
from .sync import SyncSpec, check_global_sync, masb, sast_report, sync_state_set

log = logging.getLogger("mvlsync")

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(Exception):
    """Bad command-line input (exit code 2)."""


def _read_source(path: str) -> str:
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    stem = p.name[:-5] if p.name.endswith(".mvln") else p.name
    if stem in NAMES and not p.parent.parts:
        return example_source(stem)
    raise InputError(f"cannot read {path!r}")


def load_system(path: str) -> AugmentedSystem:
    return augmented_from_network(parse_network(_read_source(path)))


def _frac(v) -> str:
    return str(Fraction(v))


class _Context:
    """Analysis pieces shared across commands, computed once."""

    def __init__(self, sysm: AugmentedSystem, gamma: int):
        self.sys = sysm
        self.spec = SyncSpec(sysm.k, sysm.n, gamma)
        self.lam = sync_state_set(self.spec)
        self.report = attractors(sysm)
        self.global_sync = check_global_sync(sysm, self.lam, self.report)
        self.basin = masb(sysm, self.lam, self.report)


def _attractor_dict(rep) -> dict:
    return {"cycles": rep.cycles, "fixed_points": rep.fixed_points, "tau": rep.tau, "lambda": rep.lam}


def _analysis(ctx: _Context, full_basin: bool) -> dict:
    out = {
        "k": ctx.sys.k,
        "n": ctx.sys.n,
        "gamma": ctx.spec.gamma,
        "lambda_set_size": len(ctx.lam),
        "attractors": _attractor_dict(ctx.report),
        "global_sync": ctx.global_sync,
        "masb": _basin_dict(ctx, full_basin),
    }
    out["sast"] = _sast_dict(ctx)
    return out


def _basin_dict(ctx: _Context, full: bool) -> dict:
    b = ctx.basin
    d = {"size": len(b), "empty": len(b) == 0, "is_full_space": len(b) == ctx.sys.size}
    if full:
        d["members"] = b.tolist()
    return d


def _sast_dict(ctx: _Context) -> dict:
    d = {"global": None, "masb": None}
    if len(ctx.basin):
        r = sast_report(ctx.sys, ctx.basin, ctx.lam, ctx.report)
        d["masb"] = r.gamma
        d["masb_transient_bound"] = r.tau_phi
    if ctx.global_sync:
        d["global"] = d["masb"]
    return d


def _plan_dict(plan, check) -> dict:
    return {
        "needed": True,
        "pinned": plan.pinned,
        "p1": plan.p1,
        "p2": plan.p2,
        "redirects": [{"state": s, "target": t} for s, t in plan.redirects],
        "nodes": {str(i): {"K": plan.K[i].compact(), "M": plan.M[i].compact()} for i in plan.pinned},
        "global_sync": check.global_sync,
        "sast": check.gamma,
        "tau": check.tau_bar,
    }


def _emit_json(obj, dest):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def cmd_analyze(args) -> int:
    ctx = _Context(load_system(args.file), args.gamma)
    _emit_json(_analysis(ctx, args.full_basin), args.json)
    return EXIT_OK


def cmd_masb(args) -> int:
    ctx = _Context(load_system(args.file), args.gamma)
    out = {"k": ctx.sys.k, "n": ctx.sys.n, "gamma": ctx.spec.gamma, "masb": _basin_dict(ctx, args.full_basin)}
    _emit_json(out, args.json)
    return EXIT_OK


def cmd_sast(args) -> int:
    ctx = _Context(load_system(args.file), args.gamma)
    if args.xi:
        phi, label = args.xi, "states"
    elif ctx.global_sync:
        phi, label = np.ones(ctx.sys.size, dtype=bool), "global"
    else:
        phi, label = ctx.basin, "masb"
    try:
        r = sast_report(ctx.sys, phi, ctx.lam, ctx.report)
    except DimensionError as exc:
        raise InputError(str(exc)) from exc
    out = {"k": ctx.sys.k, "n": ctx.sys.n, "gamma": ctx.spec.gamma, "basin": label,
           "sast": r.gamma, "transient_bound": r.tau_phi, "synced_at_start": r.synced_at_start}
    if args.xi:
        out["states"] = args.xi
    _emit_json(out, args.json)
    return EXIT_OK


def cmd_pin(args) -> int:
    ctx = _Context(load_system(args.file), args.gamma)
    out = _analysis(ctx, args.full_basin)
    if ctx.global_sync:
        out["pinning"] = {"needed": False, "message": "no pinning needed"}
        print("no pinning needed", file=sys.stderr)
    else:
        plan = synthesize_pinning(ctx.sys, args.gamma, args.policy, args.seed)
        out["pinning"] = _plan_dict(plan, verify_plan(plan, ctx.lam))
        out["pinning"]["policy"] = args.policy
        if args.policy == "seeded":
            out["pinning"]["seed"] = args.seed
    _emit_json(out, args.json)
    return EXIT_OK


def _parse_tuple(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad scalar tuple {text!r}") from exc


def cmd_simulate(args) -> int:
    sysm = load_system(args.file)
    if args.xi is not None and (args.x0 or args.z0):
        raise InputError("use either --xi or --x0/--z0")
    if args.xi is not None:
        if len(args.xi) != 1:
            raise InputError("simulate takes a single --xi")
        start = args.xi[0]
    elif args.x0 and args.z0:
        start = encode_scalars(_parse_tuple(args.x0), _parse_tuple(args.z0), sysm.k).delta_index
    else:
        raise InputError("an initial state is required: --xi or --x0 and --z0")
    if args.pinned:
        ctx = _Context(sysm, args.gamma)
        if not ctx.global_sync:
            plan = synthesize_pinning(sysm, args.gamma, args.policy, args.seed)
            sysm = sysm.with_matrix(plan.L_bar)
    path = simulate(sysm, start, args.steps)
    n = sysm.n
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "delta"] + [f"x{i}" for i in range(1, n + 1)] + [f"z{i}" for i in range(1, n + 1)]
               + [f"e{i}" for i in range(1, n + 1)])
    for t, st in enumerate(path):
        w.writerow([t, st.delta_index] + [_frac(v) for v in st.scalars] + [_frac(v) for v in st.errors])
    if args.csv in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_OK


def _common(p: argparse.ArgumentParser):
    p.add_argument("--gamma", type=int, default=1, help="level tolerance (0 = complete synchronization)")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here (default stdout)")
    p.add_argument("--csv", metavar="PATH", help="write the CSV trajectory here (default stdout)")
    p.add_argument("--policy", choices=POLICIES, default="lowest-index")
    p.add_argument("--seed", type=int, default=0, help="seed for --policy seeded")
    p.add_argument("--full-basin", action="store_true", help="list every basin member")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvlsync", description=__doc__)
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "analyze": (cmd_analyze, "attractors, synchronous set, basin and synchronization time"),
        "pin": (cmd_pin, "synthesize pinning feedback for global synchronization"),
        "simulate": (cmd_simulate, "CSV trajectory from an initial state"),
        "masb": (cmd_masb, "maximum synchronization basin"),
        "sast": (cmd_sast, "shortest synchronization time"),
    }
    for name, (fn, help_) in specs.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("file", help="network source file (or a bundled example name)")
        _common(p)
        if name in ("simulate", "sast"):
            p.add_argument("--xi", type=int, action="append", help="initial δ-index (1-based)")
        if name == "simulate":
            p.add_argument("--x0", help="X scalars, e.g. 1/4,1,1")
            p.add_argument("--z0", help="Z scalars")
            p.add_argument("--steps", type=int, default=10)
            p.add_argument("--pinned", action="store_true", help="simulate the pinned closed loop")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    log.info("kernel backend: %s", kernels.get_backend())
    try:
        if getattr(args, "steps", 0) < 0:
            raise InputError("--steps must be nonnegative")
        return args.func(args)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ExpressionError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InfeasibleError, NotSynchronousError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (SynthesisError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
