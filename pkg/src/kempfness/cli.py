"""Command line entry point.

Exit codes: 0 success, 1 a scenario assertion failed, 2 bad input.
"""

import argparse
import json
import sys

import numpy as np

from . import jsonio
from .atlas import SCENARIOS, SurveyConfig, run_example, run_survey
from .invariants import DOMAINS, d4_invariant_set, evaluate_all, null_cone_test, pullback_via_spin
from .kempf_ness import FlowConfig, minimize_norm, moment_components
from .rep_model import REGISTRY_LABELS, get_rep
from .stabilizer import extended_stabilizer_lie, stabilizer_lie


class InputError(Exception):
    pass


def _load_vector(path, dim=None):
    try:
        arr = jsonio.load_array(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if dim is not None and arr.size != dim:
        raise InputError(f"{path}: expected {dim} entries, got {arr.size}")
    return arr


def _rep(label):
    try:
        return get_rep(label)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc


def _emit(obj, out=None):
    text = jsonio.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_flow(args):
    rep = _rep(args.rep)
    v = _load_vector(args.input, rep.dim_v).reshape(-1)
    cfg = FlowConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = FlowConfig.from_dict(json.load(fh))
        except (OSError, ValueError, TypeError) as exc:
            raise InputError(f"bad flow config: {exc}") from exc
    if not np.any(v):
        raise InputError("flow needs a nonzero input vector")
    res = minimize_norm(rep, v, cfg)
    _emit({"rep": rep.label, "config": cfg.to_dict(), **res.to_dict()}, args.out)
    return 0


def cmd_stabilizer(args):
    rep = _rep(args.rep)
    v = _load_vector(args.input, rep.dim_v).reshape(-1)
    mv = moment_components(rep, v)
    report = {
        "rep": rep.label,
        "moment_norm": mv.norm,
        "norm_sq": mv.norm_sq_v,
        "stabilizer": stabilizer_lie(rep, v).to_dict(),
    }
    if not rep.label.endswith("+scalars") and np.any(v):
        report["extended_stabilizer"] = extended_stabilizer_lie(rep, v).to_dict()
    _emit(report)
    return 0


def cmd_invariants(args):
    inv = d4_invariant_set()
    if args.domain == "sl2x4":
        inv = pullback_via_spin(inv)
    x = _load_vector(args.input, 16)
    if args.domain == "sl2x4":
        x = x.reshape(-1)
    try:
        values, scales = evaluate_all(inv, x)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({
        "domain": inv.domain_label,
        "invariants": [
            {"name": it.name, "degree": it.degree, "value": complex(val), "scale": float(sc)}
            for it, val, sc in zip(inv.items, values, scales)
        ],
        "null_cone": null_cone_test(inv, x),
    })
    return 0


def cmd_survey(args):
    try:
        cfg = SurveyConfig(args.rep, args.n, args.seed, with_invariants=args.invariants)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc.args[0]) if exc.args else str(exc)) from exc
    _emit(run_survey(cfg).to_dict(), args.out)
    return 0


def cmd_example(args):
    report = run_example(args.name)
    _emit(report.to_dict())
    return 0 if report.passed else 1


def build_parser():
    p = argparse.ArgumentParser(prog="kempfness", description="Kempf-Ness orbit toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("flow", help="minimize the norm along a group orbit")
    f.add_argument("--rep", required=True, help=f"one of {', '.join(REGISTRY_LABELS)}")
    f.add_argument("--input", required=True)
    f.add_argument("--config")
    f.add_argument("--out")
    f.set_defaults(func=cmd_flow)

    s = sub.add_parser("stabilizer", help="stabilizer Lie algebra of a vector")
    s.add_argument("--rep", required=True)
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_stabilizer)

    i = sub.add_parser("invariants", help="evaluate the degree 2, 4, 4, 6 invariants")
    i.add_argument("--domain", required=True, choices=DOMAINS)
    i.add_argument("--input", required=True)
    i.set_defaults(func=cmd_invariants)

    v = sub.add_parser("survey", help="random orbit survey")
    v.add_argument("--rep", required=True)
    v.add_argument("-n", type=int, required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--invariants", action="store_true")
    v.add_argument("--out")
    v.set_defaults(func=cmd_survey)

    e = sub.add_parser("example", help="run a built-in scenario")
    e.add_argument("name", choices=sorted(SCENARIOS))
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
