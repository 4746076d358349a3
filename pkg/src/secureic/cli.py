"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 usage or parse error,
3 securely infeasible instance, 4 golden-table mismatch.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import analysis
from .inner_bounds import (CompositeSystemSpec, InvalidConfiguration, apply_zero_forcing,
                           build_composite_system, default_configs, inner_bound, parse_config)
from .model import (MAX_ENUMERATE_N, ParseError, enumerate_instances, is_securely_feasible,
                    parse_instance, side_info_classes)
from .outer_bounds import BOUNDS, check_gh_equivalence, outer_region, region_json
from .polyhedra import fraction_str

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_GOLDEN = 0, 1, 2, 3, 4

_BOUND_ALIASES = {"secure": "secure-g", "nonsecure": "nonsecure-g", "h": "h"}


class UsageError(Exception):
    pass


def _emit(obj, fmt: str, text: str):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _info(msg: str):
    print(msg, file=sys.stderr, flush=True)


def _problem(text: str):
    try:
        return parse_instance(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse problem: {exc}") from exc


def _configs(p, texts):
    try:
        configs = tuple(parse_config(t, p.n) for t in texts) if texts else ()
        for D in configs:
            D.validate(p)
        return configs
    except InvalidConfiguration as exc:
        raise UsageError(str(exc)) from exc


def cmd_enumerate(args) -> int:
    if not 2 <= args.n <= MAX_ENUMERATE_N:
        raise UsageError(f"n must be between 2 and {MAX_ENUMERATE_N}")
    insts = enumerate_instances(args.n, feasible_only=args.feasible,
                                reduce_eavesdropper=args.relabel_eavesdropper)
    rendered = [p.render() for p in insts]
    _emit(rendered, args.format, "\n".join(rendered))
    return EXIT_OK


def cmd_outer(args) -> int:
    p = _problem(args.problem)
    bound = _BOUND_ALIASES[args.bound]
    if bound == "secure-g" and not is_securely_feasible(p):
        _info(f"{p.render()} is not securely feasible")
        return EXIT_INFEASIBLE
    region = outer_region(p, bound)
    _emit(region_json(p, bound, region), args.format, region.pretty())
    return EXIT_OK


def cmd_inner(args) -> int:
    p = _problem(args.problem)
    secure = not args.nonsecure
    if secure and not is_securely_feasible(p):
        _info(f"{p.render()} is not securely feasible")
        return EXIT_INFEASIBLE
    configs = _configs(p, args.config) or tuple(default_configs(p))
    spec = CompositeSystemSpec(p, configs, secure=secure, key=args.key == "on")
    res = inner_bound(spec)
    forced = []
    if secure and not spec.key:
        _, forced = apply_zero_forcing(build_composite_system(spec))
    lines = [f"configs: {' | '.join(D.render() for D in configs)}"]
    if forced:
        lines.append("zero-forced: " + ", ".join(forced))
    out = {
        "problem": p.render(),
        "configs": [D.render() for D in configs],
        "secure": secure,
        "key": spec.key,
        "zero_forced": forced,
        "region": region_json(p, "inner", res.region),
    }
    if res.conflict is not None:
        c = res.conflict
        out["conflict"] = {
            "conflict": c.conflict,
            "certificate": c.certificate_kind,
            "witness": [w.pretty(res.system.space) for w in c.witness],
            "opposing_pairs": [[a.pretty(res.system.space), b.pretty(res.system.space)]
                               for a, b in c.opposing_pairs],
        }
        lines.append(f"conflict: {'yes' if c.conflict else 'no'}")
        for a, b in c.opposing_pairs:
            lines.append(f"  {a.pretty(res.system.space)}   vs   {b.pretty(res.system.space)}")
    lines.append("region: " + res.region.pretty())
    _emit(out, args.format, "\n".join(lines))
    return EXIT_OK


def _policy(p, args):
    configs = _configs(p, args.config) if p is not None else ()
    if configs:
        return analysis.ConfigPolicy("fixed", configs)
    return analysis.ConfigPolicy(args.policy)


def cmd_capacity(args) -> int:
    if args.sweep is None and args.problem is None:
        raise UsageError("give a problem or --sweep n")
    if args.sweep is not None:
        if args.sweep not in analysis.SWEEP_RANGE:
            raise UsageError(f"--sweep supports n in {analysis.SWEEP_RANGE}")
        if args.config:
            raise UsageError("--config applies to a single problem")
        return _capacity_sweep(args)
    if args.table:
        raise UsageError("--table needs --sweep 3")
    p = _problem(args.problem)
    rep = analysis.certify_capacity(p, _policy(p, args), key=args.key, project=args.project)
    if rep.status == analysis.INFEASIBLE:
        _emit(rep.to_json(), args.format, rep.summary())
        return EXIT_INFEASIBLE
    text = [rep.summary(), "outer: " + rep.outer.pretty()]
    if rep.capacity is not None:
        text.append("capacity: " + rep.capacity.pretty())
    text += [f"note: {n}" for n in rep.notes]
    _emit(rep.to_json(), args.format, "\n".join(text))
    return EXIT_OK


def _capacity_sweep(args) -> int:
    n = args.sweep
    started = time.time()
    count = [0]

    def progress(rep):
        count[0] += 1
        if args.verbose:
            _info(f"[{count[0]}] {rep.summary()}")

    summary = analysis.classify_sweep(n, analysis.ConfigPolicy(args.policy), key=args.key,
                                      project=args.project, progress=progress)
    out = {"summary": summary.counts(), "unmatched": summary.unmatched_instances,
           "seconds": round(time.time() - started, 1)}
    text = [", ".join(f"{k}: {v}" for k, v in summary.counts().items())]
    code = EXIT_OK
    if args.table:
        if n != 3:
            raise UsageError("--table is only defined for --sweep 3")
        rows = analysis.reproduce_table1()
        good = sum(r.match for r in rows)
        covered = analysis.golden_covers_enumeration()
        out["table"] = {
            "rows": len(rows),
            "matched": good,
            "covers_enumeration": covered,
            "mismatches": [{"problem": r.problem.render(), "computed": r.region.pretty(),
                            "golden": r.golden.pretty(),
                            "witness": r.witness.describe(r.region.space) if r.witness else None}
                           for r in rows if not r.match],
        }
        text.append(f"{good}/{len(rows)} rows match")
        for r in rows:
            if not r.match:
                text.append(f"  MISMATCH {r.problem.render()}: computed {r.region.pretty()} "
                            f"vs golden {r.golden.pretty()}")
        if not covered:
            text.append("golden rows do not cover the enumeration")
        if good != len(rows) or not covered:
            code = EXIT_GOLDEN
    if args.verbose:
        out["reports"] = [r.to_json() for r in summary.reports]
    _emit(out, args.format, "\n".join(text))
    return code


def cmd_verify_code(args) -> int:
    p = _problem(args.problem)
    try:
        lengths = [int(x) for x in args.lengths.split(",")]
        code = analysis.LinearCode.from_expressions(lengths, args.output)
        rep = analysis.verify_linear_code(p, code)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = [
        "rates: (" + ", ".join(fraction_str(r) for r in rep.rates) + ")",
        "decoding: " + ", ".join(f"{i}:{'ok' if ok else 'FAIL'}" for i, ok in rep.decodes.items()),
        "leakage (bits): " + (", ".join(f"{i}:{fraction_str(v)}" for i, v in rep.leakage.items()) or "-"),
        f"decodable: {rep.decodable}, secure: {rep.secure}",
    ]
    out = rep.to_json()
    out["problem"] = p.render()
    _emit(out, args.format, "\n".join(text))
    return EXIT_OK


def cmd_gh_check(args) -> int:
    if args.sweep is None and args.problem is None:
        raise UsageError("give a problem or --sweep n")
    if args.problem is not None:
        insts = [_problem(args.problem)]
    else:
        if not 2 <= args.sweep <= 4:
            raise UsageError("--sweep supports n in 2..4")
        insts = side_info_classes(args.sweep)
        if args.sample is not None and args.sample < len(insts):
            insts = sorted(random.Random(args.seed).sample(insts, args.sample), key=lambda q: q.render())
    results = []
    for p in insts:
        res = check_gh_equivalence(p)
        results.append((p, res))
        if args.verbose:
            _info(f"{p.without_eavesdropper().render()}: {'equal' if res.equal else 'DIFFERENT'}")
    bad = [(p, r) for p, r in results if not r.equal]
    out = {
        "checked": len(results),
        "equal": len(results) - len(bad),
        "mismatches": [{"problem": p.render(), "g": r.g_region.pretty(), "h": r.h_region.pretty(),
                        "witness": r.witness.describe(r.g_region.space) if r.witness else None}
                       for p, r in bad],
    }
    text = [f"{out['equal']}/{out['checked']} instances have equal g- and h-regions"]
    if len(results) == 1:
        text.append("region: " + results[0][1].g_region.pretty())
    text += [f"  DIFFERENT {m['problem']}: {m['witness']}" for m in out["mismatches"]]
    _emit(out, args.format, "\n".join(text))
    return EXIT_OK if not bad else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secureic",
                                     description="Exact bounds on secure index coding capacity regions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("enumerate", help="list problem instances on n messages")
    p.add_argument("n", type=int)
    p.add_argument("--feasible", action="store_true", help="only securely feasible instances")
    p.add_argument("--relabel-eavesdropper", action="store_true",
                   help="identify instances that differ by relabeling, eavesdropper included")
    fmt(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("outer", help="polymatroidal outer bound")
    p.add_argument("problem")
    p.add_argument("--bound", choices=sorted(_BOUND_ALIASES), default="secure")
    fmt(p)
    p.set_defaults(func=cmd_outer)

    p = sub.add_parser("inner", help="composite coding inner bound")
    p.add_argument("problem")
    p.add_argument("--config", action="append", help='decoding configuration, e.g. "1:1;2:1,2;3:1,3"')
    p.add_argument("--key", choices=("on", "off"), default="off")
    p.add_argument("--nonsecure", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_inner)

    p = sub.add_parser("capacity", help="certify capacity by matching inner and outer bounds")
    p.add_argument("problem", nargs="?")
    p.add_argument("--sweep", type=int, metavar="N")
    p.add_argument("--table", action="store_true", help="with --sweep 3: compare with the golden table")
    p.add_argument("--config", action="append")
    p.add_argument("--policy", choices=("full", "search"), default="search")
    p.add_argument("--key", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--project", action=argparse.BooleanOptionalAction, default=None,
                   help="also project the matching inner region (default: n <= 3)")
    p.add_argument("-v", "--verbose", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("verify-code", help="exhaustively verify a binary linear code")
    p.add_argument("problem")
    p.add_argument("--lengths", required=True, help="message lengths t_i, e.g. 1,1,1")
    p.add_argument("--output", action="append", required=True,
                   help='one output bit as an XOR of message bits, e.g. "x2+x3"')
    fmt(p)
    p.set_defaults(func=cmd_verify_code)

    p = sub.add_parser("gh-check", help="compare the g- and h-forms of the non-secure outer bound")
    p.add_argument("problem", nargs="?")
    p.add_argument("--sweep", type=int, metavar="N")
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-v", "--verbose", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_gh_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
