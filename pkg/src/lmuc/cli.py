"""Command-line front end. All JSON reports are byte-deterministic for
identical inputs and caps; text output is tab-delimited and for humans.

Exit codes: 0 success / verdict true, 1 verdict false, 2 usage or data error.
The env var LMUC_SEED is reserved and unused: searches are exhaustive and
deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import fixtures, report as report_mod
from .channel import (
    code_rate_point,
    is_unambiguous,
    decode as channel_decode,
    lmuc_from_json,
    mcode_from_json,
    simulate,
)
from .gf import EnumerationBoundError, canonical_field
from .netgraph import (
    compile_network,
    network_from_json,
    network_to_json,
    realize,
    validate_network,
)
from .region import (
    SearchLimitError,
    SharedPoint,
    benchmark_lmuc,
    char_experiment,
    outer_bound,
    search_region,
    time_share_closure,
    DEFAULT_CAP_PART,
    DEFAULT_CAP_TOTAL,
)


def _read_json(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SystemExit2(f"{path}: malformed JSON at line {e.lineno} col {e.colno}: {e.msg}")
    except OSError as e:
        raise SystemExit2(f"{path}: {e.strerror}")


class SystemExit2(Exception):
    """Usage or data error; mapped to exit code 2."""


def _emit(obj: dict | str, out: str | None) -> None:
    if isinstance(obj, dict):
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        text = obj
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    net, _, _ = network_from_json(_read_json(args.network))
    rep = validate_network(net)
    payload = {"ok": rep.ok, "violations": list(rep.violations)}
    if args.format == "json":
        _emit(payload, args.out)
    else:
        lines = ["PASS" if rep.ok else "FAIL"] + [f"  {v}" for v in rep.violations]
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if rep.ok else 1


def cmd_compile(args) -> int:
    net, code, fld = network_from_json(_read_json(args.network))
    lmuc = compile_network(net, code, fld)
    _emit(lmuc.to_json(), args.out)
    return 0


def cmd_realize(args) -> int:
    lmuc = lmuc_from_json(_read_json(args.lmuc))
    net, code = realize(lmuc)
    _emit(network_to_json(net, code, lmuc.field), args.out)
    return 0


def cmd_check(args) -> int:
    lmuc = lmuc_from_json(_read_json(args.lmuc))
    code = mcode_from_json(_read_json(args.code))
    ok, witness = is_unambiguous(lmuc, code)
    payload: dict = {"unambiguous": ok, "u": list(code.cardinalities), "m": code.m}
    if witness is not None:
        payload["witness"] = {
            "i": witness.i,
            "x1": list(witness.x1),
            "x2": list(witness.x2),
            "common_output": list(witness.common_output),
        }
    if args.format == "json":
        _emit(payload, args.out)
    else:
        _emit(("unambiguous" if ok else f"ambiguous at pair {witness.i}") + "\n", args.out)
    return 0 if ok else 1


def cmd_bound(args) -> int:
    lmuc = lmuc_from_json(_read_json(args.lmuc))
    bounds = outer_bound(lmuc)
    if args.format == "json":
        _emit({"bounds": bounds.to_json()}, args.out)
    else:
        _emit(report_mod.bound_table(bounds), args.out)
    return 0


def cmd_search(args) -> int:
    lmuc = lmuc_from_json(_read_json(args.lmuc))
    rep = search_region(
        lmuc,
        args.m,
        args.code_class,
        cap_part=args.cap_part,
        cap_total=args.cap_total,
        jobs=max(1, args.jobs),
    )
    payload = rep.to_json()
    if args.depth and args.depth > args.m:
        seeds = [
            SharedPoint(code_rate_point(a.witness), a.witness) for a in rep.achieved
        ]
        closed = time_share_closure(lmuc, seeds, args.depth)
        payload["time_shared"] = [
            {
                "m": sp.point.m,
                "u": list(sp.point.u),
                "alpha": [round(x, 6) for x in sp.point.alphas(lmuc.field.q)],
            }
            for sp in closed
        ]
        payload["time_share_depth"] = args.depth
    if args.plot:
        report_mod.plot_region(rep, args.plot)
    if args.format == "json":
        _emit(payload, args.out)
    else:
        _emit(report_mod.region_table(rep), args.out)
    return 0


def cmd_simulate(args) -> int:
    lmuc = lmuc_from_json(_read_json(args.lmuc))
    inputs = _read_json(args.inputs)
    m = int(inputs["m"])
    x = [tuple(int(v) for v in xi) for xi in inputs["x"]]
    ys = simulate(lmuc, x, m)
    payload: dict = {"m": m, "y": [list(y) for y in ys]}
    if args.decode_with:
        code = mcode_from_json(_read_json(args.decode_with))
        payload["decoded"] = [
            list(channel_decode(lmuc, code, i, ys[i])) for i in range(lmuc.n)
        ]
    _emit(payload, args.out)
    return 0


def cmd_charsep(args) -> int:
    q_list = [int(v) for v in args.fields.split(",") if v]
    results = char_experiment(
        q_list, args.mmax, cap_part=args.cap_part, cap_total=args.cap_total
    )
    if args.plot:
        report_mod.plot_charsep(results, args.plot)
    if args.format == "json":
        payload = {
            "results": [
                {
                    "q": r.q,
                    "m": r.m,
                    "class": r.code_class,
                    "rate_11_achieved": r.achieves_one_one,
                    "max_2a1_plus_a2": None
                    if r.max_weighted is None
                    else [r.max_weighted.numerator, r.max_weighted.denominator],
                    "achieved": [list(u) for u in r.achieved],
                }
                for r in results
            ]
        }
        _emit(payload, args.out)
    else:
        _emit(report_mod.charsep_table(results), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmuc",
        description="Multiple unicast over fixed linear network codes: "
        "compile, check, bound, and search exact rate regions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the report to this path")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument(
            "--jobs",
            type=int,
            default=os.cpu_count() or 1,
            help="worker count for search work units",
        )

    p = sub.add_parser("validate", help="check a network against conditions (A)-(H)")
    p.add_argument("network")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compile", help="network + code -> transfer-matrix channel")
    p.add_argument("network")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("realize", help="channel -> a network/code inducing it")
    p.add_argument("lmuc")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check", help="unambiguity verdict for an m-code")
    p.add_argument("lmuc")
    p.add_argument("code")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bound", help="rank outer bound for every index subset")
    p.add_argument("lmuc")
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", help="exact m-shot achievable region")
    p.add_argument("lmuc")
    p.add_argument("--m", type=int, default=1)
    p.add_argument(
        "--class",
        dest="code_class",
        choices=["all-subsets", "base-linear"],
        default="base-linear",
    )
    p.add_argument("--cap-part", type=int, default=DEFAULT_CAP_PART)
    p.add_argument("--cap-total", type=int, default=DEFAULT_CAP_TOTAL)
    p.add_argument("--depth", type=int, default=0, help="time-sharing closure depth")
    p.add_argument("--plot", help="render the rate region to this image path")
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("simulate", help="run inputs through the channel law")
    p.add_argument("lmuc")
    p.add_argument("inputs")
    p.add_argument("--decode-with", help="m-code JSON used to decode the outputs")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "charsep", help="odd/even characteristic comparison on the built-in channel"
    )
    p.add_argument("--fields", default="2,3,5", help="comma list of field orders")
    p.add_argument("--mmax", type=int, default=2)
    p.add_argument("--cap-part", type=int, default=DEFAULT_CAP_PART)
    p.add_argument("--cap-total", type=int, default=DEFAULT_CAP_TOTAL)
    p.add_argument("--plot", help="render the comparison to this image path")
    common(p)
    p.set_defaults(func=cmd_charsep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SystemExit2,) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, SearchLimitError, EnumerationBoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
