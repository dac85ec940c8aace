"""Command-line interface.

Exit codes: 0 ok, 2 parse or usage error, 3 resource limit or exhausted
budget, 4 formula is not a sentence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import numtheory
from .config import BOUND_ENV, RunConfig
from .dickson import AffineMap, DicksonSystem, star_check
from .errors import NotASentenceError, ParseError, ResourceLimitError, StarConditionError
from .patterns import (
    PatternSpec,
    build_ip_witnesses,
    find_ap_pattern,
    find_consecutive_tuple,
    find_constellation,
    find_shattering,
)
from .qe import decide_sentence, qe_formula, simplify
from .syntax import parse_formula, print_formula

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_NOT_SENTENCE = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip().strip("{}()[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(" ", ",").split(",") if x]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None


def _maps(text: str) -> list[AffineMap]:
    """Maps written ``"a,b a,b ..."``."""
    out = []
    for chunk in text.split():
        parts = chunk.split(",")
        if len(parts) != 2:
            raise UsageError(f"map {chunk!r} is not of the form a,b")
        try:
            out.append(AffineMap(int(parts[0]), int(parts[1])))
        except ValueError as e:
            raise UsageError(f"bad map {chunk!r}: {e}") from None
    return out


def _read_formula(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.path is None:
        raise UsageError("give a formula with -e or a file path")
    try:
        return Path(args.path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(str(e)) from None


def _config(args) -> RunConfig:
    try:
        return RunConfig(
            search_bound=args.bound,
            dnf_cap=args.dnf_cap,
            lcm_cap=args.lcm_cap,
            mr_rounds=args.mr_rounds,
            trace=args.trace,
            json=args.json,
            simplify=args.simplify,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    print(json.dumps(payload) if cfg.json else text)


def _subset_text(s) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


# --------------------------------------------------------------------------
# Commands


def cmd_decide(args, cfg: RunConfig) -> int:
    f = parse_formula(_read_formula(args))
    v = decide_sentence(f, cfg.dnf_cap, cfg.lcm_cap, cfg.search_bound)
    qf = simplify(v.qf_formula) if cfg.simplify else v.qf_formula
    instances = [t for t in v.trace if t["kind"] == "dickson"]
    payload = {
        "verdict": v.value,
        "conditional_on_dickson": v.conditional_on_dickson,
        "dickson_instances": instances,
        "witness": v.witness,
        "qf_formula": print_formula(qf),
    }
    lines = [f"verdict: {'true' if v.value else 'false'}"]
    lines.append(f"conditional on Dickson: {'yes' if v.conditional_on_dickson else 'no'}")
    if v.witness is not None:
        lines.append(f"witness: {v.witness}")
    if cfg.trace:
        for t in v.trace:
            if t["kind"] == "dickson":
                lines.append(f"  dickson: {', '.join(t['maps'])}" + (" (absorbed)" if t.get("absorbed") else ""))
            else:
                lines.append(f"  finite case: p={t['prime']} index={t['index']} sign={t['sign']:+d} value={t['value']}")
        lines.append(f"quantifier-free: {payload['qf_formula']}")
    if cfg.json and cfg.trace:
        payload["trace"] = v.trace
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


def cmd_qe(args, cfg: RunConfig) -> int:
    f = parse_formula(_read_formula(args))
    out = qe_formula(f, cfg.dnf_cap, cfg.lcm_cap)
    qf = simplify(out.formula) if cfg.simplify else out.formula
    text = print_formula(qf)
    payload = {"qf_formula": text, "dickson_instances": [u.to_json() for u in out.dickson_uses]}
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_star(args, cfg: RunConfig) -> int:
    maps = _maps(" ".join(args.maps))
    if not maps:
        raise UsageError("no maps given")
    v = star_check(maps)
    payload = {"holds": v.holds, "witness_prime": v.witness_prime}
    text = "holds" if v.holds else f"fails (witness prime {v.witness_prime})"
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_constellation(args, cfg: RunConfig) -> int:
    try:
        system = DicksonSystem(_maps(args.prime), _maps(args.composite or ""))
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = find_constellation(system, args.count, cfg.search_bound)
    payload = {"values": res.values, "complete": res.complete}
    _emit(cfg, payload, " ".join(map(str, res.values)) + ("" if res.complete else "  (budget exhausted)"))
    return EXIT_OK if res.complete else EXIT_RESOURCE


def cmd_consecutive(args, cfg: RunConfig) -> int:
    try:
        x = find_consecutive_tuple(_int_list(args.offsets), cfg.search_bound)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(cfg, {"x": x}, "budget exhausted" if x is None else str(x))
    return EXIT_OK if x is not None else EXIT_RESOURCE


def cmd_ap(args, cfg: RunConfig) -> int:
    try:
        spec = PatternSpec(args.n, frozenset(_int_list(args.pattern)))
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = find_ap_pattern(spec, budget=cfg.search_bound * 100, proof_mode=args.proof)
    if res is None:
        _emit(cfg, {"a": None, "b": None, "terms": None}, "budget exhausted")
        return EXIT_RESOURCE
    payload = {"a": res.a, "b": res.b, "terms": list(res.terms)}
    _emit(cfg, payload, f"a={res.a} b={res.b} terms {','.join(map(str, res.terms))}")
    return EXIT_OK


def cmd_shatter(args, cfg: RunConfig) -> int:
    offsets = _int_list(args.offsets) if args.offsets else None
    try:
        res = find_shattering(args.k, offsets, cfg.search_bound)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if res is None:
        _emit(cfg, {"k": args.k, "offsets": offsets, "witnesses": None}, "budget exhausted")
        return EXIT_RESOURCE
    witnesses = [{"subset": sorted(s), "b": b} for s, b in res.witnesses.items()]
    payload = {"k": res.k, "offsets": list(res.offsets), "witnesses": witnesses}
    text = "\n".join(f"{_subset_text(w['subset'])}: {w['b']}" for w in witnesses)
    _emit(cfg, payload, f"offsets {','.join(map(str, res.offsets))}\n{text}")
    return EXIT_OK


def cmd_ip(args, cfg: RunConfig) -> int:
    res = build_ip_witnesses(args.n, args.k, budget=cfg.search_bound * 20)
    if res is None:
        _emit(cfg, {"n": args.n, "k": args.k, "difference": None, "offsets": None, "witnesses": None}, "budget exhausted")
        return EXIT_RESOURCE
    offsets = [{"i": i, "j": j, "a": a} for (i, j), a in sorted(res.offsets.items())]
    witnesses = [{"subset": sorted(map(list, s)), "b": b} for s, b in res.witnesses.items()]
    payload = {"n": res.n, "k": res.k, "difference": res.difference, "offsets": offsets, "witnesses": witnesses}
    lines = [f"progression a={res.progression.a} b={res.progression.b} length {len(res.progression.terms)}"]
    lines += [f"a[{o['i']},{o['j']}] = {o['a']}" for o in offsets]
    lines += [f"b{w['subset']} = {w['b']}" for w in witnesses]
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=RunConfig.default_bound(),
                        help=f"search bound / budget (env {BOUND_ENV})")
    common.add_argument("--dnf-cap", type=int, default=RunConfig.dnf_cap)
    common.add_argument("--lcm-cap", type=int, default=RunConfig.lcm_cap)
    common.add_argument("--mr-rounds", type=int, default=RunConfig.mr_rounds)
    common.add_argument("--trace", action="store_true")
    common.add_argument("--json", action="store_true")
    common.add_argument("--simplify", action="store_true")

    parser = argparse.ArgumentParser(prog="primedec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("decide", cmd_decide, "decide a sentence"),
        ("qe", cmd_qe, "eliminate quantifiers"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("-e", dest="expr", help="formula text")
        p.add_argument("path", nargs="?", help="UTF-8 file holding one formula")
        p.set_defaults(func=fn)

    p = sub.add_parser("star", parents=[common], help="check the star condition of maps 'a,b a,b ...'")
    p.add_argument("maps", nargs="+")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("constellation", parents=[common], help="prime/composite constellation search")
    p.add_argument("--prime", required=True, help="maps required prime, 'a,b a,b ...'")
    p.add_argument("--composite", default="", help="maps required composite")
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_constellation)

    p = sub.add_parser("consecutive", parents=[common], help="consecutive prime tuple with offsets")
    p.add_argument("offsets")
    p.set_defaults(func=cmd_consecutive)

    p = sub.add_parser("ap", parents=[common], help="progression with primality pattern")
    p.add_argument("n", type=int)
    p.add_argument("pattern", help="e.g. '{0,2}'")
    p.add_argument("--proof", action="store_true", help="fix the base at n!+1 and search the difference")
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("shatter", parents=[common], help="shattering witnesses for k offsets")
    p.add_argument("k", type=int)
    p.add_argument("offsets", nargs="?")
    p.set_defaults(func=cmd_shatter)

    p = sub.add_parser("ip", parents=[common], help="n-independence witnesses from one progression")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_ip)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        numtheory.configure(mr_rounds=cfg.mr_rounds)
        return args.func(args, cfg)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except StarConditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except NotASentenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_SENTENCE


if __name__ == "__main__":
    sys.exit(main())
