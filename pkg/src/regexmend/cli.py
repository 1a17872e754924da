"""Command-line interface.

Exit status: 0 success, 1 a well-formed negative answer (invalid, no match,
not equivalent, unrepaired), 2 usage or input errors.  Results go to stdout
as JSON; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .abstraction import preprocess
from .corpus import load_benchmark, make_invalid_pairs, run_harness
from .engine import distinguishing_string, equivalent, matches, sample_negative, sample_positive
from .errors import EngineError, ExternalToolError, InsufficientLanguage, InvalidExamples, RegexError
from .evaluation import ExampleSet, fitness
from .external import ExternalTool
from .syncorr import RepairConfig, judge, transregex
from .syntax import parse, to_string, validate


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def _config(args) -> RepairConfig:
    cfg = RepairConfig.load(args.config) if getattr(args, "config", None) else RepairConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "threads", None) is not None:
        overrides["workers"] = args.threads
    if overrides:
        cfg = RepairConfig(**{**cfg.__dict__, **overrides})
    return cfg


def _tool(role: str, command: Optional[str], timeout: float) -> Optional[ExternalTool]:
    return ExternalTool(role, command, timeout) if command else None


def cmd_check(args) -> int:
    ok = validate(args.regex)
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def cmd_match(args) -> int:
    ok = matches(parse(args.regex), args.string)
    _emit({"matches": ok})
    return 0 if ok else 1


def cmd_equiv(args) -> int:
    r1, r2 = parse(args.r1), parse(args.r2)
    ok = equivalent(r1, r2)
    out = {"equivalent": ok}
    if not ok:
        out["witness"] = distinguishing_string(r1, r2)
    _emit(out)
    return 0 if ok else 1


def cmd_fitness(args) -> int:
    _emit(fitness(parse(args.regex), ExampleSet.load(args.examples)).to_json())
    return 0


def cmd_gen(args) -> int:
    r = parse(args.regex)

    def draw(sampler, k):
        if k == 0:
            return []
        try:
            return sampler(r, k, args.max_len, args.seed)
        except InsufficientLanguage as e:
            print(f"warning: only {len(e.found)} of {k} strings exist", file=sys.stderr)
            return e.found

    _emit({"positive": draw(sample_positive, args.pos), "negative": draw(sample_negative, args.neg)})
    return 0


def _read_targets(path: str) -> list:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return [line for line in text.splitlines() if line.strip()]
    if not isinstance(data, list) or not all(isinstance(t, str) for t in data):
        raise UsageError("targets file must be a JSON list of strings or one regex per line")
    return data


def cmd_mutate(args) -> int:
    targets = _read_targets(args.targets)
    bad = [t for t in targets if not validate(t)]
    if bad:
        raise UsageError(f"invalid target regex: {bad[0]!r}")
    pairs = make_invalid_pairs(targets, args.per, args.seed)
    _emit([{"invalid": i, "valid": v} for i, v in pairs])
    return 0


def cmd_abstract(args) -> int:
    a = preprocess(parse(args.regex), args.level)
    _emit({"abstract": str(a), "dictionary": {str(l): a.dictionary.level(l) for l in range(3)}})
    return 0


def cmd_repair(args) -> int:
    cfg = _config(args)
    ex = ExampleSet.load(args.examples)
    ex.check_alphabet(cfg.alphabet)
    if args.regex is None and not args.synthesizer:
        raise UsageError("give --regex or --synthesizer")
    report = transregex(
        ex,
        args.regex,
        args.description,
        _tool("synthesizer", args.synthesizer, args.tool_timeout),
        _tool("repairer", args.fallback, args.tool_timeout),
        cfg,
    )
    if args.target:
        judge(report, parse(args.target, cfg.alphabet), cfg)
    _emit(report.to_json(timing=not args.no_timing))
    return 0 if report.repaired else 1


def cmd_bench(args) -> int:
    cfg = _config(args)
    problems: list = []
    records = load_benchmark(args.records, problems, cfg.alphabet)
    for lineno, reason in problems:
        print(f"warning: line {lineno} skipped: {reason}", file=sys.stderr)
    if not records:
        raise UsageError("no valid records")
    report = run_harness(
        records,
        cfg,
        _tool("synthesizer", args.synthesizer, args.tool_timeout),
        _tool("repairer", args.fallback, args.tool_timeout),
        consistency_only=args.consistency_only,
        k_pos=args.pos,
        k_neg=args.neg,
        max_len=args.max_len,
    )
    if args.table:
        print(report.to_table(), file=sys.stderr)
    out = report.to_json(timing=not args.no_timing)
    out["invalid_lines"] = len(problems)
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regexmend", description="Repair regexes against example strings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="is the regex syntactically valid")
    s.add_argument("regex")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("match", help="does the regex match the whole string")
    s.add_argument("regex")
    s.add_argument("string")
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("equiv", help="do two regexes denote the same language")
    s.add_argument("r1")
    s.add_argument("r2")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("fitness", help="score a regex against an examples file")
    s.add_argument("regex")
    s.add_argument("examples")
    s.set_defaults(func=cmd_fitness)

    s = sub.add_parser("gen", help="sample positive and negative strings")
    s.add_argument("regex")
    s.add_argument("--pos", type=int, default=10)
    s.add_argument("--neg", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-len", type=int, default=30)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("mutate", help="make (invalid, valid) regex pairs")
    s.add_argument("targets", help="JSON list of regexes, or one regex per line")
    s.add_argument("--per", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("abstract", help="show the token form of a regex")
    s.add_argument("regex")
    s.add_argument("--level", type=int, choices=(0, 1, 2), default=2)
    s.set_defaults(func=cmd_abstract)

    def tools(s):
        s.add_argument("--synthesizer", help="command producing a regex from the examples")
        s.add_argument("--fallback", help="repairer command run when the search fails")
        s.add_argument("--tool-timeout", type=float, default=30.0)
        s.add_argument("--config", help="JSON repair configuration")
        s.add_argument("--seed", type=int)
        s.add_argument("--threads", type=int)
        s.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")

    s = sub.add_parser("repair", help="repair a regex against examples")
    s.add_argument("--regex")
    s.add_argument("--examples", required=True)
    s.add_argument("--description")
    s.add_argument("--target", help="also report language equality with this regex")
    tools(s)
    s.set_defaults(func=cmd_repair)

    s = sub.add_parser("bench", help="run the repair harness on a JSON-lines file")
    s.add_argument("records")
    s.add_argument("--consistency-only", action="store_true")
    s.add_argument("--table", action="store_true", help="print a text table to stderr")
    s.add_argument("--pos", type=int, default=10)
    s.add_argument("--neg", type=int, default=10)
    s.add_argument("--max-len", type=int, default=30)
    tools(s)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        RegexError,
        InvalidExamples,
        EngineError,
        ExternalToolError,
        UsageError,
        OSError,
        ValueError,
        json.JSONDecodeError,
    ) as e:
        msg = " ".join(str(e).split())
        print(f"regexmend: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
