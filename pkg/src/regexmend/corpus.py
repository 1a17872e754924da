"""Benchmark records, example materialization, mutation-based pair generation and the harness."""

from __future__ import annotations

import json
import logging
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .engine import equivalent, sample_positive, sample_negative
from .errors import EngineError, ExternalToolError, InsufficientLanguage, InvalidExamples, RegexError
from .evaluation import ExampleSet, consistent
from .external import ExternalTool
from .syncorr import RepairConfig, transregex
from .syntax import PRINTABLE, Alphabet, Regex, parse, to_string, validate

log = logging.getLogger(__name__)

MAX_EDITS = 5
ATTEMPTS_PER_OUTPUT = 100


@dataclass(frozen=True)
class BenchmarkRecord:
    id: str
    target: str
    description: Optional[str] = None
    positive: tuple = ()
    negative: tuple = ()
    candidate: Optional[str] = None

    @classmethod
    def from_json(cls, data: dict, alphabet: Alphabet = PRINTABLE) -> "BenchmarkRecord":
        if not isinstance(data, dict):
            raise InvalidExamples("record must be a JSON object")
        for key in ("id", "target"):
            if not isinstance(data.get(key), str):
                raise InvalidExamples(f"record field {key!r} must be a string")
        rec = cls(
            id=data["id"],
            target=data["target"],
            description=data.get("description"),
            positive=tuple(data.get("positive") or ()),
            negative=tuple(data.get("negative") or ()),
            candidate=data.get("candidate"),
        )
        target = parse(rec.target, alphabet)
        if rec.candidate is not None:
            parse(rec.candidate, alphabet)
        if rec.positive or rec.negative:
            ex = ExampleSet.from_lists(rec.positive, rec.negative)
            ex.check_alphabet(alphabet)
            if not consistent(target, ex, alphabet):
                raise InvalidExamples("examples disagree with the target")
        return rec

    def to_json(self) -> dict:
        out = {"id": self.id, "target": self.target}
        if self.description is not None:
            out["description"] = self.description
        if self.positive or self.negative:
            out["positive"] = list(self.positive)
            out["negative"] = list(self.negative)
        if self.candidate is not None:
            out["candidate"] = self.candidate
        return out


def load_benchmark(path, problems: Optional[list] = None, alphabet: Alphabet = PRINTABLE) -> list:
    """Records of a JSON-lines file; bad lines are skipped and reported in ``problems``."""
    problems = [] if problems is None else problems
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(BenchmarkRecord.from_json(json.loads(line), alphabet))
            except (json.JSONDecodeError, RegexError, InvalidExamples) as e:
                problems.append((lineno, str(e)))
    if problems:
        log.warning("%s: skipped %d invalid record(s)", path, len(problems))
    return records


def materialize_examples(
    rec: BenchmarkRecord,
    k_pos: int = 10,
    k_neg: int = 10,
    max_len: int = 30,
    seed: int = 0,
    alphabet: Alphabet = PRINTABLE,
) -> ExampleSet:
    """The record's own examples, or ones sampled from its target."""
    if rec.positive or rec.negative:
        return ExampleSet.from_lists(rec.positive, rec.negative)
    target = parse(rec.target, alphabet)

    def draw(sampler, k):
        try:
            return sampler(target, k, max_len, seed, alphabet=alphabet)
        except InsufficientLanguage as e:
            return e.found

    return ExampleSet.from_lists(draw(sample_positive, k_pos), draw(sample_negative, k_neg))


# --------------------------------------------------------------------------
# Mutation


@dataclass(frozen=True)
class MutationEdit:
    kind: str  # insert | delete | modify
    position: int
    payload: str = ""


def mutate(text: str, rng: random.Random, n_edits: int, alphabet: Alphabet = PRINTABLE):
    """Apply ``n_edits`` random single-character edits; returns (new text, edits)."""
    if not 1 <= n_edits <= MAX_EDITS:
        raise ValueError(f"between 1 and {MAX_EDITS} edits per mutation")
    chars = list(text)
    edits = []
    for _ in range(n_edits):
        kind = rng.choice(("insert", "delete", "modify") if chars else ("insert",))
        if kind == "insert":
            pos = rng.randint(0, len(chars))
            c = rng.choice(alphabet.chars)
            chars.insert(pos, c)
        else:
            pos = rng.randrange(len(chars))
            if kind == "delete":
                c = ""
                del chars[pos]
            else:
                c = rng.choice(alphabet.chars)
                chars[pos] = c
        edits.append(MutationEdit(kind, pos, c))
    return "".join(chars), edits


def make_invalid_pairs(
    targets: Iterable[str], n_per_target: int = 1, seed: int = 0, alphabet: Alphabet = PRINTABLE
) -> list:
    """(invalid, valid) pairs made by 1-5 random string edits that break the syntax."""
    rng = random.Random(seed)
    pairs = []
    for target in targets:
        made: set = set()
        for _ in range(n_per_target):
            for _ in range(ATTEMPTS_PER_OUTPUT):
                text, _ = mutate(target, rng, rng.randint(1, MAX_EDITS), alphabet)
                if text not in made and not validate(text, alphabet):
                    made.add(text)
                    pairs.append((text, target))
                    break
    return pairs


def make_valid_mutants(
    target: str, n: int, seed: int = 0, max_edits: int = 2, alphabet: Alphabet = PRINTABLE
) -> list:
    """Up to ``n`` distinct regexes differing from ``target`` by 1..max_edits edits and still valid."""
    rng = random.Random(seed)
    out: list = []
    for _ in range(n * ATTEMPTS_PER_OUTPUT):
        if len(out) == n:
            break
        text, _ = mutate(target, rng, rng.randint(1, max_edits), alphabet)
        if text != target and text not in out and validate(text, alphabet):
            out.append(text)
    return out


def edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


# --------------------------------------------------------------------------
# Harness


@dataclass
class HarnessRow:
    id: str
    candidate: Optional[str]
    result: Optional[str]
    outcome: str
    consistent: bool
    dfa_equal: bool
    success: bool
    elapsed: float = 0.0
    error: Optional[str] = None

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "id": self.id,
            "candidate": self.candidate,
            "result": self.result,
            "outcome": self.outcome,
            "consistent": self.consistent,
            "dfa_equal": self.dfa_equal,
            "success": self.success,
            "error": self.error,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 4)
        return out


@dataclass
class HarnessReport:
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    consistency_only: bool = False

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.rows)

    @property
    def rate(self) -> float:
        return self.successes / len(self.rows) if self.rows else 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "rows": [r.to_json(timing) for r in self.rows],
            "skipped": list(self.skipped),
            "total": len(self.rows),
            "successes": self.successes,
            "success_rate": round(self.rate, 6),
            "metric": "consistent" if self.consistency_only else "consistent and equivalent",
        }
        if timing and self.rows:
            times = [r.elapsed for r in self.rows]
            out["mean_time"] = round(statistics.mean(times), 4)
            out["median_time"] = round(statistics.median(times), 4)
        return out

    def to_table(self) -> str:
        head = ("id", "outcome", "consistent", "equal", "success", "time", "result")
        body = [
            (r.id, r.outcome, str(r.consistent), str(r.dfa_equal), str(r.success),
             f"{r.elapsed:.2f}", r.result or r.error or "")
            for r in self.rows
        ]
        widths = [max(len(x) for x in col) for col in zip(head, *body)]
        lines = ["  ".join(x.ljust(w) for x, w in zip(line, widths)).rstrip() for line in [head, *body]]
        lines.append(f"success {self.successes}/{len(self.rows)} ({self.rate:.1%})")
        return "\n".join(lines)


def _run_record(rec, cfg, synthesizer, fallback, consistency_only, k_pos, k_neg, max_len, seed):
    started = time.monotonic()
    target = parse(rec.target, cfg.alphabet)
    row = HarnessRow(rec.id, rec.candidate, None, "error", False, False, False)
    try:
        ex = materialize_examples(rec, k_pos, k_neg, max_len, seed, cfg.alphabet)
        report = transregex(ex, rec.candidate, rec.description, synthesizer, fallback, cfg)
        row.outcome = report.outcome
        if report.regex is not None:
            row.result = to_string(report.regex)
            row.consistent = consistent(report.regex, ex, cfg.alphabet)
            row.dfa_equal = equivalent(report.regex, target, cfg.budget, cfg.alphabet)
        if report.regex is None and report.notes:
            row.error = report.notes[-1]
        row.success = row.consistent and (consistency_only or row.dfa_equal)
    except (RegexError, EngineError, InvalidExamples, ExternalToolError, ValueError) as e:
        row.error = str(e)
    row.elapsed = time.monotonic() - started
    return row


def run_harness(
    records: list,
    cfg: Optional[RepairConfig] = None,
    synthesizer: Optional[ExternalTool] = None,
    fallback: Optional[ExternalTool] = None,
    consistency_only: bool = False,
    k_pos: int = 10,
    k_neg: int = 10,
    max_len: int = 30,
    seed: Optional[int] = None,
) -> HarnessReport:
    """Repair every record's candidate and classify the outcome against its target."""
    if not records:
        raise ValueError("no records to run")
    cfg = cfg or RepairConfig()
    seed = cfg.seed if seed is None else seed
    report = HarnessReport(consistency_only=consistency_only)
    todo = []
    for rec in records:
        if rec.candidate is None and synthesizer is None:
            report.skipped.append(rec.id)
        else:
            todo.append(rec)
    job = lambda rec: _run_record(rec, cfg, synthesizer, fallback, consistency_only, k_pos, k_neg, max_len, seed)
    if cfg.workers > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            report.rows = list(pool.map(job, todo))
    else:
        report.rows = [job(rec) for rec in todo]
    return report
