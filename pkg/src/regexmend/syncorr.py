"""Hill-climbing repair over abstract-regex neighborhoods, plus the surrounding pipeline.

``syncorr`` abstracts the candidate at the coarsest level first and climbs
while some single edit strictly improves the fitness; a stage ends at a local
optimum, a time or iteration limit, or an engine budget overrun, and the next
finer level starts over from the original input.  ``transregex`` wraps it with
the optional external synthesizer and fallback repairer.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Optional, Union

from .abstraction import preprocess, show
from .engine import DEFAULT_BUDGET, EngineBudget, equivalent
from .errors import EngineError, ExternalToolError, RegexError
from .evaluation import ExampleSet, fitness
from .external import ExternalTool, build_request, invoke_external
from .neighborhood import DEFAULT_CAP, neighbors
from .syntax import PRINTABLE, Alphabet, Regex, ast_size, parse, to_string

MINUS_ONE = Fraction(-1)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("REGEXMEND_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RepairConfig:
    l_max_range: tuple = (2, 1, 0)
    max_iterations: int = 50
    stage_time: float = 10.0
    global_time: float = 60.0
    budget: EngineBudget = DEFAULT_BUDGET
    cap: int = DEFAULT_CAP
    seed: int = 0
    workers: int = field(default_factory=default_workers)
    alphabet: Alphabet = PRINTABLE
    candidates: str = "aliases-at-level-0"

    def __post_init__(self):
        object.__setattr__(self, "l_max_range", tuple(self.l_max_range))
        lv = self.l_max_range
        if not lv or any(l not in (0, 1, 2) for l in lv) or any(a <= b for a, b in zip(lv, lv[1:])):
            raise ValueError("l_max_range must be a strictly descending subset of {2, 1, 0}")
        if self.max_iterations < 1 or self.stage_time <= 0 or self.global_time <= 0 or self.cap < 1:
            raise ValueError("budgets must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def from_json(cls, data: dict) -> "RepairConfig":
        known = {f.name for f in fields(cls)} - {"budget", "alphabet"}
        unknown = set(data) - known - {"max_states", "max_quantifier_bound"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {k: v for k, v in data.items() if k in known}
        if "max_states" in data or "max_quantifier_bound" in data:
            kwargs["budget"] = EngineBudget(
                data.get("max_states", DEFAULT_BUDGET.max_states),
                data.get("max_quantifier_bound", DEFAULT_BUDGET.max_quantifier_bound),
            )
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "RepairConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class Step:
    """One accepted hill-climbing move."""

    iteration: int
    l_max: int
    fitness: Fraction
    kind: str
    site: str
    abstract: str  # the chosen neighbor as a token tree
    regex: str  # its concrete form

    def to_json(self) -> dict:
        return {
            "iteration": self.iteration,
            "l_max": self.l_max,
            "f": str(self.fitness),
            "kind": self.kind,
            "site": self.site,
            "abstract": self.abstract,
            "regex": self.regex,
        }


@dataclass
class RepairReport:
    repaired: bool
    regex: Regex  # the repair when repaired, else the original input
    original: Optional[Regex]
    fitness: Optional[Fraction] = None
    source: str = "syncorr"  # input | syncorr | fallback | none
    trajectory: list = field(default_factory=list)  # (iteration, l_max, best f)
    steps: list = field(default_factory=list)
    stage_elapsed: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    success_vs_target: Optional[bool] = None

    @property
    def outcome(self) -> str:
        return "repaired" if self.repaired else "unrepaired"

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "outcome": self.outcome,
            "regex": None if self.regex is None else to_string(self.regex),
            "original": None if self.original is None else to_string(self.original),
            "f": None if self.fitness is None else str(self.fitness),
            "source": self.source,
            "trajectory": [[i, l, str(f)] for i, l, f in self.trajectory],
            "steps": [s.to_json() for s in self.steps],
            "notes": list(self.notes),
            "success_vs_target": self.success_vs_target,
        }
        if timing:
            out["stage_elapsed"] = {str(k): round(v, 4) for k, v in self.stage_elapsed.items()}
        return out


def _score(r: Regex, ex: ExampleSet, cfg: RepairConfig) -> Fraction:
    try:
        return fitness(r, ex, cfg.alphabet, cfg.budget).value
    except EngineError:
        return MINUS_ONE


class _Deadline(Exception):
    pass


def _select(members: list, ex: ExampleSet, cfg: RepairConfig, deadline: float):
    """Best member by (f, smaller AST, smaller text), or None for an empty pool.

    Raises _Deadline when the deadline passes mid-evaluation.
    """
    by_text: dict = {}
    for m in members:
        key = to_string(m.concrete)
        if key not in by_text:
            by_text[key] = m
    pool = list(by_text.items())

    def evaluate(chunk):
        out = []
        for text, m in chunk:
            if time.monotonic() > deadline:
                return None
            out.append((_score(m.concrete, ex, cfg), text, m))
        return out

    size = max(1, len(pool) // (cfg.workers * 4) + 1)
    chunks = [pool[i:i + size] for i in range(0, len(pool), size)]
    if cfg.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as ex_pool:
            results = list(ex_pool.map(evaluate, chunks))
    else:
        results = [evaluate(c) for c in chunks]
    if any(r is None for r in results):
        raise _Deadline
    best = None
    for chunk in results:
        for f, text, m in chunk:
            key = (-f, ast_size(m.concrete), text)
            if best is None or key < best[0]:
                best = (key, f, m)
    return best


def syncorr(r0: Regex, ex: ExampleSet, cfg: Optional[RepairConfig] = None) -> RepairReport:
    """Repair ``r0`` until it agrees with every example, or report failure."""
    cfg = cfg or RepairConfig()
    start = time.monotonic()
    f0 = _score(r0, ex, cfg)
    report = RepairReport(False, r0, r0, f0)
    report.trajectory.append((0, cfg.l_max_range[0], f0))
    if f0 == 1:
        report.repaired, report.source = True, "input"
        return report

    for l_max in cfg.l_max_range:
        stage_start = time.monotonic()
        deadline = min(stage_start + cfg.stage_time, start + cfg.global_time)
        current, f_cur = r0, f0
        if l_max != cfg.l_max_range[0]:
            report.trajectory.append((0, l_max, f0))
        try:
            for iteration in range(1, cfg.max_iterations + 1):
                if time.monotonic() > deadline:
                    report.notes.append(f"l_max={l_max}: time budget exhausted")
                    break
                a = preprocess(current, l_max, cfg.alphabet)
                nb = neighbors(a, ex, alphabet=cfg.alphabet, cap=cfg.cap, workers=cfg.workers, policy=cfg.candidates)
                if nb.truncated:
                    report.notes.append(f"l_max={l_max}: neighborhood truncated at {cfg.cap}")
                try:
                    best = _select(list(nb.members), ex, cfg, deadline)
                except _Deadline:
                    report.notes.append(f"l_max={l_max}: time budget exhausted")
                    break
                if best is None or best[1] <= f_cur:
                    report.notes.append(f"l_max={l_max}: local optimum at f={f_cur}")
                    break
                _, f_best, m = best
                current, f_cur = m.concrete, f_best
                report.steps.append(
                    Step(iteration, l_max, f_best, m.kind.name, m.site, show(m.abstract.body), to_string(m.concrete))
                )
                report.trajectory.append((iteration, l_max, f_best))
                if f_best == 1:
                    report.stage_elapsed[l_max] = time.monotonic() - stage_start
                    report.repaired, report.regex, report.fitness = True, current, f_best
                    return report
            else:
                report.notes.append(f"l_max={l_max}: iteration limit reached")
        except EngineError as e:
            report.notes.append(f"l_max={l_max}: {e}")
        report.stage_elapsed[l_max] = time.monotonic() - stage_start
        if time.monotonic() > start + cfg.global_time:
            report.notes.append("global time budget exhausted")
            break
    return report


def transregex(
    ex: ExampleSet,
    candidate: Union[str, Regex, None] = None,
    description: Optional[str] = None,
    synthesizer: Optional[ExternalTool] = None,
    fallback: Optional[ExternalTool] = None,
    cfg: Optional[RepairConfig] = None,
) -> RepairReport:
    """Obtain a candidate (given or synthesized), keep it if consistent, else repair it."""
    cfg = cfg or RepairConfig()
    if isinstance(candidate, str):
        candidate = parse(candidate, cfg.alphabet)
    if candidate is None:
        if synthesizer is None:
            raise ValueError("either a candidate regex or a synthesizer is required")
        try:
            candidate = invoke_external(synthesizer, build_request(ex, description=description), cfg.alphabet)
        except (ExternalToolError, RegexError) as e:
            return RepairReport(False, None, None, None, "none", notes=[f"synthesizer: {e}"])

    report = syncorr(candidate, ex, cfg)
    if report.repaired or fallback is None:
        return report
    try:
        fixed = invoke_external(
            fallback, build_request(ex, regex=to_string(candidate), description=description), cfg.alphabet
        )
    except (ExternalToolError, RegexError) as e:
        report.notes.append(f"fallback: {e}")
        return report
    f = _score(fixed, ex, cfg)
    if f == 1:
        report.repaired, report.regex, report.fitness, report.source = True, fixed, f, "fallback"
    else:
        report.notes.append(f"fallback: returned regex is not consistent (f={f})")
    return report


def judge(report: RepairReport, target: Regex, cfg: Optional[RepairConfig] = None) -> bool:
    """Strict success: repaired and language-equal to ``target``."""
    cfg = cfg or RepairConfig()
    if not report.repaired:
        ok = False
    else:
        try:
            ok = equivalent(report.regex, target, cfg.budget, cfg.alphabet)
        except EngineError:
            ok = False
    report.success_vs_target = ok
    return ok
