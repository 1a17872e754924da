"""Example sets and the exact fitness score used to rank candidate regexes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .engine import EngineBudget, check_quantifiers, match_term, to_term
from .errors import InvalidExamples
from .syntax import PRINTABLE, Alphabet, Regex


@dataclass(frozen=True)
class ExampleSet:
    positive: tuple[str, ...]
    negative: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "positive", tuple(self.positive))
        object.__setattr__(self, "negative", tuple(self.negative))
        if len(set(self.positive)) != len(self.positive):
            raise InvalidExamples("duplicate positive examples")
        if len(set(self.negative)) != len(self.negative):
            raise InvalidExamples("duplicate negative examples")
        both = set(self.positive) & set(self.negative)
        if both:
            raise InvalidExamples(f"strings are both positive and negative: {sorted(both)}")
        if not self.positive and not self.negative:
            raise InvalidExamples("at least one example is required")

    @classmethod
    def from_lists(cls, positive: Iterable[str], negative: Iterable[str]) -> "ExampleSet":
        """Build an example set, dropping repeated strings (first occurrence wins)."""
        return cls(tuple(dict.fromkeys(positive)), tuple(dict.fromkeys(negative)))

    def check_alphabet(self, alphabet: Alphabet = PRINTABLE) -> None:
        for w in self.positive + self.negative:
            bad = [c for c in w if c not in alphabet]
            if bad:
                raise InvalidExamples(f"{w!r} has characters outside the alphabet: {bad}")

    def __len__(self) -> int:
        return len(self.positive) + len(self.negative)

    def to_json(self) -> dict:
        return {"positive": list(self.positive), "negative": list(self.negative)}

    @classmethod
    def from_json(cls, data: dict) -> "ExampleSet":
        if not isinstance(data, dict):
            raise InvalidExamples("examples must be a JSON object")
        pos, neg = data.get("positive", []), data.get("negative", [])
        if not all(isinstance(w, str) for w in list(pos) + list(neg)):
            raise InvalidExamples("examples must be strings")
        return cls.from_lists(pos, neg)

    @classmethod
    def load(cls, path) -> "ExampleSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class Fitness:
    value: Fraction
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def consistent(self) -> bool:
        return self.fp == 0 and self.fn == 0

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "tp": self.tp,
            "tn": self.tn,
            "fp": self.fp,
            "fn": self.fn,
        }


def fitness(
    r: Regex,
    ex: ExampleSet,
    alphabet: Alphabet = PRINTABLE,
    budget: Optional[EngineBudget] = None,
) -> Fitness:
    """Score ``r`` by (accepted positives + rejected negatives - mistakes) / |examples|.

    With a ``budget``, regexes whose quantifier bounds exceed it raise
    QuantifierTooLarge instead of being evaluated.
    """
    if budget is not None:
        check_quantifiers(r, budget)
    t = to_term(r, alphabet)
    tp = sum(1 for w in ex.positive if match_term(t, w, alphabet))
    fp = sum(1 for w in ex.negative if match_term(t, w, alphabet))
    fn = len(ex.positive) - tp
    tn = len(ex.negative) - fp
    return Fitness(Fraction(tp + tn - fp - fn, len(ex)), tp, tn, fp, fn)


def consistent(r: Regex, ex: ExampleSet, alphabet: Alphabet = PRINTABLE) -> bool:
    """True iff ``r`` accepts every positive and rejects every negative example."""
    t = to_term(r, alphabet)
    return all(match_term(t, w, alphabet) for w in ex.positive) and not any(
        match_term(t, w, alphabet) for w in ex.negative
    )

