"""Extended regex AST, parser, canonical printer and structural metrics.

The language has character classes, counted repetition ``{m,n}`` (with the
usual ``? * +`` sugar), disjunction ``|``, concatenation, conjunction ``&``
and negation ``~``.  Precedence from tightest to loosest: ``~`` and
quantifiers, concatenation, ``&``, ``|``.

Two notations have no counterpart in most regex dialects: ``[]`` denotes the
empty language and an empty operand (``a|``, ``()``) denotes the empty word.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Optional, Union

from .errors import AlphabetViolation, InvalidSyntax, RegexError

INF = None  # upper bound of an unbounded repeat

SPECIAL = set("\\()[]{}|&~.*+?")
CLASS_SPECIAL = set("\\]-^[")


@dataclass(frozen=True)
class Alphabet:
    chars: tuple[str, ...]

    def __post_init__(self):
        if not self.chars:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.chars)) != len(self.chars):
            raise ValueError("alphabet has duplicate symbols")
        if any(len(c) != 1 for c in self.chars):
            raise ValueError("alphabet symbols must be single characters")
        object.__setattr__(self, "members", frozenset(self.chars))

    @classmethod
    def of(cls, symbols) -> "Alphabet":
        return cls(tuple(symbols))

    def __contains__(self, c) -> bool:
        return c in self.members

    def __iter__(self):
        return iter(self.chars)

    def __len__(self) -> int:
        return len(self.chars)


PRINTABLE = Alphabet(tuple(chr(i) for i in range(0x20, 0x7F)))


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Literal:
    char: str


@dataclass(frozen=True)
class CharClass:
    chars: frozenset
    negated: bool = False
    # set by the parser for `.`; printing only
    dot: bool = False

    def members(self, alphabet: Alphabet = PRINTABLE) -> frozenset:
        if self.negated:
            return alphabet.members - self.chars
        return self.chars & alphabet.members


@dataclass(frozen=True)
class Const:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("Const needs at least one character")


@dataclass(frozen=True)
class Concat:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Alt:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class And:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Not:
    child: "Regex"


@dataclass(frozen=True)
class Repeat:
    child: "Regex"
    min: int
    max: Optional[int]
    hint: str = ""

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < self.min):
            raise ValueError(f"bad repeat bounds {{{self.min},{self.max}}}")
        hint = self.hint or default_hint(self.min, self.max)
        if hint not in allowed_hints(self.min, self.max):
            raise ValueError(f"hint {hint!r} does not fit bounds ({self.min}, {self.max})")
        object.__setattr__(self, "hint", hint)


@dataclass(frozen=True)
class Group:
    child: "Regex"


Regex = Union[Empty, Epsilon, Literal, CharClass, Const, Concat, Alt, And, Not, Repeat, Group]


def default_hint(lo: int, hi: Optional[int]) -> str:
    if hi is None:
        return {0: "*", 1: "+"}.get(lo, "{m,}")
    if (lo, hi) == (0, 1):
        return "?"
    return "{i}" if lo == hi else "{m,n}"


def allowed_hints(lo: int, hi: Optional[int]) -> set[str]:
    if hi is None:
        hints = {"{m,}"}
        if lo == 0:
            hints.add("*")
        if lo == 1:
            hints.add("+")
        return hints
    hints = {"{m,n}"}
    if lo == hi:
        hints.add("{i}")
    if (lo, hi) == (0, 1):
        hints.add("?")
    return hints


def quantifier_text(lo: int, hi: Optional[int], hint: str = "") -> str:
    hint = hint or default_hint(lo, hi)
    if hint in ("*", "+", "?"):
        return hint
    if hint == "{i}":
        return f"{{{lo}}}"
    if hint == "{m,}":
        return f"{{{lo},}}"
    return f"{{{lo},{hi}}}"


def concat(*parts: Regex) -> Regex:
    """Left-nested concatenation of ``parts``; the empty word when there are none."""
    parts = [p for p in parts if not isinstance(p, Epsilon)]
    if not parts:
        return Epsilon()
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


def literals(text: str) -> Regex:
    return concat(*(Literal(c) for c in text))


def dot_class(alphabet: Alphabet = PRINTABLE) -> CharClass:
    return CharClass(alphabet.members, dot=True)


def is_dot_star(r: Regex) -> bool:
    return (
        isinstance(r, Repeat)
        and r.hint == "*"
        and isinstance(r.child, CharClass)
        and r.child.dot
    )


def children(r: Regex) -> tuple:
    if isinstance(r, (Concat, Alt, And)):
        return (r.left, r.right)
    if isinstance(r, (Not, Repeat, Group)):
        return (r.child,)
    return ()


def walk(r: Regex):
    stack = [r]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


# --------------------------------------------------------------------------
# Parser

_ESCAPE_CLASSES = {
    "d": (frozenset(string.digits), False),
    "w": (frozenset(string.ascii_letters + string.digits + "_"), False),
    "s": (frozenset(" \t\n\r\f\v"), False),
    "D": (frozenset(string.digits), True),
    "W": (frozenset(string.ascii_letters + string.digits + "_"), True),
    "S": (frozenset(" \t\n\r\f\v"), True),
}


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def error(self, reason: str, pos: Optional[int] = None):
        raise InvalidSyntax(self.pos if pos is None else pos, reason)

    def peek(self) -> Optional[str]:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        return c

    def symbol(self) -> str:
        c = self.take()
        if c not in self.alphabet:
            raise AlphabetViolation(c, self.pos - 1)
        return c

    def parse(self) -> Regex:
        r = self.alternation()
        if self.pos != len(self.text):
            c = self.peek()
            self.error("unbalanced ')'" if c == ")" else f"unexpected {c!r}")
        return r

    def alternation(self) -> Regex:
        r = self.conjunction()
        while self.peek() == "|":
            self.take()
            r = Alt(r, self.conjunction())
        return r

    def conjunction(self) -> Regex:
        r = self.sequence()
        while self.peek() == "&":
            self.take()
            r = And(r, self.sequence())
        return r

    def sequence(self) -> Regex:
        items = []
        while self.peek() is not None and self.peek() not in "|&)":
            items.append(self.unary())
        return concat(*items)

    def unary(self) -> Regex:
        if self.peek() == "~":
            self.take()
            if self.peek() is None or self.peek() in "|&)":
                self.error("'~' needs an operand")
            return Not(self.unary())
        return self.postfix()

    def postfix(self) -> Regex:
        r = self.atom()
        q = self.quantifier()
        if q is not None:
            r = Repeat(r, *q)
            if self.peek() is not None and self.peek() in "*+?{":
                self.error("multiple repeat")
        return r

    def quantifier(self):
        c = self.peek()
        if c == "*":
            self.take()
            return (0, INF, "*")
        if c == "+":
            self.take()
            return (1, INF, "+")
        if c == "?":
            self.take()
            return (0, 1, "?")
        if c != "{":
            return None
        start = self.pos
        self.take()
        lo = self.number()
        if lo is None:
            self.error("expected a number after '{'")
        if self.peek() == "}":
            self.take()
            return (lo, lo, "{i}")
        if self.peek() != ",":
            self.error("expected ',' or '}' in quantifier")
        self.take()
        hi = self.number()
        if self.peek() != "}":
            self.error("malformed quantifier")
        self.take()
        if hi is None:
            return (lo, INF, "{m,}")
        if hi < lo:
            self.error(f"quantifier minimum {lo} exceeds maximum {hi}", start)
        return (lo, hi, "{m,n}")

    def number(self) -> Optional[int]:
        start = self.pos
        while self.peek() is not None and self.peek().isdigit():
            self.take()
        return int(self.text[start:self.pos]) if self.pos > start else None

    def atom(self) -> Regex:
        c = self.peek()
        if c == "(":
            start = self.pos
            self.take()
            inner = self.alternation()
            if self.peek() != ")":
                self.error("missing ')'", start)
            self.take()
            return Group(inner)
        if c == "[":
            return self.char_class()
        if c == ".":
            self.take()
            return dot_class(self.alphabet)
        if c == "\\":
            return self.escape(in_class=False)
        if c in "*+?{":
            self.error("nothing to repeat")
        if c in "]}":
            self.error(f"unescaped {c!r}")
        return Literal(self.symbol())

    def escape(self, in_class: bool):
        start = self.pos
        self.take()
        c = self.peek()
        if c is None:
            self.error("dangling backslash", start)
        if c in _ESCAPE_CLASSES:
            self.take()
            chars, negated = _ESCAPE_CLASSES[c]
            chars = chars & self.alphabet.members
            return CharClass(chars, negated) if not in_class else (chars, negated)
        if c.isalnum():
            self.error(f"unknown escape \\{c}", start)
        c = self.symbol()
        return Literal(c) if not in_class else c

    def char_class(self) -> Regex:
        start = self.pos
        self.take()
        negated = False
        if self.peek() == "^":
            self.take()
            negated = True
        members: set[str] = set()
        if self.peek() == "]" and not negated:
            self.take()
            return Empty()
        while True:
            c = self.peek()
            if c is None:
                self.error("missing ']'", start)
            if c == "]":
                self.take()
                break
            lo = self.class_char()
            if isinstance(lo, tuple):
                chars, neg = lo
                members |= (self.alphabet.members - chars) if neg else chars
                continue
            if self.peek() == "-" and self.pos + 1 < len(self.text) and self.text[self.pos + 1] != "]":
                dash = self.pos
                self.take()
                hi = self.class_char()
                if isinstance(hi, tuple):
                    self.error("bad range endpoint", dash)
                if ord(hi) < ord(lo):
                    self.error(f"bad range {lo}-{hi}", dash)
                members.update(
                    ch for ch in map(chr, range(ord(lo), ord(hi) + 1)) if ch in self.alphabet
                )
            else:
                members.add(lo)
        cls = CharClass(frozenset(members), negated)
        if not cls.members(self.alphabet):
            self.error("character class matches nothing", start)
        return cls

    def class_char(self):
        if self.peek() == "\\":
            return self.escape(in_class=True)
        return self.symbol()


def parse(text: str, alphabet: Alphabet = PRINTABLE) -> Regex:
    """Parse ``text``; raises InvalidSyntax or AlphabetViolation."""
    return _Parser(text, alphabet).parse()


def validate(text: str, alphabet: Alphabet = PRINTABLE) -> bool:
    try:
        parse(text, alphabet)
    except RegexError:
        return False
    return True


# --------------------------------------------------------------------------
# Printer

ALT_P, AND_P, CAT_P, UNARY_P, ATOM_P = range(5)


def precedence(r: Regex) -> int:
    if isinstance(r, Alt):
        return ALT_P
    if isinstance(r, And):
        return AND_P
    if isinstance(r, Concat) or (isinstance(r, Const) and len(r.text) > 1):
        return CAT_P
    if isinstance(r, (Not, Repeat)):
        return UNARY_P
    if isinstance(r, Epsilon):
        # prints as nothing, which only reads back as ε where an operand may be empty
        return ALT_P
    return ATOM_P


def escape_char(c: str) -> str:
    return "\\" + c if c in SPECIAL else c


def class_body(chars) -> str:
    codes = sorted(ord(c) for c in chars)
    out = []
    i = 0
    while i < len(codes):
        j = i
        while j + 1 < len(codes) and codes[j + 1] == codes[j] + 1:
            j += 1
        run = [chr(k) for k in codes[i:j + 1]]
        esc = [("\\" + c if c in CLASS_SPECIAL else c) for c in run]
        if len(run) >= 3:
            out.append(f"{esc[0]}-{esc[-1]}")
        else:
            out.extend(esc)
        i = j + 1
    return "".join(out)


def class_text(cls: CharClass) -> str:
    if cls.dot:
        return "."
    return "[" + ("^" if cls.negated else "") + class_body(cls.chars) + "]"


def to_string(r: Regex) -> str:
    """Canonical text of ``r`` with minimal parentheses; sugar hints are honored."""
    return _show(r, ALT_P)


def _wrap(r: Regex, need: int) -> str:
    if isinstance(r, Epsilon) and need > AND_P:
        return "()"
    text = _show(r, need)
    return f"({text})" if precedence(r) < need else text


def _show(r: Regex, need: int = ALT_P) -> str:
    if isinstance(r, Empty):
        return "[]"
    if isinstance(r, Epsilon):
        return ""
    if isinstance(r, Literal):
        return escape_char(r.char)
    if isinstance(r, Const):
        return "".join(escape_char(c) for c in r.text)
    if isinstance(r, CharClass):
        return class_text(r)
    if isinstance(r, Group):
        return "(" + _show(r.child, ALT_P) + ")"
    if isinstance(r, Alt):
        return _wrap(r.left, ALT_P) + "|" + _wrap(r.right, ALT_P)
    if isinstance(r, And):
        return _wrap(r.left, AND_P) + "&" + _wrap(r.right, AND_P)
    if isinstance(r, Concat):
        return _wrap(r.left, CAT_P) + _wrap(r.right, CAT_P)
    if isinstance(r, Not):
        return "~" + _wrap(r.child, UNARY_P)
    if isinstance(r, Repeat):
        return _wrap(r.child, ATOM_P) + quantifier_text(r.min, r.max, r.hint)
    raise TypeError(f"not a regex node: {r!r}")


# --------------------------------------------------------------------------
# Metrics


@dataclass(frozen=True)
class RegexMetrics:
    ast_size: int
    depth: int
    length: int


def ast_size(r: Regex) -> int:
    return sum(1 for _ in walk(r))


def depth(r: Regex) -> int:
    kids = children(r)
    return 1 + (max(depth(k) for k in kids) if kids else 0)


def metrics(r: Regex) -> RegexMetrics:
    return RegexMetrics(ast_size(r), depth(r), len(to_string(r)))


__all__ = [
    "Alphabet", "PRINTABLE", "INF", "Regex", "Empty", "Epsilon", "Literal", "CharClass",
    "Const", "Concat", "Alt", "And", "Not", "Repeat", "Group", "parse", "validate",
    "to_string", "metrics", "RegexMetrics", "concat", "literals", "dot_class",
    "is_dot_star", "children", "walk", "quantifier_text", "class_text", "ast_size",
]
