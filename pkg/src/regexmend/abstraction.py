"""Abstraction of concrete regexes into symbolic token trees and back.

Rewriting rules by level (``r`` is a character class or a literal string):

    level 0:  [C] -> <C_C>   {m,n} -> <Q_{m,n}>   const -> <C_const>   .* -> <S>
    level 1:  ~(r) -> <N_r>  .*r -> <SL_r>  r.* -> <SR_r>  .*r.* -> <SLR_r>
    level 2:  ~(.*r) -> <NSL_r>  ~(r.*) -> <NSR_r>  ~(.*r.*) -> <NSLR_r>

Preprocessing applies the highest enabled level first, scanning left to right
and preferring the longest match.  Tokens are content-addressed, so equal
sub-regexes share a token, and the dictionary maps every token back to its
concrete text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

from .errors import UnknownToken
from .syntax import (
    PRINTABLE,
    UNARY_P,
    ATOM_P,
    Alphabet,
    Alt,
    And,
    CharClass,
    Concat,
    Const,
    Empty,
    Epsilon,
    Group,
    Literal,
    Not,
    Regex,
    Repeat,
    class_text,
    escape_char,
    is_dot_star,
    parse,
    precedence,
    quantifier_text,
)

ALIASES = {
    "NUM": "[0-9]",
    "LET": "[A-Za-z]",
    "CAP": "[A-Z]",
    "VOW": "[AEIOUaeiou]",
    "S": ".*",
}
_ALIAS_BY_TEXT = {text: name for name, text in ALIASES.items()}

SEPARATORS = ("|", "&")


# --------------------------------------------------------------------------
# Abstract trees


@dataclass(frozen=True)
class Item:
    """One element or bracketed group, with its ``~`` prefixes and quantifier token."""

    atom: Union[str, "Seq"]
    neg: int = 0
    quant: Optional[str] = None

    @property
    def is_group(self) -> bool:
        return isinstance(self.atom, Seq)


@dataclass(frozen=True)
class Seq:
    """Contents of a bracket pair (or the whole regex): items and separators."""

    parts: tuple = ()

    def items(self):
        return [(i, p) for i, p in enumerate(self.parts) if isinstance(p, Item)]


def show(node: Union[Seq, Item, str]) -> str:
    if isinstance(node, str):
        return node if node in SEPARATORS else f"⟨{node}⟩"
    if isinstance(node, Seq):
        return "".join(show(p) for p in node.parts)
    atom = "(" + show(node.atom) + ")" if node.is_group else show(node.atom)
    return "~" * node.neg + atom + (show(node.quant) if node.quant else "")


def token_level(name: str) -> int:
    head = name.split("_", 1)[0]
    if head in ("NSL", "NSR", "NSLR"):
        return 2
    if head in ("N", "SL", "SR", "SLR"):
        return 1
    return 0


def is_quantifier_token(name: str) -> bool:
    return name.startswith("Q_")


# --------------------------------------------------------------------------
# Dictionary


@dataclass(frozen=True)
class RewriteDictionary:
    """Per-level token -> concrete text maps; the fixed aliases are always known."""

    levels: tuple = ((), (), ())

    def __post_init__(self):
        object.__setattr__(
            self, "levels", tuple(tuple(sorted(dict(lv).items())) for lv in self.levels)
        )
        for lv in self.levels:
            texts = [text for _, text in lv]
            if len(set(texts)) != len(texts):
                raise ValueError("dictionary level is not bijective")

    def level(self, l: int) -> dict:
        return dict(self.levels[l])

    def lookup(self, token: str) -> str:
        for lv in self.levels:
            for name, text in lv:
                if name == token:
                    return text
        if token in ALIASES:
            return ALIASES[token]
        raise UnknownToken(token)

    def __contains__(self, token: str) -> bool:
        try:
            self.lookup(token)
        except UnknownToken:
            return False
        return True

    def tokens(self) -> list:
        return [name for lv in self.levels for name, _ in lv]

    def elements(self) -> list:
        """Element tokens (everything but quantifiers), including the aliases."""
        names = [t for t in self.tokens() if not is_quantifier_token(t)]
        for alias in ALIASES:
            if alias not in names:
                names.append(alias)
        return sorted(names)

    def quantifiers(self) -> list:
        return sorted(t for t in self.tokens() if is_quantifier_token(t))

    def merge(self, other: "RewriteDictionary") -> "RewriteDictionary":
        merged = [self.level(l) for l in range(3)]
        for l in range(3):
            for name, text in other.levels[l]:
                if merged[l].get(name, text) != text:
                    raise ValueError(f"conflicting entries for token {name}")
                merged[l][name] = text
        return RewriteDictionary(tuple(merged))

    def with_tokens(self, entries: dict) -> "RewriteDictionary":
        """Add ``token -> text`` entries, each at its own level."""
        merged = [self.level(l) for l in range(3)]
        for name, text in entries.items():
            merged[token_level(name)][name] = text
        return RewriteDictionary(tuple(merged))


def quantifier_token(lo: int, hi: Optional[int], hint: str = "") -> tuple[str, str]:
    """Token name and text for a bound pair; explicit ``{m,n}``/``{m,}`` form by default."""
    text = quantifier_text(lo, hi, hint or ("{m,n}" if hi is not None else "{m,}"))
    return "Q_" + text, text


@dataclass(frozen=True)
class AbstractRegex:
    body: Seq
    dictionary: RewriteDictionary
    l_max: int = 0

    def __str__(self) -> str:
        return show(self.body)

    def tokens(self) -> list:
        out = []

        def visit(seq: Seq):
            for p in seq.parts:
                if isinstance(p, Item):
                    if p.is_group:
                        visit(p.atom)
                    else:
                        out.append(p.atom)
                    if p.quant:
                        out.append(p.quant)

        visit(self.body)
        return out


# --------------------------------------------------------------------------
# Preprocess


def _r_unit(u) -> Optional[tuple[str, str]]:
    """(level-0 name, text) when ``u`` is a class or a literal string, else None."""
    if isinstance(u, str):
        text = "".join(escape_char(c) for c in u)
        return "C_" + text, text
    if isinstance(u, CharClass) and not u.dot:
        text = class_text(u)
        return _ALIAS_BY_TEXT.get(text, "C_" + text), text
    return None


_SHAPES = {
    "N": "~({})",
    "SL": ".*{}",
    "SR": "{}.*",
    "SLR": ".*{}.*",
    "NSL": "~(.*{})",
    "NSR": "~({}.*)",
    "NSLR": "~(.*{}.*)",
}


class _Abstractor:
    def __init__(self, l_max: int, alphabet: Alphabet):
        self.l_max = l_max
        self.alphabet = alphabet
        self.entries: dict[str, str] = {}

    def token(self, name: str, text: str) -> str:
        self.entries[name] = text
        return name

    def shaped(self, shape: str, unit) -> Item:
        """Token for a level-1/2 shape around ``unit``; lower-level counterparts are recorded too."""
        name, text = _r_unit(unit)
        self.token(name, text)
        if shape.startswith("NS"):
            self.token(shape[1:] + "_" + name, _SHAPES[shape[1:]].format(text))
        return Item(self.token(shape + "_" + name, _SHAPES[shape].format(text)))

    def seq(self, r: Regex) -> Seq:
        return Seq(tuple(self.alt_parts(r)))

    def alt_parts(self, r: Regex) -> list:
        if isinstance(r, Alt):
            return self.alt_parts(r.left) + ["|"] + self.alt_parts(r.right)
        return self.and_parts(r)

    def and_parts(self, r: Regex) -> list:
        if isinstance(r, And):
            return self.and_parts(r.left) + ["&"] + self.and_parts(r.right)
        if isinstance(r, Alt):
            return [Item(self.seq(r))]
        return self.cat_items(r)

    def units(self, r: Regex) -> list:
        """Flatten a concatenation; runs of literals become one string unit."""
        flat: list = []

        def visit(n):
            if isinstance(n, Concat):
                visit(n.left)
                visit(n.right)
            elif not isinstance(n, Epsilon):
                flat.append(n)

        visit(r)
        units: list = []
        for n in flat:
            text = n.char if isinstance(n, Literal) else n.text if isinstance(n, Const) else None
            if text is not None and units and isinstance(units[-1], str):
                units[-1] += text
            elif text is not None:
                units.append(text)
            else:
                units.append(n)
        return units

    def cat_items(self, r: Regex) -> list:
        units = self.units(r)
        items = []
        i = 0
        while i < len(units):
            if self.l_max >= 1:
                matched = self.shift_rule(units, i)
                if matched:
                    item, width = matched
                    items.append(item)
                    i += width
                    continue
            items.append(self.item(units[i]))
            i += 1
        return items

    def shift_rule(self, units: list, i: int):
        star = lambda k: k < len(units) and not isinstance(units[k], str) and is_dot_star(units[k])
        unit = lambda k: _r_unit(units[k]) if k < len(units) else None
        if star(i) and unit(i + 1):
            if star(i + 2):
                return self.shaped("SLR", units[i + 1]), 3
            return self.shaped("SL", units[i + 1]), 2
        if unit(i) and star(i + 1):
            return self.shaped("SR", units[i]), 2
        return None

    def item(self, u) -> Item:
        if isinstance(u, (Literal, Const)):
            u = u.char if isinstance(u, Literal) else u.text
        if isinstance(u, str):
            name, text = _r_unit(u)
            return Item(self.token(name, text))
        if isinstance(u, CharClass):
            if u.dot:
                return Item(self.token("C_Σ", "."))
            name, text = _r_unit(u)
            return Item(self.token(name, text))
        if isinstance(u, Empty):
            return Item(self.token("C_∅", "[]"))
        if is_dot_star(u):
            return Item(self.token("S", ".*"))
        if isinstance(u, Group):
            return Item(self.seq(u.child))
        if isinstance(u, Repeat):
            inner = self.item(u.child)
            if inner.neg or inner.quant or (not inner.is_group and isinstance(u.child, (Concat, Const))):
                inner = Item(Seq((inner,)))
            text = quantifier_text(u.min, u.max, u.hint)
            return Item(inner.atom, inner.neg, self.token("Q_" + text, text))
        if isinstance(u, Not):
            special = self.negation_rule(u)
            if special is not None:
                return special
            inner = self.item(u.child)
            if not inner.is_group and isinstance(u.child, (Concat, Const)):
                inner = Item(Seq((inner,)))
            return Item(inner.atom, inner.neg + 1, inner.quant)
        if isinstance(u, (Concat, Alt, And, Epsilon)):
            return Item(self.seq(u))
        raise TypeError(f"not a regex node: {u!r}")

    def negation_rule(self, u: Not) -> Optional[Item]:
        if self.l_max < 1 or not isinstance(u.child, Group):
            return None
        units = self.units(u.child.child)
        if any(isinstance(x, (Alt, And)) for x in units):
            return None
        star = [not isinstance(x, str) and is_dot_star(x) for x in units]
        if self.l_max >= 2:
            if len(units) == 3 and star[0] and star[2] and _r_unit(units[1]):
                return self.shaped("NSLR", units[1])
            if len(units) == 2 and star[0] and _r_unit(units[1]):
                return self.shaped("NSL", units[1])
            if len(units) == 2 and star[1] and _r_unit(units[0]):
                return self.shaped("NSR", units[0])
        if len(units) == 1 and _r_unit(units[0]):
            return self.shaped("N", units[0])
        return None


def preprocess(r: Regex, l_max: int = 2, alphabet: Alphabet = PRINTABLE) -> AbstractRegex:
    """Abstract ``r`` with rewriting rules of levels ``l_max`` down to 0."""
    if l_max not in (0, 1, 2):
        raise ValueError("l_max must be 0, 1 or 2")
    ab = _Abstractor(l_max, alphabet)
    body = ab.seq(r)
    return AbstractRegex(body, RewriteDictionary().with_tokens(ab.entries), l_max)


# --------------------------------------------------------------------------
# Unpreprocess


@lru_cache(maxsize=4096)
def _text_precedence(text: str) -> int:
    return precedence(parse(text))


def concrete_text(node: Union[Seq, Item], dictionary: RewriteDictionary) -> str:
    if isinstance(node, Seq):
        return "".join(
            p if isinstance(p, str) else concrete_text(p, dictionary) for p in node.parts
        )
    if node.is_group:
        atom = "(" + concrete_text(node.atom, dictionary) + ")"
    else:
        atom = dictionary.lookup(node.atom)
        need = ATOM_P if node.quant else UNARY_P if node.neg else None
        if need is not None and _text_precedence(atom) < need:
            atom = f"({atom})"
    quant = dictionary.lookup(node.quant) if node.quant else ""
    return "~" * node.neg + atom + quant


def unpreprocess(a: AbstractRegex, alphabet: Alphabet = PRINTABLE) -> Regex:
    """Substitute every token by its dictionary text and parse the result."""
    return parse(concrete_text(a.body, a.dictionary), alphabet)


__all__ = [
    "ALIASES", "Item", "Seq", "AbstractRegex", "RewriteDictionary", "preprocess",
    "unpreprocess", "concrete_text", "show", "token_level", "quantifier_token",
]
