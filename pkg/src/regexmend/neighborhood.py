"""Single-edit neighborhoods of abstract regexes.

Ten transformation kinds rewrite the token tree of an abstract regex.  Every
member is checked by substituting the dictionary and parsing; members that do
not parse are dropped.  The member order only depends on the input, never on
how many worker threads generated it.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

from .abstraction import (
    ALIASES,
    SEPARATORS,
    AbstractRegex,
    Item,
    RewriteDictionary,
    Seq,
    concrete_text,
    quantifier_token,
    show,
)
from .engine import deriv, to_term
from .errors import RegexError
from .evaluation import ExampleSet
from .syntax import PRINTABLE, Alphabet, Regex, parse

DEFAULT_CAP = 20000


class TransformationKind(enum.Enum):
    BinaryElementInsertion = 1
    ElementDeletion = 2
    ElementReplacement = 3
    QuantifierInsertion = 4
    QuantifierModification = 5
    QuantifierAdjustment = 6
    OperatorInsertion = 7
    OperatorDeletion = 8
    ElementAdjustment = 9
    ElementExchanging = 10


ALL_KINDS = frozenset(TransformationKind)


@dataclass(frozen=True)
class QuantifierBounds:
    min: int
    max: Optional[int]  # None is unbounded

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < self.min):
            raise ValueError(f"bad bounds {self.min},{self.max}")

    def token(self) -> tuple[str, str]:
        return quantifier_token(self.min, self.max)


@dataclass(frozen=True)
class Site:
    """Where a transformation applies: an element, a bracketed group or an insertion slot."""

    kind: str  # "element" | "group" | "slot"
    path: tuple  # indexes of enclosing group items, outermost first
    index: int


@dataclass(frozen=True)
class Member:
    abstract: AbstractRegex
    kind: TransformationKind
    site: str
    concrete: Regex
    text: str


@dataclass(frozen=True)
class Neighborhood:
    origin: AbstractRegex
    members: tuple
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


# --------------------------------------------------------------------------
# Tree plumbing


def _seq_at(root: Seq, path: tuple) -> Seq:
    for i in path:
        root = root.parts[i].atom
    return root


def _splice(seq: Seq, path: tuple, start: int, stop: int, new: Iterable) -> Seq:
    if not path:
        return Seq(seq.parts[:start] + tuple(new) + seq.parts[stop:])
    i = path[0]
    item = seq.parts[i]
    inner = _splice(item.atom, path[1:], start, stop, new)
    return Seq(seq.parts[:i] + (Item(inner, item.neg, item.quant),) + seq.parts[i + 1:])


def _set_item(root: Seq, path: tuple, i: int, item: Item) -> Seq:
    return _splice(root, path, i, i + 1, (item,))


def _seqs(root: Seq, path: tuple = ()) -> Iterator[tuple[tuple, Seq]]:
    yield path, root
    for i, p in enumerate(root.parts):
        if isinstance(p, Item) and p.is_group:
            yield from _seqs(p.atom, path + (i,))


def _items(root: Seq) -> Iterator[tuple[tuple, int, Item]]:
    for path, seq in _seqs(root):
        for i, p in seq.items():
            yield path, i, p


def _contains(outer: tuple, inner: tuple) -> bool:
    """Whether the item at ``outer`` (path + index) encloses the item at ``inner``."""
    return inner[0][: len(outer[0]) + 1] == outer[0] + (outer[1],)


def element_sites(a: Union[AbstractRegex, Seq]) -> list[Site]:
    """Element positions, bracketed groups and insertion slots, in tree order."""
    body = a.body if isinstance(a, AbstractRegex) else a
    if not body.parts:
        raise ValueError("the abstract regex is empty")
    sites = []
    for path, seq in _seqs(body):
        for i, p in seq.items():
            sites.append(Site("group" if p.is_group else "element", path, i))
        sites.extend(Site("slot", path, pos) for pos in range(len(seq.parts) + 1))
    return sites


# --------------------------------------------------------------------------
# Quantifier bounds


def _max_run(term, w: str) -> int:
    """Largest number of back-to-back nonempty matches of ``term`` inside ``w``."""
    n = len(w)
    best = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        t = term
        for j in range(i, n):
            t = deriv(t, w[j])
            if t.kind == 0:  # dead
                break
            if t.nullable:
                best[i] = max(best[i], 1 + best[j + 1])
    return max(best)


def _bounds_for(r: Regex, positives: tuple, alphabet: Alphabet) -> list[QuantifierBounds]:
    if not positives:
        return []
    term = to_term(r, alphabet)
    runs = [_max_run(term, w) for w in positives]
    lo, hi = min(runs), max(runs)
    out = []
    for b in ((lo, hi), (lo, None), (hi, None), (lo, lo)):
        qb = QuantifierBounds(*b)
        if qb not in out:
            out.append(qb)
    return out


def infer_quantifier_bounds(
    element: Union[str, Regex],
    ex: ExampleSet,
    dictionary: Optional[RewriteDictionary] = None,
    alphabet: Alphabet = PRINTABLE,
) -> list[QuantifierBounds]:
    """Candidate bounds from the longest run of consecutive matches in each positive."""
    if isinstance(element, str):
        element = parse((dictionary or RewriteDictionary()).lookup(element), alphabet)
    return _bounds_for(element, ex.positive, alphabet)


# --------------------------------------------------------------------------
# Transformations
#
# Each generator yields (site description, new body).


CANDIDATE_POLICIES = ("dictionary+aliases", "dictionary", "aliases-at-level-0")


def candidate_set(a: AbstractRegex, policy: str = "dictionary+aliases") -> list[str]:
    """Element tokens offered for insertion and replacement.

    ``dictionary`` uses the element tokens of ``a`` itself; the other policies
    add the fixed aliases, always or only when ``a`` was abstracted at level 0.
    """
    if policy not in CANDIDATE_POLICIES:
        raise ValueError(f"unknown candidate policy {policy!r}")
    names = [t for t in dict.fromkeys(a.tokens()) if not t.startswith("Q_")]
    if policy == "dictionary+aliases" or (policy == "aliases-at-level-0" and a.l_max == 0):
        names += [n for n in ALIASES if n not in names]
    return sorted(names)


class _Context:
    def __init__(self, a: AbstractRegex, ex: ExampleSet, alphabet: Alphabet, policy: str):
        self.a = a
        self.ex = ex
        self.alphabet = alphabet
        self.candidates = candidate_set(a, policy)
        self.sugar = ["Q_?", "Q_*", "Q_+"]
        self.known_q = a.dictionary.quantifiers()
        self.new_q: dict[str, str] = {"Q_?": "?", "Q_*": "*", "Q_+": "+"}
        self._bounds: dict[str, list[str]] = {}

    def quantifiers_for(self, item: Item) -> list[str]:
        atom = item.atom
        key = show(atom) if isinstance(atom, Seq) else atom
        if key not in self._bounds:
            text = concrete_text(atom, self.a.dictionary) if isinstance(atom, Seq) else self.a.dictionary.lookup(atom)
            try:
                bounds = _bounds_for(parse(text, self.alphabet), self.ex.positive, self.alphabet)
            except RegexError:
                bounds = []
            names = []
            for b in bounds:
                name, qtext = b.token()
                self.new_q[name] = qtext
                names.append(name)
            self._bounds[key] = names
        return self._bounds[key]


def _binary_insertion(ctx: _Context):
    root = ctx.a.body
    for path, seq in _seqs(root):
        n = len(seq.parts)
        for pos in range(n + 1):
            left_sep = pos > 0 and seq.parts[pos - 1] in SEPARATORS
            right_sep = pos < n and seq.parts[pos] in SEPARATORS
            for cand in ctx.candidates:
                e = Item(cand)
                yield f"slot {path}:{pos} {cand}", _splice(root, path, pos, pos, (e,))
                for op in SEPARATORS:
                    if pos > 0 and not left_sep:
                        yield f"slot {path}:{pos} {op}{cand}", _splice(root, path, pos, pos, (op, e))
                    if pos < n and not right_sep:
                        yield f"slot {path}:{pos} {cand}{op}", _splice(root, path, pos, pos, (e, op))


def _deletion(ctx: _Context):
    root = ctx.a.body
    for path, i, _ in _items(root):
        parts = _seq_at(root, path).parts
        yield f"item {path}:{i}", _splice(root, path, i, i + 1, ())
        if i > 0 and parts[i - 1] in SEPARATORS:
            yield f"item {path}:{i} with left operator", _splice(root, path, i - 1, i + 1, ())
        if i + 1 < len(parts) and parts[i + 1] in SEPARATORS:
            yield f"item {path}:{i} with right operator", _splice(root, path, i, i + 2, ())


def _replacement(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        for cand in ctx.candidates:
            if item.atom != cand:
                yield f"item {path}:{i} -> {cand}", _set_item(root, path, i, Item(cand, item.neg, item.quant))


def _quantifier_insertion(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        if item.quant is None:
            for q in ctx.quantifiers_for(item):
                yield f"item {path}:{i} {q}", _set_item(root, path, i, Item(item.atom, item.neg, q))


def _quantifier_modification(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        if item.quant is None:
            continue
        options = list(dict.fromkeys(ctx.quantifiers_for(item) + ctx.sugar + ctx.known_q))
        for q in options:
            if q != item.quant:
                yield f"item {path}:{i} {item.quant}->{q}", _set_item(root, path, i, Item(item.atom, item.neg, q))


def _quantifier_adjustment(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        if item.quant is None:
            continue
        q = item.quant
        bare = Item(item.atom, item.neg)
        starts = [("kept", _set_item(root, path, i, bare), (path, i))]
        if item.is_group and item.neg == 0 and not any(p in SEPARATORS for p in item.atom.parts):
            starts.append(("unwrapped", _splice(root, path, i, i + 1, item.atom.parts), None))
        for how, base, source in starts:
            for tpath, j, target in _items(base):
                if (tpath, j) == source:
                    continue
                site = f"{q} from {path}:{i} ({how}) to {tpath}:{j}"
                if target.quant is None:
                    yield site, _set_item(base, tpath, j, Item(target.atom, target.neg, q))
                yield site + " bracketed", _set_item(base, tpath, j, Item(Seq((target,)), 0, q))


def _operator_insertion(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        yield f"~ on {path}:{i}", _set_item(root, path, i, Item(item.atom, item.neg + 1, item.quant))
    for path, seq in _seqs(root):
        for pos in range(1, len(seq.parts)):
            if isinstance(seq.parts[pos - 1], Item) and isinstance(seq.parts[pos], Item):
                for op in SEPARATORS:
                    yield f"{op} at {path}:{pos}", _splice(root, path, pos, pos, (op,))


def _operator_deletion(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        if item.neg:
            yield f"~ off {path}:{i}", _set_item(root, path, i, Item(item.atom, item.neg - 1, item.quant))
        if item.quant:
            yield f"{item.quant} off {path}:{i}", _set_item(root, path, i, Item(item.atom, item.neg))
        if item.is_group and not item.neg and not item.quant:
            yield f"brackets off {path}:{i}", _splice(root, path, i, i + 1, item.atom.parts)
    for path, seq in _seqs(root):
        for pos, p in enumerate(seq.parts):
            if p in SEPARATORS:
                yield f"{p} off {path}:{pos}", _splice(root, path, pos, pos + 1, ())


def _element_adjustment(ctx: _Context):
    root = ctx.a.body
    for path, i, item in _items(root):
        if item.is_group:
            continue
        base = _splice(root, path, i, i + 1, ())
        for tpath, seq in _seqs(base):
            for pos in range(len(seq.parts) + 1):
                yield f"move {path}:{i} to {tpath}:{pos}", _splice(base, tpath, pos, pos, (item,))


def _exchanging(ctx: _Context):
    root = ctx.a.body
    items = list(_items(root))
    for x in range(len(items)):
        for y in range(x + 1, len(items)):
            pa, ia, a = items[x]
            pb, ib, b = items[y]
            if _contains((pa, ia), (pb, ib)) or _contains((pb, ib), (pa, ia)):
                continue
            site = f"swap {pa}:{ia} {pb}:{ib}"
            yield site, _set_item(_set_item(root, pa, ia, b), pb, ib, a)
            if a.atom != b.atom:
                yield site + " atoms", _set_item(
                    _set_item(root, pa, ia, Item(b.atom, a.neg, a.quant)), pb, ib, Item(a.atom, b.neg, b.quant)
                )


_GENERATORS = {
    TransformationKind.BinaryElementInsertion: _binary_insertion,
    TransformationKind.ElementDeletion: _deletion,
    TransformationKind.ElementReplacement: _replacement,
    TransformationKind.QuantifierInsertion: _quantifier_insertion,
    TransformationKind.QuantifierModification: _quantifier_modification,
    TransformationKind.QuantifierAdjustment: _quantifier_adjustment,
    TransformationKind.OperatorInsertion: _operator_insertion,
    TransformationKind.OperatorDeletion: _operator_deletion,
    TransformationKind.ElementAdjustment: _element_adjustment,
    TransformationKind.ElementExchanging: _exchanging,
}


def neighbors(
    a: AbstractRegex,
    ex: ExampleSet,
    kinds: Iterable[TransformationKind] = ALL_KINDS,
    alphabet: Alphabet = PRINTABLE,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    policy: str = "dictionary+aliases",
) -> Neighborhood:
    """All valid single-edit variants of ``a`` for the requested transformation kinds."""
    kinds = sorted(set(kinds), key=lambda k: k.value)
    ctx = _Context(a, ex, alphabet, policy)
    # bounds are memoized on the context, so fill them before any fan-out
    for _, _, item in _items(a.body):
        ctx.quantifiers_for(item)

    def run(kind):
        return [(kind, site, body) for site, body in _GENERATORS[kind](ctx)]

    if workers > 1 and len(kinds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run, kinds))
    else:
        batches = [run(k) for k in kinds]

    dictionary = a.dictionary.with_tokens(ctx.new_q)
    seen = {a.body}
    members = []
    truncated = False
    for batch in batches:
        for kind, site, body in batch:
            if body in seen:
                continue
            seen.add(body)
            text = concrete_text(body, dictionary)
            try:
                concrete = _parse_cached(text, alphabet)
            except RegexError:
                continue
            if len(members) >= cap:
                truncated = True
                break
            members.append(Member(AbstractRegex(body, dictionary, a.l_max), kind, site, concrete, text))
        if truncated:
            break
    return Neighborhood(a, tuple(members), truncated)


@lru_cache(maxsize=65536)
def _parse_cached(text: str, alphabet: Alphabet) -> Regex:
    return parse(text, alphabet)


__all__ = [
    "TransformationKind", "ALL_KINDS", "QuantifierBounds", "Site", "Member", "Neighborhood",
    "element_sites", "infer_quantifier_bounds", "neighbors", "DEFAULT_CAP",
]
