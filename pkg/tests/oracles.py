"""Reference implementations that share no code with the engine under test."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from regexmend.syntax import (
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
    Repeat,
)


def ends(r, w: str, i: int, alphabet) -> frozenset:
    """End positions j with w[i:j] in L(r), by structural recursion on the AST."""
    n = len(w)
    if isinstance(r, Empty):
        return frozenset()
    if isinstance(r, Epsilon):
        return frozenset({i})
    if isinstance(r, Literal):
        return frozenset({i + 1}) if i < n and w[i] == r.char else frozenset()
    if isinstance(r, Const):
        return frozenset({i + len(r.text)}) if w.startswith(r.text, i) else frozenset()
    if isinstance(r, CharClass):
        return frozenset({i + 1}) if i < n and w[i] in r.members(alphabet) else frozenset()
    if isinstance(r, Group):
        return ends(r.child, w, i, alphabet)
    if isinstance(r, Concat):
        return frozenset(k for j in ends(r.left, w, i, alphabet) for k in ends(r.right, w, j, alphabet))
    if isinstance(r, Alt):
        return ends(r.left, w, i, alphabet) | ends(r.right, w, i, alphabet)
    if isinstance(r, And):
        return ends(r.left, w, i, alphabet) & ends(r.right, w, i, alphabet)
    if isinstance(r, Not):
        return frozenset(range(i, n + 1)) - ends(r.child, w, i, alphabet)
    if isinstance(r, Repeat):
        level = frozenset({i})
        out = set(level) if r.min == 0 else set()
        k = 0
        seen_levels = set()
        while r.max is None or k < r.max:
            k += 1
            level = frozenset(e for p in level for e in ends(r.child, w, p, alphabet))
            if k >= r.min:
                out |= level
            if not level or (k >= r.min and level in seen_levels):
                break
            if k >= r.min:
                seen_levels.add(level)
        return frozenset(out)
    raise TypeError(r)


def brute_matches(r, w: str, alphabet) -> bool:
    return len(w) in ends(r, w, 0, alphabet)


def all_strings(symbols, max_len: int) -> list:
    out = [""]
    for n in range(1, max_len + 1):
        out.extend("".join(t) for t in itertools.product(symbols, repeat=n))
    return out


def bounded_language(r, alphabet, max_len: int) -> frozenset:
    return frozenset(w for w in all_strings(alphabet.chars, max_len) if brute_matches(r, w, alphabet))


def count_fitness(accepts, positive, negative) -> Fraction:
    """The score written out longhand from its four counts."""
    tp = fn = tn = fp = 0
    for w in positive:
        if accepts(w):
            tp += 1
        else:
            fn += 1
    for w in negative:
        if accepts(w):
            fp += 1
        else:
            tn += 1
    return Fraction(tp + tn - fp - fn, tp + tn + fp + fn)


def levenshtein(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 or j == 0:
            return i + j
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


# --------------------------------------------------------------------------
# Exhaustive enumeration over a two-letter alphabet with bitset languages


class SmallUniverse:
    """All strings over ``symbols`` up to ``max_len``; languages are int bitsets over them.

    The set is closed under substrings, so concatenation, star, intersection and
    complement restricted to it are exact.
    """

    def __init__(self, symbols: str, max_len: int):
        self.strings = all_strings(symbols, max_len)
        self.index = {w: i for i, w in enumerate(self.strings)}
        self.max_len = max_len
        self.full = (1 << len(self.strings)) - 1
        self._cat: dict = {}

    def members(self, bits: int):
        i = 0
        while bits:
            if bits & 1:
                yield self.strings[i]
            bits >>= 1
            i += 1

    def single(self, w: str) -> int:
        return 1 << self.index[w]

    def cat(self, x: int, y: int) -> int:
        key = (x, y)
        if key not in self._cat:
            out = 0
            ys = list(self.members(y))
            for u in self.members(x):
                room = self.max_len - len(u)
                for v in ys:
                    if len(v) <= room:
                        out |= 1 << self.index[u + v]
            self._cat[key] = out
        return self._cat[key]

    def star(self, x: int) -> int:
        out = self.single("")
        while True:
            nxt = out | self.cat(out, x)
            if nxt == out:
                return out
            out = nxt


def enumerate_small_regexes(universe: SmallUniverse, max_size: int):
    """Yield (regex AST, language bitset) for every tree of at most ``max_size`` nodes.

    Leaves are the letters a and b; unary nodes are ~ and *; binary nodes are
    concatenation, | and &.
    """
    by_size: dict = {1: [(Literal(c), universe.single(c)) for c in "ab"]}
    for size in range(2, max_size + 1):
        level = []
        for child, lang in by_size[size - 1]:
            level.append((Not(child), universe.full & ~lang))
            level.append((Repeat(child, 0, None), universe.star(lang)))
        for left_size in range(1, size - 1):
            right_size = size - 1 - left_size
            for left, ll in by_size[left_size]:
                for right, rl in by_size[right_size]:
                    level.append((Concat(left, right), universe.cat(ll, rl)))
                    level.append((Alt(left, right), ll | rl))
                    level.append((And(left, right), ll & rl))
        by_size[size] = level
    for size in range(1, max_size + 1):
        yield from by_size[size]


def random_regex(rng, letters: str = "ab", depth: int = 3):
    """A seeded random AST with every node kind; small bounds keep languages short."""
    if depth == 0 or rng.random() < 0.25:
        pick = rng.random()
        if pick < 0.7:
            return Literal(rng.choice(letters))
        if pick < 0.85:
            return CharClass(frozenset(rng.sample(letters, rng.randint(1, len(letters)))), rng.random() < 0.3)
        return rng.choice([Epsilon(), Empty()])
    kind = rng.randrange(6)
    sub = lambda: random_regex(rng, letters, depth - 1)
    if kind == 0:
        return Concat(sub(), sub())
    if kind == 1:
        return Alt(sub(), sub())
    if kind == 2:
        return And(sub(), sub())
    if kind == 3:
        return Not(sub())
    if kind == 4:
        return Group(sub())
    lo = rng.randint(0, 2)
    return Repeat(sub(), lo, rng.choice([None, lo, lo + 1, lo + 2]))
