"""Language semantics: derivative matching, DFA construction, equivalence, sampling.

Regexes are lowered to hash-consed terms kept in similarity normal form
(flattened, deduplicated ``|``/``&`` operands, ∅/ε absorption), which makes
the set of iterated derivatives of any term finite.  Each term memoizes its
own derivatives, so repeated matching against related regexes shares work.
"""

from __future__ import annotations

import random
import threading
import weakref
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .errors import (
    AlphabetViolation,
    BudgetExceeded,
    EmptyLanguage,
    InsufficientLanguage,
    QuantifierTooLarge,
)
from .syntax import (
    PRINTABLE,
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
    walk,
)

EMPTY_K, EPS_K, SET_K, CAT_K, OR_K, AND_K, NOT_K, REP_K = range(8)


@dataclass(frozen=True)
class EngineBudget:
    max_states: int = 10000
    max_quantifier_bound: int = 1000

    def __post_init__(self):
        if self.max_states < 1 or self.max_quantifier_bound < 1:
            raise ValueError("engine budgets must be >= 1")


DEFAULT_BUDGET = EngineBudget()


# --------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ("kind", "args", "nullable", "_hash", "deriv_cache", "_sets", "__weakref__")

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Term({self.kind}, {self.args!r})"


_table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()
_table_lock = threading.Lock()


def _mk(kind: int, args, nullable: bool) -> Term:
    key = (kind, args)
    with _table_lock:
        t = _table.get(key)
        if t is None:
            t = Term()
            t.kind = kind
            t.args = args
            t.nullable = nullable
            t._hash = hash(key)
            t.deriv_cache = {}
            t._sets = None
            _table[key] = t
    return t


EMPTY = _mk(EMPTY_K, (), False)
EPS = _mk(EPS_K, (), True)


def chars(s: frozenset) -> Term:
    return _mk(SET_K, s, False) if s else EMPTY


def neg(t: Term) -> Term:
    if t.kind == NOT_K:
        return t.args[0]
    return _mk(NOT_K, (t,), not t.nullable)


TOP = neg(EMPTY)


def cat(a: Term, b: Term) -> Term:
    if a is EMPTY or b is EMPTY:
        return EMPTY
    if a is EPS:
        return b
    if b is EPS:
        return a
    if a.kind == CAT_K:
        return cat(a.args[0], cat(a.args[1], b))
    return _mk(CAT_K, (a, b), a.nullable and b.nullable)


def alt(terms: Iterable[Term]) -> Term:
    out: set[Term] = set()
    merged: Optional[frozenset] = None
    stack = list(terms)
    while stack:
        t = stack.pop()
        if t.kind == OR_K:
            stack.extend(t.args)
        elif t is TOP:
            return TOP
        elif t.kind == SET_K:
            merged = t.args if merged is None else merged | t.args
        elif t is not EMPTY:
            out.add(t)
    if merged is not None:
        out.add(chars(merged))
    if not out:
        return EMPTY
    if len(out) == 1:
        return next(iter(out))
    fs = frozenset(out)
    return _mk(OR_K, fs, any(t.nullable for t in fs))


def conj(terms: Iterable[Term]) -> Term:
    out: set[Term] = set()
    merged: Optional[frozenset] = None
    stack = list(terms)
    while stack:
        t = stack.pop()
        if t.kind == AND_K:
            stack.extend(t.args)
        elif t is EMPTY:
            return EMPTY
        elif t.kind == SET_K:
            merged = t.args if merged is None else merged & t.args
        elif t is not TOP:
            out.add(t)
    if merged is not None:
        if not merged:
            return EMPTY
        out.add(chars(merged))
    if not out:
        return TOP
    if len(out) == 1:
        return next(iter(out))
    fs = frozenset(out)
    return _mk(AND_K, fs, all(t.nullable for t in fs))


def rep(t: Term, lo: int, hi: Optional[int]) -> Term:
    if hi == 0 or t is EPS:
        return EPS
    if t is EMPTY:
        return EPS if lo == 0 else EMPTY
    if lo == 1 and hi == 1:
        return t
    if t.kind == REP_K and t.args[1] == 0 and t.args[2] is None and lo <= 1 and hi is None:
        return t
    return _mk(REP_K, (t, lo, hi), lo == 0 or t.nullable)


def deriv(t: Term, c: str) -> Term:
    d = t.deriv_cache.get(c)
    if d is None:
        d = _deriv(t, c)
        t.deriv_cache[c] = d
    return d


def _deriv(t: Term, c: str) -> Term:
    k = t.kind
    if k == SET_K:
        return EPS if c in t.args else EMPTY
    if k == CAT_K:
        head, tail = t.args
        d = cat(deriv(head, c), tail)
        if head.nullable:
            d = alt((d, deriv(tail, c)))
        return d
    if k == OR_K:
        return alt(deriv(x, c) for x in t.args)
    if k == AND_K:
        return conj(deriv(x, c) for x in t.args)
    if k == NOT_K:
        return neg(deriv(t.args[0], c))
    if k == REP_K:
        x, lo, hi = t.args
        return cat(deriv(x, c), rep(x, max(lo - 1, 0), None if hi is None else hi - 1))
    return EMPTY


def term_sets(t: Term) -> frozenset:
    """All character sets occurring in ``t``."""
    if t._sets is None:
        if t.kind == SET_K:
            t._sets = frozenset([t.args])
        elif t.kind in (CAT_K, NOT_K, REP_K):
            t._sets = frozenset().union(*(term_sets(a) for a in t.args if isinstance(a, Term)))
        elif t.kind in (OR_K, AND_K):
            t._sets = frozenset().union(*(term_sets(a) for a in t.args))
        else:
            t._sets = frozenset()
    return t._sets


@lru_cache(maxsize=8192)
def to_term(r: Regex, alphabet: Alphabet = PRINTABLE) -> Term:
    if isinstance(r, Empty):
        return EMPTY
    if isinstance(r, Epsilon):
        return EPS
    if isinstance(r, Literal):
        return chars(frozenset([r.char]) & alphabet.members)
    if isinstance(r, CharClass):
        return chars(r.members(alphabet))
    if isinstance(r, Const):
        out = EPS
        for ch in reversed(r.text):
            out = cat(chars(frozenset([ch]) & alphabet.members), out)
        return out
    if isinstance(r, Concat):
        return cat(to_term(r.left, alphabet), to_term(r.right, alphabet))
    if isinstance(r, Alt):
        return alt((to_term(r.left, alphabet), to_term(r.right, alphabet)))
    if isinstance(r, And):
        return conj((to_term(r.left, alphabet), to_term(r.right, alphabet)))
    if isinstance(r, Not):
        return neg(to_term(r.child, alphabet))
    if isinstance(r, Repeat):
        return rep(to_term(r.child, alphabet), r.min, r.max)
    if isinstance(r, Group):
        return to_term(r.child, alphabet)
    raise TypeError(f"not a regex node: {r!r}")


def from_term(t: Term, alphabet: Alphabet = PRINTABLE) -> Regex:
    from .syntax import to_string

    k = t.kind
    if k == EMPTY_K:
        return Empty()
    if k == EPS_K:
        return Epsilon()
    if k == SET_K:
        if len(t.args) == 1:
            return Literal(next(iter(t.args)))
        if t.args == alphabet.members:
            return CharClass(t.args, dot=True)
        return CharClass(t.args)
    if k == CAT_K:
        return Concat(from_term(t.args[0], alphabet), from_term(t.args[1], alphabet))
    if k in (OR_K, AND_K):
        parts = sorted((from_term(a, alphabet) for a in t.args), key=to_string)
        node = Alt if k == OR_K else And
        out = parts[0]
        for p in parts[1:]:
            out = node(out, p)
        return out
    if k == NOT_K:
        return Not(from_term(t.args[0], alphabet))
    x, lo, hi = t.args
    return Repeat(from_term(x, alphabet), lo, hi)


# --------------------------------------------------------------------------
# Matching


def derivative(r: Regex, c: str, alphabet: Alphabet = PRINTABLE) -> Regex:
    """The regex for ``{w | c·w ∈ L(r)}``, in similarity normal form."""
    if c not in alphabet:
        raise AlphabetViolation(c)
    return from_term(deriv(to_term(r, alphabet), c), alphabet)


def match_term(t: Term, w: str, alphabet: Alphabet = PRINTABLE) -> bool:
    members = alphabet.members
    for i, c in enumerate(w):
        if c not in members:
            raise AlphabetViolation(c, i)
        t = deriv(t, c)
        if t is EMPTY:
            # keep validating the rest of the string
            for j in range(i + 1, len(w)):
                if w[j] not in members:
                    raise AlphabetViolation(w[j], j)
            return False
    return t.nullable


def matches(r: Regex, w: str, alphabet: Alphabet = PRINTABLE) -> bool:
    return match_term(to_term(r, alphabet), w, alphabet)


def check_quantifiers(r: Regex, budget: EngineBudget = DEFAULT_BUDGET) -> None:
    for node in walk(r):
        if isinstance(node, Repeat):
            bound = node.min if node.max is None else node.max
            if bound > budget.max_quantifier_bound:
                raise QuantifierTooLarge(bound, budget.max_quantifier_bound)


# --------------------------------------------------------------------------
# DFA


@dataclass(frozen=True)
class Dfa:
    start: int
    accepting: frozenset
    partition: tuple  # of frozensets, pairwise disjoint, covering the alphabet
    transitions: tuple  # transitions[state][block] -> state
    alphabet: Alphabet = PRINTABLE
    block_of: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.block_of is None:
            object.__setattr__(
                self, "block_of", {c: i for i, blk in enumerate(self.partition) for c in blk}
            )

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def step(self, state: int, c: str) -> int:
        if c not in self.block_of:
            raise AlphabetViolation(c)
        return self.transitions[state][self.block_of[c]]

    def accepts(self, w: str) -> bool:
        s = self.start
        for c in w:
            s = self.step(s, c)
        return s in self.accepting

    def to_text(self) -> str:
        from .syntax import class_body

        lines = [f"states {self.n_states} start {self.start} accepting {sorted(self.accepting)}"]
        for i, blk in enumerate(self.partition):
            lines.append(f"block {i} [{class_body(blk)}]")
        for s, row in enumerate(self.transitions):
            mark = "*" if s in self.accepting else " "
            lines.append(f"{mark}{s}: " + " ".join(str(x) for x in row))
        return "\n".join(lines)


def minterms(sets: Iterable[frozenset], alphabet: Alphabet) -> tuple:
    blocks = [alphabet.members]
    for s in sorted(sets, key=lambda x: sorted(x)):
        nxt = []
        for b in blocks:
            inside, outside = b & s, b - s
            if inside:
                nxt.append(inside)
            if outside:
                nxt.append(outside)
        blocks = nxt
    order = {c: i for i, c in enumerate(alphabet.chars)}
    return tuple(sorted(blocks, key=lambda b: min(order[c] for c in b)))


def _explore(t0: Term, partition: tuple, budget: EngineBudget, alphabet: Alphabet) -> Dfa:
    order = {c: i for i, c in enumerate(alphabet.chars)}
    reps = [min(b, key=order.__getitem__) for b in partition]
    index = {t0: 0}
    states = [t0]
    rows = []
    i = 0
    while i < len(states):
        t = states[i]
        row = []
        for c in reps:
            d = deriv(t, c)
            j = index.get(d)
            if j is None:
                if len(states) >= budget.max_states:
                    raise BudgetExceeded(budget.max_states)
                j = index[d] = len(states)
                states.append(d)
            row.append(j)
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(i for i, t in enumerate(states) if t.nullable)
    return Dfa(0, accepting, partition, tuple(rows), alphabet)


def compile_dfa(
    r: Regex, budget: EngineBudget = DEFAULT_BUDGET, alphabet: Alphabet = PRINTABLE
) -> Dfa:
    check_quantifiers(r, budget)
    t0 = to_term(r, alphabet)
    return _explore(t0, minterms(term_sets(t0), alphabet), budget, alphabet)


def is_empty(d: Dfa) -> bool:
    seen = {d.start}
    queue = deque([d.start])
    while queue:
        s = queue.popleft()
        if s in d.accepting:
            return False
        for nxt in d.transitions[s]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def _joint(r1: Regex, r2: Regex, budget: EngineBudget, alphabet: Alphabet):
    check_quantifiers(r1, budget)
    check_quantifiers(r2, budget)
    t1, t2 = to_term(r1, alphabet), to_term(r2, alphabet)
    partition = minterms(term_sets(t1) | term_sets(t2), alphabet)
    return (
        _explore(t1, partition, budget, alphabet),
        _explore(t2, partition, budget, alphabet),
    )


def equivalent(
    r1: Regex, r2: Regex, budget: EngineBudget = DEFAULT_BUDGET, alphabet: Alphabet = PRINTABLE
) -> bool:
    """Hopcroft-Karp style union-find bisimulation over the two DFAs."""
    d1, d2 = _joint(r1, r2, budget, alphabet)
    offset = d1.n_states
    parent = list(range(offset + d2.n_states))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[find(offset + d2.start)] = find(d1.start)
    stack = [(d1.start, d2.start)]
    while stack:
        p, q = stack.pop()
        if (p in d1.accepting) != (q in d2.accepting):
            return False
        for b in range(len(d1.partition)):
            a = find(d1.transitions[p][b])
            z = find(offset + d2.transitions[q][b])
            if a != z:
                parent[z] = a
                stack.append((d1.transitions[p][b], d2.transitions[q][b]))
    return True


def distinguishing_string(
    r1: Regex, r2: Regex, budget: EngineBudget = DEFAULT_BUDGET, alphabet: Alphabet = PRINTABLE
) -> Optional[str]:
    """A shortest string in exactly one of the two languages, or None."""
    d1, d2 = _joint(r1, r2, budget, alphabet)
    reps = [min(b) for b in d1.partition]
    start = (d1.start, d2.start)
    back = {start: None}
    queue = deque([start])
    while queue:
        p, q = pair = queue.popleft()
        if (p in d1.accepting) != (q in d2.accepting):
            out = []
            while back[pair] is not None:
                pair, c = back[pair]
                out.append(c)
            return "".join(reversed(out))
        for b, c in enumerate(reps):
            nxt = (d1.transitions[p][b], d2.transitions[q][b])
            if nxt not in back:
                back[nxt] = (pair, c)
                queue.append(nxt)
    return None


# --------------------------------------------------------------------------
# Sampling

STOP_PROBABILITY = 0.3
GREEDY_PROBABILITY = 0.5


def _distance_to_accept(d: Dfa) -> list:
    inf = float("inf")
    dist = [inf] * d.n_states
    preds = [[] for _ in range(d.n_states)]
    for s, row in enumerate(d.transitions):
        for nxt in set(row):
            preds[nxt].append(s)
    queue = deque()
    for s in sorted(d.accepting):
        dist[s] = 0
        queue.append(s)
    while queue:
        s = queue.popleft()
        for p in preds[s]:
            if dist[p] == inf:
                dist[p] = dist[s] + 1
                queue.append(p)
    return dist


def _count_members(d: Dfa, max_len: int) -> int:
    sizes = [len(b) for b in d.partition]
    counts = {d.start: 1}
    total = 1 if d.start in d.accepting else 0
    for _ in range(max_len):
        nxt: dict[int, int] = {}
        for s, n in counts.items():
            for b, t in enumerate(d.transitions[s]):
                nxt[t] = nxt.get(t, 0) + n * sizes[b]
        counts = nxt
        total += sum(n for s, n in counts.items() if s in d.accepting)
    return total


def _shortlex(d: Dfa, max_len: int, dist: list, limit: int) -> list:
    """Members of length <= max_len in shortlex order, at most ``limit`` of them."""
    order = {c: i for i, c in enumerate(d.alphabet.chars)}
    out = []
    level = [("", d.start)]
    for length in range(max_len + 1):
        for w, s in level:
            if s in d.accepting:
                out.append(w)
                if len(out) >= limit:
                    return out
        if length == max_len:
            break
        nxt = []
        for w, s in level:
            for c in sorted(d.alphabet.chars, key=order.__getitem__):
                t = d.step(s, c)
                if dist[t] <= max_len - length - 1:
                    nxt.append((w + c, t))
        level = nxt
    return out


def sample_dfa(d: Dfa, k: int, max_len: int = 30, seed: int = 0) -> list:
    """``k`` distinct accepted strings of length <= max_len from seeded random walks.

    Each step picks uniformly among partition blocks that still lead to an
    accepting state within the remaining length (with probability
    GREEDY_PROBABILITY only among those closest to acceptance), then
    uniformly among the block's characters.  In an accepting state the walk
    stops with probability STOP_PROBABILITY.
    """
    if is_empty(d):
        raise EmptyLanguage("the language is empty")
    dist = _distance_to_accept(d)
    if dist[d.start] > max_len:
        raise InsufficientLanguage(k, [])
    rng = random.Random(seed)
    order = {c: i for i, c in enumerate(d.alphabet.chars)}
    block_chars = [sorted(b, key=order.__getitem__) for b in d.partition]
    found: list[str] = []
    seen: set[str] = set()
    attempts = 50 * k + 100
    while len(found) < k and attempts > 0:
        attempts -= 1
        s, w = d.start, []
        while True:
            rem = max_len - len(w)
            options = [b for b, t in enumerate(d.transitions[s]) if dist[t] <= rem - 1]
            if s in d.accepting and (not options or rng.random() < STOP_PROBABILITY):
                break
            if rng.random() < GREEDY_PROBABILITY:
                best = min(dist[d.transitions[s][b]] for b in options)
                options = [b for b in options if dist[d.transitions[s][b]] == best]
            b = rng.choice(options)
            w.append(rng.choice(block_chars[b]))
            s = d.transitions[s][b]
        word = "".join(w)
        if word not in seen:
            seen.add(word)
            found.append(word)
    if len(found) < k:
        if _count_members(d, max_len) < k:
            raise InsufficientLanguage(k, _shortlex(d, max_len, dist, k))
        for word in _shortlex(d, max_len, dist, k + len(found)):
            if word not in seen:
                seen.add(word)
                found.append(word)
                if len(found) == k:
                    break
    return found


def sample_positive(
    r: Regex,
    k: int,
    max_len: int = 30,
    seed: int = 0,
    budget: EngineBudget = DEFAULT_BUDGET,
    alphabet: Alphabet = PRINTABLE,
) -> list:
    return sample_dfa(compile_dfa(r, budget, alphabet), k, max_len, seed)


def sample_negative(
    r: Regex,
    k: int,
    max_len: int = 30,
    seed: int = 0,
    budget: EngineBudget = DEFAULT_BUDGET,
    alphabet: Alphabet = PRINTABLE,
) -> list:
    return sample_dfa(compile_dfa(Not(Group(r)), budget, alphabet), k, max_len, seed)
