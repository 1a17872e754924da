import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regexmend.abstraction import AbstractRegex, Item, Seq, preprocess, show, unpreprocess
from regexmend.evaluation import ExampleSet
from regexmend.neighborhood import (
    ALL_KINDS,
    QuantifierBounds,
    TransformationKind as K,
    candidate_set,
    element_sites,
    infer_quantifier_bounds,
    neighbors,
)
from regexmend.syntax import Epsilon, parse, to_string
from strategies import ABC, regexes

BROKEN_VOWEL_DIGITS = "([AEIOUaeiou].*[0-9].*){7,}"


def fig3_form():
    return preprocess(parse(BROKEN_VOWEL_DIGITS), 0)


def test_exactly_ten_kinds():
    assert len(K) == 10 and ALL_KINDS == frozenset(K)


def test_sites_of_worked_example():
    sites = element_sites(fig3_form())
    kinds = [s.kind for s in sites]
    assert kinds.count("element") == 4
    assert kinds.count("group") == 1
    inside = [s for s in sites if s.kind == "slot" and s.path == (0,)]
    outside = [s for s in sites if s.kind == "slot" and s.path == ()]
    assert (len(inside), len(outside)) == (5, 2)


def test_sites_of_single_token():
    sites = element_sites(preprocess(parse("[0-9]"), 0))
    assert [s.kind for s in sites].count("element") == 1
    assert [s.kind for s in sites].count("slot") == 2
    assert [s.kind for s in sites].count("group") == 0


def test_sites_reject_empty_regex():
    with pytest.raises(ValueError):
        element_sites(preprocess(Epsilon(), 0))


def _longest_digit_run(w):
    return max((len(list(g)) for k, g in itertools.groupby(w, str.isdigit) if k), default=0)


def test_bounds_for_digits(vowel_digits):
    runs = [_longest_digit_run(w) for w in vowel_digits.positive]
    bounds = infer_quantifier_bounds("NUM", vowel_digits)
    assert QuantifierBounds(7, None) in bounds
    assert bounds[0] == QuantifierBounds(min(runs), max(runs))
    assert all(b.max is None or b.min <= b.max for b in bounds)


def test_bounds_for_absent_element(vowel_digits):
    assert QuantifierBounds(0, 0) in infer_quantifier_bounds(parse("#"), vowel_digits)


def test_bounds_without_positives():
    assert infer_quantifier_bounds("NUM", ExampleSet((), ("x",))) == []


def test_quantifier_adjustment_reaches_the_repair(vowel_digits):
    nb = neighbors(fig3_form(), vowel_digits, {K.QuantifierAdjustment})
    shown = {show(m.abstract.body) for m in nb}
    assert "⟨VOW⟩⟨S⟩⟨NUM⟩⟨Q_{7,}⟩⟨S⟩" in shown
    assert "⟨VOW⟩⟨S⟩(⟨NUM⟩)⟨Q_{7,}⟩⟨S⟩" in shown
    assert "[AEIOUaeiou].*[0-9]{7,}.*" in {to_string(m.concrete) for m in nb}


def test_deleting_only_element_gives_empty_word(vowel_digits):
    nb = neighbors(preprocess(parse("[0-9]"), 0), vowel_digits, {K.ElementDeletion})
    assert [m.concrete for m in nb] == [Epsilon()]


def test_no_kinds_no_members(vowel_digits):
    assert len(neighbors(fig3_form(), vowel_digits, set())) == 0


def test_each_kind_produces_its_edit(vowel_digits):
    a = preprocess(parse("[0-9]a"), 0)
    texts = lambda kind: {m.text for m in neighbors(a, vowel_digits, {kind})}
    assert "[0-9]|a" in texts(K.OperatorInsertion)
    assert "~[0-9]a" in texts(K.OperatorInsertion)
    assert "a[0-9]" in texts(K.ElementExchanging)
    assert "a[0-9]" in texts(K.ElementAdjustment)
    assert "[0-9]a&[0-9]" in texts(K.BinaryElementInsertion)
    assert "[AEIOUaeiou]a" in texts(K.ElementReplacement)
    assert "[0-9]{7,}a" in texts(K.QuantifierInsertion)
    b = preprocess(parse("[0-9]+|a"), 0)
    assert "[0-9]*|a" in {m.text for m in neighbors(b, vowel_digits, {K.QuantifierModification})}
    assert {"[0-9]|a", "[0-9]+a"} <= {m.text for m in neighbors(b, vowel_digits, {K.OperatorDeletion})}


def test_candidate_policies():
    a1 = preprocess(parse(BROKEN_VOWEL_DIGITS), 1)
    a0 = preprocess(parse(BROKEN_VOWEL_DIGITS), 0)
    assert candidate_set(a1, "dictionary") == ["SR_NUM", "SR_VOW"]
    assert candidate_set(a1, "aliases-at-level-0") == ["SR_NUM", "SR_VOW"]
    assert {"LET", "CAP"} <= set(candidate_set(a0, "aliases-at-level-0"))
    assert {"LET", "CAP"} <= set(candidate_set(a1, "dictionary+aliases"))
    with pytest.raises(ValueError):
        candidate_set(a0, "nope")


def test_cap_truncates_deterministically(vowel_digits):
    full = neighbors(fig3_form(), vowel_digits)
    cut = neighbors(fig3_form(), vowel_digits, cap=25)
    assert cut.truncated and not full.truncated
    assert [m.text for m in cut] == [m.text for m in full][:25]


@settings(max_examples=40, deadline=None)
@given(regexes, st.sampled_from([0, 1, 2]))
def test_neighborhood_invariants(r, level):
    ex = ExampleSet(("ab", "c"), ("ba",))
    r = parse(to_string(r), ABC)
    a = preprocess(r, level, ABC)
    nb = neighbors(a, ex, alphabet=ABC)
    bodies = [m.abstract.body for m in nb]
    assert len(bodies) == len(set(bodies))
    assert a.body not in bodies
    for m in nb:
        assert unpreprocess(m.abstract, ABC) == m.concrete
        assert all(t in m.abstract.dictionary for t in m.abstract.tokens())
    parallel = neighbors(a, ex, alphabet=ABC, workers=4)
    assert [m.text for m in parallel] == [m.text for m in nb]


def test_members_trace_back_to_their_kind(vowel_digits):
    a = fig3_form()
    nb = neighbors(a, vowel_digits)
    by_kind = {k: {m.abstract.body for m in neighbors(a, vowel_digits, {k})} for k in K}
    assert all(m.abstract.body in by_kind[m.kind] for m in nb)
