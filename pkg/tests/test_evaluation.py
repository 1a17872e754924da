import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_matches, count_fitness
from regexmend.errors import InvalidExamples, QuantifierTooLarge
from regexmend.engine import EngineBudget
from regexmend.evaluation import ExampleSet, consistent, fitness
from regexmend.syntax import parse
from strategies import ABC, regexes

VOWEL_DIGITS = "[AEIOUaeiou].*[0-9]{7,}.*"
BROKEN_VOWEL_DIGITS = "([AEIOUaeiou].*[0-9].*){7,}"


def test_vowel_digits_scores(vowel_digits):
    assert fitness(parse(VOWEL_DIGITS), vowel_digits).value == 1
    f = fitness(parse(BROKEN_VOWEL_DIGITS), vowel_digits)
    assert (f.value, f.tp, f.fn, f.tn, f.fp) == (0, 0, 10, 10, 0)
    assert consistent(parse(VOWEL_DIGITS), vowel_digits)
    assert not consistent(parse(BROKEN_VOWEL_DIGITS), vowel_digits)


def test_extreme_scores():
    ex = ExampleSet(("a",), ("b",))
    assert fitness(parse("a"), ex).value == 1
    assert fitness(parse("b"), ex).value == -1
    assert fitness(parse("a|b"), ex).value == 0


def test_value_is_exact_rational():
    ex = ExampleSet(("a", "aa", "aaa"), ())
    assert fitness(parse("a|aa"), ex).value == Fraction(1, 3)


def test_example_set_validation():
    with pytest.raises(InvalidExamples):
        ExampleSet(("a",), ("a",))
    with pytest.raises(InvalidExamples):
        ExampleSet(("a", "a"), ())
    with pytest.raises(InvalidExamples):
        ExampleSet((), ())
    assert ExampleSet.from_lists(["a", "a"], ["b"]).positive == ("a",)


def test_example_set_json(tmp_path):
    ex = ExampleSet(("x",), ("y", ""))
    p = tmp_path / "ex.json"
    p.write_text(json.dumps(ex.to_json()))
    assert ExampleSet.load(p) == ex
    with pytest.raises(InvalidExamples):
        ExampleSet.from_json({"positive": [1]})


def test_alphabet_check():
    with pytest.raises(InvalidExamples):
        ExampleSet(("\t",), ()).check_alphabet()


def test_budget_guard():
    with pytest.raises(QuantifierTooLarge):
        fitness(parse("a{2000}"), ExampleSet(("a",), ()), budget=EngineBudget())


example_sets = st.tuples(
    st.lists(st.text("abc", max_size=5), max_size=6, unique=True),
    st.lists(st.text("abc", max_size=5), max_size=6, unique=True),
).filter(lambda pn: (pn[0] or pn[1]) and not set(pn[0]) & set(pn[1]))


@settings(max_examples=300, deadline=None)
@given(regexes, example_sets)
def test_fitness_matches_counting_oracle(r, pn):
    ex = ExampleSet(tuple(pn[0]), tuple(pn[1]))
    f = fitness(r, ex, ABC)
    assert f.value == count_fitness(lambda w: brute_matches(r, w, ABC), ex.positive, ex.negative)
    assert -1 <= f.value <= 1
    assert (f.value == 1) == f.consistent == consistent(r, ex, ABC)
    assert (f.value == -1) == (f.tp == 0 and f.tn == 0)
