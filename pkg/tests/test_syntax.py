import pytest
from hypothesis import given, settings

from regexmend.engine import equivalent
from regexmend.errors import AlphabetViolation, InvalidSyntax
from regexmend.syntax import (
    PRINTABLE,
    Alphabet,
    Alt,
    And,
    CharClass,
    Concat,
    Empty,
    Epsilon,
    Group,
    Literal,
    Not,
    Repeat,
    ast_size,
    depth,
    metrics,
    parse,
    to_string,
    validate,
)
from strategies import ABC, regexes

AB = Alphabet.of("ab")


def test_counted_repetition_parses():
    r = parse("ab{1,3}")
    assert r == Concat(Literal("a"), Repeat(Literal("b"), 1, 3))


@pytest.mark.parametrize(
    "text",
    ["ab{1,,,,3}", "([AEIOUaeiou].*[0-9].*){7,,}", "a**", "a{3,2}", "(a", "a)", "*a", "\\q", "a{,3}", "[b-a]", "~"],
)
def test_rejects_malformed(text):
    assert not validate(text)
    with pytest.raises(InvalidSyntax):
        parse(text)


def test_error_reports_position():
    with pytest.raises(InvalidSyntax) as info:
        parse("ab{1,,,,3}")
    assert info.value.position >= 2


def test_sugar_is_kept_for_printing():
    for text in ["a*", "a+", "a?", "a{3}", "a{3,}", "a{2,5}", "a{3,3}"]:
        assert to_string(parse(text)) == text


def test_sugar_bounds():
    assert parse("a*") == Repeat(Literal("a"), 0, None, "*")
    assert parse("a+").min == 1 and parse("a+").max is None
    assert (parse("a?").min, parse("a?").max) == (0, 1)
    assert (parse("a{4}").min, parse("a{4}").max) == (4, 4)


def test_precedence():
    assert parse("a|b&c") == Alt(Literal("a"), And(Literal("b"), Literal("c")))
    assert parse("ab&c") == And(Concat(Literal("a"), Literal("b")), Literal("c"))
    assert parse("~a*") == Not(Repeat(Literal("a"), 0, None))
    assert parse("~ab") == Concat(Not(Literal("a")), Literal("b"))


def test_empty_operands_are_epsilon():
    assert parse("a|") == Alt(Literal("a"), Epsilon())
    assert parse("()") == Group(Epsilon())
    assert parse("") == Epsilon()


def test_empty_class_is_empty_language():
    assert parse("[]") == Empty()
    assert to_string(Empty()) == "[]"


def test_dot_and_escapes_follow_alphabet():
    dot = parse(".", AB)
    assert isinstance(dot, CharClass) and dot.members(AB) == frozenset("ab")
    assert parse("\\d") == CharClass(frozenset("0123456789"))
    assert to_string(parse("\\d+")) == "[0-9]+"
    assert parse("\\.") == Literal(".")


def test_alphabet_violation():
    with pytest.raises(AlphabetViolation):
        parse("ac", AB)
    # operators are not symbols
    assert parse("~(a)|b*", AB)


def test_class_printing():
    assert to_string(parse("[A-Za-z]")) == "[A-Za-z]"
    assert to_string(parse("[^a-z]")) == "[^a-z]"
    assert to_string(parse("[ab]")) == "[ab]"
    assert to_string(parse("[\\]x]")) == "[\\]x]"


@pytest.mark.parametrize(
    "text",
    [
        "ab{1,3}",
        "([AEIOUaeiou].*[0-9].*){7,}",
        "[A-Za-z]{2,3}[a-z]{3}[A-Z]{3,4}",
        ".{6,8}&(.*[A-Za-z].*)",
        "a|",
        "()",
        "~a*",
        "(~a)*",
        "[]",
        "[^a-z]",
        "(a|b)&~(c)",
    ],
)
def test_print_parse_round_trip(text):
    assert to_string(parse(text)) == text
    assert parse(to_string(parse(text))) == parse(text)


def test_printer_adds_needed_brackets():
    r = Concat(Alt(Literal("a"), Literal("b")), Literal("c"))
    assert to_string(r) == "(a|b)c"
    assert to_string(Repeat(Not(Literal("a")), 0, None)) == "(~a)*"
    assert to_string(Concat(Epsilon(), Literal("a"))) == "()a"
    assert to_string(Repeat(Repeat(Literal("a"), 0, None), 2, 2)) == "(a*){2}"


@settings(max_examples=300, deadline=None)
@given(regexes)
def test_printed_form_denotes_same_language(r):
    text = to_string(r)
    back = parse(text, ABC)
    assert to_string(back) == text
    assert equivalent(r, back, alphabet=ABC)


def test_metrics():
    m = metrics(parse("ab{1,3}"))
    assert (m.ast_size, m.depth, m.length) == (4, 3, 7)
    assert ast_size(parse("a")) == 1 and depth(parse("a")) == 1


def test_default_alphabet_is_printable_ascii():
    assert len(PRINTABLE) == 95
    assert " " in PRINTABLE and "~" in PRINTABLE and "\t" not in PRINTABLE
