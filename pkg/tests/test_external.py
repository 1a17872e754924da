import json
import sys

import pytest

from regexmend.engine import equivalent
from regexmend.errors import ExternalToolError, InvalidSyntax
from regexmend.evaluation import ExampleSet
from regexmend.external import ExternalTool, build_request, invoke_external, read_reply
from regexmend.syncorr import RepairConfig, transregex
from regexmend.syntax import parse, to_string


def tool(fixtures, name, *args, role="repairer", timeout=10.0):
    return ExternalTool(role, (sys.executable, str(fixtures / "tools" / f"{name}.py"), *args), timeout)


EX = ExampleSet(("ab", "abb"), ("a", "b"))


def test_echo_stub_is_identity(fixtures):
    r = invoke_external(tool(fixtures, "echo_regex"), build_request(EX, regex="ab{1,3}"))
    assert to_string(r) == "ab{1,3}"


def test_json_reply(fixtures):
    assert to_string(invoke_external(tool(fixtures, "json_reply", "a|b"), build_request(EX))) == "a|b"


def test_bare_reply_skips_blank_lines(fixtures):
    assert to_string(invoke_external(tool(fixtures, "constant", "ab+"), build_request(EX))) == "ab+"


def test_invalid_reply_surfaces_syntax_error(fixtures):
    with pytest.raises(InvalidSyntax):
        invoke_external(tool(fixtures, "constant", "ab{1,,,,3}"), build_request(EX))


def test_timeout(fixtures):
    with pytest.raises(ExternalToolError) as info:
        invoke_external(tool(fixtures, "sleepy", "5", timeout=0.5), build_request(EX))
    assert "timeout" in str(info.value)


def test_nonzero_exit(fixtures):
    with pytest.raises(ExternalToolError) as info:
        invoke_external(tool(fixtures, "failing"), build_request(EX))
    assert "exit status 3" in str(info.value)


def test_missing_program():
    with pytest.raises(ExternalToolError):
        invoke_external(ExternalTool("synthesizer", "/nonexistent/tool"), build_request(EX))


def test_request_wire_format(fixtures, tmp_path):
    out = tmp_path / "req.json"
    invoke_external(tool(fixtures, "record_request", str(out), "a"), build_request(EX, "ab", "a then b's"))
    assert json.loads(out.read_text()) == {
        "regex": "ab",
        "description": "a then b's",
        "positive": ["ab", "abb"],
        "negative": ["a", "b"],
    }
    assert set(build_request(EX)) == {"positive", "negative"}


@pytest.mark.parametrize(
    "text,expected",
    [("a*\n", "a*"), ('{"regex": "x"}', "x"), ("\n\n b\nc", " b")],
)
def test_read_reply(text, expected):
    assert read_reply(text) == expected


@pytest.mark.parametrize("text", ["", "  \n", '{"regex": 3}', "{oops"])
def test_read_reply_rejects(text):
    with pytest.raises(ValueError):
        read_reply(text)


def test_tool_validation():
    with pytest.raises(ValueError):
        ExternalTool("oracle", "x")
    with pytest.raises(ValueError):
        ExternalTool("repairer", "")
    with pytest.raises(ValueError):
        ExternalTool("repairer", "x", timeout=0)
    assert ExternalTool("repairer", "run --fast 'a b'").command == ("run", "--fast", "a b")


def test_synthesizer_supplies_candidate(fixtures, vowel_digits):
    synth = tool(fixtures, "constant", "([AEIOUaeiou].*[0-9].*){7,}", role="synthesizer")
    report = transregex(vowel_digits, description="vowel then seven digits", synthesizer=synth)
    assert report.repaired and report.source == "syncorr"
    assert equivalent(report.regex, parse("[AEIOUaeiou].*[0-9]{7,}.*"))


def test_synthesizer_failure_degrades(fixtures, vowel_digits):
    report = transregex(vowel_digits, synthesizer=tool(fixtures, "constant", "ab{1,,,,3}", role="synthesizer"))
    assert not report.repaired and report.source == "none" and report.regex is None
    assert report.notes[0].startswith("synthesizer:")


STALL = RepairConfig(l_max_range=(2,))


def test_fallback_output_is_accepted_only_when_consistent(fixtures, vowel_digits):
    good = tool(fixtures, "constant", "[AEIOUaeiou].*[0-9]{7,}.*")
    report = transregex(vowel_digits, "([AEIOUaeiou].*[0-9].*){7,}", fallback=good, cfg=STALL)
    assert report.repaired and report.source == "fallback" and report.fitness == 1

    bad = tool(fixtures, "echo_regex")
    report = transregex(vowel_digits, "([AEIOUaeiou].*[0-9].*){7,}", fallback=bad, cfg=STALL)
    assert not report.repaired
    assert to_string(report.regex) == "([AEIOUaeiou].*[0-9].*){7,}"
    assert "not consistent" in report.notes[-1]


def test_fallback_failure_is_reported(fixtures, vowel_digits):
    report = transregex(vowel_digits, "([AEIOUaeiou].*[0-9].*){7,}", fallback=tool(fixtures, "failing"), cfg=STALL)
    assert not report.repaired and report.notes[-1].startswith("fallback:")


def test_consistent_candidate_skips_tools(fixtures, vowel_digits):
    report = transregex(vowel_digits, "[AEIOUaeiou].*[0-9]{7,}.*", fallback=tool(fixtures, "failing"))
    assert report.repaired and report.source == "input" and report.notes == []
