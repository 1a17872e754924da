"""Subprocess hooks for external synthesizers and repairers.

A tool receives one JSON object on stdin::

    {"regex": "...", "description": "...", "positive": [...], "negative": [...]}

(``regex`` and ``description`` only when known) and answers on stdout with
either a bare regex on the first non-empty line or ``{"regex": "..."}``.
"""

from __future__ import annotations

import json
import shlex
import subprocess
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import ExternalToolError
from .evaluation import ExampleSet
from .syntax import PRINTABLE, Alphabet, Regex, parse

ROLES = ("synthesizer", "repairer")


@dataclass(frozen=True)
class ExternalTool:
    role: str
    command: tuple
    timeout: float = 30.0

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}")
        if isinstance(self.command, str):
            object.__setattr__(self, "command", tuple(shlex.split(self.command)))
        else:
            object.__setattr__(self, "command", tuple(self.command))
        if not self.command:
            raise ValueError("empty tool command")
        if not self.timeout > 0:
            raise ValueError("timeout must be positive")


def build_request(
    ex: ExampleSet, regex: Optional[str] = None, description: Optional[str] = None
) -> dict:
    req: dict = {}
    if regex is not None:
        req["regex"] = regex
    if description is not None:
        req["description"] = description
    req.update(ex.to_json())
    return req


def read_reply(out: str) -> str:
    text = out.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"malformed JSON reply: {e}") from None
        if not isinstance(data, dict) or not isinstance(data.get("regex"), str):
            raise ValueError('JSON reply lacks a string "regex" field')
        return data["regex"]
    for line in out.splitlines():
        if line.strip():
            return line.strip("\r\n")
    raise ValueError("empty reply")


def invoke_external(
    tool: ExternalTool, request: dict, alphabet: Alphabet = PRINTABLE
) -> Regex:
    """Run ``tool`` on ``request`` and parse its answer.

    Raises ExternalToolError on timeout, nonzero exit or an unreadable reply,
    and InvalidSyntax when the returned text is not a valid regex.
    """
    try:
        proc = subprocess.run(
            tool.command,
            input=json.dumps(request),
            capture_output=True,
            text=True,
            timeout=tool.timeout,
        )
    except subprocess.TimeoutExpired:
        raise ExternalToolError(tool.role, "timeout", f"{tool.timeout}s") from None
    except OSError as e:
        raise ExternalToolError(tool.role, "could not start", str(e)) from None
    if proc.returncode != 0:
        raise ExternalToolError(tool.role, f"exit status {proc.returncode}", proc.stderr.strip()[:200])
    try:
        text = read_reply(proc.stdout)
    except ValueError as e:
        raise ExternalToolError(tool.role, "bad reply", str(e)) from None
    return parse(text, alphabet)
