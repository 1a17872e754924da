"""Exception hierarchy shared by every module."""


class RegexError(ValueError):
    """Base class for problems with regex text or the strings fed to it."""


class InvalidSyntax(RegexError):
    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"invalid regex at {position}: {reason}")


class AlphabetViolation(RegexError):
    def __init__(self, char: str, position: int = -1):
        self.char = char
        self.position = position
        where = f" at {position}" if position >= 0 else ""
        super().__init__(f"character {char!r}{where} is not in the alphabet")


class EngineError(RuntimeError):
    """Base class for failures of the automaton engine."""


class BudgetExceeded(EngineError):
    def __init__(self, limit: int, what: str = "states"):
        self.limit = limit
        super().__init__(f"engine budget exceeded: more than {limit} {what}")


class QuantifierTooLarge(BudgetExceeded):
    def __init__(self, bound: int, limit: int):
        self.bound = bound
        super().__init__(limit, f"as quantifier bound (got {bound})")


class EmptyLanguage(EngineError):
    pass


class InsufficientLanguage(EngineError):
    """Fewer distinct strings exist than were requested; ``found`` holds all of them."""

    def __init__(self, requested: int, found: list[str]):
        self.requested = requested
        self.found = found
        super().__init__(f"only {len(found)} of {requested} requested strings exist")


class InvalidExamples(ValueError):
    pass


class UnknownToken(KeyError):
    pass


class ExternalToolError(RuntimeError):
    """An external synthesizer/repairer failed (timeout, exit status or bad output)."""

    def __init__(self, role: str, reason: str, detail: str = ""):
        self.role = role
        self.reason = reason
        self.detail = detail
        msg = f"{role} failed: {reason}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
