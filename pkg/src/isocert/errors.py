from typing import Optional


class IsocertError(Exception):
    """Base class for all errors raised by isocert."""


class ParseError(IsocertError, ValueError):
    """Malformed permutation, group file or serialized value."""


class ScaleLimitError(IsocertError):
    """A computation would exceed the configured desk-scale order bound."""

    def __init__(self, order: int, bound: int, what: str = "group", stage: Optional[str] = None):
        super().__init__(order, bound, what, stage)
        self.order = order
        self.bound = bound
        self.what = what
        self.stage = stage

    def __str__(self) -> str:
        msg = f"{self.what} of order {self.order} exceeds the scale limit {self.bound}"
        return f"[{self.stage}] {msg}" if self.stage else msg


class MembershipError(IsocertError, ValueError):
    """An element or subgroup does not lie in the expected ambient group."""
