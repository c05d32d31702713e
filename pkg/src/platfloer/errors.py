"""Failure modes with distinct CLI exit codes."""
from __future__ import annotations


class PlatFloerError(Exception):
    """Base class for calculator failures."""

    exit_code = 5


class ParseError(PlatFloerError):
    """Malformed braid word or invalid strand count."""

    exit_code = 2


class NotAKnot(PlatFloerError):
    """Plat closure has more than one component but a knot is required."""

    exit_code = 3


class NotNice(PlatFloerError):
    """Heegaard diagram has a region that is neither a bigon nor a square."""

    exit_code = 4

    def __init__(self, message: str, census=None):
        super().__init__(message)
        self.census = census or {}


class GradingIndeterminate(PlatFloerError):
    """A periodic domain has nonzero Maslov index; relative gradings undefined."""

    exit_code = 5


class DegenerateInput(PlatFloerError):
    """Geometry violated an invariant the pipeline relies on."""

    exit_code = 5


class IterationCapExceeded(PlatFloerError):
    """Tightening exceeded PLATFLOER_ITER_CAP."""

    exit_code = 5
