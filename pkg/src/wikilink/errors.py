"""Error taxonomy shared by the library and the CLI.

Every failure surfaced to the CLI carries a category so exit codes and
log lines stay machine-greppable: parse, validation, io, numeric.
"""

from __future__ import annotations


class PipelineError(Exception):
    """Base class; `category` drives the CLI exit code."""

    category = "internal"


class ParseError(PipelineError):
    """Malformed input file (bad field, wrong column count, bad header)."""

    category = "parse"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PipelineError):
    """Well-formed input violating a domain invariant (duplicate id, bad label)."""

    category = "validation"


class NumericError(PipelineError):
    """Non-finite value encountered during training."""

    category = "numeric"
