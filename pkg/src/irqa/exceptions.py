"""irqa exceptions.

Every error carries the process exit code the CLI reports for it.
"""

from __future__ import annotations


class IrqaError(Exception):
    """Base exception for irqa errors."""

    exit_code = 1

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class MissingInputError(IrqaError):
    """A referenced input file does not exist."""

    exit_code = 3


class ParseError(IrqaError):
    """Malformed corpus, question, key or run input."""

    exit_code = 4

    def __init__(
        self,
        message: str,
        *,
        offset: int | None = None,
        line: int | None = None,
        last_good_id: str | None = None,
    ) -> None:
        """Initialize parse error.

        Args:
            message: Error message
            offset: Byte offset of the failing block
            line: 1-based line number of the failing record
            last_good_id: Last identifier parsed successfully before the failure
        """
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if offset is not None:
            parts.append(f"byte {offset}")
        prefix = ", ".join(parts)
        text = f"{prefix}: {message}" if prefix else message
        if offset is not None:
            text += f" (last good id: {last_good_id or '<none>'})"
        super().__init__(text)
        self.offset = offset
        self.line = line
        self.last_good_id = last_good_id


class DuplicateIdError(IrqaError):
    """An identifier that must be unique was seen twice."""

    exit_code = 5

    def __init__(self, kind: str, duplicates: list[str]) -> None:
        super().__init__(f"duplicate {kind}: {', '.join(duplicates)}")
        self.kind = kind
        self.duplicates = duplicates


class SchemaVersionError(IrqaError):
    """An artifact was written with an unsupported schema version."""

    exit_code = 6


class PatternError(IrqaError):
    """An answer pattern does not compile under the supported dialect."""

    exit_code = 7

    def __init__(self, question_id: str, pattern: str, reason: str) -> None:
        super().__init__(f"question {question_id}: bad answer pattern {pattern!r}: {reason}")
        self.question_id = question_id
        self.pattern = pattern


class UndefinedMetricError(IrqaError):
    """A metric has an empty denominator."""

    exit_code = 8


class DatasetMismatchError(IrqaError):
    """Inputs that must cover the same question set do not."""

    exit_code = 9


class ConfigError(IrqaError):
    """Invalid configuration or run manifest."""

    exit_code = 10


class InvalidExtensionError(IrqaError):
    """A query extension violates the candidate filter invariant."""

    exit_code = 11


class IncompatibleIndexError(IrqaError):
    """An index was built at the wrong granularity for the requested use."""

    exit_code = 12
