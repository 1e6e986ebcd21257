"""Exception types raised by the provent library.

Wire-level corruption, container-structure problems and caller mistakes get
distinct classes so tools can map them onto stable exit codes.
"""


class ProventError(Exception):
    """Base class for every error raised by this package."""


class TruncatedError(ProventError):
    """Input ended while a value still signalled continuation."""


class OverlongError(ProventError):
    """A varint used more bytes than its value needs, or overflowed 64 bits."""


class UnknownWireTypeError(ProventError):
    """A field tag carried a wire-type discriminant outside {0, 1, 2, 5}."""


class NonFiniteError(ProventError):
    """A NaN or infinity reached a codepath that requires finite reals."""


class InvariantViolation(ProventError):
    """A domain-type invariant (column lengths, unit bounds, ...) failed."""


class UnsupportedVersion(ProventError):
    """The file declares a format version this library does not read."""


class NotAnArchive(ProventError):
    """The byte source does not carry the expected archive signatures."""


class MissingHeader(ProventError):
    """The archive has no 'header' entry."""


class MissingIndex(ProventError):
    """The archive has no 'index' entry."""


class OutOfRangeError(ProventError, IndexError):
    """Requested event ordinal is outside 0..actual_events-1."""


class ChecksumMismatch(ProventError):
    """Stored CRC-32 does not match the entry payload."""


class UsageError(ProventError):
    """The caller used a writer/reader outside its lifecycle contract."""


class LimitExceeded(ProventError):
    """A format-version-1 structural limit (entry count, 4 GiB offsets) was hit."""


class SchemaError(ProventError):
    """Base class for schema-text problems."""


class SchemaSyntaxError(SchemaError):
    """Schema text line does not match the layout grammar."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateFieldError(SchemaError):
    """Two fields in one message declaration share a field number."""


class MalformedLine(ProventError):
    """An ASCII event-record line could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DanglingReference(ProventError):
    """A particle referenced a vertex barcode that is not in the event."""
