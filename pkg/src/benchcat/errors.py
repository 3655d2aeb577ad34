"""Exception hierarchy shared across the toolkit.

Every error raised on purpose by benchcat derives from :class:`BenchcatError`,
so callers (notably the CLI) can separate domain failures from genuine bugs.
"""

from __future__ import annotations


class BenchcatError(Exception):
    """Base class for all errors raised by this package."""


class RdfSyntaxError(BenchcatError):
    """A document violates the grammar of its RDF syntax.

    Carries the 1-based line and column of the offending input, and
    optionally the name of the source file when parsing came from disk.
    """

    def __init__(self, message: str, line: int, column: int, source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line}:{column}: {message}")


class EncodingError(BenchcatError):
    """Input bytes are not valid UTF-8."""


class RelativeIriError(RdfSyntaxError):
    """A relative IRI occurred in a document parsed without a base IRI."""


class FormatCapabilityError(BenchcatError):
    """A dataset with named graphs was handed to a triples-only syntax."""


class ComplexityLimitError(BenchcatError):
    """Blank-node structure exceeded the configured search bounds."""


class MissingFieldError(BenchcatError):
    """A required property is absent from a metadata or report graph."""

    def __init__(self, field: str, detail: str | None = None):
        self.field = field
        super().__init__(f"{field}: missing" if detail is None else f"{field}: {detail}")


class TypeMismatchError(BenchcatError):
    """A property value has the wrong term kind or an ill-formed value."""

    def __init__(self, field: str, detail: str | None = None):
        self.field = field
        super().__init__(field if detail is None else f"{field}: {detail}")


class ConflictError(BenchcatError):
    """Declared and computed metadata contradict each other."""


class EmptySourceError(BenchcatError):
    """A dataset source contains no parseable RDF files."""


class StructureError(BenchcatError):
    """A document is not a structurally valid nanopublication.

    ``rule`` is one of ``graph-count``, ``head-links``, ``missing-provenance``,
    ``empty-assertion``.
    """

    def __init__(self, rule: str, detail: str | None = None):
        self.rule = rule
        super().__init__(rule if detail is None else f"{rule}: {detail}")


class SourceUnavailableError(BenchcatError):
    """The report index itself could not be listed."""


class NotFoundError(BenchcatError):
    """No redirect pattern matches the requested path."""


class InvalidPathError(BenchcatError):
    """A repository-relative path is empty or escapes the repository."""


class RedirectTableError(BenchcatError):
    """A redirect table is malformed or contains overlapping patterns."""


class SnapshotFormatError(BenchcatError):
    """A published snapshot directory is missing mandatory files."""


class ConfigError(BenchcatError):
    """A configuration file is malformed or violates an invariant."""


class DanglingReferenceWarning(UserWarning):
    """A report cites a resource the catalog does not know.

    Collected, not raised: pages still render, with the orphan grouped
    under an explicit unknown-resource marker.
    """

    def __init__(self, reference: str, detail: str):
        super().__init__(f"{reference}: {detail}")
        self.reference = reference
        self.detail = detail
