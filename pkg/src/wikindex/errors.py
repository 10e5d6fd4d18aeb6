"""Exception types shared across the package.

Every error raised by the library derives from WikindexError so CLI code can
map error classes to stable exit codes in one place.
"""


class WikindexError(Exception):
    """Base class for all package errors."""


class CorpusError(WikindexError):
    """Fixture corpus is missing, malformed, or self-inconsistent."""


class PageNotFound(WikindexError):
    """Requested title does not exist in the source."""


class NetworkError(WikindexError):
    """Live transport failed after bounded retries."""


class RedirectLoop(WikindexError):
    """Redirect chain exceeded the allowed depth."""


class CacheCorrupt(WikindexError):
    """Cache entry failed its checksum. Callers treat the entry as absent."""


class ParseError(WikindexError):
    """Page markup is not recognizable as HTML or a fixture page record."""


class SeedNotFound(WikindexError):
    """The probe's seed article could not be fetched."""


class CheckpointCorrupt(WikindexError):
    """Checkpoint file is unreadable, fails its checksum, or does not match."""


class InvalidFunction(WikindexError):
    """Custom growth function violates its contract (e.g. decreasing)."""


class EmptyGraph(WikindexError):
    """Metric requested on a graph with no nodes."""


class UnsupportedFormat(WikindexError):
    """Unknown export or import format name."""
