"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ProfsumError(Exception):
    """Base class for every error this package raises on purpose."""


# ingest ---------------------------------------------------------------

class MalformedLine(ProfsumError):
    """A folded-stack line that does not match the grammar."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class EmptyInput(ProfsumError):
    """The input decoded to zero samples."""


class DecodeError(ProfsumError):
    """Malformed bytes in a binary profile."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class DanglingReference(ProfsumError):
    """A sample or location cites an id that the message never defines."""

    def __init__(self, ref_id: int, kind: str = "location"):
        super().__init__(f"unknown {kind} id {ref_id}")
        self.ref_id = ref_id
        self.kind = kind


class UnsupportedCompression(ProfsumError):
    """Compressed input in a format other than gzip."""


# cct ------------------------------------------------------------------

class UnknownNode(ProfsumError):
    def __init__(self, node_id: int):
        super().__init__(f"no node with id {node_id:#018x}")
        self.node_id = node_id


# source mapping -------------------------------------------------------

class SourceMapError(ProfsumError):
    """Base for failures while mapping frames back to source files."""


class SourceNotFound(SourceMapError):
    def __init__(self, frame):
        super().__init__(f"no source file for frame {frame.function!r}")
        self.frame = frame


class AmbiguousSource(SourceMapError):
    # Reserved: the match rule makes two conflicting hits impossible today.
    def __init__(self, paths):
        super().__init__(f"conflicting source candidates: {paths}")
        self.paths = list(paths)


class DeclarationNotFound(SourceMapError):
    def __init__(self, method_name: str):
        super().__init__(f"no declaration of {method_name!r} found")
        self.method_name = method_name


class UnbalancedBraces(SourceMapError):
    def __init__(self, file: str, start_line: int):
        super().__init__(f"{file}:{start_line}: braces never close before EOF")
        self.file = file
        self.start_line = start_line


# summarization backends -----------------------------------------------

class BackendError(ProfsumError):
    """Base for summarization backend failures."""


class BackendUnavailable(BackendError):
    def __init__(self, endpoint: str, cause: str):
        super().__init__(f"backend {endpoint}: {cause}")
        self.endpoint = endpoint
        self.cause = cause


class BackendBadResponse(BackendError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# bleu -----------------------------------------------------------------

class EmptyReference(ProfsumError):
    """The reference token list is empty."""


class EmptyCorpus(ProfsumError):
    """No candidate/reference pairs to score."""
