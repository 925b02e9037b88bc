"""Map profile frames back to Java source and pull out whole method bodies.

Resolution turns a fully qualified function name into a file probe
(package dots to path separators, outer class + ``.java``) under the
configured source roots, confirmed by the file's own ``package`` line.
Extraction locates the declaration nearest above the frame line and walks
a small lexer to the matching closing brace, ignoring braces inside
string/char literals and comments.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import DeclarationNotFound, SourceNotFound, UnbalancedBraces
from .model import Frame


@dataclass(frozen=True)
class SourceLocation:
    """A resolved frame: file on disk plus declaration and frame lines."""

    file: Path
    decl_line: int
    frame_line: Optional[int]


@dataclass(frozen=True)
class ExtractedFunction:
    """A whole method body, brace-balanced, whitespace-normalized."""

    location: SourceLocation
    signature: str
    body: str
    start_line: int
    end_line: int


# ----------------------------------------------------------------------
# lexer: brace depth outside literals and comments
# ----------------------------------------------------------------------

def _scan_block(text: str, open_idx: int) -> int:
    """Index of the brace closing ``text[open_idx]`` ('{'), or -1 at EOF.

    Skips line comments, block comments, string literals and char
    literals, including backslash escapes inside literals.
    """
    depth = 0
    i = open_idx
    n = len(text)
    while i < n:
        c = text[i]
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return i
        elif c == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                i = text.find("\n", i + 2)
                if i < 0:
                    return -1
            elif nxt == "*":
                end = text.find("*/", i + 2)
                if end < 0:
                    return -1
                i = end + 1
        elif c == '"' or c == "'":
            i += 1
            while i < n:
                if text[i] == "\\":
                    i += 1
                elif text[i] == c:
                    break
                i += 1
            if i >= n:
                return -1
        i += 1
    return -1


def _find_code_char(text: str, start: int, wanted: str) -> int:
    """First index >= start of any char in ``wanted`` outside literals and
    comments; -1 when EOF comes first."""
    i = start
    n = len(text)
    while i < n:
        c = text[i]
        if c in wanted:
            return i
        if c == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                i = text.find("\n", i + 2)
                if i < 0:
                    return -1
            elif nxt == "*":
                end = text.find("*/", i + 2)
                if end < 0:
                    return -1
                i = end + 1
        elif c == '"' or c == "'":
            i += 1
            while i < n:
                if text[i] == "\\":
                    i += 1
                elif text[i] == c:
                    break
                i += 1
            if i >= n:
                return -1
        i += 1
    return -1


def brace_depth_profile(text: str) -> tuple[int, int]:
    """(final depth, minimum depth) of the text outside literals/comments."""
    depth = 0
    min_depth = 0
    i = 0
    n = len(text)
    while i < n:
        idx = _find_code_char(text, i, "{}")
        if idx < 0:
            break
        if text[idx] == "{":
            depth += 1
        else:
            depth -= 1
            min_depth = min(min_depth, depth)
        i = idx + 1
    return depth, min_depth


# ----------------------------------------------------------------------
# declaration search
# ----------------------------------------------------------------------

_REJECT_WORDS = frozenset(
    "return new throw else case break continue assert yield do if while for "
    "switch catch try finally instanceof".split()
)

_DECL_CACHE: dict[str, re.Pattern] = {}


def _decl_pattern(name: str) -> re.Pattern:
    pat = _DECL_CACHE.get(name)
    if pat is None:
        pat = re.compile(
            r"^\s*(?:@[\w.$]+(?:\([^)]*\))?\s+)*"        # annotations on the line
            r"((?:[\w<][\w$.<>\[\],?&\s]*?[\w$>\]])\s+)"  # modifiers/generics/return type
            + re.escape(name)
            + r"\s*\("
        )
        _DECL_CACHE[name] = pat
    return pat


def _is_declaration(line: str, name: str) -> bool:
    m = _decl_pattern(name).match(line)
    if not m:
        return False
    words = m.group(1).split()
    return not any(w in _REJECT_WORDS for w in words)


def _declaration_lines(lines: Sequence[str], name: str) -> list[int]:
    """1-based line numbers of candidate declarations, top to bottom."""
    return [i for i, line in enumerate(lines, 1) if _is_declaration(line, name)]


def _normalize_line(line: str) -> str:
    return " ".join(line.split())


def _normalize_block(text: str) -> str:
    return " ".join(text.split())


# ----------------------------------------------------------------------
# file cache
# ----------------------------------------------------------------------

class _FileCache:
    """Per-file content cache keyed by (path, mtime, size)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[Path, tuple[tuple, str, tuple[str, ...]]] = {}

    def read(self, path: Path) -> tuple[str, tuple[str, ...]]:
        st = path.stat()
        key = (st.st_mtime_ns, st.st_size)
        with self._lock:
            hit = self._entries.get(path)
            if hit is not None and hit[0] == key:
                return hit[1], hit[2]
        # invalid bytes must not abort extraction
        text = path.read_text(encoding="utf-8", errors="replace")
        lines = tuple(text.split("\n"))
        with self._lock:
            self._entries[path] = (key, text, lines)
        return text, lines


_cache = _FileCache()


# ----------------------------------------------------------------------
# resolution
# ----------------------------------------------------------------------

_PACKAGE_RE = re.compile(r"^\s*package\s+([\w.$]+)\s*;")


def file_package(lines: Sequence[str]) -> str:
    """Package named by the first non-comment line; "" without one."""
    in_block = False
    for line in lines:
        s = line.strip()
        if in_block:
            if "*/" in s:
                s = s.split("*/", 1)[1].strip()
                in_block = False
            else:
                continue
        while s.startswith("/*"):
            end = s.find("*/", 2)
            if end < 0:
                in_block = True
                s = ""
                break
            s = s[end + 2:].strip()
        if not s or s.startswith("//"):
            continue
        m = _PACKAGE_RE.match(s)
        return m.group(1) if m else ""
    return ""


def split_function(function: str) -> tuple[str, str, str]:
    """FQN -> (package, outer class, simple method name).

    "pkg.a.B$C.m" gives ("pkg.a", "B", "m"); a dotless name gives
    ("", "", name).
    """
    if "." not in function:
        return "", "", function
    class_fqn, method = function.rsplit(".", 1)
    outer = class_fqn.split("$", 1)[0]
    if "." in outer:
        package, simple = outer.rsplit(".", 1)
    else:
        package, simple = "", outer
    return package, simple, method


def resolve_location(frame: Frame, roots: Sequence[str | Path]) -> SourceLocation:
    """Find the source file for a frame under the given roots.

    A probe only wins when the file's package declaration matches the
    frame's package, so same-named files in the wrong tree never leak in.
    """
    package, simple_class, method = split_function(frame.function)
    probes: list[Path] = []
    for root in roots:
        root = Path(root)
        if frame.file:
            probes.append(root / frame.file)
        if simple_class:
            rel = Path(*package.split(".")) if package else Path()
            probes.append(root / rel / f"{simple_class}.java")

    seen = set()
    for probe in probes:
        if probe in seen:
            continue
        seen.add(probe)
        if not probe.is_file():
            continue
        try:
            _, lines = _cache.read(probe)
        except OSError:
            continue
        if file_package(lines) != package:
            continue
        return SourceLocation(
            file=probe,
            decl_line=_find_decl_line(lines, method, simple_class, frame.line),
            frame_line=frame.line,
        )
    raise SourceNotFound(frame)


def _method_search_name(method: str, simple_class: str) -> str:
    # constructor frames carry the JVM's <init>/<clinit> pseudo-names
    if method in ("<init>", "<clinit>") and simple_class:
        return simple_class
    return method


def _find_decl_line(lines: Sequence[str], method: str, simple_class: str,
                    frame_line: Optional[int]) -> int:
    name = _method_search_name(method, simple_class)
    decls = _declaration_lines(lines, name)
    if frame_line is not None:
        at_or_above = [ln for ln in decls if ln <= frame_line]
        if at_or_above:
            return at_or_above[-1]
        return frame_line
    if decls:
        return decls[0]
    return 1


# ----------------------------------------------------------------------
# extraction
# ----------------------------------------------------------------------

def extract_function(location: SourceLocation, method_name: str) -> ExtractedFunction:
    """Pull the full method body containing the frame line.

    Scans upward from the frame line (the whole file when it is unknown)
    for the nearest declaration of ``method_name``, then walks the lexer to
    the matching closing brace.  Contiguous annotation lines directly above
    the declaration are kept.  Whitespace runs collapse to single spaces;
    line breaks survive so the span stays meaningful.
    """
    text, lines = _cache.read(location.file)
    offsets = _line_offsets(text)
    name = method_name
    decls = _declaration_lines(lines, name)

    if location.frame_line is not None:
        candidates = [ln for ln in reversed(decls) if ln <= location.frame_line]
    else:
        candidates = decls

    for decl_ln in candidates:
        result = _extract_at(text, lines, offsets, decl_ln, location)
        if result is None:
            continue
        if (
            location.frame_line is not None
            and not result.start_line <= location.frame_line <= result.end_line
        ):
            continue
        return result
    raise DeclarationNotFound(method_name)


def _line_offsets(text: str) -> list[int]:
    offsets = [0]
    for i, c in enumerate(text):
        if c == "\n":
            offsets.append(i + 1)
    return offsets


def _extract_at(text: str, lines: Sequence[str], offsets: list[int],
                decl_ln: int, location: SourceLocation) -> Optional[ExtractedFunction]:
    decl_offset = offsets[decl_ln - 1]
    stop = _find_code_char(text, decl_offset, "{;")
    if stop < 0 or text[stop] == ";":
        return None  # abstract/interface declaration, no body to extract
    close = _scan_block(text, stop)
    if close < 0:
        raise UnbalancedBraces(str(location.file), decl_ln)

    start_line = decl_ln
    while start_line > 1 and lines[start_line - 2].lstrip().startswith("@"):
        start_line -= 1
    end_line = text.count("\n", 0, close) + 1

    signature = _normalize_block(text[decl_offset:stop])
    body = "\n".join(_normalize_line(l) for l in lines[start_line - 1:end_line])
    return ExtractedFunction(
        location=location,
        signature=signature,
        body=body,
        start_line=start_line,
        end_line=end_line,
    )


def read_snippet(location: SourceLocation, before: int, after: int) -> str:
    """Window of raw lines around the frame line, clamped to the file."""
    _, lines = _cache.read(location.file)
    center = location.frame_line or location.decl_line
    lo = max(1, center - before)
    hi = min(len(lines), center + after)
    return "\n".join(lines[lo - 1:hi])


# ----------------------------------------------------------------------
# bundled handle used by summarization and the service
# ----------------------------------------------------------------------

class SourceResolver:
    """Source roots plus the shared file cache, as one handle."""

    def __init__(self, roots: Sequence[str | Path]):
        self.roots = [Path(r) for r in roots]

    def resolve(self, frame: Frame) -> SourceLocation:
        return resolve_location(frame, self.roots)

    def code_for_frame(self, frame: Frame, snippet_window: int = 10) -> str:
        """Method body for .java files; a plain line window otherwise."""
        loc = self.resolve(frame)
        if loc.file.suffix == ".java":
            _, simple_class, method = split_function(frame.function)
            name = _method_search_name(method, simple_class)
            return extract_function(loc, name).body
        return read_snippet(loc, snippet_window, snippet_window)

    def read_lines(self, rel_path: str, start: int, end: int) -> list[str]:
        """Lines [start, end] of a file confined to the configured roots.

        Raises PermissionError when the path escapes every root and
        FileNotFoundError when no root contains it.
        """
        escape_attempt = False
        for root in self.roots:
            candidate = (root / rel_path).resolve()
            try:
                candidate.relative_to(root.resolve())
            except ValueError:
                escape_attempt = True
                continue
            if candidate.is_file():
                _, lines = _cache.read(candidate)
                lo = max(1, start)
                hi = min(len(lines), end)
                return list(lines[lo - 1:hi])
        if escape_attempt:
            raise PermissionError(f"{rel_path} escapes the configured source roots")
        raise FileNotFoundError(rel_path)
