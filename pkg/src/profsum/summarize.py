"""Corpus cleaning, summarization backends, and call-path summary trees.

Cleaning filters (code, comment) training pairs through five ordered
rules; the first failing rule is reported.  Summaries come either from a
remote model server speaking a one-endpoint JSON protocol or from the
deterministic extractive fallback that needs no network, which keeps the
whole pipeline usable offline and hermetic under test.
"""

from __future__ import annotations

import json
import re
import socket
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cct import SelectedCallPath
from .errors import BackendBadResponse, BackendError, BackendUnavailable, SourceMapError
from .model import fnv1a64
from .sourcemap import SourceResolver

# Training-side settings of the companion summarization model; recorded
# for reference only, nothing here is consulted at runtime.
REFERENCE_FINETUNE = {
    "optimizer": "adam",
    "learning_rate": 5e-5,
    "batch_size": 32,
    "decoder_layers": 6,
    "decoder_hidden": 768,
    "decoder_attention_heads": 12,
}

NOT_FOUND = "NOT FOUND"

BACKEND_REMOTE = "remote"
BACKEND_EXTRACTIVE = "extractive"

PROVENANCE_BACKEND = "backend"
PROVENANCE_EXTRACTIVE = "extractive"
PROVENANCE_CACHE_HIT = "cache_hit"
PROVENANCE_UNRESOLVED = "unresolved"

RULE_SHORT_COMMENT = "short_comment"
RULE_NON_ASCII = "non_ascii"
RULE_PARAM_MISMATCH = "param_mismatch"
RULE_COMMENT_LONGER_THAN_CODE = "comment_longer_than_code"
RULES = (
    RULE_SHORT_COMMENT,
    RULE_NON_ASCII,
    RULE_PARAM_MISMATCH,
    RULE_COMMENT_LONGER_THAN_CODE,
)


def tokenize(text: str) -> list[str]:
    """Unicode-whitespace split with empty tokens removed."""
    return text.split()


# ----------------------------------------------------------------------
# (code, comment) pairs and the cleaning rules
# ----------------------------------------------------------------------

_PARAM_TAG_RE = re.compile(r"@param\s+(\w+)")
_KEYWORDS = frozenset(
    "if for while switch catch return new throw synchronized do try else "
    "case assert super this".split()
)


def _method_name_and_params(code: str) -> tuple[str, list[str]]:
    """Best-effort (name, declared parameter names) from a Java method."""
    s = code
    # drop a leading doc comment and leading annotations before searching
    s = re.sub(r"^\s*/\*.*?\*/\s*", "", s, flags=re.S)
    s = re.sub(r"^(?:\s*@[\w.$]+(?:\([^)]*\))?)+", "", s)
    for m in re.finditer(r"([A-Za-z_$][\w$]*)\s*\(", s):
        name = m.group(1)
        if name in _KEYWORDS:
            continue
        params = _split_params(s, m.end() - 1)
        return name, params
    return "", []


def _split_params(s: str, open_paren: int) -> list[str]:
    depth = 0
    angle = 0
    parts: list[str] = []
    buf: list[str] = []
    i = open_paren
    while i < len(s):
        c = s[i]
        if c == "(":
            depth += 1
            if depth > 1:
                buf.append(c)
        elif c == ")":
            depth -= 1
            if depth == 0:
                parts.append("".join(buf))
                break
            buf.append(c)
        elif c == "<":
            angle += 1
            buf.append(c)
        elif c == ">":
            angle = max(0, angle - 1)
            buf.append(c)
        elif c == "," and depth == 1 and angle == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(c)
        i += 1
    names = []
    for part in parts:
        idents = re.findall(r"[A-Za-z_$][\w$]*", part)
        if idents:
            names.append(idents[-1])
    return names


@dataclass(frozen=True)
class CodeDocPair:
    """One training pair; parameter lists are derived when not supplied."""

    code: str
    comment: str
    params_declared: tuple[str, ...] = None  # type: ignore[assignment]
    params_documented: tuple[str, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        if not self.code:
            raise ValueError("pair code must be nonempty")
        if self.params_declared is None:
            _, params = _method_name_and_params(self.code)
            object.__setattr__(self, "params_declared", tuple(params))
        else:
            object.__setattr__(self, "params_declared", tuple(self.params_declared))
        if self.params_documented is None:
            object.__setattr__(
                self,
                "params_documented",
                tuple(_PARAM_TAG_RE.findall(self.comment)),
            )
        else:
            object.__setattr__(self, "params_documented", tuple(self.params_documented))


@dataclass(frozen=True)
class CleanOutcome:
    verdict: str  # "keep" | "drop"
    rule: Optional[str]  # set iff dropped
    transformed_comment: str

    @property
    def kept(self) -> bool:
        return self.verdict == "keep"


_ASCII_RE = re.compile(r"^[\x09\x0a\x0d\x20-\x7e]*$")


def _is_ascii(text: str) -> bool:
    return bool(_ASCII_RE.match(text))


def strip_links(comment: str) -> str:
    """Remove whitespace-delimited tokens starting http:// or https://."""
    kept = [
        t
        for t in comment.split()
        if not (t.startswith("http://") or t.startswith("https://"))
    ]
    return " ".join(kept)


def clean_pair(pair: CodeDocPair) -> CleanOutcome:
    """Apply the cleaning rules; the link strip runs first, then the four
    drop rules in order against the transformed comment.  Idempotent on
    kept pairs."""
    comment = strip_links(pair.comment)
    comment_tokens = comment.split()
    if len(comment_tokens) < 4:
        return CleanOutcome("drop", RULE_SHORT_COMMENT, comment)
    if not _is_ascii(comment) or not _is_ascii(pair.code):
        return CleanOutcome("drop", RULE_NON_ASCII, comment)
    if pair.params_documented and set(pair.params_documented) != set(pair.params_declared):
        return CleanOutcome("drop", RULE_PARAM_MISMATCH, comment)
    if len(comment_tokens) > len(tokenize(pair.code)):
        return CleanOutcome("drop", RULE_COMMENT_LONGER_THAN_CODE, comment)
    return CleanOutcome("keep", None, comment)


@dataclass
class CleanStats:
    kept: int = 0
    dropped: dict = field(default_factory=lambda: {r: 0 for r in RULES})
    malformed: int = 0
    # the two directions of a parameter mismatch, tallied separately
    params_missing_from_doc: int = 0
    params_extra_in_doc: int = 0

    def total(self) -> int:
        return self.kept + sum(self.dropped.values()) + self.malformed


def clean_corpus(pairs: Iterable[CodeDocPair]) -> tuple[list[CodeDocPair], CleanStats]:
    """Order-preserving filter; kept pairs carry the transformed comment."""
    stats = CleanStats()
    kept: list[CodeDocPair] = []
    for pair in pairs:
        outcome = clean_pair(pair)
        if outcome.kept:
            stats.kept += 1
            kept.append(CodeDocPair(pair.code, outcome.transformed_comment))
        else:
            stats.dropped[outcome.rule] += 1
            if outcome.rule == RULE_PARAM_MISMATCH:
                declared = set(pair.params_declared)
                documented = set(pair.params_documented)
                if declared - documented:
                    stats.params_missing_from_doc += 1
                if documented - declared:
                    stats.params_extra_in_doc += 1
    return kept, stats


def clean_jsonl(lines: Iterable[str]) -> tuple[list[CodeDocPair], CleanStats]:
    """Parse a JSONL corpus ({"code": ..., "comment": ...} per line) and
    clean it; undecodable records land in the malformed tally."""
    pairs: list[CodeDocPair] = []
    malformed = 0
    for line in lines:
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            pairs.append(CodeDocPair(str(obj["code"]), str(obj["comment"])))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            malformed += 1
    kept, stats = clean_corpus(pairs)
    stats.malformed = malformed
    return kept, stats


# ----------------------------------------------------------------------
# summarization backends
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SummarizerConfig:
    """Backend choice and the hard input/output token limits.

    The limits default to the 256-token input / 128-token output window
    the companion model was tuned for (see REFERENCE_FINETUNE).
    """

    backend: str = BACKEND_EXTRACTIVE
    endpoint: Optional[str] = None
    max_input_tokens: int = 256
    max_output_tokens: int = 128
    parallelism: int = 4
    timeout: float = 10.0

    def __post_init__(self):
        if self.backend not in (BACKEND_REMOTE, BACKEND_EXTRACTIVE):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == BACKEND_REMOTE and not self.endpoint:
            raise ValueError("remote backend needs an endpoint")
        if self.max_input_tokens < 1 or self.max_output_tokens < 1:
            raise ValueError("token limits must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


@dataclass(frozen=True)
class SummaryRecord:
    node_id: int
    function: str
    summary: str
    provenance: str
    truncated_input: bool


@dataclass(frozen=True)
class SummaryTree:
    """Per-call-path summaries: parents root-most first, then the current
    node, then its children, mirroring the selected path exactly."""

    entries: tuple[SummaryRecord, ...]


class SummaryCache:
    """Summaries keyed by a 64-bit hash of the post-truncation code."""

    def __init__(self):
        self._lock = threading.Lock()
        self._entries: dict[int, tuple[str, str]] = {}

    def get(self, key: int) -> Optional[tuple[str, str]]:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: int, summary: str, provenance: str) -> tuple[str, str]:
        with self._lock:
            return self._entries.setdefault(key, (summary, provenance))


_CAMEL_SPLIT_1 = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
_CAMEL_SPLIT_2 = re.compile(r"(?<=[A-Z])(?=[A-Z][a-z])")


def split_identifier(name: str) -> str:
    """camelCase / snake_case identifier to lowercase words."""
    s = _CAMEL_SPLIT_1.sub(" ", name)
    s = _CAMEL_SPLIT_2.sub(" ", s)
    return " ".join(s.replace("_", " ").lower().split())


_DOC_COMMENT_RE = re.compile(r"^\s*/\*\*(.*?)\*/", re.S)


def extractive_summary(code: str) -> str:
    """Deterministic offline summary.

    First sentence of a leading doc comment when there is one, else the
    method name split into words and prefixed "method:".  Never empty.
    """
    m = _DOC_COMMENT_RE.match(code)
    if m:
        text = " ".join(
            line.strip().lstrip("*").strip() for line in m.group(1).split("\n")
        )
        text = " ".join(text.split())
        if text:
            dot = text.find(".")
            return text[: dot + 1] if dot >= 0 else text
    name, _ = _method_name_and_params(code)
    if name:
        return f"method: {split_identifier(name)}"
    return "code block"


def _remote_summary(code: str, config: SummarizerConfig) -> str:
    url = config.endpoint.rstrip("/") + "/summarize"
    payload = json.dumps({"language": "java", "code": code}).encode("utf-8")
    request = urllib.request.Request(
        url,
        data=payload,
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request, timeout=config.timeout) as response:
            if response.status != 200:
                raise BackendBadResponse(f"status {response.status}")
            body = response.read()
    except urllib.error.HTTPError as exc:
        raise BackendBadResponse(f"status {exc.code}") from None
    except (urllib.error.URLError, socket.timeout, OSError) as exc:
        raise BackendUnavailable(config.endpoint, str(exc)) from None
    try:
        obj = json.loads(body)
    except json.JSONDecodeError as exc:
        raise BackendBadResponse(f"response is not JSON: {exc}") from None
    summary = obj.get("summary") if isinstance(obj, dict) else None
    if not isinstance(summary, str):
        raise BackendBadResponse("response lacks a string 'summary' field")
    tokens = summary.split()
    if len(tokens) > config.max_output_tokens:
        summary = " ".join(tokens[: config.max_output_tokens])
    return summary


def summarize_function(
    code: str,
    config: SummarizerConfig,
    cache: Optional[SummaryCache] = None,
    node_id: int = 0,
    function: str = "",
) -> SummaryRecord:
    """Summarize one code fragment through the configured backend.

    Input beyond max_input_tokens is truncated (and flagged); results are
    cached by content hash of the post-truncation code, so identical code
    summarizes once per cache lifetime.
    """
    if not code:
        raise ValueError("cannot summarize empty code")
    tokens = code.split()
    truncated = len(tokens) > config.max_input_tokens
    if truncated:
        code = " ".join(tokens[: config.max_input_tokens])
    key = fnv1a64(code.encode("utf-8"))
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return SummaryRecord(node_id, function, hit[0], PROVENANCE_CACHE_HIT, truncated)
    if config.backend == BACKEND_EXTRACTIVE:
        summary, provenance = extractive_summary(code), PROVENANCE_EXTRACTIVE
    else:
        summary, provenance = _remote_summary(code, config), PROVENANCE_BACKEND
    if cache is not None:
        summary, provenance = cache.put(key, summary, provenance)
    return SummaryRecord(node_id, function, summary, provenance, truncated)


def summarize_call_path(
    path: SelectedCallPath,
    sources: SourceResolver,
    config: SummarizerConfig,
    cache: Optional[SummaryCache] = None,
) -> SummaryTree:
    """Resolve, extract and summarize every node on the selected path.

    Per-node failures (missing sources, backend trouble) degrade that
    entry to the NOT FOUND marker instead of failing the whole tree.
    Backend requests run concurrently up to ``config.parallelism``, one
    per distinct code fragment; the output order always mirrors the path
    (parents, current, children) and provenance is deterministic; when the
    same code appears twice, the first occurrence computes and the rest
    are cache hits.
    """
    nodes = path.nodes()

    # resolution and extraction are local and deterministic; run them in
    # path order so duplicate code is detected stably
    prepared: list[tuple[int, str, Optional[str], Optional[int], bool]] = []
    for node in nodes:
        frame = node.frame
        function = frame.function if frame is not None else node.function
        code = None
        key = None
        truncated = False
        if frame is not None:
            try:
                code = sources.code_for_frame(frame)
            except (SourceMapError, OSError):
                code = None
        if code:
            tokens = code.split()
            truncated = len(tokens) > config.max_input_tokens
            if truncated:
                code = " ".join(tokens[: config.max_input_tokens])
            key = fnv1a64(code.encode("utf-8"))
        prepared.append((node.id, function, code, key, truncated))

    # one backend call per distinct post-truncation code not already cached
    pending: dict[int, str] = {}
    cached_before: set[int] = set()
    for _, _, code, key, _ in prepared:
        if key is None:
            continue
        if cache is not None and cache.get(key) is not None:
            cached_before.add(key)
        elif key not in pending:
            pending[key] = code

    def compute(item: tuple[int, str]):
        key, code = item
        try:
            if config.backend == BACKEND_EXTRACTIVE:
                return key, extractive_summary(code), PROVENANCE_EXTRACTIVE
            return key, _remote_summary(code, config), PROVENANCE_BACKEND
        except BackendError:
            return key, None, PROVENANCE_UNRESOLVED

    results: dict[int, tuple[Optional[str], str]] = {}
    if pending:
        workers = min(config.parallelism, len(pending))
        if workers == 1:
            computed = [compute(item) for item in pending.items()]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                computed = list(pool.map(compute, pending.items()))
        for key, summary, provenance in computed:
            results[key] = (summary, provenance)
            if summary is not None and cache is not None:
                summary, provenance = cache.put(key, summary, provenance)
                results[key] = (summary, provenance)

    entries = []
    first_seen: set[int] = set()
    for node_id, function, code, key, truncated in prepared:
        if key is None:
            entries.append(SummaryRecord(node_id, function, NOT_FOUND,
                                         PROVENANCE_UNRESOLVED, False))
            continue
        if key in cached_before:
            summary, _ = cache.get(key)
            entries.append(SummaryRecord(node_id, function, summary,
                                         PROVENANCE_CACHE_HIT, truncated))
            continue
        summary, provenance = results[key]
        if summary is None:
            entries.append(SummaryRecord(node_id, function, NOT_FOUND,
                                         PROVENANCE_UNRESOLVED, False))
            continue
        if key in first_seen:
            entries.append(SummaryRecord(node_id, function, summary,
                                         PROVENANCE_CACHE_HIT, truncated))
        else:
            first_seen.add(key)
            entries.append(SummaryRecord(node_id, function, summary,
                                         provenance, truncated))
    return SummaryTree(tuple(entries))
