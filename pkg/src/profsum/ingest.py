"""Profile file decoding: folded-stack text and the pprof wire format.

Folded grammar (bit-exact, line oriented)::

    line  = STACK SP COUNT
    STACK = FRAME (';' FRAME)*
    FRAME = NAME | NAME ':L' LINE | NAME '(' FILE ':' LINE ')'
    NAME  = one or more chars excluding ';', '(' and whitespace
    COUNT = decimal >= 1

Lines starting with '#' are comments; a first-line pragma
``#metric <name> <unit>`` names the single metric (default
``samples``/``count``).  A serialized line of 0 means the line is unknown.

pprof input is the usual gzip-optional protocol-buffer message.  The
decoder below implements exactly the field numbers of the de facto schema
(sample_type=1, sample=2, mapping=3, location=4, function=5,
string_table=6) and skips everything else, so no protobuf runtime is
needed.
"""

from __future__ import annotations

import gzip
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import (
    DanglingReference,
    DecodeError,
    EmptyInput,
    MalformedLine,
    UnsupportedCompression,
)
from .model import Frame, MetricDescriptor, Profile, Sample, canonicalize

FORMAT_FOLDED = "folded"
FORMAT_PPROF = "pprof"

DEFAULT_DESCRIPTOR = MetricDescriptor("samples", "count")


@dataclass(frozen=True)
class IngestReport:
    """What a decode run saw: raw sample count and frame resolution tallies."""

    samples_read: int
    frames_resolved: int
    frames_unresolved: int
    format: str


# ----------------------------------------------------------------------
# folded text
# ----------------------------------------------------------------------

_FRAME_FULL = re.compile(r"^([^;(\s]+)\(([^:()\s]+):(\d+)\)$")
_FRAME_LINE = re.compile(r"^([^;(\s]+):L(\d+)$")
_FRAME_BARE = re.compile(r"^[^;(\s]+$")


def _parse_frame_token(token: str) -> Frame:
    m = _FRAME_FULL.match(token)
    if m:
        return Frame(m.group(1), m.group(2), int(m.group(3)))
    m = _FRAME_LINE.match(token)
    if m:
        return Frame(m.group(1), None, int(m.group(2)))
    if _FRAME_BARE.match(token):
        return Frame(token)
    raise ValueError(f"bad frame token {token!r}")


def parse_folded(data: Union[bytes, str]) -> tuple[Profile, IngestReport]:
    """Decode collapsed-stack text into a canonical single-metric Profile."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedLine(0, f"input is not valid UTF-8: {exc}") from None
    else:
        text = data

    descriptor = DEFAULT_DESCRIPTOR
    counts: dict[str, int] = {}
    samples_read = 0
    resolved = 0
    unresolved = 0
    # stack memo: repeated stacks skip token parsing entirely
    stack_cache: dict[str, tuple[tuple[Frame, ...], int, int]] = {}
    frame_cache: dict[str, Frame] = {}

    has_cr = "\r" in text
    for line_no, line in enumerate(text.split("\n"), 1):
        if has_cr:
            line = line.rstrip("\r")
        if not line:
            continue
        if line[0] == "#":
            if line.startswith("#metric"):
                if line_no != 1:
                    continue  # later pragmas are plain comments
                parts = line.split()
                if len(parts) != 3:
                    raise MalformedLine(line_no, "pragma must be '#metric <name> <unit>'")
                descriptor = MetricDescriptor(parts[1], parts[2])
            continue
        head, sep, count_str = line.rpartition(" ")
        if not sep or not head:
            raise MalformedLine(line_no, "expected 'STACK COUNT'")
        if not count_str.isdigit():
            raise MalformedLine(line_no, f"count {count_str!r} is not a decimal integer")
        count = int(count_str)
        if count < 1:
            raise MalformedLine(line_no, "count must be >= 1")
        cached = stack_cache.get(head)
        if cached is None:
            if " " in head or "\t" in head:
                raise MalformedLine(line_no, "whitespace inside stack")
            frames = []
            n_res = 0
            for token in head.split(";"):
                frame = frame_cache.get(token)
                if frame is None:
                    try:
                        frame = _parse_frame_token(token)
                    except ValueError as exc:
                        raise MalformedLine(line_no, str(exc)) from None
                    frame_cache[token] = frame
                frames.append(frame)
                if frame.file is not None:
                    n_res += 1
            cached = (tuple(frames), n_res, len(frames) - n_res)
            stack_cache[head] = cached
        samples_read += 1
        # merge by stack string first; canonicalize re-merges by frame triple
        if head in counts:
            counts[head] += count
        else:
            counts[head] = count
        resolved += cached[1]
        unresolved += cached[2]

    if not counts:
        raise EmptyInput("no samples in folded input")

    samples = tuple(
        Sample(stack_cache[head][0], (count,)) for head, count in counts.items()
    )
    profile = canonicalize(Profile((descriptor,), samples, 0))
    report = IngestReport(samples_read, resolved, unresolved, FORMAT_FOLDED)
    return profile, report


def _frame_token(frame: Frame) -> str:
    if frame.file is not None:
        return f"{frame.function}({frame.file}:{frame.line or 0})"
    if frame.line is not None:
        return f"{frame.function}:L{frame.line}"
    return frame.function


def project(profile: Profile, metric: int) -> Profile:
    """Canonical single-metric projection; drops stacks with zero weight."""
    descriptor = profile.descriptors[metric]
    samples = tuple(
        Sample(s.stack, (s.values[metric],))
        for s in profile.samples
        if s.values[metric] > 0
    )
    if not samples:
        raise EmptyInput(f"metric {descriptor.name!r} has zero total weight")
    return canonicalize(Profile((descriptor,), samples, 0))


def export_folded(profile: Profile, metric: int | None = None) -> str:
    """Serialize one metric of a profile as canonical folded text.

    Inverse of parse_folded for profiles whose names fit the grammar:
    re-parsing the output yields the canonical projection onto ``metric``.
    """
    m = profile.default_metric if metric is None else metric
    if not 0 <= m < len(profile.descriptors):
        raise ValueError(f"metric index {m} out of range")
    canon = project(profile, m)
    out = []
    d = canon.descriptors[0]
    if (d.name, d.unit) != (DEFAULT_DESCRIPTOR.name, DEFAULT_DESCRIPTOR.unit):
        out.append(f"#metric {d.name} {d.unit}")
    for s in canon.samples:
        stack = ";".join(_frame_token(f) for f in s.stack)
        out.append(f"{stack} {s.values[0]}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# pprof wire format
# ----------------------------------------------------------------------

_WT_VARINT = 0
_WT_I64 = 1
_WT_LEN = 2
_WT_I32 = 5


class _Reader:
    """Cursor over a byte span with protobuf primitives."""

    __slots__ = ("data", "pos", "end")

    def __init__(self, data: bytes, pos: int = 0, end: int | None = None):
        self.data = data
        self.pos = pos
        self.end = len(data) if end is None else end

    def done(self) -> bool:
        return self.pos >= self.end

    def varint(self) -> int:
        result = 0
        shift = 0
        start = self.pos
        while True:
            if self.pos >= self.end:
                raise DecodeError(start, "truncated varint")
            b = self.data[self.pos]
            self.pos += 1
            result |= (b & 0x7F) << shift
            if not b & 0x80:
                return result
            shift += 7
            if shift > 63:
                raise DecodeError(start, "varint longer than 10 bytes")

    def tag(self) -> tuple[int, int]:
        start = self.pos
        key = self.varint()
        field, wire = key >> 3, key & 0x7
        if field == 0:
            raise DecodeError(start, "field number 0")
        if wire not in (_WT_VARINT, _WT_I64, _WT_LEN, _WT_I32):
            raise DecodeError(start, f"unsupported wire type {wire}")
        return field, wire

    def span(self) -> tuple[int, int]:
        start = self.pos
        length = self.varint()
        if self.pos + length > self.end:
            raise DecodeError(start, "length-delimited field overruns buffer")
        lo = self.pos
        self.pos += length
        return lo, self.pos

    def skip(self, wire: int) -> None:
        if wire == _WT_VARINT:
            self.varint()
        elif wire == _WT_I64:
            if self.pos + 8 > self.end:
                raise DecodeError(self.pos, "truncated fixed64")
            self.pos += 8
        elif wire == _WT_I32:
            if self.pos + 4 > self.end:
                raise DecodeError(self.pos, "truncated fixed32")
            self.pos += 4
        else:
            self.span()


def _read_repeated_u64(r: _Reader, wire: int, out: list[int]) -> None:
    # repeated integers arrive either one-per-tag or packed in one LEN field
    if wire == _WT_VARINT:
        out.append(r.varint())
    elif wire == _WT_LEN:
        lo, hi = r.span()
        sub = _Reader(r.data, lo, hi)
        while not sub.done():
            out.append(sub.varint())
    else:
        raise DecodeError(r.pos, "integer field with non-integer wire type")


def _decode_value_type(data: bytes, lo: int, hi: int) -> tuple[int, int]:
    r = _Reader(data, lo, hi)
    type_idx = unit_idx = 0
    while not r.done():
        field, wire = r.tag()
        if field == 1 and wire == _WT_VARINT:
            type_idx = r.varint()
        elif field == 2 and wire == _WT_VARINT:
            unit_idx = r.varint()
        else:
            r.skip(wire)
    return type_idx, unit_idx


def _decode_sample(data: bytes, lo: int, hi: int) -> tuple[list[int], list[int], int]:
    r = _Reader(data, lo, hi)
    loc_ids: list[int] = []
    values: list[int] = []
    while not r.done():
        field, wire = r.tag()
        if field == 1:
            _read_repeated_u64(r, wire, loc_ids)
        elif field == 2:
            _read_repeated_u64(r, wire, values)
        else:
            r.skip(wire)
    return loc_ids, values, lo


def _decode_line(data: bytes, lo: int, hi: int) -> tuple[int, int]:
    r = _Reader(data, lo, hi)
    function_id = 0
    line = 0
    while not r.done():
        field, wire = r.tag()
        if field == 1 and wire == _WT_VARINT:
            function_id = r.varint()
        elif field == 2 and wire == _WT_VARINT:
            line = r.varint()
        else:
            r.skip(wire)
    return function_id, line


def _decode_location(data: bytes, lo: int, hi: int):
    r = _Reader(data, lo, hi)
    loc_id = 0
    address = 0
    lines: list[tuple[int, int]] = []
    while not r.done():
        field, wire = r.tag()
        if field == 1 and wire == _WT_VARINT:
            loc_id = r.varint()
        elif field == 3 and wire == _WT_VARINT:
            address = r.varint()
        elif field == 4 and wire == _WT_LEN:
            sub_lo, sub_hi = r.span()
            lines.append(_decode_line(data, sub_lo, sub_hi))
        else:
            r.skip(wire)
    return loc_id, address, lines


def _decode_function(data: bytes, lo: int, hi: int):
    r = _Reader(data, lo, hi)
    fn_id = name = system_name = filename = start_line = 0
    while not r.done():
        field, wire = r.tag()
        if wire != _WT_VARINT:
            r.skip(wire)
            continue
        v = r.varint()
        if field == 1:
            fn_id = v
        elif field == 2:
            name = v
        elif field == 3:
            system_name = v
        elif field == 4:
            filename = v
        elif field == 5:
            start_line = v
    return fn_id, name, system_name, filename, start_line


_COMPRESSION_MAGICS = (
    (b"\x28\xb5\x2f\xfd", "zstd"),
    (b"\xfd7zXZ\x00", "xz"),
    (b"BZh", "bzip2"),
    (b"\x78\x01", "zlib"),
    (b"\x78\x9c", "zlib"),
    (b"\x78\xda", "zlib"),
    (b"\x04\x22\x4d\x18", "lz4"),
)


def _decompress(data: bytes) -> bytes:
    if data[:2] == b"\x1f\x8b":
        try:
            return gzip.decompress(data)
        except (OSError, EOFError) as exc:
            raise DecodeError(0, f"bad gzip stream: {exc}") from None
    for magic, name in _COMPRESSION_MAGICS:
        if data.startswith(magic):
            raise UnsupportedCompression(f"{name}-compressed input; only gzip is supported")
    return data


def parse_pprof(data: bytes) -> tuple[Profile, IngestReport]:
    """Decode a (gzip-optional) pprof message into a canonical Profile.

    Every sample_type becomes a metric descriptor and the last one is the
    default metric.  Location line entries expand leaf-first into separate
    frames, then the whole stack is flipped to root-first.  Addresses with
    no function record surface as ``0x<address>`` frames rather than being
    dropped.
    """
    data = _decompress(data)
    if not data:
        raise EmptyInput("empty pprof message")

    value_types: list[tuple[int, int]] = []
    sample_spans: list[tuple[int, int]] = []
    location_spans: list[tuple[int, int]] = []
    function_spans: list[tuple[int, int]] = []
    strings: list[str] = []

    r = _Reader(data)
    while not r.done():
        field, wire = r.tag()
        if wire != _WT_LEN:
            r.skip(wire)
            continue
        lo, hi = r.span()
        if field == 1:
            value_types.append(_decode_value_type(data, lo, hi))
        elif field == 2:
            sample_spans.append((lo, hi))
        elif field == 4:
            location_spans.append((lo, hi))
        elif field == 5:
            function_spans.append((lo, hi))
        elif field == 6:
            strings.append(data[lo:hi].decode("utf-8", errors="replace"))
        # field 3 (mapping) and the rest are skipped

    if strings and strings[0] != "":
        raise DecodeError(0, "string_table[0] must be the empty string")

    def strtab(idx: int, what: str) -> str:
        if idx == 0:
            return ""
        if idx >= len(strings):
            raise DecodeError(0, f"{what} cites string index {idx} beyond table")
        return strings[idx]

    functions: dict[int, tuple[str, str, int]] = {}
    for lo, hi in function_spans:
        fn_id, name_i, sys_i, file_i, start_line = _decode_function(data, lo, hi)
        name = strtab(name_i, "function name") or strtab(sys_i, "system name")
        filename = strtab(file_i, "filename")
        functions[fn_id] = (name, filename, start_line)

    frame_lists: dict[int, tuple[Frame, ...]] = {}
    for lo, hi in location_spans:
        loc_id, address, lines = _decode_location(data, lo, hi)
        frames: list[Frame] = []
        for function_id, line in lines:
            fn = functions.get(function_id)
            if fn is None:
                raise DanglingReference(function_id, "function")
            name, filename, start_line = fn
            if not name:
                name = f"0x{address:x}"
            eff_line = line if 0 < line < (1 << 63) else start_line
            frames.append(Frame(name, filename or None, eff_line if eff_line > 0 else None))
        if not frames:
            frames.append(Frame(f"0x{address:x}"))
        frame_lists[loc_id] = tuple(frames)

    descriptors = [
        MetricDescriptor(strtab(t, "sample type") or "samples", strtab(u, "unit") or "count")
        for t, u in value_types
    ]
    if not descriptors:
        descriptors = [DEFAULT_DESCRIPTOR]
    # de-duplicate names defensively; pprof writers should not emit clashes
    seen: dict[str, int] = {}
    for i, d in enumerate(descriptors):
        if d.name in seen:
            descriptors[i] = MetricDescriptor(f"{d.name}#{i}", d.unit)
        seen[descriptors[i].name] = i

    samples: list[Sample] = []
    resolved = 0
    unresolved = 0
    for lo, hi in sample_spans:
        loc_ids, values, offset = _decode_sample(data, lo, hi)
        if len(values) != len(descriptors):
            raise DecodeError(
                offset,
                f"sample has {len(values)} values for {len(descriptors)} sample types",
            )
        if not any(values):
            raise DecodeError(offset, "sample has no positive value")
        stack: list[Frame] = []
        for loc_id in loc_ids:  # leaf-first in the message
            frames = frame_lists.get(loc_id)
            if frames is None:
                raise DanglingReference(loc_id, "location")
            stack.extend(frames)
        if not stack:
            raise DecodeError(offset, "sample with empty location list")
        stack.reverse()
        for f in stack:
            if f.file is not None:
                resolved += 1
            else:
                unresolved += 1
        samples.append(Sample(tuple(stack), tuple(values)))

    if not samples:
        raise EmptyInput("pprof message contains no samples")

    profile = canonicalize(
        Profile(tuple(descriptors), tuple(samples), len(descriptors) - 1)
    )
    report = IngestReport(len(samples), resolved, unresolved, FORMAT_PPROF)
    return profile, report


# ----------------------------------------------------------------------
# format detection
# ----------------------------------------------------------------------

# leading tags a pprof message can plausibly start with (field 1..6, LEN)
_PPROF_LEAD_TAGS = {0x0A, 0x12, 0x1A, 0x22, 0x2A, 0x32}


def sniff_format(data: bytes) -> str:
    """Guess folded vs pprof: gzip magic or a leading protobuf tag wins."""
    if data[:2] == b"\x1f\x8b":
        return FORMAT_PPROF
    if data and data[0] in _PPROF_LEAD_TAGS:
        return FORMAT_PPROF
    return FORMAT_FOLDED


def load_profile(path: str | Path, fmt: str = "auto") -> tuple[Profile, IngestReport]:
    """Read a profile file, auto-detecting the format unless told otherwise."""
    data = Path(path).read_bytes()
    if fmt == "auto":
        fmt = sniff_format(data)
    if fmt == FORMAT_PPROF:
        return parse_pprof(data)
    if fmt == FORMAT_FOLDED:
        return parse_folded(data)
    raise ValueError(f"unknown format {fmt!r}")
