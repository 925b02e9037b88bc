"""In-memory profile model: metric descriptors, frames, samples, profiles.

Everything is immutable after construction and validated up front, so the
operations elsewhere in the package never re-check these invariants.
Stacks are stored root-first: index 0 is the outermost caller, the last
frame is the sampled leaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def fnv1a64(data: bytes, h: int = FNV64_OFFSET) -> int:
    """64-bit FNV-1a over ``data``; pass ``h`` to continue a running hash."""
    for b in data:
        h = ((h ^ b) * FNV64_PRIME) & _U64
    return h


def fnv1a64_fold(h: int, value: int) -> int:
    """Fold one 64-bit value (big-endian bytes) into a running FNV-1a hash."""
    for shift in (56, 48, 40, 32, 24, 16, 8, 0):
        h = ((h ^ ((value >> shift) & 0xFF)) * FNV64_PRIME) & _U64
    return h


@dataclass(frozen=True)
class MetricDescriptor:
    """Name and unit of one metric column, e.g. ("cpu", "nanoseconds")."""

    name: str
    unit: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("metric name must be nonempty")
        if not self.unit:
            raise ValueError("metric unit must be nonempty")


@dataclass(frozen=True, eq=False)
class Frame:
    """One call-stack entry.

    Identity is the full (function, file, line) triple: the same callee
    reached from two different lines is two distinct frames.  Unknown file
    and line are stored as None; an incoming line of 0 means unknown and is
    normalized to None.
    """

    function: str
    file: Optional[str] = None
    line: Optional[int] = None

    def __post_init__(self):
        if not self.function:
            raise ValueError("frame function must be nonempty")
        if self.file is not None and not self.file:
            object.__setattr__(self, "file", None)
        if self.line is not None:
            if self.line < 0:
                raise ValueError("frame line must be non-negative")
            if self.line == 0:
                object.__setattr__(self, "line", None)
        object.__setattr__(
            self, "_hash", hash((self.function, self.file, self.line))
        )
        object.__setattr__(self, "_path_h", fnv1a64(self.key_bytes()))

    @property
    def path_hash(self) -> int:
        """FNV-1a 64 of key_bytes; node ids chain these down the tree."""
        return self._path_h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.function == other.function
            and self.file == other.file
            and self.line == other.line
        )

    def __hash__(self):
        return self._hash

    def sort_key(self) -> tuple[str, str, int]:
        # Total order over frames; line 0 cannot occur (normalized to None),
        # so (file or "", line or 0) stays injective.
        return (self.function, self.file or "", self.line or 0)

    def key_bytes(self) -> bytes:
        """Stable byte form of the triple, used for node-id hashing."""
        line = "" if self.line is None else str(self.line)
        return f"{self.function}\x1f{self.file or ''}\x1f{line}\x1e".encode("utf-8")

    def __repr__(self):
        loc = ""
        if self.file is not None:
            loc = f" {self.file}:{self.line or '?'}"
        elif self.line is not None:
            loc = f" :{self.line}"
        return f"Frame({self.function}{loc})"


@dataclass(frozen=True)
class Sample:
    """One sampled stack with one weight per profile metric."""

    stack: tuple[Frame, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "stack", tuple(self.stack))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.stack:
            raise ValueError("sample stack must be nonempty")
        if any(v < 0 for v in self.values):
            raise ValueError("sample values must be non-negative")
        if not any(self.values):
            raise ValueError("sample must carry at least one positive value")


@dataclass(frozen=True)
class Profile:
    """A decoded sample set: descriptors plus weighted stacks."""

    descriptors: tuple[MetricDescriptor, ...]
    samples: tuple[Sample, ...]
    default_metric: int = 0

    def __post_init__(self):
        object.__setattr__(self, "descriptors", tuple(self.descriptors))
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.descriptors:
            raise ValueError("profile needs at least one metric descriptor")
        names = [d.name for d in self.descriptors]
        if len(set(names)) != len(names):
            raise ValueError("metric names must be unique within a profile")
        if not 0 <= self.default_metric < len(self.descriptors):
            raise ValueError("default_metric out of range")
        width = len(self.descriptors)
        for s in self.samples:
            if len(s.values) != width:
                raise ValueError(
                    f"sample has {len(s.values)} values, profile has {width} metrics"
                )

    def totals(self) -> tuple[int, ...]:
        """Per-metric sum over all samples."""
        acc = [0] * len(self.descriptors)
        for s in self.samples:
            for i, v in enumerate(s.values):
                acc[i] += v
        return tuple(acc)

    def metric_index(self, name: str) -> int:
        for i, d in enumerate(self.descriptors):
            if d.name == name:
                return i
        raise KeyError(name)


def stack_sort_key(stack: Iterable[Frame]) -> tuple:
    return tuple(f.sort_key() for f in stack)


def canonicalize(profile: Profile) -> Profile:
    """Merge samples with identical stacks and sort samples by stack.

    Idempotent, and preserves the per-metric total weight exactly.
    """
    merged: dict[tuple[Frame, ...], list[int]] = {}
    for s in profile.samples:
        acc = merged.get(s.stack)
        if acc is None:
            merged[s.stack] = list(s.values)
        else:
            for i, v in enumerate(s.values):
                acc[i] += v
    ordered = sorted(merged.items(), key=lambda kv: stack_sort_key(kv[0]))
    samples = tuple(Sample(stack, tuple(values)) for stack, values in ordered)
    return Profile(profile.descriptors, samples, profile.default_metric)
