"""Calling context trees: stacks merged on common root-anchored prefixes.

A tree carries inclusive (self plus subtree) and exclusive (self only)
metric vectors per node and is immutable once built, so all queries are
safe for concurrent readers.  Node ids are path hashes, stable across
rebuilds of the same canonical profile, which lets a UI hold on to a
selection across re-serialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .errors import UnknownNode
from .model import FNV64_OFFSET, FNV64_PRIME, Frame, MetricDescriptor, Profile

TOP_DOWN = "topdown"
BOTTOM_UP = "bottomup"

VIRTUAL_ROOT_NAME = "VIRTUAL ROOT"


class CCTNode:
    """One merged call path; the virtual root has frame None."""

    __slots__ = ("id", "frame", "inclusive", "exclusive", "parent", "children")

    def __init__(self, frame: Optional[Frame], width: int):
        self.id = 0
        self.frame = frame
        self.inclusive = [0] * width
        self.exclusive = [0] * width
        self.parent: Optional[CCTNode] = None
        self.children: list[CCTNode] = []

    @property
    def function(self) -> str:
        return self.frame.function if self.frame is not None else VIRTUAL_ROOT_NAME

    def __repr__(self):
        return f"CCTNode({self.function}, incl={self.inclusive}, excl={self.exclusive})"


class CCT:
    """A finished tree plus a lazily built id index for O(1) selection."""

    def __init__(self, root: CCTNode, orientation: str,
                 descriptors: tuple[MetricDescriptor, ...], default_metric: int):
        self.root = root
        self.orientation = orientation
        self.descriptors = descriptors
        self.default_metric = default_metric
        self._index: Optional[dict[int, CCTNode]] = None

    def build_index(self) -> dict[int, CCTNode]:
        """Materialize the id index; idempotent.  Callers that share a tree
        across threads should invoke this once up front."""
        if self._index is None:
            self._index = {node.id: node for node in self.walk()}
        return self._index

    def node(self, node_id: int) -> CCTNode:
        try:
            return self.build_index()[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self.build_index()

    def walk(self) -> Iterator[CCTNode]:
        """Depth-first, children in display order, root first."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def total(self, metric: int) -> int:
        return self.root.inclusive[metric]


def _build(profile: Profile, reverse: bool, orientation: str) -> CCT:
    width = len(profile.descriptors)
    dm = profile.default_metric
    root = CCTNode(None, width)
    # during the build the children slot holds a frame-keyed dict; the
    # finalize pass below converts it to the sorted display list
    root.children = {}

    if width == 1:
        # single-metric fast path; this is the throughput-critical loop
        root_total = 0
        for sample in profile.samples:
            stack = sample.stack[::-1] if reverse else sample.stack
            value = sample.values[0]
            root_total += value
            node = root
            for frame in stack:
                table = node.children
                child = table.get(frame)
                if child is None:
                    child = CCTNode(frame, 1)
                    child.parent = node
                    child.children = {}
                    table[frame] = child
                child.inclusive[0] += value
                node = child
            node.exclusive[0] += value
        root.inclusive[0] = root_total
    else:
        for sample in profile.samples:
            stack = sample.stack[::-1] if reverse else sample.stack
            values = sample.values
            node = root
            for i in range(width):
                root.inclusive[i] += values[i]
            for frame in stack:
                table = node.children
                child = table.get(frame)
                if child is None:
                    child = CCTNode(frame, width)
                    child.parent = node
                    child.children = {}
                    table[frame] = child
                inc = child.inclusive
                for i in range(width):
                    inc[i] += values[i]
                node = child
            exc = node.exclusive
            for i in range(width):
                exc[i] += values[i]

    # finalize: deterministic child order, then path-hash ids down the tree
    root.id = FNV64_OFFSET  # fnv1a64 of the empty string
    prime, mask = FNV64_PRIME, (1 << 64) - 1
    todo = [root]
    while todo:
        node = todo.pop()
        children = list(node.children.values())
        if len(children) > 1:
            children.sort(key=lambda c: (-c.inclusive[dm], c.frame.sort_key()))
        node.children = children
        parent_id = node.id
        for child in children:
            # fnv1a64_fold(parent_id, frame.path_hash), inlined for the
            # node-count-bound finalize pass
            h = parent_id
            v = child.frame.path_hash
            h = ((h ^ (v >> 56 & 0xFF)) * prime) & mask
            h = ((h ^ (v >> 48 & 0xFF)) * prime) & mask
            h = ((h ^ (v >> 40 & 0xFF)) * prime) & mask
            h = ((h ^ (v >> 32 & 0xFF)) * prime) & mask
            h = ((h ^ (v >> 24 & 0xFF)) * prime) & mask
            h = ((h ^ (v >> 16 & 0xFF)) * prime) & mask
            h = ((h ^ (v >> 8 & 0xFF)) * prime) & mask
            child.id = ((h ^ (v & 0xFF)) * prime) & mask
        todo.extend(children)

    return CCT(root, orientation, profile.descriptors, dm)


def build_top_down(profile: Profile) -> CCT:
    """Merge root-first stacks into the caller-to-callee tree."""
    return _build(profile, reverse=False, orientation=TOP_DOWN)


def build_bottom_up(profile: Profile) -> CCT:
    """Tree over reversed stacks: for each function, where it is called from."""
    return _build(profile, reverse=True, orientation=BOTTOM_UP)


@dataclass(frozen=True)
class FlatRow:
    """Per-(function, file) aggregate, ignoring call paths."""

    function: str
    module: str
    file: Optional[str]
    exclusive: tuple[int, ...]
    inclusive: tuple[int, ...]


def build_flat(profile: Profile) -> list[FlatRow]:
    """One row per distinct (function, file).

    Exclusive sums leaf weights; inclusive counts each sample once however
    often the key recurs in its stack, so recursion does not double-count.
    Rows come back sorted by descending exclusive weight of the default
    metric.
    """
    width = len(profile.descriptors)
    dm = profile.default_metric
    excl: dict[tuple[str, Optional[str]], list[int]] = {}
    incl: dict[tuple[str, Optional[str]], list[int]] = {}

    def bucket(table, key):
        acc = table.get(key)
        if acc is None:
            acc = table[key] = [0] * width
        return acc

    for sample in profile.samples:
        values = sample.values
        leaf = sample.stack[-1]
        acc = bucket(excl, (leaf.function, leaf.file))
        for i in range(width):
            acc[i] += values[i]
        seen = {(f.function, f.file) for f in sample.stack}
        for key in seen:
            acc = bucket(incl, key)
            for i in range(width):
                acc[i] += values[i]

    rows = []
    for key, inc in incl.items():
        function, file = key
        exc = excl.get(key, [0] * width)
        module = function.rsplit(".", 1)[0] if "." in function else ""
        rows.append(FlatRow(function, module, file, tuple(exc), tuple(inc)))
    rows.sort(key=lambda r: (-r.exclusive[dm], r.function, r.file or ""))
    return rows


@dataclass(frozen=True)
class SelectedCallPath:
    """Ancestors (root-most first, virtual root excluded), the chosen node,
    and its direct children in display order."""

    parents: tuple[CCTNode, ...]
    current: CCTNode
    children: tuple[CCTNode, ...]

    def nodes(self) -> tuple[CCTNode, ...]:
        return self.parents + (self.current,) + self.children


def select_call_path(tree: CCT, node_id: int,
                     app_prefixes: Sequence[str] = ()) -> SelectedCallPath:
    """Resolve a node id into the call path to summarize.

    With ``app_prefixes`` set, the parent list is truncated to start at the
    outermost frame whose function matches one of the prefixes, which drops
    harness/runtime frames above the application code.  If nothing matches,
    the list is left untouched.
    """
    node = tree.node(node_id)
    parents: list[CCTNode] = []
    cursor = node.parent
    while cursor is not None and cursor.frame is not None:
        parents.append(cursor)
        cursor = cursor.parent
    parents.reverse()
    if app_prefixes:
        for i, p in enumerate(parents):
            if any(p.frame.function.startswith(pref) for pref in app_prefixes):
                parents = parents[i:]
                break
    return SelectedCallPath(tuple(parents), node, tuple(node.children))


class HotEntry(NamedTuple):
    node_id: int
    function: str
    value: int


def rank_hot(tree: CCT, metric: int, k: int, mode: str = "exclusive") -> list[HotEntry]:
    """Top-k nodes by inclusive or exclusive weight; deterministic order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= metric < len(tree.descriptors):
        raise ValueError(f"metric index {metric} out of range")
    if mode not in ("inclusive", "exclusive"):
        raise ValueError(f"mode must be 'inclusive' or 'exclusive', got {mode!r}")
    nodes = [n for n in tree.walk() if n.frame is not None]
    if mode == "inclusive":
        nodes.sort(key=lambda n: (-n.inclusive[metric], n.id))
        return [HotEntry(n.id, n.function, n.inclusive[metric]) for n in nodes[:k]]
    nodes.sort(key=lambda n: (-n.exclusive[metric], n.id))
    return [HotEntry(n.id, n.function, n.exclusive[metric]) for n in nodes[:k]]


def find_by_path(tree: CCT, functions: Iterable[str]) -> Optional[CCTNode]:
    """Walk child edges matching function names from the root; None if absent."""
    node = tree.root
    for name in functions:
        node = next((c for c in node.children if c.function == name), None)
        if node is None:
            return None
    return node if node is not tree.root else None


def find_by_function(tree: CCT, function: str) -> Optional[CCTNode]:
    """First node (in display DFS order) whose function matches exactly."""
    for node in tree.walk():
        if node.frame is not None and node.function == function:
            return node
    return None
