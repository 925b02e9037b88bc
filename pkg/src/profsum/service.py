"""Local HTTP service behind the UI, plus the JSON shaping it shares with
the CLI.

The profile is loaded once and both tree orientations are built eagerly;
after that every request reads immutable state, so the threading server
needs no further locking.  Responses are emitted with sorted keys and
compact separators to keep them byte-stable.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from . import cct as cct_mod
from .cct import CCT, CCTNode, build_bottom_up, build_flat, build_top_down, rank_hot
from .errors import ProfsumError, UnknownNode
from .ingest import load_profile
from .model import Profile
from .sourcemap import SourceResolver
from .summarize import (
    BACKEND_REMOTE,
    SummarizerConfig,
    SummaryCache,
    summarize_call_path,
)


def node_id_str(node_id: int) -> str:
    return f"{node_id:016x}"


def parse_node_id(text: str) -> int:
    if text.lower().startswith("0x"):
        text = text[2:]
    return int(text, 16)


def node_json(node: CCTNode, metric: int) -> dict:
    frame = node.frame
    return {
        "id": node_id_str(node.id),
        "name": node.function,
        "file": frame.file if frame else None,
        "line": frame.line if frame else None,
        "value": node.inclusive[metric],
        "self": node.exclusive[metric],
    }


def tree_json(tree: CCT, metric: int) -> dict:
    def render(node: CCTNode) -> dict:
        obj = node_json(node, metric)
        obj["children"] = [render(c) for c in node.children]
        return obj

    return render(tree.root)


def flat_json(profile: Profile, metric: int) -> list[dict]:
    return [
        {
            "function": row.function,
            "module": row.module,
            "file": row.file,
            "exclusive": row.exclusive[metric],
            "inclusive": row.inclusive[metric],
        }
        for row in build_flat(profile)
    ]


def dumps(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


@dataclass
class SessionConfig:
    """Everything one service instance needs to answer requests."""

    profile_path: Path
    format: str = "auto"  # auto | pprof | folded
    source_roots: list[Path] = field(default_factory=list)
    app_prefixes: list[str] = field(default_factory=list)
    summarizer: SummarizerConfig = field(default_factory=SummarizerConfig)
    port: int = 8712
    host: str = "127.0.0.1"
    allowed_endpoints: list[str] = field(default_factory=list)
    ui_dir: Optional[Path] = None

    def __post_init__(self):
        self.profile_path = Path(self.profile_path)
        self.source_roots = [Path(r) for r in self.source_roots]
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} out of range")


class ServiceState:
    """Immutable profile data shared by all request handlers."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.profile, self.report = load_profile(config.profile_path, config.format)
        self.topdown = build_top_down(self.profile)
        self.bottomup = build_bottom_up(self.profile)
        # index both trees now; request threads then only read
        self.topdown.build_index()
        self.bottomup.build_index()
        self.resolver = SourceResolver(config.source_roots)
        self._caches: dict[tuple, SummaryCache] = {}
        self._caches_lock = threading.Lock()

    def tree(self, view: str) -> CCT:
        if view == cct_mod.BOTTOM_UP:
            return self.bottomup
        return self.topdown

    def find_node(self, node_id: int) -> tuple[CCT, CCTNode]:
        for tree in (self.topdown, self.bottomup):
            if tree.has_node(node_id):
                return tree, tree.node(node_id)
        raise UnknownNode(node_id)

    def metric_index(self, name: Optional[str]) -> int:
        if not name:
            return self.profile.default_metric
        return self.profile.metric_index(name)

    def cache_for(self, config: SummarizerConfig) -> SummaryCache:
        key = (config.backend, config.endpoint)
        with self._caches_lock:
            cache = self._caches.get(key)
            if cache is None:
                cache = self._caches[key] = SummaryCache()
            return cache


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "profsum"

    # the server object carries the shared state
    @property
    def state(self) -> ServiceState:
        return self.server.state  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    # -- plumbing --------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str = "application/json") -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-cache")
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status: int, obj) -> None:
        self._send(status, dumps(obj))

    def _error(self, status: int, error: str, detail: str = "") -> None:
        self._json(status, {"error": error, "detail": detail})

    # -- routing ---------------------------------------------------------

    def do_GET(self):  # noqa: N802 (stdlib handler naming)
        try:
            self._route_get()
        except ProfsumError as exc:
            self._error(400, type(exc).__name__, str(exc))
        except Exception as exc:  # pragma: no cover - last-resort guard
            self._error(500, "internal", str(exc))

    def do_POST(self):  # noqa: N802
        try:
            self._route_post()
        except ProfsumError as exc:
            self._error(400, type(exc).__name__, str(exc))
        except Exception as exc:  # pragma: no cover
            self._error(500, "internal", str(exc))

    def _route_get(self):
        url = urlparse(self.path)
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}
        parts = [p for p in url.path.split("/") if p]

        if parts[:1] != ["api"]:
            return self._static(url.path)
        rest = parts[1:]

        if rest == ["meta"]:
            return self._meta()
        if rest == ["tree"]:
            return self._tree(query)
        if rest == ["flat"]:
            return self._flat(query)
        if rest == ["hot"]:
            return self._hot(query)
        if rest == ["source"]:
            return self._source(query)
        if len(rest) == 3 and rest[0] == "node" and rest[2] == "callpath":
            return self._callpath(rest[1])
        self._error(404, "not_found", url.path)

    def _route_post(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        if len(parts) == 4 and parts[:2] == ["api", "node"] and parts[3] == "summaries":
            length = int(self.headers.get("Content-Length") or 0)
            if length:
                self.rfile.read(length)  # request body is currently unused
            return self._summaries(parts[2])
        self._error(404, "not_found", url.path)

    # -- endpoints ---------------------------------------------------------

    def _meta(self):
        profile = self.state.profile
        self._json(200, {
            "metrics": [{"name": d.name, "unit": d.unit} for d in profile.descriptors],
            "default_metric": profile.default_metric,
            "sample_count": len(profile.samples),
        })

    def _metric_or_none(self, query) -> Optional[int]:
        try:
            return self.state.metric_index(query.get("metric"))
        except KeyError:
            self._error(400, "unknown_metric", query.get("metric", ""))
            return None

    def _tree(self, query):
        view = query.get("view", cct_mod.TOP_DOWN)
        if view not in (cct_mod.TOP_DOWN, cct_mod.BOTTOM_UP):
            return self._error(400, "bad_view", view)
        metric = self._metric_or_none(query)
        if metric is None:
            return
        self._json(200, tree_json(self.state.tree(view), metric))

    def _flat(self, query):
        metric = self._metric_or_none(query)
        if metric is None:
            return
        self._json(200, flat_json(self.state.profile, metric))

    def _hot(self, query):
        metric = self._metric_or_none(query)
        if metric is None:
            return
        try:
            k = int(query.get("k", "10"))
        except ValueError:
            return self._error(400, "bad_k", query.get("k", ""))
        mode = query.get("mode", "exclusive")
        try:
            entries = rank_hot(self.state.topdown, metric, k, mode)
        except ValueError as exc:
            return self._error(400, "bad_request", str(exc))
        total = self.state.topdown.total(metric) or 1
        rows = []
        for rank, entry in enumerate(entries, 1):
            node = self.state.topdown.node(entry.node_id)
            frame = node.frame
            rows.append({
                "rank": rank,
                "id": node_id_str(entry.node_id),
                "function": entry.function,
                "file": frame.file if frame else None,
                "line": frame.line if frame else None,
                "value": entry.value,
                "percent": round(100.0 * entry.value / total, 4),
            })
        self._json(200, rows)

    def _source(self, query):
        rel = query.get("file")
        if not rel:
            return self._error(400, "missing_file", "file query parameter required")
        try:
            start = int(query.get("start", "1"))
            end = int(query.get("end", str(start + 50)))
        except ValueError:
            return self._error(400, "bad_range", "start/end must be integers")
        try:
            lines = self.state.resolver.read_lines(rel, start, end)
        except PermissionError as exc:
            return self._error(403, "forbidden", str(exc))
        except FileNotFoundError:
            return self._error(404, "not_found", rel)
        self._json(200, {"lines": lines})

    def _lookup(self, id_text: str):
        try:
            node_id = parse_node_id(id_text)
            return self.state.find_node(node_id)
        except (ValueError, UnknownNode):
            self._error(404, "unknown_node", id_text)
            return None

    def _callpath(self, id_text: str):
        found = self._lookup(id_text)
        if found is None:
            return
        tree, node = found
        path = cct_mod.select_call_path(tree, node.id, self.state.config.app_prefixes)
        metric = tree.default_metric
        self._json(200, {
            "parents": [node_json(n, metric) for n in path.parents],
            "current": node_json(path.current, metric),
            "children": [node_json(n, metric) for n in path.children],
        })

    def _summaries(self, id_text: str):
        found = self._lookup(id_text)
        if found is None:
            return
        tree, node = found
        config = self.state.config.summarizer
        override = self.headers.get("X-Summarizer-Endpoint")
        if override:
            if override not in self.state.config.allowed_endpoints:
                return self._error(403, "endpoint_not_allowed", override)
            config = SummarizerConfig(
                backend=BACKEND_REMOTE,
                endpoint=override,
                max_input_tokens=config.max_input_tokens,
                max_output_tokens=config.max_output_tokens,
                parallelism=config.parallelism,
                timeout=config.timeout,
            )
        path = cct_mod.select_call_path(tree, node.id, self.state.config.app_prefixes)
        summary_tree = summarize_call_path(
            path, self.state.resolver, config, self.state.cache_for(config)
        )
        entries = []
        for record, path_node in zip(summary_tree.entries, path.nodes()):
            frame = path_node.frame
            entries.append({
                "node_id": node_id_str(record.node_id),
                "function": record.function,
                "line": frame.line if frame else None,
                "summary": record.summary,
                "provenance": record.provenance,
                "truncated_input": record.truncated_input,
            })
        self._json(200, {"entries": entries})

    # -- static UI ---------------------------------------------------------

    def _static(self, path: str):
        ui_dir = self.state.config.ui_dir
        if ui_dir is None:
            if path == "/":
                return self._send(
                    200,
                    b"profsum service is running; the JSON API lives under /api/\n",
                    "text/plain; charset=utf-8",
                )
            return self._error(404, "not_found", path)
        rel = path.lstrip("/") or "index.html"
        target = (Path(ui_dir) / rel).resolve()
        try:
            target.relative_to(Path(ui_dir).resolve())
        except ValueError:
            return self._error(403, "forbidden", path)
        if not target.is_file():
            return self._error(404, "not_found", path)
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), ctype)


class ProfileServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, state: ServiceState, verbose: bool = False):
        self.state = state
        self.verbose = verbose
        super().__init__((state.config.host, state.config.port), _Handler)


def make_server(config: SessionConfig, verbose: bool = False) -> ProfileServer:
    """Load the profile, build the trees, and bind the listening socket."""
    return ProfileServer(ServiceState(config), verbose=verbose)
