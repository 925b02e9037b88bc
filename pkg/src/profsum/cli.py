"""Command-line entry points: flame/hot/select for one-shot analysis,
clean/bleu for corpus work, serve for the interactive UI."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bleu as bleu_mod
from . import cct as cct_mod
from .cct import (
    build_bottom_up,
    build_top_down,
    find_by_function,
    find_by_path,
    rank_hot,
    select_call_path,
)
from .errors import ProfsumError, UnknownNode
from .ingest import load_profile
from .service import (
    SessionConfig,
    dumps,
    flat_json,
    make_server,
    node_id_str,
    parse_node_id,
    tree_json,
)
from .sourcemap import SourceResolver
from .summarize import (
    BACKEND_EXTRACTIVE,
    BACKEND_REMOTE,
    RULES,
    SummarizerConfig,
    SummaryCache,
    clean_jsonl,
    summarize_call_path,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profsum",
        description="Interpret sampled profiles: context trees, hotspots, "
        "and per-call-path source summaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("input", help="profile file (pprof or folded stacks)")
        p.add_argument("--format", choices=["auto", "pprof", "folded"], default="auto")
        p.add_argument("--metric", help="metric name (default: the profile's default)")

    p_flame = sub.add_parser("flame", help="emit a view as JSON")
    add_input(p_flame)
    p_flame.add_argument("--view", choices=["topdown", "bottomup", "flat"],
                         default="topdown")

    p_hot = sub.add_parser("hot", help="rank the hottest nodes")
    add_input(p_hot)
    p_hot.add_argument("-k", type=int, default=10, help="number of rows")
    p_hot.add_argument("--mode", choices=["inclusive", "exclusive"],
                       default="exclusive")

    p_select = sub.add_parser("select", help="print the call path of a node")
    add_input(p_select)
    p_select.add_argument("node", help="node id (hex), 'a;b;c' path, or function name")
    p_select.add_argument("--view", choices=["topdown", "bottomup"], default="topdown")
    p_select.add_argument("--summaries", action="store_true",
                          help="annotate each line with a summary")
    p_select.add_argument("--source-root", action="append", default=[],
                          metavar="DIR", help="source root (repeatable)")
    p_select.add_argument("--app-prefix", action="append", default=[],
                          metavar="PREFIX", help="application package prefix (repeatable)")
    p_select.add_argument("--backend-url", help="summarization server base URL")
    p_select.add_argument("--offline", action="store_true",
                          help="use the extractive backend (no network)")

    p_clean = sub.add_parser("clean", help="filter a JSONL code/comment corpus")
    p_clean.add_argument("input", help="JSONL file with 'code' and 'comment' fields")
    p_clean.add_argument("-o", "--output", help="where to write the kept pairs")

    p_bleu = sub.add_parser("bleu", help="score candidate summaries against references")
    p_bleu.add_argument("--candidates", required=True, help="one candidate per line")
    p_bleu.add_argument("--references", required=True, help="one reference per line")
    p_bleu.add_argument("--per-sentence", action="store_true",
                        help="also print one score per line pair")

    p_serve = sub.add_parser("serve", help="run the HTTP service and UI")
    add_input(p_serve)
    p_serve.add_argument("--port", type=int, default=8712)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--source-root", action="append", default=[], metavar="DIR")
    p_serve.add_argument("--app-prefix", action="append", default=[], metavar="PREFIX")
    p_serve.add_argument("--backend-url", help="summarization server base URL")
    p_serve.add_argument("--offline", action="store_true")
    p_serve.add_argument("--allow-endpoint", action="append", default=[],
                         metavar="URL", help="summarizer endpoint the UI may switch to")
    p_serve.add_argument("--ui-dir", help="directory with the built frontend")
    p_serve.add_argument("--verbose", action="store_true", help="log requests")
    return parser


def _summarizer_config(args) -> SummarizerConfig:
    if getattr(args, "backend_url", None) and not args.offline:
        return SummarizerConfig(backend=BACKEND_REMOTE, endpoint=args.backend_url)
    return SummarizerConfig(backend=BACKEND_EXTRACTIVE)


def _metric_index(parser, profile, name):
    if not name:
        return profile.default_metric
    try:
        return profile.metric_index(name)
    except KeyError:
        parser.error(f"unknown metric {name!r}; profile has "
                     + ", ".join(d.name for d in profile.descriptors))


def _cmd_flame(parser, args) -> int:
    profile, _ = load_profile(args.input, args.format)
    metric = _metric_index(parser, profile, args.metric)
    if args.view == "flat":
        payload = flat_json(profile, metric)
    else:
        tree = build_top_down(profile) if args.view == "topdown" else build_bottom_up(profile)
        payload = tree_json(tree, metric)
    sys.stdout.write(dumps(payload).decode("utf-8"))
    return 0


def _cmd_hot(parser, args) -> int:
    profile, _ = load_profile(args.input, args.format)
    metric = _metric_index(parser, profile, args.metric)
    if args.k < 1:
        parser.error("-k must be >= 1")
    tree = build_top_down(profile)
    total = tree.total(metric) or 1
    for rank, entry in enumerate(rank_hot(tree, metric, args.k, args.mode), 1):
        node = tree.node(entry.node_id)
        frame = node.frame
        where = ""
        if frame.file is not None:
            where = f"  {frame.file}:{frame.line or '?'}"
        pct = 100.0 * entry.value / total
        print(f"{rank:>3}  {entry.value:>14}  {pct:6.2f}%  {entry.function}{where}")
    return 0


def _resolve_node(tree, text):
    if ";" in text:
        node = find_by_path(tree, [t for t in text.split(";") if t])
        if node is not None:
            return node
        raise UnknownNode(0)
    try:
        return tree.node(parse_node_id(text))
    except (ValueError, UnknownNode):
        pass
    node = find_by_function(tree, text)
    if node is None:
        raise UnknownNode(0)
    return node


def _cmd_select(parser, args) -> int:
    profile, _ = load_profile(args.input, args.format)
    _metric_index(parser, profile, args.metric)
    tree = build_top_down(profile) if args.view == "topdown" else build_bottom_up(profile)
    node = _resolve_node(tree, args.node)
    path = select_call_path(tree, node.id, args.app_prefix)

    summaries = {}
    if args.summaries:
        resolver = SourceResolver(args.source_root)
        config = _summarizer_config(args)
        summary_tree = summarize_call_path(path, resolver, config, SummaryCache())
        summaries = {r.node_id: r.summary for r in summary_tree.entries}

    def line_for(n, prefix=""):
        frame = n.frame
        label = n.function
        if frame is not None and frame.line is not None:
            label += f":L{frame.line}"
        if args.summaries:
            label += f" — {summaries[n.id]}"
        print(prefix + label)

    for p in path.parents:
        line_for(p)
    line_for(path.current, "* ")
    for c in path.children:
        line_for(c, "    ")
    return 0


def _cmd_clean(parser, args) -> int:
    lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    kept, stats = clean_jsonl(lines)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            for pair in kept:
                fh.write(json.dumps({"code": pair.code, "comment": pair.comment}) + "\n")
    print(f"kept {stats.kept}")
    for rule in RULES:
        print(f"dropped[{rule}] {stats.dropped[rule]}")
    print(f"malformed {stats.malformed}")
    print(f"param_mismatch missing_from_doc={stats.params_missing_from_doc} "
          f"extra_in_doc={stats.params_extra_in_doc}")
    return 0


def _cmd_bleu(parser, args) -> int:
    candidates = Path(args.candidates).read_text(encoding="utf-8").splitlines()
    references = Path(args.references).read_text(encoding="utf-8").splitlines()
    if len(candidates) != len(references):
        parser.error(
            f"line counts differ: {len(candidates)} candidates vs "
            f"{len(references)} references"
        )
    pairs = [
        (bleu_mod.bleu_tokens(c), bleu_mod.bleu_tokens(r))
        for c, r in zip(candidates, references)
    ]
    if args.per_sentence:
        for i, (c, r) in enumerate(pairs, 1):
            print(f"{i}\t{bleu_mod.sentence_bleu(c, r).score:.4f}")
    print(f"{bleu_mod.corpus_bleu(pairs):.4f}")
    return 0


def _cmd_serve(parser, args) -> int:
    profile_path = Path(args.input)
    config = SessionConfig(
        profile_path=profile_path,
        format=args.format,
        source_roots=[Path(r) for r in args.source_root],
        app_prefixes=args.app_prefix,
        summarizer=_summarizer_config(args),
        port=args.port,
        host=args.host,
        allowed_endpoints=args.allow_endpoint,
        ui_dir=Path(args.ui_dir) if args.ui_dir else None,
    )
    server = make_server(config, verbose=args.verbose)
    host, port = server.server_address[:2]
    print(f"serving {profile_path} on http://{host}:{port}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "flame": _cmd_flame,
    "hot": _cmd_hot,
    "select": _cmd_select,
    "clean": _cmd_clean,
    "bleu": _cmd_bleu,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except (ProfsumError, OSError) as exc:
        print(f"profsum: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
