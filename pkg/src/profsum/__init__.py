"""profsum: calling context trees with per-call-path source summaries."""

from .bleu import BleuScore, bleu_tokens, corpus_bleu, sentence_bleu
from .cct import (
    CCT,
    CCTNode,
    FlatRow,
    SelectedCallPath,
    build_bottom_up,
    build_flat,
    build_top_down,
    rank_hot,
    select_call_path,
)
from .errors import ProfsumError
from .ingest import (
    IngestReport,
    export_folded,
    load_profile,
    parse_folded,
    parse_pprof,
)
from .model import Frame, MetricDescriptor, Profile, Sample, canonicalize
from .sourcemap import (
    ExtractedFunction,
    SourceLocation,
    SourceResolver,
    extract_function,
    read_snippet,
    resolve_location,
)
from .summarize import (
    CleanOutcome,
    CodeDocPair,
    SummarizerConfig,
    SummaryRecord,
    SummaryTree,
    clean_corpus,
    clean_pair,
    summarize_call_path,
    summarize_function,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "BleuScore",
    "CCT",
    "CCTNode",
    "CleanOutcome",
    "CodeDocPair",
    "ExtractedFunction",
    "FlatRow",
    "Frame",
    "IngestReport",
    "MetricDescriptor",
    "Profile",
    "ProfsumError",
    "Sample",
    "SelectedCallPath",
    "SourceLocation",
    "SourceResolver",
    "SummarizerConfig",
    "SummaryRecord",
    "SummaryTree",
    "bleu_tokens",
    "build_bottom_up",
    "build_flat",
    "build_top_down",
    "canonicalize",
    "clean_corpus",
    "clean_pair",
    "corpus_bleu",
    "export_folded",
    "extract_function",
    "load_profile",
    "parse_folded",
    "parse_pprof",
    "rank_hot",
    "read_snippet",
    "resolve_location",
    "select_call_path",
    "sentence_bleu",
    "summarize_call_path",
    "summarize_function",
    "tokenize",
]
