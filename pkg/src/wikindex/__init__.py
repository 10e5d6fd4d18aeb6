"""wikindex: estimate an author's popularity by sounding a wiki.

Starting from a seed article, the crawler follows internal links breadth
first, counts author mentions in each page's bibliographic sections, and
builds a concept graph. The ranked mention counts give the WH number and the
Wiki-index WI = WH * f(N).
"""

from .content_source import FixtureSource, LiveSource, SourceConfig, fetch_page, make_source
from .crawler import (
    ConceptNode,
    DomainGraph,
    Edge,
    ProbeConfig,
    ProbeResult,
    Trace,
    TraceEvent,
    load_checkpoint,
    probe,
    resume,
)
from .errors import (
    CacheCorrupt,
    CheckpointCorrupt,
    CorpusError,
    EmptyGraph,
    InvalidFunction,
    NetworkError,
    PageNotFound,
    ParseError,
    RedirectLoop,
    SeedNotFound,
    UnsupportedFormat,
    WikindexError,
)
from .export import (
    ProbeReport,
    build_report,
    export_graph,
    export_report,
    read_graph,
    read_report,
    write_trace,
)
from .index import (
    GrowthFunction,
    RefSequence,
    WikiIndexResult,
    build_ref_sequence,
    compute_wh,
    compute_wi,
    wiki_index,
)
from .metrics import GraphMetrics, compute_metrics
from .page_analysis import AuthorPatterns

__version__ = "0.1.0"

__all__ = [
    "AuthorPatterns",
    "CacheCorrupt",
    "CheckpointCorrupt",
    "ConceptNode",
    "CorpusError",
    "DomainGraph",
    "Edge",
    "EmptyGraph",
    "FixtureSource",
    "GraphMetrics",
    "GrowthFunction",
    "InvalidFunction",
    "LiveSource",
    "NetworkError",
    "PageNotFound",
    "ParseError",
    "ProbeConfig",
    "ProbeReport",
    "ProbeResult",
    "RedirectLoop",
    "RefSequence",
    "SeedNotFound",
    "SourceConfig",
    "Trace",
    "TraceEvent",
    "UnsupportedFormat",
    "WikiIndexResult",
    "WikindexError",
    "build_ref_sequence",
    "build_report",
    "compute_metrics",
    "compute_wh",
    "compute_wi",
    "export_graph",
    "export_report",
    "fetch_page",
    "load_checkpoint",
    "make_source",
    "probe",
    "read_graph",
    "read_report",
    "resume",
    "wiki_index",
    "write_trace",
    "__version__",
]
