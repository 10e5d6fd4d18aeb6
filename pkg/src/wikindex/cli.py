"""Command-line interface.

Four subcommands cover the pipeline end to end:

  probe    run a crawl from a seed article and write report/trace/graph files
  index    recompute N, WH, and WI from a stored mention table or report
  compare  render a comparison table from curated rows (nothing is fetched)
  metrics  print graph statistics for a stored graph export or report

Every error class maps to one stable exit code so shell scripts can branch on
outcomes. Probe flags can also be supplied through a JSON config file; flags
win on conflict, so a checked-in recipe can be overridden ad hoc.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .content_source import SourceConfig, make_source
from .crawler import ProbeConfig, probe
from .errors import (
    CorpusError,
    NetworkError,
    ParseError,
    RedirectLoop,
    SeedNotFound,
    WikindexError,
)
from .export import (
    GRAPH_FORMATS,
    build_report,
    export_graph,
    export_report,
    read_graph,
    read_report,
    write_trace,
)
from .index import GROWTH_KINDS, GrowthFunction, wiki_index
from .metrics import GraphMetrics, compute_metrics
from .page_analysis import AuthorPatterns

EXIT_OK = 0
EXIT_USAGE = 2  # argparse's own code for bad invocations
EXIT_SEED = 3
EXIT_IO = 4
EXIT_INPUT = 5
EXIT_NETWORK = 6
EXIT_CORPUS = 7

CACHE_DIR_ENV = "WIKINDEX_CACHE_DIR"
USER_AGENT_ENV = "WIKINDEX_USER_AGENT"


def derive_patterns(
    seed: str,
    full_name: str | None,
    short_name: str | None,
    anchor_terms,
) -> AuthorPatterns:
    """Author patterns for a probe, defaulting the full name to the seed
    title with underscores read as spaces."""
    name = full_name if full_name else seed.replace("_", " ").strip()
    return AuthorPatterns.from_names(name, short_name, anchor_terms=tuple(anchor_terms))


def _load_config(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"config file {path} must hold a JSON object")
    return data


def _slug(seed: str) -> str:
    return seed.strip().replace(" ", "_")


# ---------------------------------------------------------------------------
# probe


def cmd_probe(args: argparse.Namespace) -> int:
    config_file = _load_config(args.config) if args.config else {}

    def pick(name: str, default=None):
        value = getattr(args, name)
        if value is not None:
            return value
        return config_file.get(name, default)

    seed = pick("seed")
    source_spec = pick("source")
    if not seed or not source_spec:
        missing = "--seed" if not seed else "--source"
        print(f"error: {missing} is required (flag or config file)", file=sys.stderr)
        return EXIT_USAGE

    patterns = derive_patterns(
        seed, pick("full_name"), pick("short_name"), pick("anchor", []) or []
    )
    probe_config = ProbeConfig(
        seed=seed,
        patterns=patterns,
        max_pages=int(pick("max_pages", 0)),
        max_links_per_page=int(pick("max_links_per_page", 0)),
        expand_endnotes=bool(pick("expand_endnotes", False)),
    )
    growth = GrowthFunction.from_name(pick("growth", "sqrt"))

    overrides = {}
    cache_dir = pick("cache_dir") or os.environ.get(CACHE_DIR_ENV)
    if cache_dir:
        overrides["cache_dir"] = cache_dir
    user_agent = os.environ.get(USER_AGENT_ENV)
    if user_agent:
        overrides["user_agent"] = user_agent
    rate_limit = pick("rate_limit")
    if rate_limit is not None:
        overrides["rate_limit"] = float(rate_limit)
    source = make_source(SourceConfig.from_spec(source_spec, **overrides))

    result = probe(probe_config, source, checkpoint_path=pick("checkpoint"))
    report = build_report(
        result,
        probe_config,
        source=source_spec,
        growth=growth,
        generated_at=pick("now"),
    )

    out_path = pick("out") or f"{_slug(seed)}.report.json"
    trace_path = pick("trace") or f"{_slug(seed)}.trace.txt"
    export_report(report, "json", out_path)
    write_trace(result.trace, trace_path)

    summary = (
        f"{result.trace.seed_title}: "
        f"N={report.index.n} WH={report.index.wh} WI={report.index.wi_rounded}"
    )
    if result.truncated:
        summary += " (truncated)"
    print(summary)
    print(f"report: {out_path}")
    print(f"trace: {trace_path}")

    export_spec = pick("export")
    if export_spec:
        fmt, sep, target = export_spec.partition(":")
        if not sep or not target:
            raise ParseError(
                f"--export expects <format>:<path> with format one of {GRAPH_FORMATS}, got {export_spec!r}"
            )
        export_graph(result.graph, fmt, target)
        print(f"graph: {target}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# index


def _read_counts_csv(path: Path) -> list[tuple[str, int]]:
    import csv

    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header != ["title", "mentions"]:
            raise ParseError(f"{path}: expected a title,mentions header, got {header!r}")
        pairs = []
        for row in rows:
            if len(row) != 2:
                raise ParseError(f"{path}: malformed row {row!r}")
            title, raw = row
            try:
                pairs.append((title, int(raw)))
            except ValueError as exc:
                raise ParseError(f"{path}: mention count {raw!r} is not an integer") from exc
    return pairs


def cmd_index(args: argparse.Namespace) -> int:
    path = Path(args.input)
    if path.suffix.lower() == ".json":
        report = read_report(path)
        pairs = list(report.ref_sequence.pairs())
        stored = report.config.get("growth")
        default_kind = stored if stored in GROWTH_KINDS else "sqrt"
    else:
        pairs = _read_counts_csv(path)
        default_kind = "sqrt"
    growth = GrowthFunction.from_name(args.growth or default_kind)
    result = wiki_index(pairs, growth=growth)
    line = f"N={result.n} WH={result.wh} WI={result.wi_rounded}"
    if abs(result.wi_raw - result.wi_rounded) > 1e-9:
        line += f" (raw {result.wi_raw:.4f})"
    print(line)
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare


def _resolve_row(row: dict, base: Path) -> tuple[str, int, dict, dict]:
    name = row.get("scientist")
    if not name or not isinstance(name, str):
        raise ParseError(f"comparison row without a scientist name: {row!r}")
    wi = row.get("wiki_index")
    if wi is None:
        report_rel = row.get("report")
        if not report_rel:
            raise ParseError(f"row for {name} needs either wiki_index or a report path")
        wi = read_report(base / report_rel).index.wi_rounded
    if not isinstance(wi, int) or wi < 0:
        raise ParseError(f"row for {name}: wiki_index must be a non-negative integer")
    externals = row.get("externals") or {}
    footnotes = row.get("footnotes") or {}
    return name, wi, externals, footnotes


def _render_table(header: list[str], body: list[list[str]]) -> list[str]:
    widths = [len(cell) for cell in header]
    for row in body:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    for row in [header, *body]:
        cells = [row[0].ljust(widths[0])]
        cells.extend(cell.rjust(widths[i]) for i, cell in enumerate(row[1:], start=1))
        lines.append("  ".join(cells).rstrip())
    return lines


def cmd_compare(args: argparse.Namespace) -> int:
    rows_path = Path(args.rows)
    try:
        data = json.loads(rows_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{rows_path} is not valid JSON: {exc}") from exc
    rows = data.get("rows", [])
    columns = data.get("columns")
    if columns is None:
        columns = []
        for row in rows:
            for key in row.get("externals") or {}:
                if key not in columns:
                    columns.append(key)

    resolved = [_resolve_row(row, rows_path.parent) for row in rows]
    markers: dict[str, str] = {}  # footnote text -> marker, in first-use order
    body = []
    for name, wi, externals, footnotes in resolved:
        cells = [name, str(wi)]
        for column in columns:
            value = externals.get(column)
            cell = "-" if value is None else str(value)
            note = footnotes.get(column)
            if note:
                cell += markers.setdefault(note, "*" * (len(markers) + 1))
            cells.append(cell)
        body.append(cells)

    for line in _render_table(["Scientist", "WI", *columns], body):
        print(line)
    for note, marker in sorted(markers.items(), key=lambda item: len(item[1])):
        print(f"{marker} {note}")

    if args.out:
        import csv

        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["scientist", "wiki_index", *columns])
            for name, wi, externals, _ in resolved:
                writer.writerow(
                    [name, wi, *("" if externals.get(c) is None else externals[c] for c in columns)]
                )
    return EXIT_OK


# ---------------------------------------------------------------------------
# metrics


def _format_value(value: float, decimals: int = 2) -> str:
    if abs(value - round(value)) < 1e-9:
        return str(int(round(value)))
    return f"{value:.{decimals}f}"


def render_metrics_lines(metrics: GraphMetrics) -> list[str]:
    diameter = f"diameter: {metrics.diameter}"
    if metrics.largest_component_size < metrics.node_count:
        diameter += (
            f" (largest component, {metrics.largest_component_size}"
            f" of {metrics.node_count} nodes)"
        )
    lines = [
        f"nodes: {metrics.node_count}",
        f"edges: {metrics.edge_count}",
        f"average degree: {_format_value(metrics.average_degree)}",
        diameter,
        f"average clustering: {_format_value(metrics.average_clustering, 4)}",
        f"largest component: {metrics.largest_component_size} nodes",
        "top degrees:",
    ]
    lines.extend(f"  {degree:>3}  {title}" for title, degree in metrics.top_nodes)
    return lines


def cmd_metrics(args: argparse.Namespace) -> int:
    if args.report:
        metrics = read_report(args.report).metrics
    else:
        metrics = compute_metrics(read_graph(args.graph))
    for line in render_metrics_lines(metrics):
        print(line)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikindex",
        description="Estimate an author's wiki popularity by sounding a wiki from a seed article.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probe", help="crawl from a seed article and write report/trace files")
    p.add_argument("--seed", help="seed article title (underscores read as spaces)")
    p.add_argument("--full-name", dest="full_name", help="author's full name; defaults to the seed")
    p.add_argument("--short-name", dest="short_name", help="surname; defaults to the full name's last token")
    p.add_argument("--anchor", action="append", help="anchor term marking a page as on-topic (repeatable)")
    p.add_argument("--source", help="fixture:<dir> or live:<api-base-url>")
    p.add_argument("--cache-dir", dest="cache_dir", help=f"page cache directory (or ${CACHE_DIR_ENV})")
    p.add_argument("--rate-limit", dest="rate_limit", type=float, help="max live requests per second (0 = unlimited)")
    p.add_argument("--max-pages", dest="max_pages", type=int, help="fetch budget, 0 = unlimited")
    p.add_argument("--max-links-per-page", dest="max_links_per_page", type=int, help="cap on links taken from each page, 0 = unlimited")
    p.add_argument("--expand-endnotes", dest="expand_endnotes", action="store_true", default=None, help="also follow links out of zero-mention pages")
    p.add_argument("--growth", choices=list(GROWTH_KINDS), help="growth function applied to N (default sqrt)")
    p.add_argument("--export", help="also write the graph: <format>:<path>, format one of gexf, graphml, edge-csv")
    p.add_argument("--out", help="report JSON path (default <seed>.report.json)")
    p.add_argument("--trace", help="trace file path (default <seed>.trace.txt)")
    p.add_argument("--checkpoint", help="save resumable crawl state to this path")
    p.add_argument("--now", help="timestamp to stamp into the report (for reproducible output)")
    p.add_argument("--config", help="JSON file supplying any of the above; explicit flags win")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("index", help="compute N, WH, WI from a counts CSV or report JSON")
    p.add_argument("input", help="CSV with a title,mentions header, or a report .json")
    p.add_argument("--growth", choices=list(GROWTH_KINDS), help="growth function (default: the report's, else sqrt)")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("compare", help="render a comparison table from a curated rows file")
    p.add_argument("rows", help="JSON rows file (scientist, wiki_index or report path, externals)")
    p.add_argument("--out", help="also write the table as CSV to this path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("metrics", help="print graph statistics for a stored graph or report")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--graph", help="graph file written by probe --export (gexf/graphml/csv)")
    group.add_argument("--report", help="report JSON; prints its stored metrics")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SeedNotFound as exc:
        return _fail(EXIT_SEED, exc)
    except (NetworkError, RedirectLoop) as exc:
        return _fail(EXIT_NETWORK, exc)
    except CorpusError as exc:
        return _fail(EXIT_CORPUS, exc)
    except OSError as exc:
        return _fail(EXIT_IO, exc)
    except (WikindexError, ValueError) as exc:
        return _fail(EXIT_INPUT, exc)


def _fail(code: int, exc: Exception) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return code
