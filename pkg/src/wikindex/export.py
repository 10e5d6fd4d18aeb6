"""Persistence layer: graph files, probe reports, and trace files.

Graph exports are written with hand-rolled ElementTree documents rather than
networkx writers because the output must be byte-deterministic; the library
writers stamp creation dates into the file. The documents stay plain GEXF
1.2draft / GraphML, so generic tools (and networkx itself) can read them.

A probe report bundles everything a probe produced: the echoed configuration,
the ranked mention table, the index values, graph metrics, and the trace. The
JSON form round-trips losslessly and carries a schema version so old files
fail loudly instead of being misread.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .crawler import (
    UNDISCOVERED,
    ConceptNode,
    DomainGraph,
    Edge,
    ProbeConfig,
    ProbeResult,
    Trace,
    TraceEvent,
)
from .errors import ParseError, UnsupportedFormat
from .index import (
    GROWTH_KINDS,
    GrowthFunction,
    RefSequence,
    WikiIndexResult,
    build_ref_sequence,
    compute_wh,
    compute_wi,
)
from .metrics import GraphMetrics, compute_metrics

SCHEMA_VERSION = 1

GEXF = "gexf"
GRAPHML = "graphml"
EDGE_CSV = "edge-csv"
GRAPH_FORMATS = (GEXF, GRAPHML, EDGE_CSV)

_GEXF_NS = "http://www.gexf.net/1.2draft"
_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_SUFFIX_FORMATS = {".gexf": GEXF, ".graphml": GRAPHML, ".csv": EDGE_CSV}


def _ensure_parent(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _write_xml(root: ET.Element, path: Path) -> None:
    ET.indent(root, space="  ")
    body = ET.tostring(root, encoding="unicode")
    _ensure_parent(path).write_text(
        '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n", encoding="utf-8"
    )


def _local(tag: str) -> str:
    """Tag name without its namespace prefix."""
    return tag.rsplit("}", 1)[-1]


# ---------------------------------------------------------------------------
# graph writers


def _gexf_document(graph: DomainGraph) -> ET.Element:
    root = ET.Element("gexf", {"xmlns": _GEXF_NS, "version": "1.2"})
    graph_el = ET.SubElement(
        root, "graph", {"mode": "static", "defaultedgetype": "directed"}
    )
    node_attrs = ET.SubElement(graph_el, "attributes", {"class": "node"})
    for attr_id, attr_type in (
        ("status", "string"),
        ("mentions", "integer"),
        ("discovery_index", "integer"),
    ):
        ET.SubElement(
            node_attrs, "attribute", {"id": attr_id, "title": attr_id, "type": attr_type}
        )
    edge_attrs = ET.SubElement(graph_el, "attributes", {"class": "edge"})
    ET.SubElement(edge_attrs, "attribute", {"id": "kind", "title": "kind", "type": "string"})

    nodes_el = ET.SubElement(graph_el, "nodes")
    for node in graph.ordered_nodes():
        node_el = ET.SubElement(nodes_el, "node", {"id": node.title, "label": node.title})
        values = ET.SubElement(node_el, "attvalues")
        ET.SubElement(values, "attvalue", {"for": "status", "value": node.status})
        if node.mentions is not None:
            ET.SubElement(values, "attvalue", {"for": "mentions", "value": str(node.mentions)})
        ET.SubElement(
            values, "attvalue", {"for": "discovery_index", "value": str(node.discovery_index)}
        )

    edges_el = ET.SubElement(graph_el, "edges")
    for i, edge in enumerate(graph.edges):
        edge_el = ET.SubElement(
            edges_el,
            "edge",
            {"id": str(i), "source": edge.source, "target": edge.target},
        )
        values = ET.SubElement(edge_el, "attvalues")
        ET.SubElement(values, "attvalue", {"for": "kind", "value": edge.kind})
    return root


def _graphml_document(graph: DomainGraph) -> ET.Element:
    root = ET.Element("graphml", {"xmlns": _GRAPHML_NS})
    keys = (
        ("d0", "node", "status", "string"),
        ("d1", "node", "mentions", "int"),
        ("d2", "node", "discovery_index", "int"),
        ("d3", "edge", "kind", "string"),
    )
    for key_id, domain, name, attr_type in keys:
        ET.SubElement(
            root,
            "key",
            {"id": key_id, "for": domain, "attr.name": name, "attr.type": attr_type},
        )
    graph_el = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "directed"})
    for node in graph.ordered_nodes():
        node_el = ET.SubElement(graph_el, "node", {"id": node.title})
        ET.SubElement(node_el, "data", {"key": "d0"}).text = node.status
        if node.mentions is not None:
            ET.SubElement(node_el, "data", {"key": "d1"}).text = str(node.mentions)
        ET.SubElement(node_el, "data", {"key": "d2"}).text = str(node.discovery_index)
    for edge in graph.edges:
        edge_el = ET.SubElement(
            graph_el, "edge", {"source": edge.source, "target": edge.target}
        )
        ET.SubElement(edge_el, "data", {"key": "d3"}).text = edge.kind
    return root


def _write_edge_csv(graph: DomainGraph, path: Path) -> None:
    import csv

    with open(_ensure_parent(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["from", "to", "kind"])
        for edge in graph.edges:
            writer.writerow([edge.source, edge.target, edge.kind])


def export_graph(graph: DomainGraph, fmt: str, path) -> Path:
    """Write the concept graph to path in the named format.

    Supported formats: gexf, graphml, edge-csv. The same graph always
    produces the same bytes.
    """
    path = Path(path)
    fmt = fmt.lower()
    if fmt == GEXF:
        _write_xml(_gexf_document(graph), path)
    elif fmt == GRAPHML:
        _write_xml(_graphml_document(graph), path)
    elif fmt == EDGE_CSV:
        _write_edge_csv(graph, path)
    else:
        raise UnsupportedFormat(f"unknown graph format {fmt!r}; expected one of {GRAPH_FORMATS}")
    return path


# ---------------------------------------------------------------------------
# graph readers (for files written by export_graph)


def _read_gexf(path: Path) -> DomainGraph:
    root = ET.parse(path).getroot()
    graph = DomainGraph()
    for el in root.iter():
        tag = _local(el.tag)
        if tag == "node":
            values = {
                v.get("for"): v.get("value")
                for child in el
                if _local(child.tag) == "attvalues"
                for v in child
            }
            mentions = values.get("mentions")
            graph.nodes[el.get("id")] = ConceptNode(
                title=el.get("id"),
                discovery_index=int(values["discovery_index"]),
                status=values.get("status", UNDISCOVERED),
                mentions=None if mentions is None else int(mentions),
            )
        elif tag == "edge":
            values = {
                v.get("for"): v.get("value")
                for child in el
                if _local(child.tag) == "attvalues"
                for v in child
            }
            graph.edges.append(Edge(el.get("source"), el.get("target"), values["kind"]))
    return graph


def _read_graphml(path: Path) -> DomainGraph:
    root = ET.parse(path).getroot()
    names = {
        el.get("id"): el.get("attr.name")
        for el in root.iter()
        if _local(el.tag) == "key"
    }
    graph = DomainGraph()
    for el in root.iter():
        tag = _local(el.tag)
        if tag not in ("node", "edge"):
            continue
        data = {
            names.get(child.get("key")): child.text
            for child in el
            if _local(child.tag) == "data"
        }
        if tag == "node":
            mentions = data.get("mentions")
            graph.nodes[el.get("id")] = ConceptNode(
                title=el.get("id"),
                discovery_index=int(data["discovery_index"]),
                status=data.get("status", UNDISCOVERED),
                mentions=None if mentions is None else int(mentions),
            )
        else:
            graph.edges.append(Edge(el.get("source"), el.get("target"), data["kind"]))
    return graph


def _read_edge_csv(path: Path) -> DomainGraph:
    import csv

    graph = DomainGraph()
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header != ["from", "to", "kind"]:
            raise ParseError(f"{path}: expected a from,to,kind header, got {header!r}")
        for row in rows:
            if len(row) != 3:
                raise ParseError(f"{path}: malformed edge row {row!r}")
            source, target, kind = row
            for title in (source, target):
                if title not in graph.nodes:
                    graph.nodes[title] = ConceptNode(title, len(graph.nodes))
            graph.edges.append(Edge(source, target, kind))
    return graph


def read_graph(path, fmt: str | None = None) -> DomainGraph:
    """Load a graph written by export_graph, inferring the format from the
    file suffix unless fmt is given."""
    path = Path(path)
    if fmt is None:
        fmt = _SUFFIX_FORMATS.get(path.suffix.lower())
        if fmt is None:
            raise UnsupportedFormat(
                f"cannot infer graph format from suffix {path.suffix!r}"
            )
    fmt = fmt.lower()
    if fmt == GEXF:
        return _read_gexf(path)
    if fmt == GRAPHML:
        return _read_graphml(path)
    if fmt == EDGE_CSV:
        return _read_edge_csv(path)
    raise UnsupportedFormat(f"unknown graph format {fmt!r}; expected one of {GRAPH_FORMATS}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ProbeReport:
    """Everything a probe produced, in one serializable record."""

    generated_at: str
    config: dict
    index: WikiIndexResult
    ref_sequence: RefSequence
    metrics: GraphMetrics
    fetch_count: int
    truncated: bool
    completed: bool
    warnings: tuple[str, ...]
    trace: Trace
    schema_version: int = SCHEMA_VERSION


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def build_report(
    result: ProbeResult,
    config: ProbeConfig,
    *,
    source: str = "",
    growth: GrowthFunction | None = None,
    generated_at: str | None = None,
    top_k: int = 10,
) -> ProbeReport:
    """Derive index values and metrics from a probe result and bundle them.

    source is the spec string the pages came from (e.g. "fixture:dir"), kept
    purely as provenance in the config echo. generated_at overrides the
    timestamp so outputs can be reproduced byte for byte.
    """
    growth = growth if growth is not None else GrowthFunction.sqrt()
    sequence = build_ref_sequence(result.mention_pairs)
    wh = compute_wh(sequence)
    index = compute_wi(wh, sequence.n, growth)
    config_echo = {
        "seed": config.seed,
        "source": str(source),
        "patterns": config.patterns.to_dict(),
        "max_pages": config.max_pages,
        "max_links_per_page": config.max_links_per_page,
        "expand_endnotes": config.expand_endnotes,
        "recognized_sections": list(config.recognized_sections),
        "growth": growth.descriptor,
    }
    return ProbeReport(
        generated_at=generated_at if generated_at is not None else _utc_now(),
        config=config_echo,
        index=index,
        ref_sequence=sequence,
        metrics=compute_metrics(result.graph, top_k=top_k),
        fetch_count=result.fetch_count,
        truncated=result.truncated,
        completed=result.completed,
        warnings=tuple(result.warnings),
        trace=result.trace,
    )


def report_to_dict(report: ProbeReport) -> dict:
    events = []
    for event in report.trace.events:
        entry = {"step": event.step, "title": event.title, "sign": event.sign}
        if event.note is not None:
            entry["note"] = event.note
        events.append(entry)
    return {
        "schema_version": report.schema_version,
        "generated_at": report.generated_at,
        "config": report.config,
        "index": {
            "n": report.index.n,
            "wh": report.index.wh,
            "wi_raw": report.index.wi_raw,
            "wi_rounded": report.index.wi_rounded,
            "growth": report.index.growth,
        },
        "ref_sequence": [
            {"title": title, "mentions": count}
            for title, count in report.ref_sequence.pairs()
        ],
        "metrics": report.metrics.to_dict(),
        "crawl": {
            "fetch_count": report.fetch_count,
            "truncated": report.truncated,
            "completed": report.completed,
            "warnings": list(report.warnings),
        },
        "trace": {
            "seed": report.trace.seed_title,
            "sci_links": report.trace.sci_links,
            "events": events,
        },
    }


def report_from_dict(data: dict) -> ProbeReport:
    try:
        version = data["schema_version"]
        if version != SCHEMA_VERSION:
            raise ParseError(
                f"unsupported report schema version {version!r}; this build reads {SCHEMA_VERSION}"
            )
        index_d = data["index"]
        index = WikiIndexResult(
            n=index_d["n"],
            wh=index_d["wh"],
            wi_raw=index_d["wi_raw"],
            wi_rounded=index_d["wi_rounded"],
            growth=index_d["growth"],
        )
        sequence = build_ref_sequence(
            [(entry["title"], entry["mentions"]) for entry in data["ref_sequence"]]
        )
        if index.n != sequence.n:
            raise ParseError(
                f"report claims N={index.n} but its reference sequence has {sequence.n} entries"
            )
        trace_d = data["trace"]
        trace = Trace(
            seed_title=trace_d["seed"],
            sci_links=trace_d["sci_links"],
            events=tuple(
                TraceEvent(e["step"], e["title"], e["sign"], e.get("note"))
                for e in trace_d["events"]
            ),
        )
        crawl = data["crawl"]
        return ProbeReport(
            generated_at=data["generated_at"],
            config=data["config"],
            index=index,
            ref_sequence=sequence,
            metrics=GraphMetrics.from_dict(data["metrics"]),
            fetch_count=crawl["fetch_count"],
            truncated=crawl["truncated"],
            completed=crawl["completed"],
            warnings=tuple(crawl["warnings"]),
            trace=trace,
            schema_version=version,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed report: {exc}") from exc


def render_report_json(report: ProbeReport) -> str:
    return json.dumps(report_to_dict(report), ensure_ascii=False, indent=2) + "\n"


def _format_number(value: float, decimals: int = 2) -> str:
    if abs(value - round(value)) < 1e-9:
        return str(int(round(value)))
    return f"{value:.{decimals}f}"


def _growth_factor(index: WikiIndexResult) -> float:
    """f(N) as applied to this result.

    Recovered from wi_raw when WH is nonzero; otherwise recomputed from the
    named growth kind (a zero raw value carries no information)."""
    if index.wh:
        return index.wi_raw / index.wh
    if index.growth in GROWTH_KINDS:
        return GrowthFunction.from_name(index.growth).value(index.n)
    return 0.0


def render_report_text(report: ProbeReport) -> str:
    lines = [
        f"Seed: {report.trace.seed_title}",
        f"Source: {report.config.get('source', '')}",
        f"Generated: {report.generated_at}",
        f"Pages fetched: {report.fetch_count}" + (" (truncated)" if report.truncated else ""),
    ]
    lines.extend(f"Warning: {warning}" for warning in report.warnings)
    lines.append("")
    lines.append(f"Mention counts (N = {report.index.n}):")
    for title, count in report.ref_sequence.pairs():
        lines.append(f"  {count:>5}  {title}")
    lines.append("")
    lines.append(f"WH = {report.index.wh}")
    factor = _format_number(_growth_factor(report.index))
    lines.append(f"WI = {report.index.wh} × {factor} = {report.index.wi_rounded}")
    lines.append(
        f"Raw WI: {report.index.wi_raw:.4f} (growth: {report.index.growth})"
    )
    lines.append("")
    m = report.metrics
    lines.append(f"Graph: {m.node_count} nodes, {m.edge_count} edges")
    lines.append(f"  average degree: {_format_number(m.average_degree)}")
    lines.append(f"  diameter: {m.diameter}")
    lines.append(f"  average clustering: {_format_number(m.average_clustering, 4)}")
    lines.append(f"  largest component: {m.largest_component_size} nodes")
    lines.append("Top degrees:")
    for title, degree in m.top_nodes:
        lines.append(f"  {degree:>3}  {title}")
    return "\n".join(lines) + "\n"


def export_report(report: ProbeReport, fmt: str, path) -> Path:
    """Write the report as machine-readable JSON or a human-readable summary."""
    path = Path(path)
    fmt = fmt.lower()
    if fmt == "json":
        text = render_report_json(report)
    elif fmt == "text":
        text = render_report_text(report)
    else:
        raise UnsupportedFormat(f"unknown report format {fmt!r}; expected json or text")
    _ensure_parent(path).write_text(text, encoding="utf-8")
    return path


def read_report(path) -> ProbeReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path} does not hold a report object")
    return report_from_dict(data)


# ---------------------------------------------------------------------------
# traces


def write_trace(trace: Trace, path) -> Path:
    path = _ensure_parent(Path(path))
    path.write_text(trace.render(), encoding="utf-8")
    return path
