"""Breadth-first sounding of a wiki from one seed article.

The walk keeps a single reading queue. The seed's outgoing links are always
followed; every other fetched page is classified by two checks, in order:

* no anchor term in the article body: the page is off-topic (a "leaf") and
  its links are ignored;
* otherwise its bibliography is counted. At least one author mention makes
  it "expanded" (links followed); zero makes it an "endnote", whose links
  are only followed when expand_endnotes is set.

Every newly seen link target becomes a node with a forward edge; a link to a
known node becomes a back edge. Each page is fetched at most once, and every
successful fetch after the seed appends one reading event to the trace.

State can be checkpointed to disk after every fetch and picked up again with
resume(); an interrupted-and-resumed run yields exactly the same result as
an uninterrupted one.
"""

from __future__ import annotations

import hashlib
import json
import os
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .content_source import SourceConfig, make_source, normalize_title
from .errors import (
    CheckpointCorrupt,
    NetworkError,
    PageNotFound,
    ParseError,
    RedirectLoop,
    SeedNotFound,
)
from .page_analysis import (
    DEFAULT_SECTIONS,
    AuthorPatterns,
    contains_anchor,
    count_mentions,
    parse_page,
)

SEED = "seed"
EXPANDED = "expanded"
ENDNOTE = "endnote"
LEAF = "leaf"
UNDISCOVERED = "undiscovered"

FORWARD = "forward"
BACK = "back"

CHECKPOINT_FORMAT = "wikindex-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass
class ConceptNode:
    title: str
    discovery_index: int
    status: str = UNDISCOVERED
    mentions: int | None = None


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: str  # forward or back


@dataclass
class DomainGraph:
    """Directed concept graph in discovery order."""

    nodes: dict[str, ConceptNode] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def ordered_nodes(self) -> list[ConceptNode]:
        return sorted(self.nodes.values(), key=lambda n: n.discovery_index)


@dataclass(frozen=True)
class TraceEvent:
    step: int
    title: str
    sign: str  # "+" when mentions were found, "-" otherwise
    note: str | None = None

    def render(self) -> str:
        return f"{self.step} Rd {self.sign}: {self.title}"


@dataclass(frozen=True)
class Trace:
    seed_title: str
    sci_links: int
    events: tuple[TraceEvent, ...] = ()

    def render(self) -> str:
        lines = [f"1: {self.seed_title}", f"SCI Links (1): {self.sci_links}"]
        lines.extend(event.render() for event in self.events)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ProbeConfig:
    seed: str
    patterns: AuthorPatterns
    max_pages: int = 0  # 0 = unlimited
    max_links_per_page: int = 0  # 0 = unlimited
    expand_endnotes: bool = False
    recognized_sections: tuple[str, ...] = DEFAULT_SECTIONS

    def __post_init__(self) -> None:
        if not self.seed or not self.seed.strip():
            raise ValueError("seed must be non-empty")
        if self.max_pages < 0:
            raise ValueError("max_pages must be >= 0")
        if self.max_links_per_page < 0:
            raise ValueError("max_links_per_page must be >= 0")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "patterns": self.patterns.to_dict(),
            "max_pages": self.max_pages,
            "max_links_per_page": self.max_links_per_page,
            "expand_endnotes": self.expand_endnotes,
            "recognized_sections": list(self.recognized_sections),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProbeConfig":
        return cls(
            seed=data["seed"],
            patterns=AuthorPatterns.from_dict(data["patterns"]),
            max_pages=int(data.get("max_pages", 0)),
            max_links_per_page=int(data.get("max_links_per_page", 0)),
            expand_endnotes=bool(data.get("expand_endnotes", False)),
            recognized_sections=tuple(data.get("recognized_sections", DEFAULT_SECTIONS)),
        )


@dataclass
class ProbeResult:
    graph: DomainGraph
    mention_pairs: list[tuple[str, int]]
    trace: Trace
    truncated: bool
    completed: bool
    warnings: list[str]
    fetch_count: int


_FETCH_FAILURES = (PageNotFound, NetworkError, RedirectLoop, ParseError)


class _Crawl:
    """Mutable crawl state; probe() and resume() drive it."""

    def __init__(self, config: ProbeConfig, source):
        self.config = config
        self.source = source
        self.nodes: dict[str, ConceptNode] = {}
        self.edges: list[Edge] = []
        self.edge_pairs: set[tuple[str, str]] = set()
        self.queue: deque[str] = deque()
        self.fetched: set[str] = set()
        self.aliases: dict[str, str] = {}
        self.mention_pairs: list[tuple[str, int]] = []
        self.events: list[TraceEvent] = []
        self.warnings: list[str] = []
        self.seed_title = ""
        self.sci_links = 0
        self.fetch_count = 0
        self.truncated = False
        self.next_index = 0

    # -- setup ------------------------------------------------------------

    @classmethod
    def fresh(cls, config: ProbeConfig, source) -> "_Crawl":
        crawl = cls(config, source)
        requested = normalize_title(config.seed)
        try:
            raw = source.fetch(requested)
        except PageNotFound as exc:
            raise SeedNotFound(f"seed page {requested!r} not found") from exc
        crawl.fetch_count = 1
        content = parse_page(raw, recognized_sections=config.recognized_sections)
        seed = raw.ref.title
        crawl.seed_title = seed
        crawl.fetched.update({requested, seed})
        mentions = count_mentions(content.bibliography, config.patterns)
        crawl.sci_links = mentions
        node = ConceptNode(seed, crawl.next_index, SEED, mentions)
        crawl.next_index += 1
        crawl.nodes[seed] = node
        crawl.mention_pairs.append((seed, mentions))
        limit = config.max_links_per_page
        if limit and len(content.links) > limit:
            crawl.warnings.append(
                f"seed links truncated to {limit} of {len(content.links)}"
            )
        crawl._expand(node, content.links)
        return crawl

    # -- the walk ---------------------------------------------------------

    def run(self, interrupt_after: int | None = None, checkpoint_path=None) -> ProbeResult:
        if checkpoint_path is not None:
            self._save(checkpoint_path)
        while self.queue:
            if self.config.max_pages and self.fetch_count >= self.config.max_pages:
                self.truncated = True
                break
            if interrupt_after is not None and self.fetch_count >= interrupt_after:
                if checkpoint_path is not None:
                    self._save(checkpoint_path)
                return self._result(completed=False)
            self._step()
            if checkpoint_path is not None:
                self._save(checkpoint_path)
        return self._result(completed=True)

    def _step(self) -> None:
        title = self.queue.popleft()
        title = self.aliases.get(title, title)
        if title in self.fetched:
            return
        try:
            raw = self.source.fetch(title)
            content = parse_page(raw, recognized_sections=self.config.recognized_sections)
        except _FETCH_FAILURES as exc:
            self.nodes[title].status = LEAF
            self.warnings.append(f"fetch failed for {title}: {exc}")
            return
        self.fetch_count += 1
        self.fetched.add(title)
        resolved = raw.ref.title
        if resolved != title:
            self.aliases[title] = resolved
            already_done = resolved in self.fetched
            self._rename_or_merge(title, resolved)
            self.fetched.add(resolved)
            if already_done:
                return
        node = self.nodes[resolved]
        if not contains_anchor(content.body_text, self.config.patterns):
            node.status = LEAF
            self._record_event(resolved, "-")
            return
        mentions = count_mentions(content.bibliography, self.config.patterns)
        node.mentions = mentions
        self.mention_pairs.append((resolved, mentions))
        self._record_event(resolved, "+" if mentions else "-")
        if mentions:
            node.status = EXPANDED
            self._expand(node, content.links)
        else:
            node.status = ENDNOTE
            if self.config.expand_endnotes:
                self._expand(node, content.links)

    def _record_event(self, title: str, sign: str) -> None:
        self.events.append(TraceEvent(len(self.events), title, sign))

    def _expand(self, node: ConceptNode, links) -> None:
        if self.config.max_links_per_page:
            links = links[: self.config.max_links_per_page]
        for target in links:
            target = self.aliases.get(target, target)
            if target == node.title:
                continue
            pair = (node.title, target)
            if pair in self.edge_pairs:
                continue
            if target in self.nodes:
                self.edges.append(Edge(node.title, target, BACK))
            else:
                self.nodes[target] = ConceptNode(target, self.next_index)
                self.next_index += 1
                self.edges.append(Edge(node.title, target, FORWARD))
                self.queue.append(target)
            self.edge_pairs.add(pair)

    def _rename_or_merge(self, old: str, new: str) -> None:
        moved = self.nodes.pop(old)
        if new in self.nodes:
            kept = self.nodes[new]
            kept.discovery_index = min(kept.discovery_index, moved.discovery_index)
        else:
            moved.title = new
            self.nodes[new] = moved
        rebuilt: list[Edge] = []
        pairs: set[tuple[str, str]] = set()
        for edge in self.edges:
            source = new if edge.source == old else edge.source
            target = new if edge.target == old else edge.target
            if source == target or (source, target) in pairs:
                continue
            pairs.add((source, target))
            rebuilt.append(Edge(source, target, edge.kind))
        self.edges = rebuilt
        self.edge_pairs = pairs

    def _result(self, completed: bool) -> ProbeResult:
        return ProbeResult(
            graph=DomainGraph(nodes=self.nodes, edges=list(self.edges)),
            mention_pairs=list(self.mention_pairs),
            trace=Trace(self.seed_title, self.sci_links, tuple(self.events)),
            truncated=self.truncated,
            completed=completed,
            warnings=list(self.warnings),
            fetch_count=self.fetch_count,
        )

    # -- persistence --------------------------------------------------------

    def _state_dict(self) -> dict:
        return {
            "seed_title": self.seed_title,
            "sci_links": self.sci_links,
            "fetch_count": self.fetch_count,
            "truncated": self.truncated,
            "next_index": self.next_index,
            "nodes": [
                [n.title, n.discovery_index, n.status, n.mentions]
                for n in sorted(self.nodes.values(), key=lambda n: n.discovery_index)
            ],
            "edges": [[e.source, e.target, e.kind] for e in self.edges],
            "pending": list(self.queue),
            "fetched": sorted(self.fetched),
            "aliases": dict(sorted(self.aliases.items())),
            "mentions": [[t, m] for t, m in self.mention_pairs],
            "events": [[e.step, e.title, e.sign, e.note] for e in self.events],
            "warnings": list(self.warnings),
        }

    def _save(self, path) -> None:
        config = self.config.to_dict()
        state = self._state_dict()
        payload = {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "config": config,
            "state": state,
            "checksum": _state_checksum(config, state),
        }
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=1), encoding="utf-8")
        os.replace(tmp, path)

    @classmethod
    def restore(cls, config: ProbeConfig, source, state: dict) -> "_Crawl":
        crawl = cls(config, source)
        try:
            crawl.seed_title = state["seed_title"]
            crawl.sci_links = state["sci_links"]
            crawl.fetch_count = state["fetch_count"]
            crawl.truncated = bool(state["truncated"])
            crawl.next_index = state["next_index"]
            for title, index, status, mentions in state["nodes"]:
                crawl.nodes[title] = ConceptNode(title, index, status, mentions)
            for source_title, target, kind in state["edges"]:
                crawl.edges.append(Edge(source_title, target, kind))
                crawl.edge_pairs.add((source_title, target))
            crawl.queue = deque(state["pending"])
            crawl.fetched = set(state["fetched"])
            crawl.aliases = dict(state["aliases"])
            crawl.mention_pairs = [(t, m) for t, m in state["mentions"]]
            crawl.events = [TraceEvent(s, t, sign, note) for s, t, sign, note in state["events"]]
            crawl.warnings = list(state["warnings"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointCorrupt(f"checkpoint state is incomplete: {exc}") from exc
        return crawl


def _state_checksum(config: dict, state: dict) -> str:
    canonical = json.dumps(
        {"config": config, "state": state},
        sort_keys=True,
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _coerce_source(source):
    if isinstance(source, SourceConfig):
        return make_source(source)
    return source


def probe(
    config: ProbeConfig,
    source,
    *,
    checkpoint_path=None,
    interrupt_after: int | None = None,
) -> ProbeResult:
    """Sound the wiki from config.seed and return the crawl result.

    source may be a SourceConfig or an already-built page source. When
    checkpoint_path is given the crawl state is persisted after every fetch;
    interrupt_after stops the walk once that many pages (seed included) have
    been fetched, returning a result with completed=False.
    """
    crawl = _Crawl.fresh(config, _coerce_source(source))
    return crawl.run(interrupt_after=interrupt_after, checkpoint_path=checkpoint_path)


def load_checkpoint(path) -> tuple[dict, dict]:
    """Read and integrity-check a checkpoint file; returns (config, state)."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CheckpointCorrupt(f"checkpoint is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointCorrupt("not a crawl checkpoint file")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointCorrupt(f"unsupported checkpoint version {payload.get('version')!r}")
    config = payload.get("config")
    state = payload.get("state")
    if not isinstance(config, dict) or not isinstance(state, dict):
        raise CheckpointCorrupt("checkpoint is missing config or state")
    if payload.get("checksum") != _state_checksum(config, state):
        raise CheckpointCorrupt("checkpoint checksum mismatch")
    return config, state


def resume(
    checkpoint_path,
    source,
    config: ProbeConfig | None = None,
    *,
    interrupt_after: int | None = None,
) -> ProbeResult:
    """Continue a checkpointed crawl to completion.

    The stored configuration drives the walk. A config argument only serves
    as a guard: its seed must match the checkpoint's.
    """
    stored_config_dict, state = load_checkpoint(checkpoint_path)
    try:
        stored = ProbeConfig.from_dict(stored_config_dict)
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointCorrupt(f"checkpoint config is invalid: {exc}") from exc
    if config is not None and normalize_title(config.seed) != normalize_title(stored.seed):
        raise CheckpointCorrupt(
            f"checkpoint was written for seed {stored.seed!r}, not {config.seed!r}"
        )
    crawl = _Crawl.restore(stored, _coerce_source(source), state)
    return crawl.run(interrupt_after=interrupt_after, checkpoint_path=checkpoint_path)
