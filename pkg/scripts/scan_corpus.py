#!/usr/bin/env python3
"""Derive the expected crawl output for a fixture corpus by direct scan.

Deliberately independent of the wikindex package: this script reimplements
title cleanup, link filtering, mention counting, the reading-queue walk, and
the graph statistics in the most literal way available (manual substring
scans instead of compiled regexes, Floyd-Warshall instead of per-node BFS,
naive h2 splitting instead of a streaming HTML parser). Tests compare the
package's answers against this scan so both routes must agree.

The HTML handling only supports the flat h2-sectioned markup used by the
bundled corpus; that is all it needs.

Usage: scan_corpus.py [--corpus DIR] [--json]
"""

from __future__ import annotations

import argparse
import html
import json
import math
import re
import sys
from pathlib import Path
from urllib.parse import unquote

DEFAULT_CORPUS = Path(__file__).resolve().parent.parent / "tests" / "data" / "corpus_einstein"

FULL_NAME = "Albert Einstein"
SHORT_NAME = "Einstein"
MENTION_PATTERNS = ("Albert Einstein", "A. Einstein", "Einstein, A.")
ANCHOR_TERMS = ("Einstein", "physics", "relativity")
RECOGNIZED = ("publications", "references", "further reading", "bibliography", "works")


# ---------------------------------------------------------------------------
# titles and links


def norm(raw: str) -> str:
    t = raw.split("#", 1)[0].strip().replace(" ", "_")
    while "__" in t:
        t = t.replace("__", "_")
    t = t.strip("_")
    if not t:
        raise ValueError(f"empty title from {raw!r}")
    return t[0].upper() + t[1:]


def namespaced(title: str) -> bool:
    return ":" in title.split("/", 1)[0]


def clean_links(raw_titles: list[str], self_title: str) -> list[str]:
    seen: list[str] = []
    for raw in raw_titles:
        try:
            t = norm(raw)
        except ValueError:
            continue
        if namespaced(t) or t == self_title or t in seen:
            continue
        seen.append(t)
    return seen


# ---------------------------------------------------------------------------
# mention counting, by manual substring scan (no regexes)


def _wordish(ch: str) -> bool:
    return ch.isalnum()


def find_spans(text: str, pattern: str) -> list[tuple[int, int]]:
    low, pat = text.lower(), pattern.lower()
    spans = []
    start = 0
    while True:
        i = low.find(pat, start)
        if i < 0:
            return spans
        end = i + len(pat)
        left_ok = i == 0 or not _wordish(low[i - 1])
        right_ok = end == len(low) or not _wordish(low[end])
        if left_ok and right_ok:
            spans.append((i, end))
        start = i + 1


def count_mentions(sections: list[tuple[str, str]]) -> int:
    total = 0
    for _, text in sections:
        spans = []
        for pattern in MENTION_PATTERNS:
            spans.extend(find_spans(text, pattern))
        spans.sort(key=lambda s: (s[0], -(s[1] - s[0])))
        cursor = -1
        for start, end in spans:
            if start > cursor:
                total += 1
                cursor = end - 1
    return total


def has_anchor(body: str) -> bool:
    return any(find_spans(body, term) for term in ANCHOR_TERMS)


# ---------------------------------------------------------------------------
# page loading


def strip_tags(fragment: str) -> str:
    text = re.sub(r"<[^>]+>", " ", fragment)
    text = html.unescape(text)
    return re.sub(r"\s+", " ", text).strip()


def parse_html_page(markup: str) -> tuple[str, list[str], list[tuple[str, str]]]:
    markup = re.sub(r"<(script|style)[^>]*>.*?</\1>", "", markup, flags=re.S | re.I)
    pieces = re.split(r"<h2[^>]*>(.*?)</h2>", markup, flags=re.S | re.I)
    body_parts = [pieces[0]]
    sections: list[tuple[str, str]] = []
    for heading_html, body_html in zip(pieces[1::2], pieces[2::2]):
        heading = strip_tags(heading_html)
        heading = re.sub(r"\[\s*edit\s*\]$", "", heading).strip()
        if heading.casefold() in RECOGNIZED:
            sections.append((heading, strip_tags(body_html)))
        else:
            body_parts.append(body_html)
    links = []
    for href in re.findall(r'<a\s[^>]*href="([^"]+)"', " ".join(body_parts + [markup]), flags=re.I):
        if href.startswith("/wiki/"):
            links.append(unquote(href[len("/wiki/") :]))
    return strip_tags(" ".join(body_parts)), links, sections


class Page:
    def __init__(self, title: str, body: str, links: list[str], sections: list[tuple[str, str]]):
        self.title = title
        self.body = body
        self.links = clean_links(links, title)
        self.sections = sections
        self.mentions = count_mentions(sections)
        self.anchored = has_anchor(body)


def load_corpus(root: Path) -> tuple[dict[str, Page], dict[str, str]]:
    manifest = json.loads((root / "index.json").read_text(encoding="utf-8"))
    pages: dict[str, Page] = {}
    redirects: dict[str, str] = {}
    for title, filename in manifest.items():
        raw = (root / filename).read_text(encoding="utf-8")
        if filename.endswith(".json"):
            record = json.loads(raw)
            if "redirect" in record:
                redirects[title] = norm(record["redirect"])
                continue
            sections = [
                (s["section"], s["text"])
                for s in record.get("bibliography", [])
                if s["section"].casefold() in RECOGNIZED
            ]
            pages[title] = Page(title, record.get("body_text", ""), list(record.get("links", [])), sections)
        else:
            body, links, sections = parse_html_page(raw)
            pages[title] = Page(title, body, links, sections)
    return pages, redirects


# ---------------------------------------------------------------------------
# the walk


def resolve(title: str, redirects: dict[str, str]) -> str:
    seen = 0
    while title in redirects:
        title = redirects[title]
        seen += 1
        if seen > 3:
            raise RuntimeError("redirect chain too deep")
    return title


def walk(pages: dict[str, Page], redirects: dict[str, str], seed: str):
    seed = resolve(norm(seed), redirects)
    seed_page = pages[seed]
    trace = [f"1: {seed}", f"SCI Links (1): {seed_page.mentions}"]
    nodes: dict[str, dict] = {seed: {"index": 0, "status": "seed", "mentions": seed_page.mentions}}
    edges: list[tuple[str, str, str]] = []
    mention_pairs: list[tuple[str, int]] = []
    if seed_page.mentions:
        mention_pairs.append((seed, seed_page.mentions))
    queue: list[str] = []

    def expand(page: Page) -> None:
        for target in page.links:
            target = resolve(target, redirects)
            if target in nodes:
                edges.append((page.title, target, "back"))
            else:
                nodes[target] = {"index": len(nodes), "status": "undiscovered", "mentions": None}
                edges.append((page.title, target, "forward"))
                queue.append(target)

    expand(seed_page)
    step = 0
    while queue:
        title = queue.pop(0)
        page = pages[title]
        if not page.anchored:
            nodes[title]["status"] = "leaf"
            trace.append(f"{step} Rd -: {title}")
            step += 1
            continue
        mentions = page.mentions
        nodes[title]["mentions"] = mentions
        mention_pairs.append((title, mentions))
        trace.append(f"{step} Rd {'+' if mentions else '-'}: {title}")
        step += 1
        if mentions:
            nodes[title]["status"] = "expanded"
            expand(page)
        else:
            nodes[title]["status"] = "endnote"
    return trace, nodes, edges, mention_pairs


# ---------------------------------------------------------------------------
# index math and graph statistics


def round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def index_values(mention_pairs: list[tuple[str, int]]):
    ranked = sorted(((t, m) for t, m in mention_pairs if m > 0), key=lambda p: (-p[1], p[0]))
    counts = [m for _, m in ranked]
    wh = 0
    for i in range(1, len(counts) + 1):
        if counts[i - 1] >= i:
            wh = i
    n = len(counts)
    wi_raw = wh * math.sqrt(n)
    return ranked, n, wh, wi_raw, round_half_away(wi_raw)


def graph_stats(nodes: dict[str, dict], edges: list[tuple[str, str, str]]):
    titles = sorted(nodes)
    undirected = set()
    for a, b, _ in edges:
        if a != b:
            undirected.add(frozenset((a, b)))
    adj = {t: set() for t in titles}
    for pair in undirected:
        a, b = sorted(pair)
        adj[a].add(b)
        adj[b].add(a)
    v, e = len(titles), len(undirected)
    average_degree = 2 * e / v

    # components by repeated sweep
    comp: dict[str, int] = {}
    cid = 0
    for t in titles:
        if t in comp:
            continue
        stack = [t]
        comp[t] = cid
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in comp:
                    comp[nxt] = cid
                    stack.append(nxt)
        cid += 1
    sizes = [sum(1 for t in titles if comp[t] == c) for c in range(cid)]
    largest = max(range(cid), key=lambda c: sizes[c])

    # diameter of the largest component via Floyd-Warshall
    members = [t for t in titles if comp[t] == largest]
    pos = {t: i for i, t in enumerate(members)}
    big = float("inf")
    dist = [[0 if i == j else big for j in range(len(members))] for i in range(len(members))]
    for t in members:
        for u in adj[t]:
            dist[pos[t]][pos[u]] = 1
    for k in range(len(members)):
        for i in range(len(members)):
            for j in range(len(members)):
                through = dist[i][k] + dist[k][j]
                if through < dist[i][j]:
                    dist[i][j] = through
    diameter = max((dist[i][j] for i in range(len(members)) for j in range(len(members))), default=0)
    diameter = 0 if diameter == big else int(diameter)

    # average local clustering by triple enumeration
    total = 0.0
    for t in titles:
        neigh = sorted(adj[t])
        k = len(neigh)
        if k < 2:
            continue
        closed = sum(
            1
            for i in range(k)
            for j in range(i + 1, k)
            if neigh[j] in adj[neigh[i]]
        )
        total += 2 * closed / (k * (k - 1))
    clustering = total / v

    degrees = sorted(((t, len(adj[t])) for t in titles), key=lambda p: (-p[1], p[0]))
    return {
        "node_count": v,
        "edge_count": e,
        "average_degree": average_degree,
        "diameter": diameter,
        "average_clustering": clustering,
        "largest_component_size": max(sizes),
        "top_nodes": degrees[:10],
    }


def scan(corpus: Path, seed: str = "Albert Einstein") -> dict:
    pages, redirects = load_corpus(corpus)
    trace, nodes, edges, mention_pairs = walk(pages, redirects, seed)
    ranked, n, wh, wi_raw, wi = index_values(mention_pairs)
    return {
        "trace_text": "\n".join(trace) + "\n",
        "fetch_count": 1 + sum(1 for line in trace[2:]),
        "mention_pairs": mention_pairs,
        "ranked": ranked,
        "n": n,
        "wh": wh,
        "wi_raw": wi_raw,
        "wi": wi,
        "nodes": {t: dict(info) for t, info in nodes.items()},
        "edges": edges,
        "metrics": graph_stats(nodes, edges),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description="scan a fixture corpus and print expected results")
    parser.add_argument("--corpus", type=Path, default=DEFAULT_CORPUS)
    parser.add_argument("--seed", default="Albert Einstein")
    parser.add_argument("--json", action="store_true", help="dump everything as JSON")
    args = parser.parse_args()
    result = scan(args.corpus, args.seed)
    if args.json:
        json.dump(result, sys.stdout, indent=2, ensure_ascii=False, default=list)
        print()
        return
    print(result["trace_text"], end="")
    print()
    for title, count in result["ranked"]:
        print(f"{count:6d}  {title}")
    print()
    print(f"N={result['n']} WH={result['wh']} WI={result['wi']} (raw {result['wi_raw']:.4f})")
    m = result["metrics"]
    print(
        f"nodes={m['node_count']} edges={m['edge_count']} avg_deg={m['average_degree']:.4f} "
        f"diameter={m['diameter']} clustering={m['average_clustering']:.6f} "
        f"largest_cc={m['largest_component_size']}"
    )
    for title, degree in m["top_nodes"]:
        print(f"  deg {degree}  {title}")


if __name__ == "__main__":
    main()
