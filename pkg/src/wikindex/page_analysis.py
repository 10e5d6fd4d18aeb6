"""Turn raw page markup into analyzable content.

Two markup forms are accepted: the fixture page record (a JSON object with
title, body_text, links, bibliography) and raw HTML, from which links,
visible text, and recognized bibliographic sections are extracted. Mention
counting and the anchor test share one word-boundary rule: a pattern matches
only when bordered by non-letter, non-digit characters or the text edge, so
"Einsteinium" never counts for "Einstein".
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from html.parser import HTMLParser
from typing import Iterable, Sequence
from urllib.parse import unquote

from .content_source import RawPage, normalize_title
from .errors import ParseError

DEFAULT_SECTIONS = ("Publications", "References", "Further reading", "Bibliography", "Works")
DEFAULT_LINK_PREFIX = "/wiki/"


@dataclass(frozen=True)
class AuthorPatterns:
    """Name patterns for one author.

    mention counting uses full_name, the initials forms, and (only when
    match_bare_surname_in_bib is set) the bare short_name. The anchor test
    uses short_name and anchor_terms.
    """

    full_name: str
    short_name: str
    initials_forms: tuple[str, ...]
    anchor_terms: tuple[str, ...] = ()
    match_bare_surname_in_bib: bool = False

    def __post_init__(self) -> None:
        if not self.full_name.strip():
            raise ValueError("full_name must be non-empty")
        if self.short_name not in self.full_name.split():
            raise ValueError(f"short_name {self.short_name!r} is not a token of full_name {self.full_name!r}")

    @classmethod
    def from_names(
        cls,
        full_name: str,
        short_name: str | None = None,
        anchor_terms: Iterable[str] = (),
        match_bare_surname_in_bib: bool = False,
        initials_forms: Iterable[str] | None = None,
    ) -> "AuthorPatterns":
        tokens = full_name.split()
        if not tokens:
            raise ValueError("full_name must be non-empty")
        short = short_name if short_name is not None else tokens[-1]
        if initials_forms is None:
            initial = tokens[0][0].upper()
            initials_forms = (f"{initial}. {short}", f"{short}, {initial}.")
        return cls(
            full_name=full_name,
            short_name=short,
            initials_forms=tuple(initials_forms),
            anchor_terms=tuple(anchor_terms),
            match_bare_surname_in_bib=match_bare_surname_in_bib,
        )

    def mention_patterns(self) -> list[str]:
        patterns = [self.full_name, *self.initials_forms]
        if self.match_bare_surname_in_bib:
            patterns.append(self.short_name)
        return _dedupe(patterns)

    def anchor_patterns(self) -> list[str]:
        return _dedupe([self.short_name, *self.anchor_terms])

    def to_dict(self) -> dict:
        return {
            "full_name": self.full_name,
            "short_name": self.short_name,
            "initials_forms": list(self.initials_forms),
            "anchor_terms": list(self.anchor_terms),
            "match_bare_surname_in_bib": self.match_bare_surname_in_bib,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuthorPatterns":
        return cls(
            full_name=data["full_name"],
            short_name=data["short_name"],
            initials_forms=tuple(data["initials_forms"]),
            anchor_terms=tuple(data.get("anchor_terms", ())),
            match_bare_surname_in_bib=bool(data.get("match_bare_surname_in_bib", False)),
        )


@dataclass(frozen=True)
class PageContent:
    title: str
    body_text: str
    links: list[str]  # normalized titles, first-occurrence order, no dups/self/namespaces
    bibliography: list[tuple[str, str]]  # (section name, section text)


def _dedupe(items: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def _is_namespaced(title: str) -> bool:
    return ":" in title.split("/", 1)[0]


def _clean_links(raw_titles: Iterable[str], self_title: str | None) -> list[str]:
    out: list[str] = []
    seen: set[str] = set()
    for raw in raw_titles:
        try:
            title = normalize_title(raw)
        except ValueError:
            continue
        if _is_namespaced(title) or title == self_title or title in seen:
            continue
        seen.add(title)
        out.append(title)
    return out


# --- HTML extraction ---

_BLOCK_TAGS = {
    "p", "div", "ul", "ol", "li", "br", "table", "thead", "tbody", "tr", "td", "th",
    "blockquote", "section", "article", "dl", "dt", "dd", "hr", "pre", "figure",
    "figcaption", "center", "nav", "aside",
}
_HEADING_LEVELS = {f"h{i}": i for i in range(1, 7)}


class _HtmlExtractor(HTMLParser):
    """Collects a flat stream of text chunks, link targets, and headings."""

    def __init__(self, link_prefix: str):
        super().__init__(convert_charrefs=True)
        self.link_prefix = link_prefix
        self.items: list[tuple] = []
        self._skip = 0
        self._heading: tuple[int, list[str]] | None = None

    def handle_starttag(self, tag, attrs):
        if tag in ("script", "style"):
            self._skip += 1
            return
        if self._skip:
            return
        if tag in _HEADING_LEVELS:
            self._flush_heading()
            self._heading = (_HEADING_LEVELS[tag], [])
        elif tag == "a":
            href = dict(attrs).get("href") or ""
            if href.startswith(self.link_prefix):
                target = unquote(href[len(self.link_prefix):])
                if target:
                    self.items.append(("link", target))
        elif tag in _BLOCK_TAGS:
            self._block_boundary()

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)

    def handle_endtag(self, tag):
        if tag in ("script", "style"):
            self._skip = max(0, self._skip - 1)
            return
        if self._skip:
            return
        if tag in _HEADING_LEVELS:
            self._flush_heading()
        elif tag in _BLOCK_TAGS:
            self._block_boundary()

    def handle_data(self, data):
        if self._skip:
            return
        if self._heading is not None:
            self._heading[1].append(data)
        else:
            self.items.append(("text", data))

    def close(self):
        super().close()
        self._flush_heading()

    def _flush_heading(self):
        if self._heading is not None:
            level, parts = self._heading
            self.items.append(("heading", level, "".join(parts)))
            self._heading = None

    def _block_boundary(self):
        if self._heading is None:
            self.items.append(("text", "\n"))


_SPACE_RUN = re.compile(r"[ \t\r\f\v]+")


def _tidy(text: str) -> str:
    lines = (_SPACE_RUN.sub(" ", line).strip() for line in text.split("\n"))
    return "\n".join(line for line in lines if line)


def _clean_heading(name: str) -> str:
    name = name.strip()
    if name.lower().endswith("[edit]"):
        name = name[: -len("[edit]")].strip()
    return name


def _parse_html(markup: str, self_title: str | None, recognized: Sequence[str], link_prefix: str):
    extractor = _HtmlExtractor(link_prefix)
    extractor.feed(markup)
    extractor.close()

    segments: list[dict] = [{"level": 0, "name": None, "parts": []}]
    link_candidates: list[str] = []
    for item in extractor.items:
        if item[0] == "text":
            segments[-1]["parts"].append(item[1])
        elif item[0] == "link":
            link_candidates.append(item[1])
        else:
            segments.append({"level": item[1], "name": item[2], "parts": []})

    recognized_cf = {name.casefold() for name in recognized}
    bibliography: list[tuple[str, str]] = []
    body_parts: list[str] = []
    i = 0
    while i < len(segments):
        seg = segments[i]
        name = _clean_heading(seg["name"]) if seg["name"] else None
        if name is not None and name.casefold() in recognized_cf:
            texts = ["".join(seg["parts"])]
            j = i + 1
            while j < len(segments) and segments[j]["level"] > seg["level"]:
                sub = segments[j]
                if sub["name"]:
                    texts.append(_clean_heading(sub["name"]))
                texts.append("".join(sub["parts"]))
                j += 1
            bibliography.append((name, _tidy("\n".join(texts))))
            i = j
        else:
            if name:
                body_parts.append(name + "\n")
            body_parts.append("".join(seg["parts"]) + "\n")
            i += 1

    body_text = _tidy("".join(body_parts))
    links = _clean_links(link_candidates, self_title)
    return body_text, links, bibliography


# --- fixture record extraction ---


def _parse_record(record: dict, self_title: str | None, recognized: Sequence[str]):
    if "redirect" in record:
        raise ParseError("redirect record has no content; resolve redirects before parsing")
    body_text = record.get("body_text", "")
    if not isinstance(body_text, str):
        raise ParseError("record body_text must be a string")
    raw_links = record.get("links", [])
    if not isinstance(raw_links, list) or not all(isinstance(t, str) for t in raw_links):
        raise ParseError("record links must be a list of titles")
    raw_bib = record.get("bibliography", [])
    if not isinstance(raw_bib, list):
        raise ParseError("record bibliography must be a list of sections")
    recognized_cf = {name.casefold() for name in recognized}
    bibliography = []
    for entry in raw_bib:
        if not isinstance(entry, dict) or "section" not in entry or "text" not in entry:
            raise ParseError("record bibliography entries need 'section' and 'text'")
        if str(entry["section"]).casefold() in recognized_cf:
            bibliography.append((str(entry["section"]), str(entry["text"])))
    return body_text, _clean_links(raw_links, self_title), bibliography


def parse_page(
    raw: RawPage,
    recognized_sections: Sequence[str] = DEFAULT_SECTIONS,
    link_prefix: str = DEFAULT_LINK_PREFIX,
) -> PageContent:
    """Parse fetched markup (fixture record or HTML) into PageContent."""
    title = raw.ref.title
    body_text, links, bibliography = _parse_markup(raw.markup, title, recognized_sections, link_prefix)
    return PageContent(title=title, body_text=body_text, links=links, bibliography=bibliography)


def _parse_markup(markup: str, self_title: str | None, recognized: Sequence[str], link_prefix: str):
    head = markup.lstrip()
    if head.startswith("{"):
        try:
            record = json.loads(markup)
        except json.JSONDecodeError as exc:
            raise ParseError(f"markup looks like JSON but does not parse: {exc}") from exc
        if not isinstance(record, dict):
            raise ParseError("JSON page record must be an object")
        return _parse_record(record, self_title, recognized)
    if head.startswith("<"):
        return _parse_html(markup, self_title, recognized, link_prefix)
    raise ParseError("markup is neither HTML nor a fixture page record")


def extract_bibliography(
    markup: str | RawPage,
    recognized: Sequence[str] = DEFAULT_SECTIONS,
    link_prefix: str = DEFAULT_LINK_PREFIX,
) -> list[tuple[str, str]]:
    """Just the recognized bibliographic sections of a page."""
    if isinstance(markup, RawPage):
        return parse_page(markup, recognized, link_prefix).bibliography
    return _parse_markup(markup, None, recognized, link_prefix)[2]


# --- matching ---


@lru_cache(maxsize=256)
def _compile_pattern(pattern: str) -> re.Pattern:
    # [^\W_] is "letter or digit"; the lookarounds forbid those at the edges
    return re.compile(rf"(?<![^\W_]){re.escape(pattern)}(?![^\W_])", re.IGNORECASE)


def contains_anchor(body_text: str, patterns: AuthorPatterns) -> bool:
    """True when the body names the author or any configured anchor term."""
    return any(_compile_pattern(p).search(body_text) for p in patterns.anchor_patterns())


def count_mentions(bibliography: Iterable[tuple[str, str]], patterns: AuthorPatterns) -> int:
    """Non-overlapping mention count across all bibliographic sections.

    Within a section, candidate matches are swept left to right; at equal
    start offsets the longest pattern wins and shorter overlaps are skipped.
    """
    enabled = patterns.mention_patterns()
    total = 0
    for _name, text in bibliography:
        spans: list[tuple[int, int]] = []
        for pattern in enabled:
            spans.extend(m.span() for m in _compile_pattern(pattern).finditer(text))
        spans.sort(key=lambda span: (span[0], -(span[1] - span[0])))
        current_end = 0
        for start, end in spans:
            if start >= current_end:
                total += 1
                current_end = end
    return total
