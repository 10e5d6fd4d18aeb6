"""Page retrieval: fixture corpora, the live MediaWiki API, and the disk cache.

Titles are normalized everywhere: spaces become underscores, the first letter
is uppercased, fragments are dropped. A fixture corpus is a directory with an
index.json manifest mapping normalized titles to page files (JSON records or
raw HTML). The live client speaks the MediaWiki Action API over GET only and
honors a per-second rate limit. Fetched markup is cached on disk keyed by a
hash of the title, with a checksum so corrupt entries degrade to a miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import time
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

import requests

from .errors import CacheCorrupt, CorpusError, NetworkError, PageNotFound, RedirectLoop

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://en.wikipedia.org/w/api.php"
DEFAULT_USER_AGENT = "wikindex/0.1.0 (research crawler)"
FIXTURE_FETCHED_AT = "1970-01-01T00:00:00+00:00"
MAX_REDIRECT_HOPS = 3
MANIFEST_NAME = "index.json"

_UNDERSCORE_RUN = re.compile(r"_+")


def normalize_title(raw: str) -> str:
    """Canonical article title: underscores, leading capital, no fragment."""
    title = raw.split("#", 1)[0].strip()
    title = title.replace(" ", "_")
    title = _UNDERSCORE_RUN.sub("_", title).strip("_")
    if not title:
        raise ValueError(f"title {raw!r} is empty after normalization")
    return title[0].upper() + title[1:]


@dataclass(frozen=True)
class PageRef:
    """Identity of an article."""

    title: str
    source_hint: str | None = None

    @classmethod
    def of(cls, raw_title: str, source_hint: str | None = None) -> "PageRef":
        return cls(normalize_title(raw_title), source_hint)


@dataclass(frozen=True)
class RawPage:
    """Fetched markup plus provenance. ref.title is the resolved title."""

    ref: PageRef
    markup: str
    fetched_at: str
    from_cache: bool = False


@dataclass(frozen=True)
class SourceConfig:
    mode: str  # "fixture" or "live"
    corpus_path: Path | None = None
    base_url: str = DEFAULT_BASE_URL
    cache_dir: Path | None = None
    rate_limit: float = 2.0  # max requests per second, 0 = unlimited
    timeout: float = 15.0
    retries: int = 3
    user_agent: str = DEFAULT_USER_AGENT

    def __post_init__(self) -> None:
        if self.mode not in ("fixture", "live"):
            raise ValueError(f"unknown source mode {self.mode!r}")
        if self.mode == "fixture" and self.corpus_path is None:
            raise ValueError("fixture mode requires corpus_path")
        if self.mode == "live" and not self.base_url:
            raise ValueError("live mode requires base_url")

    @classmethod
    def fixture(cls, corpus_path: Path | str, **overrides) -> "SourceConfig":
        return cls(mode="fixture", corpus_path=Path(corpus_path), **overrides)

    @classmethod
    def live(cls, base_url: str = DEFAULT_BASE_URL, **overrides) -> "SourceConfig":
        return cls(mode="live", base_url=base_url, **overrides)

    @classmethod
    def from_spec(cls, spec: str, **overrides) -> "SourceConfig":
        """Parse "fixture:<path>" or "live:<base-url>"."""
        kind, sep, rest = spec.partition(":")
        if not sep or kind not in ("fixture", "live"):
            raise ValueError(f"source spec must be fixture:<path> or live:<url>, got {spec!r}")
        if kind == "fixture":
            return cls.fixture(rest, **overrides)
        return cls.live(rest, **overrides)

    @property
    def spec(self) -> str:
        if self.mode == "fixture":
            return f"fixture:{self.corpus_path}"
        return f"live:{self.base_url}"


# --- fixture corpus ---


@dataclass
class FixtureCorpus:
    root: Path
    pages: dict[str, str]  # normalized title -> file name

    def titles(self) -> list[str]:
        return list(self.pages)

    def __contains__(self, title: str) -> bool:
        return title in self.pages

    def read(self, title: str) -> str:
        name = self.pages.get(title)
        if name is None:
            raise PageNotFound(f"no page {title!r} in corpus {self.root}")
        path = self.root / name
        try:
            return path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read page file {path}: {exc}") from exc


def _reject_duplicate_keys(pairs: list[tuple[str, object]]) -> dict:
    seen: dict[str, object] = {}
    for key, value in pairs:
        if key in seen:
            raise CorpusError(f"duplicate title {key!r} in manifest")
        seen[key] = value
    return seen


def load_fixture_corpus(path: Path | str) -> FixtureCorpus:
    """Load and validate a corpus directory (manifest + page files)."""
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise CorpusError(f"no {MANIFEST_NAME} manifest in {root}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"), object_pairs_hook=_reject_duplicate_keys)
    except CorpusError:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"cannot read manifest {manifest_path}: {exc}") from exc
    if not isinstance(manifest, dict) or not all(isinstance(v, str) for v in manifest.values()):
        raise CorpusError(f"manifest {manifest_path} must map titles to file names")
    for title, name in manifest.items():
        if normalize_title(title) != title:
            raise CorpusError(f"manifest key {title!r} is not a normalized title")
        if not (root / name).is_file():
            raise CorpusError(f"manifest entry {title!r} points to missing file {name!r}")
    return FixtureCorpus(root=root, pages=dict(manifest))


class FixtureSource:
    """Serves pages from a fixture corpus. No cache, no network."""

    def __init__(self, cfg: SourceConfig):
        assert cfg.mode == "fixture"
        self.cfg = cfg
        self.corpus = load_fixture_corpus(cfg.corpus_path)

    def fetch(self, title: str) -> RawPage:
        current = normalize_title(title)
        hops = 0
        while True:
            markup = self.corpus.read(current)
            record = _maybe_json_record(markup)
            if record is not None and "redirect" in record:
                hops += 1
                if hops > MAX_REDIRECT_HOPS:
                    raise RedirectLoop(f"redirect chain from {title!r} exceeds {MAX_REDIRECT_HOPS} hops")
                current = normalize_title(str(record["redirect"]))
                continue
            if record is not None:
                declared = record.get("title")
                if declared is not None and normalize_title(str(declared)) != current:
                    raise CorpusError(f"page file for {current!r} declares title {declared!r}")
            return RawPage(ref=PageRef(current), markup=markup, fetched_at=FIXTURE_FETCHED_AT)


def _maybe_json_record(markup: str) -> dict | None:
    if not markup.lstrip().startswith("{"):
        return None
    try:
        record = json.loads(markup)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"page file is neither HTML nor a valid JSON record: {exc}") from exc
    if not isinstance(record, dict):
        raise CorpusError("JSON page record must be an object")
    return record


# --- disk cache ---


def cache_path(cache_dir: Path | str, title: str) -> Path:
    digest = hashlib.sha256(normalize_title(title).encode("utf-8")).hexdigest()
    return Path(cache_dir) / f"{digest}.page"


def cache_store(cache_dir: Path | str, requested_title: str, raw: RawPage) -> None:
    """Write a cache entry under the requested title and, if it differs,
    under the resolved title too, so later requests for either name hit."""
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    requested = normalize_title(requested_title)
    entry = {
        "format": "wikindex-cache",
        "version": 1,
        "title": requested,
        "resolved": raw.ref.title,
        "fetched_at": raw.fetched_at,
        "checksum": _markup_checksum(raw.markup),
        "markup": raw.markup,
    }
    cache_path(cache_dir, requested).write_text(json.dumps(entry, ensure_ascii=False), encoding="utf-8")
    if raw.ref.title != requested:
        entry["title"] = raw.ref.title
        cache_path(cache_dir, raw.ref.title).write_text(json.dumps(entry, ensure_ascii=False), encoding="utf-8")


def cache_lookup(cache_dir: Path | str, title: str) -> RawPage | None:
    """Return the cached page or None. Corrupt entries count as absent."""
    path = cache_path(cache_dir, title)
    if not path.is_file():
        return None
    try:
        return _read_cache_entry(path)
    except CacheCorrupt as exc:
        log.warning("ignoring cache entry %s: %s", path.name, exc)
        return None


def _read_cache_entry(path: Path) -> RawPage:
    try:
        entry = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheCorrupt(f"unreadable entry: {exc}") from exc
    if not isinstance(entry, dict) or entry.get("format") != "wikindex-cache" or entry.get("version") != 1:
        raise CacheCorrupt("unrecognized entry header")
    markup = entry.get("markup")
    if not isinstance(markup, str) or entry.get("checksum") != _markup_checksum(markup):
        raise CacheCorrupt("checksum mismatch")
    return RawPage(
        ref=PageRef(str(entry["resolved"])),
        markup=markup,
        fetched_at=str(entry.get("fetched_at", "")),
        from_cache=True,
    )


def _markup_checksum(markup: str) -> str:
    return hashlib.sha256(markup.encode("utf-8")).hexdigest()


# --- live client ---


class RateLimiter:
    """Sliding-window limiter: at most `rate` acquisitions per second."""

    WINDOW = 1.0

    def __init__(self, rate: float, clock: Callable[[], float] = time.monotonic, sleep: Callable[[float], None] = time.sleep):
        self.rate = rate
        self._clock = clock
        self._sleep = sleep
        self._stamps: deque[float] = deque()

    def acquire(self) -> None:
        if self.rate <= 0:
            return
        now = self._clock()
        self._drop_expired(now)
        while len(self._stamps) >= self.rate:
            wait = self._stamps[0] + self.WINDOW - now
            if wait > 0:
                self._sleep(wait)
            now = self._clock()
            self._drop_expired(now)
        self._stamps.append(now)

    def _drop_expired(self, now: float) -> None:
        while self._stamps and self._stamps[0] <= now - self.WINDOW:
            self._stamps.popleft()


class LiveSource:
    """MediaWiki Action API client. GET only, rate limited, cache backed."""

    def __init__(
        self,
        cfg: SourceConfig,
        session: requests.Session | None = None,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        assert cfg.mode == "live"
        self.cfg = cfg
        self.session = session or requests.Session()
        self.session.headers["User-Agent"] = cfg.user_agent
        self._sleep = sleep
        self._limiter = RateLimiter(cfg.rate_limit, clock=clock, sleep=sleep)

    def fetch(self, title: str) -> RawPage:
        requested = normalize_title(title)
        if self.cfg.cache_dir is not None:
            cached = cache_lookup(self.cfg.cache_dir, requested)
            if cached is not None:
                return cached
        payload = self._request(requested)
        raw = self._interpret(requested, payload)
        if self.cfg.cache_dir is not None:
            cache_store(self.cfg.cache_dir, requested, raw)
        return raw

    def _request(self, title: str) -> dict:
        params = {
            "action": "parse",
            "page": title,
            "prop": "text",
            "redirects": "1",
            "format": "json",
            "formatversion": "2",
        }
        attempts = max(1, self.cfg.retries)
        failure: str = "no attempts made"
        for attempt in range(attempts):
            if attempt:
                self._sleep(0.25 * 2 ** (attempt - 1))
            self._limiter.acquire()
            try:
                response = self.session.get(self.cfg.base_url, params=params, timeout=self.cfg.timeout)
            except requests.RequestException as exc:
                failure = f"transport error: {exc}"
                continue
            if response.status_code == 429 or response.status_code >= 500:
                failure = f"HTTP {response.status_code}"
                continue
            try:
                return response.json()
            except ValueError as exc:
                failure = f"invalid JSON body: {exc}"
                continue
        raise NetworkError(f"GET {self.cfg.base_url} page={title!r} failed after {attempts} attempts ({failure})")

    def _interpret(self, requested: str, payload: dict) -> RawPage:
        error = payload.get("error")
        if error:
            code = error.get("code", "unknown")
            if code in ("missingtitle", "invalidtitle", "nosuchpage"):
                raise PageNotFound(f"no page {requested!r}: {error.get('info', code)}")
            raise NetworkError(f"API error for {requested!r}: {code}: {error.get('info', '')}")
        parse = payload.get("parse")
        if not isinstance(parse, dict) or "title" not in parse:
            raise NetworkError(f"unexpected API response for {requested!r}")
        # the redirect chain sits at the top level or inside parse depending on
        # the API flavor; accept either
        redirects = payload.get("redirects") or parse.get("redirects") or []
        if len(redirects) > MAX_REDIRECT_HOPS:
            raise RedirectLoop(f"redirect chain from {requested!r} exceeds {MAX_REDIRECT_HOPS} hops")
        text = parse.get("text", "")
        if isinstance(text, dict):  # formatversion=1 shape
            text = text.get("*", "")
        return RawPage(
            ref=PageRef(normalize_title(str(parse["title"]))),
            markup=str(text),
            fetched_at=datetime.now(timezone.utc).isoformat(),
        )


def make_source(cfg: SourceConfig):
    if cfg.mode == "fixture":
        return FixtureSource(cfg)
    return LiveSource(cfg)


def fetch_page(title: str, source) -> RawPage:
    """Fetch one page from a SourceConfig or an already-built source."""
    if isinstance(source, SourceConfig):
        source = make_source(source)
    return source.fetch(title)
