from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = Path(__file__).parent / "data" / "corpus_einstein"
GOLDEN_DIR = Path(__file__).parent / "data" / "golden"

sys.path.insert(0, str(Path(__file__).parent))  # for mockwiki
sys.path.insert(0, str(REPO_ROOT / "scripts"))  # for the scan_corpus cross-check

from wikindex.page_analysis import AuthorPatterns


def _filename_for(title: str, record) -> str:
    stem = re.sub(r"[^A-Za-z0-9_]+", "_", title).lower()
    return stem + (".html" if isinstance(record, str) else ".json")


def write_corpus(root: Path, pages: dict[str, dict | str]) -> Path:
    """Write a fixture corpus directory: index.json plus one file per page."""
    root.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for title, record in pages.items():
        name = _filename_for(title, record)
        manifest[title] = name
        path = root / name
        if isinstance(record, str):
            path.write_text(record, encoding="utf-8")
        else:
            record = {"title": title, **record}
            path.write_text(json.dumps(record, ensure_ascii=False, indent=1), encoding="utf-8")
    (root / "index.json").write_text(json.dumps(manifest, ensure_ascii=False, indent=1), encoding="utf-8")
    return root


@pytest.fixture()
def make_corpus(tmp_path):
    def _make(pages: dict[str, dict | str], name: str = "corpus") -> Path:
        return write_corpus(tmp_path / name, pages)

    return _make


@pytest.fixture(scope="session")
def einstein_corpus() -> Path:
    assert CORPUS_DIR.joinpath("index.json").exists(), "bundled corpus missing"
    return CORPUS_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture()
def einstein_patterns() -> AuthorPatterns:
    return AuthorPatterns.from_names(
        "Albert Einstein", "Einstein", anchor_terms=("physics", "relativity")
    )


@pytest.fixture(scope="session")
def scan_expected(einstein_corpus):
    """Expected crawl results derived by the independent scan script."""
    import scan_corpus

    return scan_corpus.scan(einstein_corpus)
