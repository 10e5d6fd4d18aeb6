from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wikindex.content_source import PageRef, RawPage
from wikindex.errors import ParseError
from wikindex.page_analysis import (
    DEFAULT_SECTIONS,
    AuthorPatterns,
    contains_anchor,
    count_mentions,
    extract_bibliography,
    parse_page,
)


def raw_page(title: str, markup: str) -> RawPage:
    return RawPage(ref=PageRef.of(title), markup=markup, fetched_at="t")


def record_page(title: str, **fields) -> RawPage:
    return raw_page(title, json.dumps({"title": title, **fields}))


EINSTEIN = AuthorPatterns.from_names("Albert Einstein", "Einstein", anchor_terms=("physics", "relativity"))


# --- AuthorPatterns ---


def test_patterns_derive_initials_forms() -> None:
    assert EINSTEIN.initials_forms == ("A. Einstein", "Einstein, A.")
    assert EINSTEIN.short_name == "Einstein"
    assert EINSTEIN.match_bare_surname_in_bib is False


def test_patterns_default_short_name_is_last_token() -> None:
    pats = AuthorPatterns.from_names("Benoit Mandelbrot")
    assert pats.short_name == "Mandelbrot"
    assert pats.initials_forms == ("B. Mandelbrot", "Mandelbrot, B.")


def test_patterns_reject_short_name_not_in_full_name() -> None:
    with pytest.raises(ValueError):
        AuthorPatterns.from_names("Albert Einstein", "Bohr")


def test_patterns_round_trip_dict() -> None:
    assert AuthorPatterns.from_dict(EINSTEIN.to_dict()) == EINSTEIN


# --- JSON record parsing ---


def test_parse_record_fields() -> None:
    raw = record_page(
        "Ulm",
        body_text="Birthplace city.",
        links=["Danube", "German Empire", "Danube", "Ulm", "Category:Cities"],
        bibliography=[
            {"section": "References", "text": "A. Einstein one"},
            {"section": "Quotes", "text": "not a bib section"},
        ],
    )
    content = parse_page(raw)
    assert content.title == "Ulm"
    assert content.body_text == "Birthplace city."
    assert content.links == ["Danube", "German_Empire"]  # dedup, normalize, no self, no namespace
    assert content.bibliography == [("References", "A. Einstein one")]


def test_parse_record_defaults_empty() -> None:
    content = parse_page(record_page("Bare"))
    assert content.links == [] and content.bibliography == [] and content.body_text == ""


def test_parse_record_redirect_is_an_error() -> None:
    with pytest.raises(ParseError):
        parse_page(record_page("Alias", redirect="Real"))


def test_parse_rejects_unrecognizable_markup() -> None:
    with pytest.raises(ParseError):
        parse_page(raw_page("X", "just plain words"))
    with pytest.raises(ParseError):
        parse_page(raw_page("X", "[1, 2, 3]"))


def test_parse_record_bib_section_match_is_case_insensitive() -> None:
    raw = record_page("X", bibliography=[{"section": "REFERENCES", "text": "A. Einstein"}])
    assert parse_page(raw).bibliography == [("REFERENCES", "A. Einstein")]


# --- HTML parsing ---

LINK_HTML = """
<div class="mw-parser-output">
<p>Intro mentions <a href="/wiki/Spacetime">spacetime</a> and again
<a href="/wiki/Spacetime">spacetime</a> and <a href="/wiki/Spacetime#History">history</a>.</p>
<ul>
<li><a href="/wiki/Category:Physics">a category</a></li>
<li><a href="/wiki/Black%20hole">a black hole</a></li>
<li><a href="http://example.com/wiki/External">elsewhere</a></li>
<li><a href="/w/index.php?title=Red_link&amp;action=edit">red link</a></li>
<li><a href="/wiki/World_line">world line</a></li>
</ul>
</div>
"""


def test_html_links_first_occurrence_no_dups_no_namespaces() -> None:
    content = parse_page(raw_page("Minkowski_space", LINK_HTML))
    assert content.links == ["Spacetime", "Black_hole", "World_line"]


def test_html_self_link_dropped() -> None:
    html = '<p><a href="/wiki/Spacetime">self</a> and <a href="/wiki/Other">other</a></p>'
    assert parse_page(raw_page("Spacetime", html)).links == ["Other"]


BIB_HTML = """
<div>
<p>Intro text about physics.</p>
<h2>REFERENCES<span>[edit]</span></h2>
<p>A. Einstein, First Paper.</p>
<h3>Collections</h3>
<p>Einstein, A. Second Entry.</p>
<h2>Notes</h2>
<p>Unrelated notes text.</p>
<h2>External links</h2>
<p>Some link farm.</p>
</div>
"""


def test_html_bibliography_extraction() -> None:
    content = parse_page(raw_page("Test_page", BIB_HTML))
    assert len(content.bibliography) == 1
    name, text = content.bibliography[0]
    assert name == "REFERENCES"
    assert "A. Einstein, First Paper." in text
    assert "Einstein, A. Second Entry." in text  # h3 subsection stays inside the h2 span
    assert "Unrelated notes" not in text


def test_html_body_excludes_bibliography_text() -> None:
    content = parse_page(raw_page("Test_page", BIB_HTML))
    assert "Intro text about physics." in content.body_text
    assert "First Paper" not in content.body_text
    assert "Unrelated notes text." in content.body_text  # unrecognized sections stay in the body


def test_html_external_links_section_excluded_by_default_includable() -> None:
    content = parse_page(raw_page("Test_page", BIB_HTML))
    assert all(name.casefold() != "external links" for name, _ in content.bibliography)
    widened = parse_page(raw_page("Test_page", BIB_HTML), recognized_sections=("External links",))
    assert [name for name, _ in widened.bibliography] == ["External links"]


def test_extract_bibliography_from_markup_string() -> None:
    sections = extract_bibliography(BIB_HTML)
    assert [name for name, _ in sections] == ["REFERENCES"]
    sections = extract_bibliography(BIB_HTML, recognized=("Notes",))
    assert [name for name, _ in sections] == ["Notes"]


def test_html_script_and_style_ignored() -> None:
    html = "<p>visible</p><script>var x = 'physics of Einstein';</script><style>.a{}</style>"
    content = parse_page(raw_page("X", html))
    assert "visible" in content.body_text
    assert "var x" not in content.body_text
    assert contains_anchor(content.body_text, EINSTEIN) is False


def test_default_sections() -> None:
    assert set(DEFAULT_SECTIONS) == {"Publications", "References", "Further reading", "Bibliography", "Works"}


# --- anchors ---


def test_anchor_positive_on_short_name_and_terms() -> None:
    assert contains_anchor("EINSTEIN lived here.", EINSTEIN) is True
    assert contains_anchor("The physics of stars.", EINSTEIN) is True
    assert contains_anchor("General relativity holds.", EINSTEIN) is True


def test_anchor_requires_word_boundaries() -> None:
    assert contains_anchor("Einsteinium is an element.", EINSTEIN) is False
    assert contains_anchor("Astrophysics is not the anchor.", EINSTEIN) is False
    assert contains_anchor("(Einstein)", EINSTEIN) is True
    assert contains_anchor("Einstein's legacy", EINSTEIN) is True


def test_anchor_negative() -> None:
    assert contains_anchor("No relevant words at all.", EINSTEIN) is False
    assert contains_anchor("", EINSTEIN) is False


# --- mention counting ---


def bib(text: str) -> list[tuple[str, str]]:
    return [("References", text)]


def test_count_both_initials_forms() -> None:
    assert count_mentions(bib("A. Einstein and Einstein, A."), EINSTEIN) == 2


def test_count_non_overlapping_greedy() -> None:
    # "Einstein, A." is consumed first; the overlapping "A. Einstein" is not recounted
    assert count_mentions(bib("Einstein, A. Einstein"), EINSTEIN) == 1


def test_count_longest_pattern_wins_at_same_offset() -> None:
    bare_on = AuthorPatterns.from_names("Albert Einstein", "Einstein", match_bare_surname_in_bib=True)
    assert count_mentions(bib("Albert Einstein wrote."), bare_on) == 1
    assert count_mentions(bib("Einstein, A. pondered."), bare_on) == 1


def test_count_bare_surname_flag() -> None:
    assert count_mentions(bib("Einstein wrote much."), EINSTEIN) == 0
    bare_on = AuthorPatterns.from_names("Albert Einstein", "Einstein", match_bare_surname_in_bib=True)
    assert count_mentions(bib("Einstein wrote much."), bare_on) == 1


def test_count_word_boundaries() -> None:
    bare_on = AuthorPatterns.from_names("Albert Einstein", "Einstein", match_bare_surname_in_bib=True)
    assert count_mentions(bib("Einsteinium, A. Einsteinium, Einsteiniums everywhere"), bare_on) == 0


def test_count_case_insensitive() -> None:
    assert count_mentions(bib("ALBERT EINSTEIN; a. einstein"), EINSTEIN) == 2


def test_count_sums_across_sections() -> None:
    sections = [("References", "A. Einstein."), ("Works", "Einstein, A. Collected.")]
    assert count_mentions(sections, EINSTEIN) == 2


def test_count_empty() -> None:
    assert count_mentions([], EINSTEIN) == 0
    assert count_mentions(bib(""), EINSTEIN) == 0


# --- properties ---

filler_text = st.text(alphabet="abcdefghij XYZ.,;\n0123456789", max_size=200)

# alphabet rich enough to spell the mention patterns, so bases may already match
mentionable_text = st.text(alphabet="AEinste.,\n lbrt", max_size=120)


@given(mentionable_text)
def test_count_monotone_under_appended_mention(base: str) -> None:
    before = count_mentions(bib(base), EINSTEIN)
    after = count_mentions(bib(base + "\nA. Einstein\n"), EINSTEIN)
    assert after == before + 1


@given(st.text(alphabet="0123456789 .,;!?", max_size=100))
def test_anchor_false_without_alphabetic_overlap(body: str) -> None:
    assert contains_anchor(body, EINSTEIN) is False


@given(filler_text)
def test_count_zero_safety(text: str) -> None:
    # filler alphabet cannot spell any mention pattern, which all contain "instein"
    assert count_mentions(bib(text), EINSTEIN) == 0


@given(filler_text)
def test_count_deterministic(text: str) -> None:
    assert count_mentions(bib(text), EINSTEIN) == count_mentions(bib(text), EINSTEIN)
