#!/usr/bin/env python3
"""Regenerate the bundled test corpus (tests/data/corpus_einstein).

25 manifest titles: 24 articles plus one redirect stub. The link structure,
anchor words, and bibliography mention counts are all planted by hand so the
expected crawl can be derived independently (see scan_corpus.py). One page
(Spacetime) is stored as HTML to exercise the HTML extraction path inside the
crawl; it carries a duplicate link and a Category: link that must be filtered.
"""

from __future__ import annotations

import argparse
import json
import re
from pathlib import Path

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "corpus_einstein"


def seed_references() -> str:
    # 100 + 50 + 24 = 174 mention lines, exactly one pattern occurrence each
    lines = []
    for i in range(1, 101):
        lines.append(f"A. Einstein, On Quanta and Radiation, Part {i}. Annalen der Physik, 19{i % 10:01d}5.")
    for i in range(1, 51):
        lines.append(f"Einstein, A. Investigations and Notes, Series {i}. Sitzungsberichte, 192{i % 10:01d}.")
    for i in range(1, 25):
        lines.append(f"Albert Einstein, Collected Essays, Volume {i}. Methuen, 1933.")
    return "\n".join(lines)


SPACETIME_HTML = """<div class="mw-parser-output">
<p>In physics, spacetime is a mathematical model that fuses the three
dimensions of space and the one dimension of time into a single
four-dimensional continuum. It is the standard arena of
<a href="/wiki/Minkowski_space">Minkowski space</a> formulations used across
<a href="/wiki/Physics">physics</a>, and diagrams of
<a href="/wiki/Minkowski_space">Minkowski space</a> appear in most textbooks.
See also <a href="/wiki/Category:Concepts_in_physics">the concepts category</a>
and the <a href="/wiki/World_line">world line</a> of a particle.</p>
<h2>Further reading<span>[edit]</span></h2>
<ul>
<li>Einstein, A. Relativity: The Special and the General Theory. Henry Holt, 1916.</li>
</ul>
</div>
"""


def pages() -> dict[str, dict | str]:
    refs = lambda text: [{"section": "References", "text": text}]
    return {
        "Albert_Einstein": {
            "body_text": (
                "Albert Einstein was a German-born theoretical physicist who developed "
                "the theory of relativity, one of the two pillars of modern physics. "
                "His work is also known for its influence on the philosophy of science."
            ),
            "links": [
                "Ulm",
                "German Empire",
                "Category:Physicists",
                "Physics",
                "Theory of relativity",
                "Annus Mirabilis",
                "Ulm",
                "ETH Zurich",
                "Max Planck",
            ],
            "bibliography": refs(seed_references()),
        },
        "Ulm": {
            "body_text": (
                "Ulm is a city on the river Danube in the south of Germany, best known "
                "as the birthplace of Albert Einstein."
            ),
            "links": ["Danube", "German Empire"],
            "bibliography": refs(
                "A. Einstein, Autobiographical Notes. Open Court, 1949.\n"
                "Foelsing, A. Albert Einstein: A Biography. Viking, 1997."
            ),
        },
        "German_Empire": {
            "body_text": "The German Empire was the German nation state that existed from 1871 to 1918.",
            "links": ["Berlin", "Otto von Bismarck"],
            "bibliography": [],
        },
        "Physics": {
            "body_text": (
                "Physics is the natural science that studies matter, its fundamental "
                "constituents, its motion and behavior through space and time. Major "
                "advances in the field came from scientists such as Einstein."
            ),
            "links": ["Quantum mechanics", "Electron"],
            "bibliography": refs(
                "Feynman, R. P. The Feynman Lectures on Physics. Addison-Wesley, 1964.\n"
                "Landau, L. D. Course of Theoretical Physics. Pergamon Press, 1960."
            ),
        },
        "Theory_of_relativity": {
            "body_text": (
                "The theory of relativity, developed principally by Albert Einstein, "
                "transformed theoretical physics and astronomy during the 20th century."
            ),
            "links": ["General relativity", "Special relativity", "Spacetime", "Albert Einstein"],
            "bibliography": refs(
                "A. Einstein, Zur Elektrodynamik bewegter Koerper. Annalen der Physik, 1905.\n"
                "Einstein, A. Die Grundlage der allgemeinen Relativitaetstheorie. 1916.\n"
                "Albert Einstein, Relativity: The Special and General Theory. 1920."
            ),
        },
        "Annus_Mirabilis": {"redirect": "Annus_Mirabilis_papers"},
        "Annus_Mirabilis_papers": {
            "body_text": (
                "In 1905, Albert Einstein published four groundbreaking papers in "
                "Annalen der Physik, reshaping the foundations of modern physics."
            ),
            "links": ["Photoelectric effect", "Brownian motion"],
            "bibliography": refs(
                "A. Einstein, Ueber einen die Erzeugung und Verwandlung des Lichtes "
                "betreffenden heuristischen Gesichtspunkt. 1905.\n"
                "A. Einstein, Ueber die von der molekularkinetischen Theorie der Waerme "
                "geforderte Bewegung. 1905.\n"
                "A. Einstein, Zur Elektrodynamik bewegter Koerper. 1905.\n"
                "A. Einstein, Ist die Traegheit eines Koerpers von seinem Energieinhalt abhaengig? 1905."
            ),
        },
        "ETH_Zurich": {
            "body_text": (
                "ETH Zurich is a public research university in Zurich, Switzerland, "
                "where Albert Einstein earned his teaching diploma in 1900."
            ),
            "links": ["Zurich", "Switzerland"],
            "bibliography": refs(
                "Einstein, A. The Collected Papers, Volume 1: The Early Years. "
                "Princeton University Press, 1987."
            ),
        },
        "Max_Planck": {
            "body_text": (
                "Max Planck was a German theoretical physicist whose discovery of "
                "energy quanta won him the Nobel Prize in Physics in 1918."
            ),
            "links": ["Quantum mechanics", "Nobel Prize in Physics"],
            "bibliography": refs(
                "Planck, M. Scientific Autobiography and Other Papers. 1949.\n"
                "A. Einstein, Max Planck memorial address. 1948.\n"
                "Einstein, A. Obituary for Max Planck. 1947."
            ),
        },
        "Danube": {
            "body_text": (
                "The Danube is the second-longest river in Europe, flowing through "
                "much of Central and Southeastern Europe."
            ),
            "links": ["Black Forest"],
            "bibliography": [],
        },
        "General_relativity": {
            "body_text": (
                "General relativity is the geometric theory of gravitation published "
                "by Albert Einstein in 1915, the current description of gravitation in "
                "modern physics."
            ),
            "links": ["Spacetime", "Gravitational wave", "Black hole"],
            "bibliography": refs(
                "Einstein, A. Die Feldgleichungen der Gravitation. 1915.\n"
                "A. Einstein, Naeherungsweise Integration der Feldgleichungen der Gravitation. 1916.\n"
                "Albert Einstein, The Meaning of Relativity. Princeton, 1921.\n"
                "Einstein, A. Kosmologische Betrachtungen zur allgemeinen Relativitaetstheorie. 1917.\n"
                "A. Einstein and N. Rosen, On Gravitational Waves. 1937."
            ),
        },
        "Special_relativity": {
            "body_text": (
                "Special relativity is a theory of the structure of spacetime, "
                "proposed in 1905, that reconciles mechanics with electromagnetism."
            ),
            "links": ["Spacetime", "Speed of light"],
            "bibliography": refs(
                "A. Einstein, On the Electrodynamics of Moving Bodies. 1905.\n"
                "Minkowski, H. Raum und Zeit. 1909.\n"
                "Einstein, A. Does the Inertia of a Body Depend Upon Its Energy Content? 1905."
            ),
        },
        "Spacetime": SPACETIME_HTML,
        "Photoelectric_effect": {
            "body_text": (
                "The photoelectric effect is the emission of electrons from a material "
                "caused by light, explained in 1905 by Albert Einstein as evidence of "
                "light quanta."
            ),
            "links": ["Electron"],
            "bibliography": refs(
                "A. Einstein, Ueber einen die Erzeugung und Verwandlung des Lichtes "
                "betreffenden heuristischen Gesichtspunkt. Annalen der Physik, 1905.\n"
                "Millikan, R. A Direct Photoelectric Determination of Planck's h. 1916.\n"
                "Einstein, A. Zur Quantentheorie der Strahlung. 1917."
            ),
        },
        "Brownian_motion": {
            "body_text": (
                "Brownian motion is the random motion of particles suspended in a "
                "fluid, explained theoretically in a celebrated 1905 physics paper."
            ),
            "links": ["Electron"],
            "bibliography": refs(
                "Perrin, J. Atoms. Constable, 1916.\n"
                "Smoluchowski, M. Zur kinetischen Theorie der Brownschen Molekularbewegung. 1906."
            ),
        },
        "Zurich": {
            "body_text": (
                "Zurich is the largest city in Switzerland, located at the "
                "northwestern tip of Lake Zurich."
            ),
            "links": ["Lake Zurich"],
            "bibliography": [],
        },
        "Switzerland": {
            "body_text": (
                "Switzerland is a landlocked country at the confluence of Western, "
                "Central and Southern Europe."
            ),
            "links": ["Alps"],
            "bibliography": [],
        },
        "Quantum_mechanics": {
            "body_text": (
                "Quantum mechanics is a fundamental theory in physics that describes "
                "the behavior of nature at and below the scale of atoms."
            ),
            "links": ["Max Planck", "Photoelectric effect"],
            "bibliography": refs(
                "Dirac, P. A. M. The Principles of Quantum Mechanics. Oxford, 1930.\n"
                "von Neumann, J. Mathematische Grundlagen der Quantenmechanik. 1932."
            ),
        },
        "Nobel_Prize_in_Physics": {
            "body_text": (
                "The Nobel Prize in Physics is awarded once a year to those who have "
                "made the most outstanding contributions to physics."
            ),
            "links": ["Max Planck"],
            "bibliography": [],
        },
        "Gravitational_wave": {
            "body_text": (
                "Gravitational waves are ripples in spacetime that propagate outward "
                "from accelerated masses, predicted by the general theory of relativity."
            ),
            "links": ["General relativity", "Black hole"],
            "bibliography": refs(
                "Abbott, B. P. et al. Observation of Gravitational Waves from a "
                "Binary Black Hole Merger. 2016."
            ),
        },
        "Black_hole": {
            "body_text": (
                "A black hole is a region of spacetime where gravity is so strong "
                "that nothing can escape from it, a striking prediction of general "
                "relativity."
            ),
            "links": ["General relativity"],
            "bibliography": refs(
                "Einstein, A. On a Stationary System with Spherical Symmetry "
                "Consisting of Many Gravitating Masses. 1939.\n"
                "Schwarzschild, K. Ueber das Gravitationsfeld eines Massenpunktes. 1916."
            ),
        },
        "Speed_of_light": {
            "body_text": (
                "The speed of light in vacuum is exactly 299,792,458 metres per "
                "second, a universal constant by definition."
            ),
            "links": ["Metre"],
            "bibliography": [],
        },
        "Minkowski_space": {
            "body_text": (
                "Minkowski space combines three-dimensional space and time into a "
                "four-dimensional manifold, the standard setting for special relativity."
            ),
            "links": ["Spacetime", "Special relativity"],
            "bibliography": refs("Minkowski, H. Raum und Zeit. Physikalische Zeitschrift, 1909."),
        },
        "World_line": {
            "body_text": "A world line is the path that an object traces in four-dimensional spacetime.",
            "links": ["Spacetime"],
            "bibliography": [],
        },
        "Electron": {
            "body_text": (
                "The electron is a subatomic particle with a negative elementary "
                "electric charge, found in all atoms."
            ),
            "links": ["Atom"],
            "bibliography": [],
        },
    }


def write_corpus(out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, str] = {}
    for title, record in pages().items():
        stem = re.sub(r"[^A-Za-z0-9_]+", "_", title).lower()
        if isinstance(record, str):
            name = f"{stem}.html"
            (out / name).write_text(record, encoding="utf-8")
        else:
            name = f"{stem}.json"
            payload = {"title": title, **record}
            (out / name).write_text(json.dumps(payload, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
        manifest[title] = name
    (out / "index.json").write_text(json.dumps(manifest, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    return len(manifest)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args()
    count = write_corpus(args.out)
    print(f"wrote {count} titles to {args.out}")


if __name__ == "__main__":
    main()
