"""Command-line surface: probe, index, compare, metrics.

Commands run in-process through cli.main so exit codes and stdout can be
asserted directly; one subprocess test covers the `python -m wikindex` entry
point.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

from wikindex import cli
from wikindex.export import read_graph, read_report

GENERATED_AT = "2026-01-01T00:00:00+00:00"
WORKED_COUNTS = [100, 20, 10, 5, 5, 1, 1, 1, 1]


def run_cli(argv, capsys):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
    out, err = capsys.readouterr()
    return code, out, err


def probe_args(corpus, out_dir: Path, *extra: str) -> list[str]:
    return [
        "probe",
        "--seed", "Albert_Einstein",
        "--full-name", "Albert Einstein",
        "--anchor", "physics",
        "--anchor", "relativity",
        "--source", f"fixture:{corpus}",
        "--out", str(out_dir / "report.json"),
        "--trace", str(out_dir / "trace.txt"),
        "--now", GENERATED_AT,
        *extra,
    ]


def write_counts_csv(path: Path, counts) -> Path:
    lines = ["title,mentions"] + [f"Article_{i},{c}" for i, c in enumerate(counts, 1)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def triangle_csv(path: Path) -> Path:
    path.write_text(
        "from,to,kind\nA,B,forward\nB,C,forward\nC,A,back\n", encoding="utf-8"
    )
    return path


# ---------------------------------------------------------------------------
# probe


def test_probe_writes_report_trace_and_export(einstein_corpus, tmp_path, capsys, scan_expected):
    args = probe_args(
        einstein_corpus, tmp_path, "--export", f"gexf:{tmp_path / 'graph.gexf'}"
    )
    code, out, err = run_cli(args, capsys)
    assert code == 0, err
    assert "Albert_Einstein: N=11 WH=3 WI=10" in out
    report = read_report(tmp_path / "report.json")
    assert report.index.wi_rounded == 10
    assert report.generated_at == GENERATED_AT
    assert (tmp_path / "trace.txt").read_text(encoding="utf-8") == scan_expected["trace_text"]
    graph = read_graph(tmp_path / "graph.gexf")
    assert graph.node_count == len(scan_expected["nodes"]) == 24
    assert graph.edge_count == len(scan_expected["edges"])


def test_probe_rerun_is_byte_identical(einstein_corpus, tmp_path, capsys):
    first = tmp_path / "a"
    second = tmp_path / "b"
    first.mkdir()
    second.mkdir()
    code1, out1, _ = run_cli(probe_args(einstein_corpus, first), capsys)
    code2, out2, _ = run_cli(probe_args(einstein_corpus, second), capsys)
    assert code1 == code2 == 0
    assert out1.replace(str(first), "X") == out2.replace(str(second), "X")
    assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()
    assert (first / "trace.txt").read_bytes() == (second / "trace.txt").read_bytes()


def test_probe_default_output_paths(einstein_corpus, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, err = run_cli(
        [
            "probe",
            "--seed", "Albert_Einstein",
            "--full-name", "Albert Einstein",
            "--anchor", "physics",
            "--anchor", "relativity",
            "--source", f"fixture:{einstein_corpus}",
            "--now", GENERATED_AT,
        ],
        capsys,
    )
    assert code == 0, err
    assert (tmp_path / "Albert_Einstein.report.json").exists()
    assert (tmp_path / "Albert_Einstein.trace.txt").exists()


def test_probe_pattern_defaults_derived_from_seed():
    patterns = cli.derive_patterns("Albert_Einstein", None, None, ())
    assert patterns.full_name == "Albert Einstein"
    assert patterns.short_name == "Einstein"


def test_probe_missing_seed_maps_to_exit_code(einstein_corpus, tmp_path, capsys):
    args = probe_args(einstein_corpus, tmp_path)
    args[args.index("--seed") + 1] = "No_Such_Page"
    code, out, err = run_cli(args, capsys)
    assert code == cli.EXIT_SEED == 3
    assert "No_Such_Page" in err


def test_probe_bad_source_spec(tmp_path, capsys):
    code, _, err = run_cli(
        ["probe", "--seed", "X", "--source", "ftp:nowhere"], capsys
    )
    assert code == cli.EXIT_INPUT == 5
    assert "source" in err


def test_probe_truncated_run_still_writes_partial_report(einstein_corpus, tmp_path, capsys):
    args = probe_args(einstein_corpus, tmp_path, "--max-pages", "3")
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    assert "(truncated)" in out
    report = read_report(tmp_path / "report.json")
    assert report.truncated and report.fetch_count == 3


def test_probe_rejects_unknown_export_format(einstein_corpus, tmp_path, capsys):
    args = probe_args(einstein_corpus, tmp_path, "--export", f"svg:{tmp_path / 'g.svg'}")
    code, _, err = run_cli(args, capsys)
    assert code == cli.EXIT_INPUT


def test_probe_config_file_supplies_flags_and_flags_win(einstein_corpus, tmp_path, capsys):
    config_path = tmp_path / "probe.json"
    config_path.write_text(
        json.dumps(
            {
                "seed": "Albert_Einstein",
                "full_name": "Albert Einstein",
                "anchor": ["physics", "relativity"],
                "source": f"fixture:{einstein_corpus}",
                "out": str(tmp_path / "report.json"),
                "trace": str(tmp_path / "trace.txt"),
                "now": GENERATED_AT,
                "max_pages": 3,
            }
        ),
        encoding="utf-8",
    )
    code, out, _ = run_cli(["probe", "--config", str(config_path)], capsys)
    assert code == 0
    assert read_report(tmp_path / "report.json").fetch_count == 3

    code, out, _ = run_cli(
        ["probe", "--config", str(config_path), "--max-pages", "0"], capsys
    )
    assert code == 0
    assert read_report(tmp_path / "report.json").fetch_count == 24


def test_probe_live_source_env_overrides(make_corpus, tmp_path, capsys, monkeypatch):
    from mockwiki import MockWiki

    pages = {
        "Seed": {
            "body_text": "An essay about computing.",
            "links": ["Real"],
            "bibliography": [{"section": "References", "text": "A. Lovelace, Notes. 1843."}],
        },
        "Real": {
            "body_text": "More computing history.",
            "links": ["Seed"],
            "bibliography": [{"section": "References", "text": "Lovelace, A. Diagrams. 1842."}],
        },
    }
    cache_dir = tmp_path / "cache"
    monkeypatch.setenv("WIKINDEX_CACHE_DIR", str(cache_dir))
    monkeypatch.setenv("WIKINDEX_USER_AGENT", "wikindex-tests/1.0")

    def args(out_name):
        return [
            "probe",
            "--seed", "Seed",
            "--full-name", "Ada Lovelace",
            "--anchor", "computing",
            "--rate-limit", "0",
            "--out", str(tmp_path / out_name),
            "--trace", str(tmp_path / "trace.txt"),
            "--now", GENERATED_AT,
        ]

    with MockWiki(pages) as wiki:
        source = ["--source", f"live:{wiki.base_url}"]
        code, out1, err = run_cli(args("r1.json") + source, capsys)
        assert code == 0, err
        assert wiki.last_user_agent and "wikindex-tests/1.0" in wiki.last_user_agent
        seen = wiki.request_count
        assert seen == 2
        code, out2, _ = run_cli(args("r2.json") + source, capsys)
        assert code == 0
        assert wiki.request_count == seen  # served from cache, no new requests
    assert "Seed: N=2 WH=1 WI=1" in out1
    r1 = (tmp_path / "r1.json").read_bytes()
    r2 = (tmp_path / "r2.json").read_bytes()
    assert r1 == r2


# ---------------------------------------------------------------------------
# index


def test_index_worked_example(tmp_path, capsys):
    csv_path = write_counts_csv(tmp_path / "counts.csv", WORKED_COUNTS)
    code, out, _ = run_cli(["index", str(csv_path)], capsys)
    assert code == 0
    assert out == "N=9 WH=5 WI=15\n"


def test_index_empty_table(tmp_path, capsys):
    csv_path = write_counts_csv(tmp_path / "empty.csv", [])
    code, out, _ = run_cli(["index", str(csv_path)], capsys)
    assert code == 0
    assert out == "N=0 WH=0 WI=0\n"


def test_index_growth_variants(tmp_path, capsys):
    csv_path = write_counts_csv(tmp_path / "counts.csv", WORKED_COUNTS)
    code, out, _ = run_cli(["index", str(csv_path), "--growth", "identity"], capsys)
    assert code == 0
    assert out == "N=9 WH=5 WI=45\n"
    code, out, _ = run_cli(["index", str(csv_path), "--growth", "log1p"], capsys)
    assert code == 0
    assert out.startswith("N=9 WH=5 WI=12")


def test_index_wh_forcing_large_table(tmp_path, capsys):
    counts = [10] * 7 + [1] * 85  # 92 rows, exactly 7 of them ≥ 7
    csv_path = write_counts_csv(tmp_path / "fermi.csv", counts)
    code, out, _ = run_cli(["index", str(csv_path)], capsys)
    assert code == 0
    assert out.startswith("N=92 WH=7 WI=67")


def test_index_reads_report_json(einstein_corpus, tmp_path, capsys):
    code, _, _ = run_cli(probe_args(einstein_corpus, tmp_path), capsys)
    assert code == 0
    code, out, _ = run_cli(["index", str(tmp_path / "report.json")], capsys)
    assert code == 0
    assert out == "N=11 WH=3 WI=10 (raw 9.9499)\n"


def test_index_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("page;count\nA;1\n", encoding="utf-8")
    code, _, err = run_cli(["index", str(bad)], capsys)
    assert code == cli.EXIT_INPUT
    bad.write_text("title,mentions\nA,many\n", encoding="utf-8")
    code, _, err = run_cli(["index", str(bad)], capsys)
    assert code == cli.EXIT_INPUT


def test_index_missing_file(tmp_path, capsys):
    code, _, err = run_cli(["index", str(tmp_path / "nope.csv")], capsys)
    assert code == cli.EXIT_IO == 4


# ---------------------------------------------------------------------------
# compare


def comparison_rows(tmp_path, einstein_corpus, capsys) -> Path:
    code, _, _ = run_cli(probe_args(einstein_corpus, tmp_path), capsys)
    assert code == 0
    rows = {
        "columns": ["scopus", "wos", "scholar"],
        "rows": [
            {
                "scientist": "Alice",
                "wiki_index": 141,
                "externals": {"scopus": 87, "wos": 79, "scholar": 103},
            },
            {
                "scientist": "Bob",
                "report": "report.json",
                "externals": {"wos": 41},
                "footnotes": {"scholar": "no public profile"},
            },
            {
                "scientist": "Carol",
                "wiki_index": 20,
                "externals": {"scopus": 15, "wos": 12, "scholar": 18},
            },
        ],
    }
    path = tmp_path / "rows.json"
    path.write_text(json.dumps(rows), encoding="utf-8")
    return path


def test_compare_renders_table_and_csv(einstein_corpus, tmp_path, capsys):
    rows_path = comparison_rows(tmp_path, einstein_corpus, capsys)
    csv_out = tmp_path / "table.csv"
    code, out, _ = run_cli(["compare", str(rows_path), "--out", str(csv_out)], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["Scientist", "WI", "scopus", "wos", "scholar"]
    table = {line.split()[0]: line.split() for line in lines[1:] if line.strip()}
    assert table["Alice"] == ["Alice", "141", "87", "79", "103"]
    assert table["Bob"] == ["Bob", "10", "-", "41", "-*"]
    assert table["Carol"] == ["Carol", "20", "15", "12", "18"]
    assert "* no public profile" in out
    csv_lines = csv_out.read_text(encoding="utf-8").splitlines()
    assert csv_lines[0] == "scientist,wiki_index,scopus,wos,scholar"
    assert csv_lines[2] == "Bob,10,,41,"


def test_compare_stdout_is_deterministic(einstein_corpus, tmp_path, capsys):
    rows_path = comparison_rows(tmp_path, einstein_corpus, capsys)
    code1, out1, _ = run_cli(["compare", str(rows_path)], capsys)
    code2, out2, _ = run_cli(["compare", str(rows_path)], capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_compare_empty_rows(tmp_path, capsys):
    path = tmp_path / "rows.json"
    path.write_text(json.dumps({"rows": []}), encoding="utf-8")
    code, out, _ = run_cli(["compare", str(path)], capsys)
    assert code == 0
    assert out.splitlines()[0].split() == ["Scientist", "WI"]
    assert len([line for line in out.splitlines() if line.strip()]) == 1


def test_compare_missing_report_file(tmp_path, capsys):
    path = tmp_path / "rows.json"
    path.write_text(
        json.dumps({"rows": [{"scientist": "Alice", "report": "gone.json"}]}),
        encoding="utf-8",
    )
    code, _, err = run_cli(["compare", str(path)], capsys)
    assert code == cli.EXIT_IO


def test_compare_row_without_index_or_report(tmp_path, capsys):
    path = tmp_path / "rows.json"
    path.write_text(json.dumps({"rows": [{"scientist": "Alice"}]}), encoding="utf-8")
    code, _, err = run_cli(["compare", str(path)], capsys)
    assert code == cli.EXIT_INPUT
    assert "Alice" in err


# ---------------------------------------------------------------------------
# metrics


def test_metrics_on_triangle_file(tmp_path, capsys):
    csv_path = triangle_csv(tmp_path / "k3.csv")
    code, out, _ = run_cli(["metrics", "--graph", str(csv_path)], capsys)
    assert code == 0
    assert "nodes: 3" in out
    assert "diameter: 1" in out
    assert "average clustering: 1" in out


def test_metrics_on_fixture_graph(einstein_corpus, tmp_path, capsys, scan_expected):
    run_cli(
        probe_args(einstein_corpus, tmp_path, "--export", f"gexf:{tmp_path / 'g.gexf'}"),
        capsys,
    )
    code, out, _ = run_cli(["metrics", "--graph", str(tmp_path / "g.gexf")], capsys)
    assert code == 0
    want = scan_expected["metrics"]
    assert f"nodes: {want['node_count']}" in out
    assert f"edges: {want['edge_count']}" in out
    assert "average degree: 2.25" in out
    assert f"diameter: {want['diameter']}" in out
    assert "average clustering: 0.0978" in out
    assert "  7  Albert_Einstein" in out


def test_metrics_from_report(einstein_corpus, tmp_path, capsys):
    run_cli(probe_args(einstein_corpus, tmp_path), capsys)
    code, out, _ = run_cli(["metrics", "--report", str(tmp_path / "report.json")], capsys)
    assert code == 0
    assert "nodes: 24" in out and "diameter: 6" in out


def test_metrics_two_components_notes_size(tmp_path, capsys):
    path = tmp_path / "two.csv"
    path.write_text("from,to,kind\nA,B,forward\nC,D,forward\n", encoding="utf-8")
    code, out, _ = run_cli(["metrics", "--graph", str(path)], capsys)
    assert code == 0
    assert "diameter: 1 (largest component, 2 of 4 nodes)" in out


def test_metrics_missing_and_malformed_files(tmp_path, capsys):
    code, _, _ = run_cli(["metrics", "--graph", str(tmp_path / "nope.gexf")], capsys)
    assert code == cli.EXIT_IO
    bad = tmp_path / "bad.csv"
    bad.write_text("nope\n", encoding="utf-8")
    code, _, _ = run_cli(["metrics", "--graph", str(bad)], capsys)
    assert code == cli.EXIT_INPUT


# ---------------------------------------------------------------------------
# shared behavior


def test_usage_errors_exit_2(capsys):
    code, _, _ = run_cli([], capsys)
    assert code == cli.EXIT_USAGE == 2
    code, _, _ = run_cli(["probe", "--bogus-flag"], capsys)
    assert code == 2


def test_exit_codes_are_distinct():
    codes = {
        cli.EXIT_OK,
        cli.EXIT_USAGE,
        cli.EXIT_SEED,
        cli.EXIT_IO,
        cli.EXIT_INPUT,
        cli.EXIT_NETWORK,
        cli.EXIT_CORPUS,
    }
    assert len(codes) == 7


def test_module_entry_point(tmp_path):
    csv_path = write_counts_csv(tmp_path / "counts.csv", WORKED_COUNTS)
    proc = subprocess.run(
        [sys.executable, "-m", "wikindex", "index", str(csv_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "N=9 WH=5 WI=15\n"
