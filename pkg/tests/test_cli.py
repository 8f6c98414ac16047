"""CLI commands: exit codes, table layouts, exports, determinism."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from aicnet.cli import main
from aicnet.corpus import load_corpus, save_corpus
from aicnet.export import read_graphml
from aicnet.semantic import load_embeddings, save_embeddings
from aicnet.synth import SynthParams, generate, verify


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sample(tmp_path):
    """Two synthetic readings over one author roster, saved as files."""
    params_r1 = SynthParams(
        n_authors=4, n_quotes=3,
        attention_blocks=(("s01", "s02", "s03"), ("s04",)),
        reply_edges=(("s01", "s02"), ("s01", "s02"), ("s03", "s04")),
        vocab_overlap={("s01", "s03"): 2},
        seed=11,
    )
    params_r2 = SynthParams(
        n_authors=4, n_quotes=2,
        attention_blocks=(("s01", "s04"), ("s02", "s03")),
        reply_edges=(("s04", "s01"),),
        vocab_overlap={},
        seed=12,
    )
    c1, s1, gt1 = generate(params_r1, reading_id="r1", id_prefix="r1-")
    c2, s2, gt2 = generate(params_r2, reading_id="r2", id_prefix="r2-")
    corpus_path = tmp_path / "sample.jsonl"
    p1, p2 = tmp_path / "part1.jsonl", tmp_path / "part2.jsonl"
    save_corpus(c1, p1)
    save_corpus(c2, p2)
    corpus_path.write_bytes(p1.read_bytes() + p2.read_bytes())
    s1.vectors.update(s2.vectors)
    emb_path = tmp_path / "sample_emb.jsonl"
    save_embeddings(s1, emb_path)
    return corpus_path, emb_path, (gt1, gt2)


def test_validate_ok(sample, capsys):
    corpus_path, _, _ = sample
    code, out, _ = run_cli(capsys, "validate", str(corpus_path))
    assert code == 0
    assert out.startswith("ok:")


def test_validate_reports_dangling_parent(jsonl_file, capsys):
    path = jsonl_file([
        {"record": "quote", "id": "q1", "reading_id": "r1", "text": "T."},
        {"id": "a1", "reading_id": "r1", "author_id": "A", "kind": "annotation",
         "quote_id": "q1", "body": "x"},
        {"id": "rep9", "reading_id": "r1", "author_id": "B", "kind": "reply",
         "parent_id": "missing", "body": ""},
    ])
    code, out, _ = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert "rep9" in out


def test_validate_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, out, _ = run_cli(capsys, "validate", str(empty))
    assert code == 1
    assert "no records" in out


def test_stats_table_layout(sample, capsys):
    corpus_path, _, _ = sample
    code, out, _ = run_cli(capsys, "stats", str(corpus_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("Reading,r1,r2")
    assert lines[1].startswith("Posts,")
    assert lines[2].startswith("Replies,")
    assert lines[3].startswith("Average words per post,")
    assert any(line.startswith("Posts mean,") for line in lines)


def test_stats_unknown_reading(sample, capsys):
    corpus_path, _, _ = sample
    code, _, err = run_cli(capsys, "stats", str(corpus_path), "--reading", "zzz")
    assert code == 1
    assert "zzz" in err


def test_stats_reading_filter(sample, capsys):
    corpus_path, _, _ = sample
    code, out, _ = run_cli(capsys, "stats", str(corpus_path), "--reading", "r2")
    assert code == 0
    assert out.splitlines()[0] == "Reading,r2"


def test_stats_empty_reading(jsonl_file, capsys):
    path = jsonl_file([{"record": "quote", "id": "q1", "reading_id": "r1", "text": "T."}])
    code, out, _ = run_cli(capsys, "stats", str(path))
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "Posts,0"
    assert lines[2] == "Replies,0"
    assert lines[3] == "Average words per post,na"


def test_build_an_matches_ground_truth(sample, tmp_path, capsys):
    corpus_path, emb_path, (gt1, _) = sample
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(
        capsys, "build", str(corpus_path), "--reading", "r1", "--network", "an",
        "--embeddings", str(emb_path), "--format", "graphml,dot,csv,json",
        "--out", str(out_dir),
    )
    assert code == 0
    graph = read_graphml(out_dir / "r1_an.graphml")
    assert graph.nodes == gt1.expected_an.nodes
    assert graph.edges == gt1.expected_an.edges
    for name in ("r1_an.graphml", "r1_an.dot", "r1_an.json", "r1_an_edges.csv", "r1_an_nodes.csv"):
        assert (out_dir / name).exists()
        assert name in out


def test_build_in_reply_free_reading(jsonl_file, tmp_path, capsys):
    path = jsonl_file([
        {"record": "quote", "id": "q1", "reading_id": "r1", "text": "T."},
        {"id": "a1", "reading_id": "r1", "author_id": "A", "kind": "annotation",
         "quote_id": "q1", "body": "x"},
    ])
    out_dir = tmp_path / "out"
    code, _, _ = run_cli(capsys, "build", str(path), "--reading", "r1", "--network", "in",
                         "--out", str(out_dir))
    assert code == 0
    graph = read_graphml(out_dir / "r1_in.graphml")
    assert graph.nodes == {"A"}
    assert graph.edges == {}


def test_build_rejects_top_words_zero(sample, tmp_path, capsys):
    corpus_path, _, _ = sample
    code, _, err = run_cli(
        capsys, "build", str(corpus_path), "--reading", "r1", "--network", "cn",
        "--top-words", "0", "--out", str(tmp_path / "x"),
    )
    assert code == 1
    assert "--top-words" in err


def test_build_requires_out(sample, capsys):
    corpus_path, _, _ = sample
    code, _, err = run_cli(capsys, "build", str(corpus_path), "--reading", "r1",
                           "--network", "in")
    assert code == 1
    assert "--out" in err


def test_an_without_embeddings_falls_back_to_hash(sample, tmp_path, capsys):
    corpus_path, _, _ = sample
    code, _, _ = run_cli(capsys, "build", str(corpus_path), "--reading", "r1",
                         "--network", "an", "--out", str(tmp_path / "h"))
    assert code == 0


def test_an_with_file_embedder_needs_path(sample, capsys, tmp_path):
    corpus_path, _, _ = sample
    code, _, err = run_cli(capsys, "build", str(corpus_path), "--reading", "r1",
                           "--network", "an", "--embedder", "file",
                           "--out", str(tmp_path / "x"))
    assert code == 1
    assert "--embeddings" in err


def test_metrics_node_level_matches_module(sample, tmp_path, capsys):
    from aicnet import metrics as m
    from aicnet.graphs import build_an, build_cn_bipartite, build_in, project

    corpus_path, emb_path, _ = sample
    out_dir = tmp_path / "metrics"
    code, out, _ = run_cli(
        capsys, "metrics", str(corpus_path), "--level", "node",
        "--embeddings", str(emb_path), "--out", str(out_dir),
    )
    assert code == 0
    assert "# reading r1" in out and "# reading r2" in out

    corpus = load_corpus(corpus_path)
    store = load_embeddings(emb_path)
    reading = corpus.readings["r1"]
    an = build_an(reading, corpus, store)
    in_ = build_in(reading, corpus)
    cn = project(build_cn_bipartite(reading, corpus))
    rows = m.node_report(an, in_, cn, set(corpus.authors))
    data = json.loads((out_dir / "metrics_node_r1.json").read_text())
    assert [r["author_id"] for r in data] == [r.author_id for r in rows]
    for got, want in zip(data, rows):
        for key, val in (
            ("an_closeness", want.an_closeness),
            ("in_betweenness", want.in_betweenness),
            ("cn_betweenness", want.cn_betweenness),
        ):
            if val is None:
                assert got[key] is None
            else:
                assert got[key] == pytest.approx(val, abs=0)

    csv_text = (out_dir / "metrics_node_r1.csv").read_text()
    assert csv_text.splitlines()[0].startswith("Student,")
    assert csv_text.splitlines()[1].startswith("AN Closeness,")

    # display cells are exactly the 2-decimal rounding of the JSON values
    lines = csv_text.splitlines()
    for line, key in zip(lines[1:], ("an_closeness", "in_betweenness", "cn_betweenness")):
        cells = line.split(",")[1:]
        for cell, rec in zip(cells, data):
            want = "na" if rec[key] is None else f"{rec[key]:.2f}"
            assert cell == want


def test_metrics_all_isolates_row(jsonl_file, capsys):
    path = jsonl_file([
        {"record": "quote", "id": "q1", "reading_id": "r1", "text": "T."},
        {"id": "a1", "reading_id": "r1", "author_id": "A", "kind": "annotation",
         "quote_id": "q1", "body": "nothing shared here"},
    ])
    code, out, _ = run_cli(capsys, "metrics", str(path), "--level", "node")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "Student,A"
    assert lines[2] == "AN Closeness,na"
    assert lines[3] == "IN Betweenness,na"
    assert lines[4] == "CN Betweenness,na"


def test_metrics_network_level_two_rows(sample, capsys):
    corpus_path, emb_path, _ = sample
    code, out, _ = run_cli(capsys, "metrics", str(corpus_path), "--level", "network",
                           "--embeddings", str(emb_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Reading,AN transitivity,IN centralization,CN transitivity"
    assert len(lines) == 3
    assert lines[1].startswith("r1,") and lines[2].startswith("r2,")


def test_compare_self_is_all_zero(sample, capsys):
    corpus_path, emb_path, _ = sample
    code, out, _ = run_cli(capsys, "compare", str(corpus_path), "r1", "r1",
                           "--embeddings", str(emb_path))
    assert code == 0
    for line in out.splitlines():
        cells = line.split(",")
        if len(cells) == 5 and cells[-1] not in ("delta", "na"):
            assert cells[-1] in ("0.00", "-0.00")


def test_compare_disjoint_rosters_warns(tmp_path, capsys):
    c1, _, _ = generate(
        SynthParams(n_authors=2, n_quotes=1, attention_blocks=(("a1", "a2"),), seed=1),
        reading_id="r1", id_prefix="r1-",
    )
    c2, _, _ = generate(
        SynthParams(n_authors=2, n_quotes=1, attention_blocks=(("b1", "b2"),), seed=2),
        reading_id="r2", id_prefix="r2-",
    )
    path = tmp_path / "disjoint.jsonl"
    p1, p2 = tmp_path / "d1.jsonl", tmp_path / "d2.jsonl"
    save_corpus(c1, p1)
    save_corpus(c2, p2)
    path.write_bytes(p1.read_bytes() + p2.read_bytes())
    code, out, err = run_cli(capsys, "compare", str(path), "r1", "r2")
    assert code == 0
    assert "share no authors" in err
    node_lines = [l for l in out.splitlines() if l.startswith(("a", "b"))]
    assert node_lines
    for line in node_lines:
        assert line.endswith(",na")


def test_compare_unknown_reading(sample, capsys):
    corpus_path, _, _ = sample
    code, _, err = run_cli(capsys, "compare", str(corpus_path), "r1", "nope")
    assert code == 1
    assert "nope" in err


def test_compare_detects_planted_dominance(tmp_path, capsys):
    """r1 spreads replies evenly in a ring; r2 funnels them through one hub,
    so the interaction-centralization delta must come out positive."""
    authors = ("s01", "s02", "s03", "s04", "s05")
    ring = tuple((authors[i], authors[(i + 1) % 5]) for i in range(5))
    star = tuple(("s01", other) for other in authors[1:])
    c1, _, _ = generate(
        SynthParams(n_authors=5, n_quotes=1, attention_blocks=(authors,),
                    reply_edges=ring, seed=41),
        reading_id="r1", id_prefix="r1-",
    )
    c2, _, _ = generate(
        SynthParams(n_authors=5, n_quotes=1, attention_blocks=(authors,),
                    reply_edges=star, seed=42),
        reading_id="r2", id_prefix="r2-",
    )
    path = tmp_path / "dominance.jsonl"
    p1, p2 = tmp_path / "m1.jsonl", tmp_path / "m2.jsonl"
    save_corpus(c1, p1)
    save_corpus(c2, p2)
    path.write_bytes(p1.read_bytes() + p2.read_bytes())

    code, out, _ = run_cli(capsys, "compare", str(path), "r1", "r2")
    assert code == 0
    row = next(l for l in out.splitlines() if l.startswith("IN centralization,"))
    delta = float(row.split(",")[-1])
    assert delta > 0


def test_synth_emits_verifiable_files(tmp_path, capsys):
    out_dir = tmp_path / "synth"
    code, out, _ = run_cli(
        capsys, "synth", "--seed", "5", "--authors", "4",
        "--blocks", "s01,s02|s03,s04", "--reply-edges", "s01:s03",
        "--vocab-overlap", "s02:s04=2", "--out", str(out_dir),
    )
    assert code == 0
    corpus = load_corpus(out_dir / "corpus.jsonl")
    store = load_embeddings(out_dir / "embeddings.jsonl")
    gt_data = json.loads((out_dir / "ground_truth.json").read_text())

    from aicnet.graphs import WeightedGraph
    from aicnet.synth import GroundTruth

    def graph_from(payload) -> WeightedGraph:
        g = WeightedGraph(nodes={n["id"] for n in payload["nodes"]})
        for e in payload["edges"]:
            g.add_edge(e["source"], e["target"], e["weight"])
        return g

    gt = GroundTruth(
        expected_an=graph_from(gt_data["expected_an"]),
        expected_in=graph_from(gt_data["expected_in"]),
        expected_cn_edges={tuple(p) for p in gt_data["expected_cn_edges"]},
    )
    report = verify(corpus, store, gt)
    assert report.passed, report.summary()


def test_synth_rejects_single_author(tmp_path, capsys):
    code, _, err = run_cli(capsys, "synth", "--authors", "1", "--out", str(tmp_path / "x"))
    assert code == 1
    assert "--authors" in err


def _word_corpus(jsonl_file):
    body_a = "pedagogy " * 5 + "rhythm " * 5
    body_b = "pedagogy " * 5 + "rhythm " * 5
    return jsonl_file([
        {"record": "quote", "id": "q1", "reading_id": "r1", "text": "T."},
        {"id": "a1", "reading_id": "r1", "author_id": "A", "kind": "annotation",
         "quote_id": "q1", "body": body_a.strip()},
        {"id": "a2", "reading_id": "r1", "author_id": "B", "kind": "annotation",
         "quote_id": "q1", "body": body_b.strip()},
    ])


def test_custom_stopword_file_drops_word(jsonl_file, tmp_path, capsys):
    corpus_path = _word_corpus(jsonl_file)
    stop = tmp_path / "stop.txt"
    stop.write_text("pedagogy\n")
    out_a, out_b = tmp_path / "plain", tmp_path / "stopped"
    for out, extra in ((out_a, []), (out_b, ["--stopwords", str(stop)])):
        code, _, _ = run_cli(capsys, "build", str(corpus_path), "--reading", "r1",
                             "--network", "cn", "--drop-lowest", "0", "--out", str(out),
                             *extra)
        assert code == 0
    plain = read_graphml(out_a / "r1_cn.graphml")
    stopped = read_graphml(out_b / "r1_cn.graphml")
    assert plain.edges == {("A", "B"): 2.0}    # pedagogy and rhythm shared
    assert stopped.edges == {("A", "B"): 1.0}  # pedagogy suppressed


def test_build_roster_all_includes_inactive_authors(sample, tmp_path, capsys):
    corpus_path, _, _ = sample
    extra = corpus_path.read_text() + json.dumps({
        "record": "quote", "id": "r3-q1", "reading_id": "r3", "text": "extra reading",
    }) + "\n" + json.dumps({
        "id": "r3-a1", "reading_id": "r3", "author_id": "s99", "kind": "annotation",
        "quote_id": "r3-q1", "body": "only active in r3",
    }) + "\n"
    widened = tmp_path / "widened.jsonl"
    widened.write_text(extra)
    out = tmp_path / "roster"
    code, _, _ = run_cli(capsys, "build", str(widened), "--reading", "r1",
                         "--network", "in", "--roster", "all", "--out", str(out))
    assert code == 0
    graph = read_graphml(out / "r1_in.graphml")
    assert "s99" in graph.nodes          # roster-wide isolate
    assert graph.degree("s99") == 0


def test_csv_corpus_through_cli(sample, tmp_path, capsys):
    corpus_path, _, _ = sample
    csv_path = tmp_path / "sample.csv"
    save_corpus(load_corpus(corpus_path), csv_path, "csv")
    code, out, _ = run_cli(capsys, "validate", str(csv_path))
    assert code == 0 and out.startswith("ok:")
    code, out, _ = run_cli(capsys, "stats", str(csv_path))
    assert code == 0
    assert out.splitlines()[0].startswith("Reading,r1,r2")


def test_binary_embeddings_through_cli(sample, tmp_path, capsys):
    corpus_path, emb_path, (gt1, _) = sample
    binary = tmp_path / "emb.bin"
    save_embeddings(load_embeddings(emb_path), binary, format="binary")
    out = tmp_path / "bin_out"
    code, _, _ = run_cli(capsys, "build", str(corpus_path), "--reading", "r1",
                         "--network", "an", "--embeddings", str(binary),
                         "--out", str(out))
    assert code == 0
    graph = read_graphml(out / "r1_an.graphml")
    # float32 storage wiggles similarities, not the common-reference edge set
    assert set(graph.edges) == set(gt1.expected_an.edges)


def test_missing_input_file_is_input_error(tmp_path, capsys):
    code, _, err = run_cli(capsys, "validate", str(tmp_path / "nope.jsonl"))
    assert code == 1
    assert "error" in err


def test_internal_failure_exits_two(sample, capsys, monkeypatch):
    import aicnet.cli as cli

    corpus_path, _, _ = sample
    monkeypatch.setitem(cli._COMMANDS, "validate", lambda args: 1 // 0)
    code, _, err = run_cli(capsys, "validate", str(corpus_path))
    assert code == 2
    assert "internal error" in err


def test_custom_noun_lexicon(jsonl_file, tmp_path, capsys):
    corpus_path = _word_corpus(jsonl_file)
    lexicon = tmp_path / "nouns.txt"
    lexicon.write_text("rhythm\n")  # pedagogy no longer counts as a noun
    out = tmp_path / "lex"
    code, _, _ = run_cli(capsys, "build", str(corpus_path), "--reading", "r1",
                         "--network", "cn", "--drop-lowest", "0",
                         "--noun-lexicon", str(lexicon), "--out", str(out))
    assert code == 0
    graph = read_graphml(out / "r1_cn.graphml")
    assert graph.edges == {("A", "B"): 1.0}


def _run_subprocess(args: list[str], cwd: Path) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "aicnet.cli", *args],
        capture_output=True, cwd=cwd, check=False,
    )


def test_cli_byte_identical_runs(sample, tmp_path):
    corpus_path, emb_path, _ = sample
    outputs = []
    for run in (1, 2):
        out_dir = tmp_path / f"run{run}"
        result = _run_subprocess(
            ["metrics", str(corpus_path), "--level", "node",
             "--embeddings", str(emb_path), "--out", str(out_dir)],
            cwd=tmp_path,
        )
        assert result.returncode == 0
        files = {
            p.name: p.read_bytes() for p in sorted(out_dir.iterdir())
        }
        outputs.append((result.stdout, files))
    assert outputs[0][0] == outputs[1][0]
    assert outputs[0][1] == outputs[1][1]
