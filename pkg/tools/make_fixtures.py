#!/usr/bin/env python3
"""Regenerate the bundled sample corpus and the golden report files.

The sample is a 13-author class over two synthetic readings. Golden CSVs are
frozen only after the node-level numbers are re-derived with the brute-force
oracles in tests/oracles.py, so the goldens never encode a library bug.

Usage: python tools/make_fixtures.py
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "tests"))

from aicnet.corpus import load_corpus, save_corpus
from aicnet.graphs import build_an, build_cn_bipartite, build_in, project
from aicnet.metrics import node_report
from aicnet.semantic import load_embeddings, save_embeddings
from aicnet.synth import SynthParams, generate, verify

from oracles import oracle_betweenness, oracle_closeness

DATA = REPO / "tests" / "data"
GOLDEN = REPO / "tests" / "golden"

AUTHORS = tuple(f"s{i:02d}" for i in range(1, 14))

READING_1 = SynthParams(
    n_authors=13,
    n_quotes=8,
    attention_blocks=(
        ("s01", "s02", "s03", "s04", "s05"),
        ("s06", "s07", "s08", "s09"),
        ("s10", "s11"),
        ("s12",),
        ("s13",),
    ),
    reply_edges=(
        ("s01", "s02"), ("s01", "s02"), ("s01", "s02"),
        ("s01", "s03"), ("s02", "s03"), ("s02", "s03"),
        ("s04", "s05"), ("s06", "s07"), ("s06", "s07"),
        ("s06", "s08"), ("s10", "s11"), ("s01", "s06"),
        ("s12", "s01"),
    ),
    vocab_overlap={
        ("s01", "s02"): 2,
        ("s02", "s03"): 1,
        ("s06", "s07"): 1,
        ("s10", "s11"): 1,
        ("s04", "s06"): 1,
    },
    seed=311,
)

READING_2 = SynthParams(
    n_authors=13,
    n_quotes=6,
    attention_blocks=(
        ("s01", "s03", "s05", "s07", "s09"),
        ("s02", "s04", "s06"),
        ("s08", "s10"),
        ("s11",),
        ("s12",),
        ("s13",),
    ),
    reply_edges=(
        ("s01", "s03"), ("s03", "s05"), ("s05", "s07"),
        ("s02", "s04"), ("s02", "s06"), ("s08", "s10"),
        ("s11", "s02"), ("s01", "s09"),
    ),
    vocab_overlap={
        ("s01", "s05"): 1,
        ("s03", "s07"): 2,
        ("s02", "s06"): 1,
    },
    seed=612,
)


def build_sample() -> tuple[Path, Path]:
    DATA.mkdir(parents=True, exist_ok=True)
    c1, s1, gt1 = generate(READING_1, reading_id="r1", id_prefix="r1-")
    c2, s2, gt2 = generate(READING_2, reading_id="r2", id_prefix="r2-")
    for corpus, store, gt, rid in ((c1, s1, gt1, "r1"), (c2, s2, gt2, "r2")):
        report = verify(corpus, store, gt, reading_id=rid)
        assert report.passed, f"{rid}: {report.summary()}"

    part1, part2 = DATA / "_part1.jsonl", DATA / "_part2.jsonl"
    save_corpus(c1, part1)
    save_corpus(c2, part2)
    corpus_path = DATA / "sample_corpus.jsonl"
    corpus_path.write_bytes(part1.read_bytes() + part2.read_bytes())
    part1.unlink()
    part2.unlink()

    s1.vectors.update(s2.vectors)
    emb_path = DATA / "sample_embeddings.jsonl"
    save_embeddings(s1, emb_path)
    return corpus_path, emb_path


def oracle_check(corpus_path: Path, emb_path: Path) -> None:
    corpus = load_corpus(corpus_path)
    store = load_embeddings(emb_path)
    roster = set(corpus.authors)
    assert len(roster) == 13
    for rid in sorted(corpus.readings):
        reading = corpus.readings[rid]
        an = build_an(reading, corpus, store)
        in_ = build_in(reading, corpus)
        cn = project(build_cn_bipartite(reading, corpus))
        for row in node_report(an, in_, cn, roster):
            for got, graph, oracle in (
                (row.an_closeness, an, oracle_closeness),
                (row.in_betweenness, in_, oracle_betweenness),
                (row.cn_betweenness, cn, oracle_betweenness),
            ):
                want = oracle(graph, row.author_id) if row.author_id in graph.nodes else None
                if got is None or want is None:
                    assert got is None and want is None, (rid, row.author_id)
                else:
                    assert abs(got - want) <= 1e-9, (rid, row.author_id, got, want)
    print("oracle cross-check passed for node metrics on both readings")


def freeze_goldens(corpus_path: Path, emb_path: Path) -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    runs = [
        (["metrics", str(corpus_path), "--level", "node",
          "--embeddings", str(emb_path), "--out", str(GOLDEN)], None),
        (["metrics", str(corpus_path), "--level", "network",
          "--embeddings", str(emb_path), "--out", str(GOLDEN)], None),
        (["stats", str(corpus_path), "--out", str(GOLDEN)], None),
    ]
    for args, _ in runs:
        result = subprocess.run(
            [sys.executable, "-m", "aicnet.cli", *args],
            capture_output=True, check=True,
        )
        sys.stdout.buffer.write(result.stdout)
    for leftover in GOLDEN.glob("*.json"):
        leftover.unlink()  # goldens are the display CSVs only


def main() -> None:
    corpus_path, emb_path = build_sample()
    oracle_check(corpus_path, emb_path)
    freeze_goldens(corpus_path, emb_path)
    print(f"wrote {corpus_path}")
    print(f"wrote {emb_path}")
    for path in sorted(GOLDEN.iterdir()):
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
