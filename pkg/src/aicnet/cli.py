"""Command-line driver: ``aicnet {validate|stats|build|metrics|compare|synth}``.

All flags default to the standard configuration (threshold 0.8, word selection
5/5/70), so ``aicnet metrics corpus.jsonl`` needs no tuning. Display tables
round to 2 decimals and write ``na`` for nulls; JSON output keeps full
precision and native nulls. Commands are deterministic: identical inputs and
seed give byte-identical stdout and files.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import corpus as corpus_mod
from . import export, metrics, synth
from .corpus import Corpus, StatsTable, descriptive_stats, load_corpus, save_corpus
from .errors import AicnetError, MissingEmbedding, UnknownReading
from .graphs import WeightedGraph, build_an, build_cn_bipartite, build_in, project
from .semantic import EmbeddingStore, embed_quotes, load_embeddings, save_embeddings
from .textpipe import (
    NounTagger,
    WordSelectionParams,
    load_wordlist,
    make_default_tagger,
)

_FORMATS = ("graphml", "dot", "csv", "json")


@dataclass
class RunConfig:
    corpus_path: Path
    input_format: str
    embeddings_path: Path | None
    embedder: str  # "file" | "hash"
    dim: int
    tau: float
    word_params: WordSelectionParams
    tagger: NounTagger | None
    out_dir: Path | None


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("AICNET_NO_COLOR")


def _paint(text: str, code: str) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _use_color() else text


class _Parser(argparse.ArgumentParser):
    """argparse with flag errors reported as input errors (exit 1, not 2)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _positive_threshold(value: str) -> float:
    tau = float(value)
    if not 0.0 < tau <= 1.0:
        raise argparse.ArgumentTypeError("threshold must be in (0, 1]")
    return tau


def _at_least(minimum: int, label: str):
    def convert(value: str) -> int:
        n = int(value)
        if n < minimum:
            raise argparse.ArgumentTypeError(f"{label} must be >= {minimum}")
        return n

    return convert


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=_positive_threshold, default=0.8,
                   help="similarity threshold for joint quotes (default 0.8)")
    p.add_argument("--min-freq", type=_at_least(1, "--min-freq"), default=5,
                   help="word frequency floor (default 5)")
    p.add_argument("--drop-lowest", type=_at_least(0, "--drop-lowest"), default=5,
                   help="how many lowest-scoring words to drop (default 5)")
    p.add_argument("--top-words", type=_at_least(1, "--top-words"), default=70,
                   help="ranked word pairs to keep (default 70)")
    p.add_argument("--stopwords", type=Path, default=None,
                   help="extra stopword file, one term per line")
    p.add_argument("--noun-lexicon", type=Path, default=None,
                   help="replacement noun lexicon file, one term per line")
    p.add_argument("--embeddings", type=Path, default=None,
                   help="precomputed quote-vector file (JSONL or binary)")
    p.add_argument("--embedder", choices=("file", "hash"), default=None,
                   help="vector source; defaults to file when --embeddings is given, hash otherwise")
    p.add_argument("--dim", type=_at_least(8, "--dim"), default=256,
                   help="hash-embedder dimension (default 256)")
    p.add_argument("--out", type=Path, default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aicnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a corpus file")
    p.add_argument("corpus", type=Path)

    p = sub.add_parser("stats", help="descriptive statistics per reading")
    p.add_argument("corpus", type=Path)
    p.add_argument("--reading", default=None)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("build", help="build one network and export it")
    p.add_argument("corpus", type=Path)
    p.add_argument("--reading", required=True)
    p.add_argument("--network", choices=("an", "in", "cn"), required=True)
    p.add_argument("--format", default="graphml",
                   help="comma-separated subset of graphml,dot,csv,json")
    p.add_argument("--roster", choices=("active", "all"), default="active",
                   help="node set: the reading's active authors, or every corpus author")
    _add_pipeline_flags(p)

    p = sub.add_parser("metrics", help="node- or network-level measure tables")
    p.add_argument("corpus", type=Path)
    p.add_argument("--level", choices=("node", "network"), required=True)
    p.add_argument("--reading", default=None, help="restrict to one reading")
    _add_pipeline_flags(p)

    p = sub.add_parser("compare", help="compare two readings")
    p.add_argument("corpus", type=Path)
    p.add_argument("reading_a")
    p.add_argument("reading_b")
    _add_pipeline_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--authors", type=_at_least(2, "--authors"), default=4)
    p.add_argument("--quotes", type=_at_least(1, "--quotes"), default=None,
                   help="number of quotes (default: one per attention block)")
    p.add_argument("--blocks", default=None,
                   help='attention blocks as "a,b|c,d"; default one block of all authors')
    p.add_argument("--reply-edges", default="",
                   help='reply events as "a:b,c:d" (second author replies to the first)')
    p.add_argument("--vocab-overlap", default="",
                   help='planted shared words as "a:b=2,c:d=1"')
    p.add_argument("--reading-id", default="r1")
    _add_pipeline_flags(p)

    return parser


def _corpus_format(path: Path) -> str:
    return "csv" if path.suffix.lower() == ".csv" else "jsonl"


def _config(args: argparse.Namespace) -> RunConfig:
    stop_extra = load_wordlist(args.stopwords) if args.stopwords else frozenset()
    tagger = None
    if args.noun_lexicon:
        tagger = make_default_tagger(noun_lexicon=load_wordlist(args.noun_lexicon))
    word_params = WordSelectionParams(
        min_frequency=args.min_freq,
        drop_lowest=args.drop_lowest,
        top_k=args.top_words,
        stopwords=stop_extra,
    )
    embedder = args.embedder or ("file" if args.embeddings else "hash")
    corpus_path = getattr(args, "corpus", Path("."))
    return RunConfig(
        corpus_path=corpus_path,
        input_format=_corpus_format(corpus_path),
        embeddings_path=args.embeddings,
        embedder=embedder,
        dim=args.dim,
        tau=args.threshold,
        word_params=word_params,
        tagger=tagger,
        out_dir=args.out,
    )


def _store_for(cfg: RunConfig, corpus: Corpus) -> EmbeddingStore:
    if cfg.embedder == "file":
        if cfg.embeddings_path is None:
            raise MissingEmbedding(
                "", detail="attention network needs --embeddings when --embedder file is set"
            )
        known = {qid for r in corpus.readings.values() for qid in r.quotes}
        return load_embeddings(cfg.embeddings_path, known)
    all_quotes = [q for r in corpus.readings.values() for q in r.quotes.values()]
    return embed_quotes(all_quotes, cfg.dim)


# -- display formatting ---------------------------------------------------------

def _fmt2(value: float | None) -> str:
    return "na" if value is None else f"{value:.2f}"


def _fmt1(value: float | None) -> str:
    return "na" if value is None else f"{value:.1f}"


def _csv_line(cells: list[str]) -> str:
    return ",".join(cells)


def _stats_display(table: StatsTable) -> str:
    lines = [
        _csv_line(["Reading"] + [r.reading_id for r in table.rows]),
        _csv_line(["Posts"] + [str(r.posts) for r in table.rows]),
        _csv_line(["Replies"] + [str(r.replies) for r in table.rows]),
        _csv_line(["Average words per post"] + [_fmt1(r.avg_words_per_post) for r in table.rows]),
        "",
        _csv_line(["Posts mean", _fmt1(table.posts_mean)]),
        _csv_line(["Posts sd", _fmt1(table.posts_sd)]),
        _csv_line(["Replies mean", _fmt1(table.replies_mean)]),
        _csv_line(["Replies sd", _fmt1(table.replies_sd)]),
    ]
    return "\n".join(lines) + "\n"


def _stats_json(table: StatsTable) -> dict:
    return {
        "readings": [
            {
                "reading_id": r.reading_id,
                "posts": r.posts,
                "replies": r.replies,
                "avg_words_per_post": r.avg_words_per_post,
            }
            for r in table.rows
        ],
        "summary": {
            "posts_mean": table.posts_mean,
            "posts_sd": table.posts_sd,
            "replies_mean": table.replies_mean,
            "replies_sd": table.replies_sd,
        },
    }


def _node_table(rows: list[metrics.NodeMetricsRow]) -> str:
    lines = [
        _csv_line(["Student"] + [r.author_id for r in rows]),
        _csv_line(["AN Closeness"] + [_fmt2(r.an_closeness) for r in rows]),
        _csv_line(["IN Betweenness"] + [_fmt2(r.in_betweenness) for r in rows]),
        _csv_line(["CN Betweenness"] + [_fmt2(r.cn_betweenness) for r in rows]),
    ]
    return "\n".join(lines) + "\n"


def _network_table(rows: list[metrics.NetworkMetricsRow]) -> str:
    lines = [_csv_line(["Reading", "AN transitivity", "IN centralization", "CN transitivity"])]
    for r in rows:
        lines.append(_csv_line([
            r.reading_id, _fmt2(r.an_transitivity), _fmt2(r.in_centralization),
            _fmt2(r.cn_transitivity),
        ]))
    return "\n".join(lines) + "\n"


def _write_json(path: Path, payload: object) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# -- commands -------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    errors = corpus_mod.validate_file(args.corpus, _corpus_format(args.corpus))
    if errors:
        for err in errors:
            print(_paint(f"error: {err}", "31"))
        print(f"{len(errors)} problem(s) found")
        return 1
    loaded = load_corpus(args.corpus, _corpus_format(args.corpus))
    n_artifacts = sum(len(r.artifacts) for r in loaded.readings.values())
    print(_paint(f"ok: {len(loaded.readings)} reading(s), {n_artifacts} artifact(s), "
                 f"{len(loaded.authors)} author(s)", "32"))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    loaded = load_corpus(args.corpus, _corpus_format(args.corpus))
    table = descriptive_stats(loaded, args.reading)
    sys.stdout.write(_stats_display(table))
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "stats.csv").write_text(_stats_display(table), encoding="utf-8")
        _write_json(args.out / "stats.json", _stats_json(table))
    return 0


def _build_network(cfg: RunConfig, corpus: Corpus, reading_id: str, which: str,
                   roster: set[str] | None = None) -> WeightedGraph:
    reading = corpus.reading(reading_id)
    if which == "an":
        return build_an(reading, corpus, _store_for(cfg, corpus), cfg.tau, roster=roster)
    if which == "in":
        return build_in(reading, corpus, roster=roster)
    return project(build_cn_bipartite(reading, corpus, cfg.word_params, cfg.tagger,
                                      roster=roster))


def cmd_build(args: argparse.Namespace) -> int:
    cfg = _config(args)
    requested = [f.strip() for f in args.format.split(",") if f.strip()]
    unknown = [f for f in requested if f not in _FORMATS]
    if unknown:
        raise AicnetError(f"unknown export format(s): {', '.join(unknown)}")
    if cfg.out_dir is None:
        raise AicnetError("build requires --out")
    loaded = load_corpus(cfg.corpus_path, cfg.input_format)
    roster = set(loaded.authors) if args.roster == "all" else None
    graph = _build_network(cfg, loaded, args.reading, args.network, roster)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{args.reading}_{args.network}"
    written: list[Path] = []
    for fmt in requested:
        if fmt == "graphml":
            path = cfg.out_dir / f"{stem}.graphml"
            export.write_graphml(graph, path, name=stem)
            written.append(path)
        elif fmt == "dot":
            path = cfg.out_dir / f"{stem}.dot"
            export.write_dot(graph, path, name=stem)
            written.append(path)
        elif fmt == "json":
            path = cfg.out_dir / f"{stem}.json"
            export.write_json(graph, path, name=stem)
            written.append(path)
        else:
            edges = cfg.out_dir / f"{stem}_edges.csv"
            nodes = cfg.out_dir / f"{stem}_nodes.csv"
            export.write_csv(graph, edges, nodes)
            written += [edges, nodes]
    for path in written:
        print(path.as_posix())
    return 0


def _reading_graphs(cfg: RunConfig, corpus: Corpus, reading_id: str,
                    store: EmbeddingStore) -> tuple[WeightedGraph, WeightedGraph, WeightedGraph]:
    reading = corpus.reading(reading_id)
    an = build_an(reading, corpus, store, cfg.tau)
    in_ = build_in(reading, corpus)
    cn = project(build_cn_bipartite(reading, corpus, cfg.word_params, cfg.tagger))
    return an, in_, cn


def cmd_metrics(args: argparse.Namespace) -> int:
    cfg = _config(args)
    loaded = load_corpus(cfg.corpus_path, cfg.input_format)
    reading_ids = sorted(loaded.readings)
    if args.reading is not None:
        if args.reading not in loaded.readings:
            raise UnknownReading(args.reading)
        reading_ids = [args.reading]
    store = _store_for(cfg, loaded)
    graphs = {rid: _reading_graphs(cfg, loaded, rid, store) for rid in reading_ids}

    if cfg.out_dir:
        cfg.out_dir.mkdir(parents=True, exist_ok=True)

    if args.level == "network":
        rows = metrics.network_report(graphs)
        sys.stdout.write(_network_table(rows))
        if cfg.out_dir:
            (cfg.out_dir / "metrics_network.csv").write_text(_network_table(rows), encoding="utf-8")
            payload = [
                {
                    "reading_id": r.reading_id,
                    "an_transitivity": r.an_transitivity,
                    "in_centralization": r.in_centralization,
                    "cn_transitivity": r.cn_transitivity,
                }
                for r in rows
            ]
            _write_json(cfg.out_dir / "metrics_network.json", payload)
        return 0

    roster = set(loaded.authors)
    for i, rid in enumerate(reading_ids):
        an, in_, cn = graphs[rid]
        rows = metrics.node_report(an, in_, cn, roster)
        if i:
            print()
        print(f"# reading {rid}")
        sys.stdout.write(_node_table(rows))
        if cfg.out_dir:
            (cfg.out_dir / f"metrics_node_{rid}.csv").write_text(_node_table(rows), encoding="utf-8")
            payload = [
                {
                    "author_id": r.author_id,
                    "an_closeness": r.an_closeness,
                    "in_betweenness": r.in_betweenness,
                    "cn_betweenness": r.cn_betweenness,
                }
                for r in rows
            ]
            _write_json(cfg.out_dir / f"metrics_node_{rid}.json", payload)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config(args)
    loaded = load_corpus(cfg.corpus_path, cfg.input_format)
    for rid in (args.reading_a, args.reading_b):
        if rid not in loaded.readings:
            raise UnknownReading(rid)
    store = _store_for(cfg, loaded)
    graphs_a = _reading_graphs(cfg, loaded, args.reading_a, store)
    graphs_b = _reading_graphs(cfg, loaded, args.reading_b, store)

    net_a = metrics.network_report({args.reading_a: graphs_a})[0]
    net_b = metrics.network_report({args.reading_b: graphs_b})[0]

    def delta(x: float | None, y: float | None) -> float | None:
        return None if x is None or y is None else y - x

    print(_csv_line(["Measure", args.reading_a, args.reading_b, "delta"]))
    for label, va, vb in (
        ("AN transitivity", net_a.an_transitivity, net_b.an_transitivity),
        ("IN centralization", net_a.in_centralization, net_b.in_centralization),
        ("CN transitivity", net_a.cn_transitivity, net_b.cn_transitivity),
    ):
        print(_csv_line([label, _fmt2(va), _fmt2(vb), _fmt2(delta(va, vb))]))

    roster_a = loaded.reading(args.reading_a).active_authors()
    roster_b = loaded.reading(args.reading_b).active_authors()
    if not roster_a & roster_b:
        print("warning: the two readings share no authors", file=sys.stderr)
    roster = roster_a | roster_b
    rows_a = {r.author_id: r for r in metrics.node_report(*graphs_a, roster)}
    rows_b = {r.author_id: r for r in metrics.node_report(*graphs_b, roster)}

    print()
    print(_csv_line(["Student", "Measure", args.reading_a, args.reading_b, "delta"]))
    for author in sorted(roster):
        ra, rb = rows_a[author], rows_b[author]
        for label, va, vb in (
            ("AN Closeness", ra.an_closeness, rb.an_closeness),
            ("IN Betweenness", ra.in_betweenness, rb.in_betweenness),
            ("CN Betweenness", ra.cn_betweenness, rb.cn_betweenness),
        ):
            print(_csv_line([author, label, _fmt2(va), _fmt2(vb), _fmt2(delta(va, vb))]))
    return 0


def _parse_blocks(spec: str | None, n_authors: int) -> tuple[tuple[str, ...], ...]:
    if spec is None:
        return (tuple(f"s{i + 1:02d}" for i in range(n_authors)),)
    blocks = []
    for part in spec.split("|"):
        authors = tuple(a.strip() for a in part.split(",") if a.strip())
        if authors:
            blocks.append(authors)
    return tuple(blocks)


def _parse_pairs(spec: str) -> tuple[tuple[str, str], ...]:
    pairs = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        x, sep, y = part.partition(":")
        if not sep or not x or not y:
            raise AicnetError(f"bad pair {part!r}; expected author:author")
        pairs.append((x.strip(), y.strip()))
    return tuple(pairs)


def _parse_overlap(spec: str) -> dict[tuple[str, str], int]:
    overlap: dict[tuple[str, str], int] = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        pair, sep, count = part.partition("=")
        if not sep:
            raise AicnetError(f"bad overlap {part!r}; expected author:author=count")
        x, sep2, y = pair.partition(":")
        if not sep2:
            raise AicnetError(f"bad overlap {part!r}; expected author:author=count")
        overlap[(x.strip(), y.strip())] = int(count)
    return overlap


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if cfg.out_dir is None:
        raise AicnetError("synth requires --out")
    blocks = _parse_blocks(args.blocks, args.authors)
    block_authors = sorted({a for b in blocks for a in b})
    n_authors = len(block_authors) if args.blocks else args.authors
    params = synth.SynthParams(
        n_authors=n_authors,
        n_quotes=args.quotes if args.quotes is not None else len(blocks),
        attention_blocks=blocks,
        reply_edges=_parse_pairs(args.reply_edges),
        vocab_overlap=_parse_overlap(args.vocab_overlap),
        seed=args.seed,
    )
    generated, store, gt = synth.generate(
        params, cfg.word_params, cfg.tau, cfg.dim, reading_id=args.reading_id
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    save_corpus(generated, cfg.out_dir / "corpus.jsonl")
    save_embeddings(store, cfg.out_dir / "embeddings.jsonl")
    payload = {
        "expected_an": export.graph_to_json(gt.expected_an, "expected_an"),
        "expected_in": export.graph_to_json(gt.expected_in, "expected_in"),
        "expected_cn_edges": [list(pair) for pair in sorted(gt.expected_cn_edges)],
        "seed": params.seed,
    }
    _write_json(cfg.out_dir / "ground_truth.json", payload)
    for name in ("corpus.jsonl", "embeddings.jsonl", "ground_truth.json"):
        print((cfg.out_dir / name).as_posix())
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "stats": cmd_stats,
    "build": cmd_build,
    "metrics": cmd_metrics,
    "compare": cmd_compare,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (AicnetError, OSError) as exc:
        print(_paint(f"error: {exc}", "31"), file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - invariant violations surface as exit 2
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
