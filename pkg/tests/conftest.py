"""Shared fixture helpers: in-memory corpus assembly and JSONL writing."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from aicnet.corpus import Artifact, Corpus, Quote, Reading


def mk_corpus(
    quotes: list[tuple[str, str, str]],
    annotations: list[tuple[str, str, str, str, str]],
    replies: list[tuple[str, str, str, str, str]] = (),
) -> Corpus:
    """Assemble a corpus from shorthand tuples.

    quotes: (id, reading_id, text)
    annotations: (id, reading_id, author_id, quote_id, body)
    replies: (id, reading_id, author_id, parent_id, body)
    """
    corpus = Corpus()

    def reading(rid: str) -> Reading:
        return corpus.readings.setdefault(rid, Reading(id=rid, title=rid))

    for qid, rid, text in quotes:
        reading(rid).quotes[qid] = Quote(id=qid, reading_id=rid, text=text)
    for aid, rid, author, qid, body in annotations:
        reading(rid).artifacts.append(
            Artifact(id=aid, author_id=author, reading_id=rid, kind="annotation",
                     body=body, quote_id=qid)
        )
        corpus.authors.add(author)
    for aid, rid, author, parent, body in replies:
        reading(rid).artifacts.append(
            Artifact(id=aid, author_id=author, reading_id=rid, kind="reply",
                     body=body, parent_id=parent)
        )
        corpus.authors.add(author)
    return corpus


def write_jsonl(path: Path, records: list[dict]) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


@pytest.fixture
def jsonl_file(tmp_path):
    def write(records: list[dict], name: str = "corpus.jsonl") -> Path:
        return write_jsonl(tmp_path / name, records)

    return write
