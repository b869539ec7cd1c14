"""Corpus and record file I/O.

Corpora are Kaldi-style TSV ("utt_id<TAB>text", UTF-8, one row per line);
structured outputs are JSON Lines. Text is normalized on read.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .ngram_index import BiasingList
from .textnorm import Utterance


def read_corpus_tsv(path: str | Path) -> list[Utterance]:
    """Load a TSV corpus, normalizing text. Duplicate ids are an error."""
    utterances: list[Utterance] = []
    seen: set[str] = set()
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        if "\t" not in line:
            raise ValueError(f"{path}:{lineno}: expected utt_id<TAB>text")
        utt_id, text = line.split("\t", 1)
        utt_id = utt_id.strip()
        if not utt_id:
            raise ValueError(f"{path}:{lineno}: empty utterance id")
        if utt_id in seen:
            raise ValueError(f"{path}:{lineno}: duplicate utterance id {utt_id!r}")
        seen.add(utt_id)
        utterances.append(Utterance.from_text(utt_id, text))
    return utterances


def write_corpus_tsv(utterances: Iterable[Utterance], path: str | Path) -> None:
    Path(path).write_text(
        "".join(f"{u.utt_id}\t{u.text}\n" for u in utterances), encoding="utf-8"
    )


def read_jsonl(path: str | Path) -> list[dict]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(json.loads(line))
    return records


def write_jsonl(records: Iterable[dict], path: str | Path) -> None:
    Path(path).write_text(
        "".join(json.dumps(rec, ensure_ascii=False) + "\n" for rec in records),
        encoding="utf-8",
    )


def read_bias_jsonl(path: str | Path) -> dict[str, BiasingList]:
    """Per-utterance biasing lists from {"utt_id":…, "hotwords":[…]} records."""
    lists: dict[str, BiasingList] = {}
    for record in read_jsonl(path):
        utt_id = record["utt_id"]
        if utt_id in lists:
            raise ValueError(f"duplicate utt_id {utt_id!r} in {path}")
        lists[utt_id] = BiasingList.from_surfaces(record["hotwords"])
    return lists


def write_bias_jsonl(lists: dict[str, BiasingList], path: str | Path) -> None:
    write_jsonl(
        (
            {"utt_id": utt_id, "hotwords": list(lists[utt_id].surfaces)}
            for utt_id in sorted(lists)
        ),
        path,
    )
