"""Desk-scale stand-in for the coarse CTC decoding stage.

Real coarse decodes come from an acoustic model; here a seeded corruption
model mangles reference transcripts at the character level so the
filtering stage can be exercised and measured end to end. `run_sweep`
reports ground-truth hotword recall/precision per (variant, list size)
cell, the same grid shape the downstream ASR ablations use.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .biasgen import (
    RareVocabulary,
    build_test_bias,
    derive_rng,
    derive_seed,
    reference_rare_words,
)
from .filtering import FilterConfig, FilterResult, run_filter
from .ngram_index import build_index
from .textnorm import CommonWordList, Utterance

THREADS_ENV_VAR = "HOTWORD_FORGE_THREADS"

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def worker_count() -> int:
    """Parallelism cap from HOTWORD_FORGE_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class CorruptionModel:
    """Independent per-character sub/del/ins rates plus word deletion."""

    char_sub_rate: float = 0.05
    char_del_rate: float = 0.02
    char_ins_rate: float = 0.02
    word_del_rate: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("char_sub_rate", "char_del_rate", "char_ins_rate", "word_del_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


def corrupt(reference: Utterance, model: CorruptionModel) -> Utterance:
    """Seeded corruption of one utterance.

    Character-level deletion, substitution and insertion run first, then
    whole-word deletion. The stream is derived from (seed, utt_id), so
    corrupting utterances in any order gives identical results. Output
    tokens always satisfy the normalization invariants; tokens corrupted
    to nothing are dropped.
    """
    rng = derive_rng(model.seed, "corrupt", reference.utt_id)
    corrupted: list[str] = []
    for token in reference.tokens:
        chars: list[str] = []
        for ch in token:
            if rng.random() < model.char_del_rate:
                pass
            elif rng.random() < model.char_sub_rate:
                chars.append(rng.choice(_ALPHABET.replace(ch, "") or _ALPHABET))
            else:
                chars.append(ch)
            if rng.random() < model.char_ins_rate:
                chars.append(rng.choice(_ALPHABET))
        if chars:
            corrupted.append("".join(chars))
    tokens = tuple(
        tok for tok in corrupted if not rng.random() < model.word_del_rate
    )
    return Utterance(utt_id=reference.utt_id, tokens=tokens)


@dataclass(frozen=True)
class SweepCell:
    """Micro-averaged retrieval quality for one (variant, list size) cell."""

    variant: str
    n_distractors: int
    utterances: int
    hit_words: int
    gt_words: int
    selected_words: int

    @property
    def recall(self) -> float:
        return self.hit_words / self.gt_words if self.gt_words else 0.0

    @property
    def precision(self) -> float:
        return self.hit_words / self.selected_words if self.selected_words else 0.0

    @property
    def mean_selected_len(self) -> float:
        return self.selected_words / self.utterances if self.utterances else 0.0


@dataclass(frozen=True)
class SweepReport:
    cells: tuple[SweepCell, ...]

    def cell(self, variant: str, n_distractors: int) -> SweepCell:
        for cell in self.cells:
            if cell.variant == variant and cell.n_distractors == n_distractors:
                return cell
        raise KeyError((variant, n_distractors))


def run_sweep(
    references: Sequence[Utterance],
    vocab: RareVocabulary,
    common: CommonWordList,
    sizes: Iterable[int],
    variants: Iterable[str],
    model: CorruptionModel,
    similarity_threshold: float = 0.95,
    top_k: int = 5,
    selection: str = "union",
    max_workers: int | None = None,
    trace_sink: Callable[[dict], None] | None = None,
) -> SweepReport:
    """Corrupt, filter, and tally recall/precision per (variant, N) cell.

    Per-utterance work is independent; with max_workers > 1 (default: the
    HOTWORD_FORGE_THREADS cap) utterances are processed in a thread pool.
    Seeding is per utterance, so the report is identical for any worker
    count.
    """
    if not references:
        raise ValueError("empty corpus")
    sizes = sorted(set(sizes))
    variants = sorted(set(variants))
    configs = {
        v: FilterConfig(
            variant=v,
            similarity_threshold=similarity_threshold,
            top_k=top_k,
            common=common,
            selection=selection,
        )
        for v in variants
    }

    def process(ref: Utterance) -> dict[tuple[str, int], tuple[int, int, int]]:
        hyp = corrupt(ref, model)
        gt = reference_rare_words(ref, common)
        gt_set = set(gt)
        out: dict[tuple[str, int], tuple[int, int, int]] = {}
        for n in sizes:
            bias = build_test_bias(
                ref, vocab, common, n, derive_seed(model.seed, "bias", ref.utt_id, n)
            )
            index = build_index(bias) if len(bias) else None
            for v in variants:
                if index is None:
                    result = FilterResult(selected=())
                else:
                    result = run_filter(hyp.tokens, index, configs[v])
                hits = len(set(result.surfaces) & gt_set)
                out[(v, n)] = (hits, len(gt), len(result))
        return out

    workers = worker_count() if max_workers is None else max(1, max_workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_utt = list(pool.map(process, references))
    else:
        per_utt = [process(ref) for ref in references]

    cells = []
    for v in variants:
        for n in sizes:
            hit_words = gt_words = selected_words = 0
            for ref, result in zip(references, per_utt):
                hits, gt_count, sel_count = result[(v, n)]
                hit_words += hits
                gt_words += gt_count
                selected_words += sel_count
                if trace_sink is not None:
                    trace_sink(
                        {
                            "utt_id": ref.utt_id,
                            "variant": v,
                            "n_distractors": n,
                            "hits": hits,
                            "gt_size": gt_count,
                            "selected": sel_count,
                        }
                    )
            cells.append(
                SweepCell(
                    variant=v,
                    n_distractors=n,
                    utterances=len(references),
                    hit_words=hit_words,
                    gt_words=gt_words,
                    selected_words=selected_words,
                )
            )
    return SweepReport(cells=tuple(cells))


def sweep_to_csv(report: SweepReport, path: str | Path) -> None:
    """variant,N,recall,precision,mean_len rows, fixed 6-decimal formatting."""
    lines = ["variant,N,recall,precision,mean_len"]
    for cell in report.cells:
        lines.append(
            f"{cell.variant},{cell.n_distractors},{cell.recall:.6f},"
            f"{cell.precision:.6f},{cell.mean_selected_len:.6f}"
        )
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
