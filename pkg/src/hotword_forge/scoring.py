"""Word-level alignment and the WER / U-WER / B-WER decomposition.

Biased word error rate (B-WER) restricts the counts to words in the
utterance's biasing list; U-WER covers the rest. Substitutions and
deletions are attributed by the reference word, insertions by the
hypothesis word (configurable).
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterable, Sequence

from .ngram_index import BiasingList
from .textnorm import Utterance

INSERTION_ATTRIBUTIONS = ("hypothesis", "unbiased")


@dataclass(frozen=True)
class AlignmentOp:
    """One aligned position: match, sub(stitution), del(etion) or ins(ertion)."""

    kind: str
    ref_word: str | None
    hyp_word: str | None
    biased: bool = False


def align(ref: Sequence[str], hyp: Sequence[str]) -> list[AlignmentOp]:
    """Minimum-edit-distance word alignment with unit costs.

    Among minimum-cost alignments the backtrace prefers
    match > substitution > deletion > insertion at every step, which makes
    the result unique and reproducible.
    """
    n_ref, n_hyp = len(ref), len(hyp)
    dist = [[0] * (n_hyp + 1) for _ in range(n_ref + 1)]
    for i in range(1, n_ref + 1):
        dist[i][0] = i
    for j in range(1, n_hyp + 1):
        dist[0][j] = j
    for i in range(1, n_ref + 1):
        ref_word = ref[i - 1]
        row = dist[i]
        prev = dist[i - 1]
        for j in range(1, n_hyp + 1):
            cost = 0 if ref_word == hyp[j - 1] else 1
            row[j] = min(prev[j - 1] + cost, prev[j] + 1, row[j - 1] + 1)
    ops: list[AlignmentOp] = []
    i, j = n_ref, n_hyp
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dist[i][j] == dist[i - 1][j - 1]:
            ops.append(AlignmentOp("match", ref[i - 1], hyp[j - 1]))
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + 1:
            ops.append(AlignmentOp("sub", ref[i - 1], hyp[j - 1]))
            i -= 1
            j -= 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            ops.append(AlignmentOp("del", ref[i - 1], None))
            i -= 1
        else:
            ops.append(AlignmentOp("ins", None, hyp[j - 1]))
            j -= 1
    ops.reverse()
    return ops


def bias_word_set(bias: BiasingList | None) -> frozenset[str]:
    """Constituent words of every biasing entry (multi-word phrases expand)."""
    if bias is None:
        return frozenset()
    words: set[str] = set()
    for entry in bias:
        words.update(entry.surface.split())
    return frozenset(words)


def classify_alignment(
    ops: Iterable[AlignmentOp],
    bias_words: frozenset[str],
    insertion_attribution: str = "hypothesis",
) -> list[AlignmentOp]:
    """Set the biased flag on each op from biasing-list membership."""
    if insertion_attribution not in INSERTION_ATTRIBUTIONS:
        raise ValueError(f"unknown insertion attribution {insertion_attribution!r}")
    out = []
    for op in ops:
        if op.kind == "ins":
            biased = (
                insertion_attribution == "hypothesis" and op.hyp_word in bias_words
            )
        else:
            biased = op.ref_word in bias_words
        out.append(replace(op, biased=biased))
    return out


@dataclass(frozen=True)
class ScoreReport:
    """Error counts split by class, with the three derived rates.

    A rate with zero reference words is 0.0 when there are no errors and
    None (undefined) when errors exist without a denominator; the raw
    counts always stay available for exact aggregation.
    """

    sub_biased: int = 0
    del_biased: int = 0
    ins_biased: int = 0
    sub_unbiased: int = 0
    del_unbiased: int = 0
    ins_unbiased: int = 0
    ref_words_biased: int = 0
    ref_words_unbiased: int = 0

    @property
    def errors_biased(self) -> int:
        return self.sub_biased + self.del_biased + self.ins_biased

    @property
    def errors_unbiased(self) -> int:
        return self.sub_unbiased + self.del_unbiased + self.ins_unbiased

    @property
    def total_errors(self) -> int:
        return self.errors_biased + self.errors_unbiased

    @property
    def total_ref_words(self) -> int:
        return self.ref_words_biased + self.ref_words_unbiased

    @staticmethod
    def _rate(errors: int, ref_words: int) -> float | None:
        if ref_words > 0:
            return errors / ref_words
        return 0.0 if errors == 0 else None

    @property
    def wer(self) -> float | None:
        return self._rate(self.total_errors, self.total_ref_words)

    @property
    def u_wer(self) -> float | None:
        return self._rate(self.errors_unbiased, self.ref_words_unbiased)

    @property
    def b_wer(self) -> float | None:
        return self._rate(self.errors_biased, self.ref_words_biased)

    def counts_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def score(
    reference: Utterance,
    hypothesis: Utterance,
    bias: BiasingList | None = None,
    insertion_attribution: str = "hypothesis",
) -> ScoreReport:
    """Align one utterance pair and split the errors by list membership."""
    ops = classify_alignment(
        align(reference.tokens, hypothesis.tokens),
        bias_word_set(bias),
        insertion_attribution,
    )
    counts = dict.fromkeys(
        (
            "sub_biased",
            "del_biased",
            "ins_biased",
            "sub_unbiased",
            "del_unbiased",
            "ins_unbiased",
            "ref_words_biased",
            "ref_words_unbiased",
        ),
        0,
    )
    for op in ops:
        side = "biased" if op.biased else "unbiased"
        if op.kind != "ins":
            counts[f"ref_words_{side}"] += 1
        if op.kind != "match":
            counts[f"{op.kind}_{side}"] += 1
    return ScoreReport(**counts)


def aggregate(reports: Iterable[ScoreReport]) -> ScoreReport:
    """Micro-average: sum all counts, rates recomputed from the sums."""
    sums = {f.name: 0 for f in fields(ScoreReport)}
    for report in reports:
        for name in sums:
            sums[name] += getattr(report, name)
    return ScoreReport(**sums)
