"""Biasing-list generation.

Two regimes: the training-time sampler draws random word n-grams from the
transcriptions of a batch, and the test-time builder pairs an utterance's
rare words with a fixed number of distractors drawn from a rare-word
vocabulary. Both are fully deterministic under their seeds.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ngram_index import BiasingEntry, BiasingList
from .textnorm import CommonWordList, Utterance


def derive_rng(seed: int, *tags: object) -> random.Random:
    """A random stream keyed by (seed, *tags).

    String seeding hashes with SHA-512 under the hood, so streams are stable
    across processes and independent of each other; parallel per-utterance
    work cannot reorder draws.
    """
    return random.Random(":".join([str(seed), *(str(t) for t in tags)]))


def derive_seed(seed: int, *tags: object) -> int:
    """A derived integer seed, for APIs that take a seed rather than a stream."""
    return derive_rng(seed, *tags).getrandbits(63)


@dataclass(frozen=True)
class TrainBiasParams:
    """Sampler knobs; the defaults give biasing lists averaging 5 words
    at batch size 4."""

    p_keep: float = 0.5
    n_phrases: int = 1
    n_order: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_keep <= 1.0:
            raise ValueError("p_keep must be in [0, 1]")
        if self.n_phrases < 1 or self.n_order < 1:
            raise ValueError("n_phrases and n_order must be positive")


def sample_train_bias(
    batch: Sequence[Utterance],
    params: TrainBiasParams,
    rng: random.Random | None = None,
) -> BiasingList:
    """Draw a training biasing list from a batch of transcriptions.

    Each utterance is kept with probability p_keep; a kept utterance
    contributes k ~ U[1, n_phrases] word n-grams with n ~ U[1, n_order]
    each (n clamped to the utterance length) at uniformly random positions.
    Draw order is preserved and duplicate surfaces are dropped, so the
    result may be empty.
    """
    if not batch:
        raise ValueError("empty batch")
    if rng is None:
        rng = random.Random(params.seed)
    entries: list[BiasingEntry] = []
    seen: set[str] = set()
    for utt in batch:
        if rng.random() >= params.p_keep:
            continue
        if not utt.tokens:
            continue
        k = rng.randint(1, params.n_phrases)
        for _ in range(k):
            n = min(rng.randint(1, params.n_order), len(utt.tokens))
            start = rng.randint(0, len(utt.tokens) - n)
            surface = " ".join(utt.tokens[start : start + n])
            if surface not in seen:
                seen.add(surface)
                entries.append(BiasingEntry(id=len(entries), surface=surface))
    return BiasingList(entries=tuple(entries))


@dataclass(frozen=True)
class RareVocabulary:
    """Corpus words outside the common list, kept sorted for reproducible
    sampling."""

    words: tuple[str, ...]
    _members: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.words))

    @property
    def size(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._members


def build_rare_vocabulary(
    corpus: Iterable[Utterance], common: CommonWordList
) -> RareVocabulary:
    """Distinct normalized corpus words minus the common-word list."""
    words: set[str] = set()
    seen_any = False
    for utt in corpus:
        seen_any = True
        words.update(utt.tokens)
    if not seen_any or not words:
        raise ValueError("empty corpus")
    return RareVocabulary(words=tuple(sorted(w for w in words if w not in common)))


def reference_rare_words(
    reference: Utterance, common: CommonWordList
) -> list[str]:
    """The utterance's ground-truth hotwords: rare words, in order, deduplicated."""
    out: list[str] = []
    seen: set[str] = set()
    for token in reference.tokens:
        if token in common or token in seen:
            continue
        seen.add(token)
        out.append(token)
    return out


def build_test_bias(
    reference: Utterance,
    vocab: RareVocabulary,
    common: CommonWordList,
    n_distractors: int,
    seed: int,
) -> BiasingList:
    """Per-utterance artificial test list: rare words first, then distractors.

    Distractors are sampled without replacement from the vocabulary minus
    the reference's own rare words. Raises when the vocabulary cannot
    supply enough distinct distractors.
    """
    if n_distractors < 0:
        raise ValueError("n_distractors must be non-negative")
    rare = reference_rare_words(reference, common)
    rare_set = set(rare)
    pool = [w for w in vocab.words if w not in rare_set]
    if n_distractors > len(pool):
        raise ValueError(
            f"vocabulary exhausted: need {n_distractors} distractors, "
            f"have {len(pool)}"
        )
    rng = random.Random(seed)
    surfaces = rare + rng.sample(pool, n_distractors)
    return BiasingList(
        entries=tuple(
            BiasingEntry(id=i, surface=s) for i, s in enumerate(surfaces)
        )
    )
