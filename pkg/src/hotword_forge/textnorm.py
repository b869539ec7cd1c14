"""Text normalization, tokenization, and corpus word-frequency statistics.

Everything downstream (indexing, filtering, scoring) assumes tokens in the
normalized form produced here: lowercase, apostrophes and digits kept, all
other punctuation removed, whitespace-delimited.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

# Lowercase letters, digits and apostrophes survive; every other
# non-whitespace character is deleted in place.
_STRIP_RE = re.compile(r"[^a-z0-9'\s]+")


def normalize(raw: str) -> list[str]:
    """Normalize raw text into a token list.

    Lowercases, deletes punctuation other than apostrophes, and splits on
    whitespace runs. Total: any string (including empty or symbol-only
    input) yields a possibly-empty token list.
    """
    return _STRIP_RE.sub("", raw.lower()).split()


@dataclass(frozen=True)
class Utterance:
    """An utterance id plus its normalized token sequence.

    Used for references, hypotheses, and coarse decodes alike.
    """

    utt_id: str
    tokens: tuple[str, ...]

    @classmethod
    def from_text(cls, utt_id: str, raw: str) -> "Utterance":
        return cls(utt_id, tuple(normalize(raw)))

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class CommonWordList:
    """The k most frequent corpus words, ordered by descending frequency.

    `ordered` keeps the rank order (frequency ties broken lexicographically)
    so the list can be written back to disk losslessly; membership tests use
    a frozen set.
    """

    ordered: tuple[str, ...]
    k: int
    source_corpus_id: str = ""
    _members: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        object.__setattr__(self, "_members", frozenset(self.ordered))

    @property
    def words(self) -> frozenset[str]:
        return self._members

    def __contains__(self, word: str) -> bool:
        return word in self._members

    def __len__(self) -> int:
        return len(self.ordered)


def compute_common_words(
    corpus: Iterable[Utterance], k: int, source_corpus_id: str = ""
) -> CommonWordList:
    """Return the k most frequent normalized tokens of the corpus.

    Ties at the cut-off are broken by ascending lexicographic order so that
    recomputation is deterministic. Raises ValueError on an empty corpus.
    """
    if k < 1:
        raise ValueError("k must be positive")
    counts: Counter[str] = Counter()
    for utt in corpus:
        counts.update(utt.tokens)
    if not counts:
        raise ValueError("empty corpus")
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    ordered = tuple(word for word, _ in ranked[:k])
    return CommonWordList(ordered=ordered, k=k, source_corpus_id=source_corpus_id)


def remove_common_words(
    tokens: Sequence[str], common: CommonWordList
) -> list[str]:
    """Order-preserving copy of `tokens` without common words.

    Duplicates among the surviving rare words are kept.
    """
    return [tok for tok in tokens if tok not in common]


def save_common_words(common: CommonWordList, path: str | Path) -> None:
    """Write one word per line, most frequent first."""
    Path(path).write_text(
        "".join(word + "\n" for word in common.ordered), encoding="utf-8"
    )


def load_common_words(path: str | Path) -> CommonWordList:
    """Load a common-word file: one word per line, descending frequency.

    Blank lines and lines starting with '#' are ignored.
    """
    path = Path(path)
    ordered: list[str] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        ordered.append(word)
    return CommonWordList(
        ordered=tuple(ordered), k=max(len(ordered), 1), source_corpus_id=str(path)
    )
