"""Character 2-gram inverted index over a biasing list.

The index maps every contiguous character bigram of an entry surface
(multi-word phrases included, internal spaces count) to the set of entry
ids containing it. Single-character entries are indexed under their lone
character so they stay retrievable; the same degenerate rule applies to
single-character query tokens, keeping retrieval symmetric.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .textnorm import normalize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BiasingEntry:
    """One hotword (or multi-word phrase) with its position in the list."""

    id: int
    surface: str


@dataclass(frozen=True)
class BiasingList:
    """An ordered, duplicate-free list of biasing entries.

    Entry ids equal their positions, so `entries[i].id == i` always holds.
    """

    entries: tuple[BiasingEntry, ...]

    def __post_init__(self) -> None:
        for pos, entry in enumerate(self.entries):
            if entry.id != pos:
                raise ValueError(f"entry id {entry.id} does not match position {pos}")
            if not entry.surface:
                raise ValueError("empty entry surface")

    @classmethod
    def from_surfaces(
        cls, surfaces: Iterable[str], already_normalized: bool = False
    ) -> "BiasingList":
        """Build a list from raw surfaces, normalizing and deduplicating.

        The first occurrence of a duplicate surface wins; later ones are
        dropped with a warning. Surfaces that normalize to nothing are
        skipped.
        """
        entries: list[BiasingEntry] = []
        seen: set[str] = set()
        for raw in surfaces:
            surface = raw if already_normalized else " ".join(normalize(raw))
            if not surface:
                logger.warning("skipping biasing entry with empty surface: %r", raw)
                continue
            if surface in seen:
                logger.warning("duplicate biasing entry %r ignored", surface)
                continue
            seen.add(surface)
            entries.append(BiasingEntry(id=len(entries), surface=surface))
        return cls(entries=tuple(entries))

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(entry.surface for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def char_bigrams(text: str) -> list[str]:
    """Contiguous character 2-grams of `text`; a 1-char string yields itself."""
    if len(text) < 2:
        return [text] if text else []
    return [text[i : i + 2] for i in range(len(text) - 1)]


@dataclass(frozen=True)
class NgramIndex:
    """Immutable 2-gram postings over a biasing list."""

    grams: Mapping[str, frozenset[int]]
    entries: BiasingList


def build_index(biasing_list: BiasingList) -> NgramIndex:
    """Build the inverted 2-gram index for a non-empty biasing list."""
    if len(biasing_list) == 0:
        raise ValueError("empty biasing list")
    postings: dict[str, set[int]] = {}
    for entry in biasing_list:
        for gram in char_bigrams(entry.surface):
            postings.setdefault(gram, set()).add(entry.id)
    grams = {gram: frozenset(ids) for gram, ids in postings.items()}
    return NgramIndex(grams=grams, entries=biasing_list)


def retrieve_candidates(
    tokens: Sequence[str], index: NgramIndex
) -> list[BiasingEntry]:
    """Entries sharing at least one character 2-gram with some token.

    Returns a duplicate-free list sorted by entry id (empty for no match).
    """
    ids: set[int] = set()
    grams = index.grams
    seen_grams: set[str] = set()
    for token in tokens:
        for gram in char_bigrams(token):
            if gram in seen_grams:
                continue
            seen_grams.add(gram)
            postings = grams.get(gram)
            if postings:
                ids |= postings
    entries = index.entries.entries
    return [entries[i] for i in sorted(ids)]


def load_biasing_list(path: str | Path) -> BiasingList:
    """Load a biasing list file: one entry per line, normalized on read."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return BiasingList.from_surfaces(lines)


def save_biasing_list(biasing_list: BiasingList, path: str | Path) -> None:
    Path(path).write_text(
        "".join(surface + "\n" for surface in biasing_list.surfaces),
        encoding="utf-8",
    )
