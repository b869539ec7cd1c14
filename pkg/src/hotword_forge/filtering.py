"""The three hotword filtering pipelines over a coarse-decoded sentence.

All variants start from 2-gram candidate retrieval against the biasing
list, then diverge:

  f1  score candidates by similarity to the raw sentence, keep the union of
      the above-threshold set and the top-k;
  f2  like f1 but with common words removed from the sentence first;
  f3  remove common words, then give every remaining token its nearest
      candidate by edit distance (no threshold).

`filter_oracle` reproduces each pipeline with a brute-force candidate scan
instead of the inverted index; the two must agree exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .ngram_index import (
    BiasingEntry,
    BiasingList,
    NgramIndex,
    retrieve_candidates,
)
from .similarity import (
    PatternDistance,
    char_mask,
    distance_lower_bound,
    score_from_distance,
)
from .textnorm import CommonWordList, remove_common_words

VARIANTS = ("f1", "f2", "f3")
SELECTION_MODES = ("union", "fallback")


@dataclass(frozen=True)
class FilterConfig:
    """Variant selector plus the knobs shared by the pipelines.

    `selection` controls how the above-threshold set and the top-k set
    combine in f1/f2: "union" keeps both, "fallback" uses the top-k only
    when nothing clears the threshold.
    """

    variant: str
    similarity_threshold: float = 0.95
    top_k: int = 5
    common: CommonWordList | None = None
    selection: str = "union"

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not 0.0 < self.similarity_threshold <= 1.0:
            raise ValueError("similarity_threshold must be in (0, 1]")
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if self.selection not in SELECTION_MODES:
            raise ValueError(f"unknown selection mode {self.selection!r}")
        if self.variant in ("f2", "f3") and self.common is None:
            raise ValueError(f"variant {self.variant} needs a common-word list")


@dataclass(frozen=True)
class FilterResult:
    """Selected hotwords, in order, with optional per-entry diagnostics.

    f1/f2 order by descending score (ties by ascending entry id) and leave
    `matched_tokens` unset; f3 orders by first match and records which rare
    token claimed each entry.
    """

    selected: tuple[BiasingEntry, ...]
    scores: tuple[float, ...] | None = None
    matched_tokens: tuple[str, ...] | None = None

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(entry.surface for entry in self.selected)

    def __len__(self) -> int:
        return len(self.selected)


def _rank_by_similarity(
    candidates: Sequence[BiasingEntry],
    tokens: Sequence[str],
    cfg: FilterConfig,
) -> FilterResult:
    """Shared f1/f2 scoring: per candidate, the best similarity to any token."""
    if not candidates or not tokens:
        return FilterResult(selected=(), scores=())
    patterns = [(PatternDistance(token), len(token)) for token in tokens]
    scored: list[tuple[BiasingEntry, float]] = []
    for entry in candidates:
        surface = entry.surface
        s_len = len(surface)
        best = -1.0
        for pattern, t_len in patterns:
            d = pattern.distance(surface)
            s = 1.0 - d / (s_len if s_len >= t_len else t_len)
            if s > best:
                best = s
                if d == 0:
                    break
        scored.append((entry, best))
    scored.sort(key=lambda pair: (-pair[1], pair[0].id))
    above = sum(1 for _, s in scored if s > cfg.similarity_threshold)
    if cfg.selection == "union":
        keep = max(cfg.top_k, above)
    else:
        keep = above if above > 0 else cfg.top_k
    chosen = scored[:keep]
    return FilterResult(
        selected=tuple(entry for entry, _ in chosen),
        scores=tuple(score for _, score in chosen),
    )


def _match_each_token(
    candidates: Sequence[BiasingEntry],
    tokens: Sequence[str],
    cfg: FilterConfig,
) -> FilterResult:
    """Shared f3 core: nearest candidate per token, dedup in first-match order."""
    if not candidates or not tokens:
        return FilterResult(selected=(), scores=(), matched_tokens=())
    # Exact surface hits resolve in O(1); dedup makes the distance-0 match
    # unique, so the shortcut cannot disturb the lowest-id tie-break.
    exact: dict[str, BiasingEntry] = {}
    for entry in candidates:
        exact.setdefault(entry.surface, entry)
    stats = [
        (entry, entry.surface, len(entry.surface), char_mask(entry.surface))
        for entry in candidates
    ]
    selected: list[BiasingEntry] = []
    selected_ids: set[int] = set()
    scores: list[float] = []
    matched: list[str] = []
    for token in tokens:
        hit = exact.get(token)
        if hit is not None:
            best_entry, best_d = hit, 0
        else:
            pattern = PatternDistance(token)
            t_len = len(token)
            t_mask = char_mask(token)
            best_entry = None
            best_d = -1
            for entry, surface, s_len, s_mask in stats:
                if best_d >= 0 and (
                    distance_lower_bound(t_len, t_mask, s_len, s_mask) >= best_d
                ):
                    continue
                d = pattern.distance(surface)
                if best_d < 0 or d < best_d:
                    best_d = d
                    best_entry = entry
                    if d == 0:
                        break
        assert best_entry is not None
        if best_entry.id not in selected_ids:
            selected_ids.add(best_entry.id)
            selected.append(best_entry)
            scores.append(score_from_distance(best_d, best_entry.surface, token))
            matched.append(token)
    return FilterResult(
        selected=tuple(selected),
        scores=tuple(scores),
        matched_tokens=tuple(matched),
    )


def filter_f1(
    sentence: Sequence[str], index: NgramIndex, cfg: FilterConfig
) -> FilterResult:
    """Threshold/top-k selection against the raw sentence."""
    if cfg.variant != "f1":
        raise ValueError("config variant is not f1")
    candidates = retrieve_candidates(sentence, index)
    return _rank_by_similarity(candidates, sentence, cfg)


def filter_f2(
    sentence: Sequence[str], index: NgramIndex, cfg: FilterConfig
) -> FilterResult:
    """f1 applied to the sentence with common words removed."""
    if cfg.variant != "f2":
        raise ValueError("config variant is not f2")
    assert cfg.common is not None
    rare = remove_common_words(sentence, cfg.common)
    candidates = retrieve_candidates(rare, index)
    return _rank_by_similarity(candidates, rare, cfg)


def filter_f3(
    sentence: Sequence[str], index: NgramIndex, cfg: FilterConfig
) -> FilterResult:
    """Nearest-candidate match for every rare token; no threshold."""
    if cfg.variant != "f3":
        raise ValueError("config variant is not f3")
    assert cfg.common is not None
    rare = remove_common_words(sentence, cfg.common)
    candidates = retrieve_candidates(rare, index)
    return _match_each_token(candidates, rare, cfg)


_DISPATCH = {"f1": filter_f1, "f2": filter_f2, "f3": filter_f3}


def run_filter(
    sentence: Sequence[str], index: NgramIndex, cfg: FilterConfig
) -> FilterResult:
    """Apply the variant selected by `cfg`."""
    return _DISPATCH[cfg.variant](sentence, index, cfg)


def filter_oracle(
    sentence: Sequence[str], biasing_list: BiasingList, cfg: FilterConfig
) -> FilterResult:
    """Index-free reference pipeline.

    Candidates come from a quadratic scan comparing gram sets instead of
    the inverted index; selection then follows the configured variant.
    Must produce results identical to the indexed pipeline.
    """
    tokens: Sequence[str] = sentence
    if cfg.variant in ("f2", "f3"):
        assert cfg.common is not None
        tokens = remove_common_words(sentence, cfg.common)
    query_grams: set[str] = set()
    for token in tokens:
        if len(token) == 1:
            query_grams.add(token)
        else:
            query_grams.update(a + b for a, b in zip(token, token[1:]))
    candidates = []
    for entry in biasing_list:
        surface = entry.surface
        if len(surface) == 1:
            grams = {surface}
        else:
            grams = {a + b for a, b in zip(surface, surface[1:])}
        if grams & query_grams:
            candidates.append(entry)
    if cfg.variant == "f3":
        return _match_each_token(candidates, tokens, cfg)
    return _rank_by_similarity(candidates, tokens, cfg)
