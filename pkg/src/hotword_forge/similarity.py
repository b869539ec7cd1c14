"""Edit distance and the normalized similarity score used to rank candidates.

The distance is plain Levenshtein (unit-cost insert/delete/substitute,
no transpositions), computed with Myers' bit-parallel algorithm. Python's
arbitrary-precision integers make the bit-vector width a non-issue, so the
same code covers single words and multi-word phrase surfaces.
"""
from __future__ import annotations

from typing import Sequence


class PatternDistance:
    """Precompiled state for repeated edit-distance queries against one string.

    Compiling the per-character bitmasks once pays off in the filtering hot
    loops, where a single token is compared against hundreds of candidates
    (or vice versa).
    """

    __slots__ = ("text", "_peq", "_length", "_full", "_msb")

    def __init__(self, text: str) -> None:
        self.text = text
        peq: dict[str, int] = {}
        for i, ch in enumerate(text):
            peq[ch] = peq.get(ch, 0) | (1 << i)
        self._peq = peq
        self._length = len(text)
        self._full = (1 << len(text)) - 1
        self._msb = 1 << (len(text) - 1) if text else 0

    def distance(self, other: str) -> int:
        m = self._length
        if m == 0:
            return len(other)
        if not other:
            return m
        full = self._full
        msb = self._msb
        peq_get = self._peq.get
        vp = full
        vn = 0
        dist = m
        for ch in other:
            eq = peq_get(ch, 0)
            xv = eq | vn
            xh = (((eq & vp) + vp) ^ vp) | eq
            ph = vn | (~(xh | vp) & full)
            mh = vp & xh
            if ph & msb:
                dist += 1
            elif mh & msb:
                dist -= 1
            ph = ((ph << 1) | 1) & full
            mh = (mh << 1) & full
            vp = mh | (~(xv | ph) & full)
            vn = ph & xv
        return dist


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance between two strings."""
    return PatternDistance(a).distance(b)


def score_from_distance(distance: int, a: str, b: str) -> float:
    """Map an edit distance onto the [0, 1] similarity scale.

    Normalizes by the longer string, so 1.0 means equality and 0.0 means
    the strings share nothing alignable.
    """
    longest = max(len(a), len(b))
    if longest == 0:
        raise ValueError("undefined similarity: both strings empty")
    return 1.0 - distance / longest

def similarity(a: str, b: str) -> float:
    """Normalized similarity 1 - d/max(|a|, |b|) on already-normalized text."""
    return score_from_distance(edit_distance(a, b), a, b)


def min_distance_to_sentence(
    candidate: str, tokens: Sequence[str]
) -> tuple[int, str]:
    """Smallest edit distance between `candidate` and any sentence token.

    Returns the distance together with the achieving token; distance ties
    go to the earliest token position. Raises on an empty token sequence.
    """
    if not tokens:
        raise ValueError("empty token sequence")
    pattern = PatternDistance(candidate)
    best = pattern.distance(tokens[0])
    best_token = tokens[0]
    for token in tokens[1:]:
        if best == 0:
            break
        d = pattern.distance(token)
        if d < best:
            best = d
            best_token = token
    return best, best_token


def max_similarity_to_sentence(
    candidate: str, tokens: Sequence[str]
) -> tuple[float, str]:
    """Highest normalized similarity between `candidate` and any token.

    This is the candidate-vs-sentence score the threshold/top-k filters
    rank by. Unlike the raw shortest distance it favors tokens of
    comparable length: a short token at the same distance normalizes to a
    lower score. Ties go to the earliest token position.
    """
    if not tokens:
        raise ValueError("empty token sequence")
    pattern = PatternDistance(candidate)
    best = -1.0
    best_token = tokens[0]
    for token in tokens:
        s = score_from_distance(pattern.distance(token), candidate, token)
        if s > best:
            best = s
            best_token = token
            if best == 1.0:
                break
    return best, best_token


def char_mask(text: str) -> int:
    """26-bit presence mask of the letters a-z occurring in `text`.

    Cheap pruning aid: together with the length difference it lower-bounds
    the edit distance (each edit fixes at most one missing distinct letter
    on each side).
    """
    mask = 0
    for ch in text:
        o = ord(ch) - 97
        if 0 <= o < 26:
            mask |= 1 << o
    return mask


def distance_lower_bound(
    len_a: int, mask_a: int, len_b: int, mask_b: int
) -> int:
    """A lower bound on edit_distance(a, b) from lengths and char masks."""
    bound = len_a - len_b if len_a > len_b else len_b - len_a
    missing_b = (mask_a & ~mask_b).bit_count()
    if missing_b > bound:
        bound = missing_b
    missing_a = (mask_b & ~mask_a).bit_count()
    if missing_a > bound:
        bound = missing_a
    return bound
