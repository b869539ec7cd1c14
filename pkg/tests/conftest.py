"""Shared fixtures, synthetic-corpus builders, and acceptance reporting."""
from __future__ import annotations

import random

import pytest

from hotword_forge.textnorm import CommonWordList, Utterance

# Function words standing in for the top of a real frequency list.
FUNCTION_WORDS = (
    "the and of to a i in that it was his he for with as had you not be her "
    "is at on by which have or from this all they my so one me we him up no "
    "out were when then there she what their who will more if would"
).split()


def make_common() -> CommonWordList:
    return CommonWordList(
        ordered=tuple(FUNCTION_WORDS), k=len(FUNCTION_WORDS), source_corpus_id="synth"
    )


def random_word(rng: random.Random, lo: int = 6, hi: int = 12) -> str:
    return "".join(
        rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(rng.randint(lo, hi))
    )


def make_vocab_words(rng: random.Random, count: int, lo: int = 6, hi: int = 12) -> list[str]:
    words: set[str] = set()
    while len(words) < count:
        words.add(random_word(rng, lo, hi))
    return sorted(words)


def make_reference(
    rng: random.Random,
    utt_id: str,
    n_common: tuple[int, int] = (6, 10),
    n_rare: tuple[int, int] = (5, 8),
    rare_len: tuple[int, int] = (6, 12),
) -> Utterance:
    """A synthetic transcript interleaving function words and rare words."""
    tokens = [rng.choice(FUNCTION_WORDS) for _ in range(rng.randint(*n_common))]
    # dedup via dict.fromkeys: set iteration order would leak the process
    # hash seed into the "deterministic" corpus
    rare = dict.fromkeys(
        random_word(rng, *rare_len) for _ in range(rng.randint(*n_rare))
    )
    tokens.extend(rare)
    rng.shuffle(tokens)
    return Utterance(utt_id=utt_id, tokens=tuple(tokens))


def make_corpus(rng: random.Random, size: int, **kwargs) -> list[Utterance]:
    return [make_reference(rng, f"utt{i:04d}", **kwargs) for i in range(size)]


@pytest.fixture
def common_words() -> CommonWordList:
    return make_common()


# ---------------------------------------------------------------------------
# Acceptance reporting: one pass/fail line per criterion after the run.

_acceptance_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[nodeid]
        label = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{label}  {nodeid.split('::')[-1]}")
