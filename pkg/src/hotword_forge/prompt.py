"""Prompt rendering for the downstream LLM decoder.

The default template asks for a transcription and appends the selected
hotwords; with no hotwords the slot is filled with an empty string, which
is deliberately distinct from the plain no-hotword instruction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

BASELINE_PROMPT = "Transcribe speech to text."


@dataclass(frozen=True)
class PromptTemplate:
    """Instruction base plus a hotword clause with exactly one {} slot."""

    base: str = BASELINE_PROMPT
    hotword_clause: str = " Some hotwords might help. The hotwords are {}"

    def __post_init__(self) -> None:
        if self.hotword_clause.count("{}") != 1:
            raise ValueError("hotword_clause must contain exactly one {} slot")


DEFAULT_TEMPLATE = PromptTemplate()


def render_prompt(
    hotwords: Sequence[str],
    template: PromptTemplate = DEFAULT_TEMPLATE,
    separator: str = " ",
) -> str:
    """Fill the template slot with the hotwords joined by `separator`.

    An empty sequence fills the slot with the empty string; the clause
    itself is kept so the "no bias" prompt stays distinguishable from the
    non-contextual one.
    """
    return template.base + template.hotword_clause.replace(
        "{}", separator.join(hotwords), 1
    )


def render_training_record(prompt: str, transcription: str | None = None) -> str:
    """LLM I/O skeleton with a placeholder for the speech embedding.

    With `transcription=None` the record ends after "ASSISTANT: ", the
    inference-time form that the decoder completes.
    """
    return f"<speech> USER: {prompt} ASSISTANT: {transcription or ''}"
