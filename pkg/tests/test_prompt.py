from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hotword_forge.prompt import (
    BASELINE_PROMPT,
    DEFAULT_TEMPLATE,
    PromptTemplate,
    render_prompt,
    render_training_record,
)

single_words = st.lists(
    st.text(alphabet="abcdefgh'", min_size=1, max_size=8), max_size=6
)


class TestRenderPrompt:
    def test_two_hotwords(self):
        assert render_prompt(["bob", "joe"]) == (
            "Transcribe speech to text. Some hotwords might help. "
            "The hotwords are bob joe"
        )

    def test_no_bias_fills_empty_string(self):
        assert render_prompt([]) == (
            "Transcribe speech to text. Some hotwords might help. "
            "The hotwords are "
        )

    def test_single_hotword(self):
        assert render_prompt(["x"]).endswith("The hotwords are x")

    def test_no_bias_differs_from_baseline(self):
        assert render_prompt([]) != BASELINE_PROMPT

    def test_custom_separator(self):
        assert render_prompt(["a", "b"], separator=", ").endswith("a, b")

    def test_custom_template(self):
        template = PromptTemplate(base="Listen.", hotword_clause=" Words: {}.")
        assert render_prompt(["hi"], template) == "Listen. Words: hi."

    @given(single_words, single_words)
    def test_injective_on_single_word_sequences(self, first, second):
        if first != second:
            assert render_prompt(first) != render_prompt(second)


class TestTemplateValidation:
    def test_default_template_text(self):
        assert DEFAULT_TEMPLATE.base + DEFAULT_TEMPLATE.hotword_clause == (
            "Transcribe speech to text. Some hotwords might help. "
            "The hotwords are {}"
        )

    def test_missing_slot_rejected(self):
        with pytest.raises(ValueError):
            PromptTemplate(hotword_clause=" no slot here")

    def test_double_slot_rejected(self):
        with pytest.raises(ValueError):
            PromptTemplate(hotword_clause=" {} and {}")


class TestTrainingRecord:
    def test_with_transcription(self):
        assert render_training_record("P", "T") == "<speech> USER: P ASSISTANT: T"

    def test_inference_mode(self):
        assert render_training_record("P") == "<speech> USER: P ASSISTANT: "

    def test_empty_strings(self):
        assert render_training_record("", "") == "<speech> USER:  ASSISTANT: "
