"""Hotword filtering, biasing-list generation, and contextual ASR scoring."""

from .biasgen import (
    RareVocabulary,
    TrainBiasParams,
    build_rare_vocabulary,
    build_test_bias,
    sample_train_bias,
)
from .filtering import (
    FilterConfig,
    FilterResult,
    filter_f1,
    filter_f2,
    filter_f3,
    filter_oracle,
    run_filter,
)
from .harness import CorruptionModel, SweepCell, SweepReport, corrupt, run_sweep
from .ngram_index import (
    BiasingEntry,
    BiasingList,
    NgramIndex,
    build_index,
    retrieve_candidates,
)
from .prompt import PromptTemplate, render_prompt, render_training_record
from .scoring import AlignmentOp, ScoreReport, aggregate, align, score
from .similarity import edit_distance, min_distance_to_sentence, similarity
from .textnorm import (
    CommonWordList,
    Utterance,
    compute_common_words,
    normalize,
    remove_common_words,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentOp",
    "BiasingEntry",
    "BiasingList",
    "CommonWordList",
    "CorruptionModel",
    "FilterConfig",
    "FilterResult",
    "NgramIndex",
    "PromptTemplate",
    "RareVocabulary",
    "ScoreReport",
    "SweepCell",
    "SweepReport",
    "TrainBiasParams",
    "Utterance",
    "aggregate",
    "align",
    "build_index",
    "build_rare_vocabulary",
    "build_test_bias",
    "compute_common_words",
    "corrupt",
    "edit_distance",
    "filter_f1",
    "filter_f2",
    "filter_f3",
    "filter_oracle",
    "min_distance_to_sentence",
    "normalize",
    "remove_common_words",
    "render_prompt",
    "render_training_record",
    "retrieve_candidates",
    "run_filter",
    "run_sweep",
    "sample_train_bias",
    "score",
    "similarity",
]
