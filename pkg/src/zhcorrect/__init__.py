"""Toolkit for Chinese text correction experiments: deterministic
alignment and edit extraction, sentence- and edit-level scorers, a
count-based noisy-channel corrector with two-stage training, and batch
commands around them."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    FormatError,
    NormalizationError,
    StructuralError,
    UsageError,
    ZhcorrectError,
)
from .textnorm import (
    DEFAULT_POLICY,
    RAW_POLICY,
    WIDTHFOLD_POLICY,
    NormalizePolicy,
    UnicodeForm,
    UnitSeq,
    join_units,
    normalize,
    to_units,
    units_of,
)
from .corpus import (
    Corpus,
    CorpusTag,
    ParallelPair,
    exact_duplicate_count,
    parse_parallel,
    serialize_parallel,
    split,
    unify,
)
from .alignment import (
    ORACLE_MAX_TOTAL_UNITS,
    UNIT_COSTS,
    AlignOp,
    AlignmentPath,
    CostScheme,
    OpKind,
    align,
    oracle_min_cost,
)
from .edits import (
    EMPTY_REPLACEMENT_MARK,
    Edit,
    EditKind,
    EditSet,
    GoldEditCorpus,
    GoldRecord,
    MatchCounts,
    MergePolicy,
    apply_edits,
    classify_kind,
    extract_edits,
    format_edit_records,
    match_edits,
    parse_edit_file,
)
from .metrics import (
    CscSentenceOutcome,
    ScoreReport,
    csc_outcome,
    f_beta,
    macro_average,
    precision_recall,
    score_cgc,
    score_csc,
    sentence_edit_counts,
)
from .model import (
    BOUNDARY,
    DEFAULT_MIX_GRID,
    UNK,
    ConfusionChannel,
    MixtureCorrectorModel,
    NgramLM,
    Stage,
    StageConfig,
    TrainingProvenance,
    conditional,
    dataset_objective,
    decode,
    fit_stage,
    initial_model,
    load_model,
    nll,
    save_model,
    stage1_config,
    stage2_config,
    stage_heldout,
)
from .synthetic import CONFUSION, WORD_INVENTORY, SyntheticSuite, make_suite

__all__ = [
    "__version__",
    "ZhcorrectError", "NormalizationError", "FormatError", "ConfigError",
    "UsageError", "StructuralError",
    "NormalizePolicy", "UnicodeForm", "UnitSeq",
    "DEFAULT_POLICY", "RAW_POLICY", "WIDTHFOLD_POLICY",
    "normalize", "to_units", "units_of", "join_units",
    "Corpus", "CorpusTag", "ParallelPair",
    "parse_parallel", "serialize_parallel", "exact_duplicate_count", "unify", "split",
    "AlignOp", "AlignmentPath", "CostScheme", "OpKind",
    "UNIT_COSTS", "ORACLE_MAX_TOTAL_UNITS", "align", "oracle_min_cost",
    "Edit", "EditKind", "EditSet", "MergePolicy", "MatchCounts",
    "GoldRecord", "GoldEditCorpus", "EMPTY_REPLACEMENT_MARK",
    "classify_kind", "extract_edits", "apply_edits", "match_edits",
    "format_edit_records", "parse_edit_file",
    "ScoreReport", "CscSentenceOutcome", "csc_outcome",
    "f_beta", "precision_recall", "macro_average",
    "score_csc", "score_cgc", "sentence_edit_counts",
    "BOUNDARY", "UNK", "DEFAULT_MIX_GRID",
    "NgramLM", "ConfusionChannel", "MixtureCorrectorModel",
    "Stage", "StageConfig", "TrainingProvenance",
    "initial_model", "conditional", "nll", "dataset_objective",
    "fit_stage", "stage_heldout", "decode", "save_model", "load_model",
    "stage1_config", "stage2_config",
    "SyntheticSuite", "WORD_INVENTORY", "CONFUSION", "make_suite",
]
