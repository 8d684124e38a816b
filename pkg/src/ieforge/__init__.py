"""ieforge: schema-based instruction corpora from annotated IE datasets,
plus span-based micro-F1 scoring of model extractions."""

from .cleaning import CleaningConfig, CleaningReport, clean_dataset, dedup_within_split, quality_filter, remove_cross_split_leakage
from .evaluation import EvalManifest, ParseOutcome, micro_f1, parse_prediction, run_manifest, tuples_of_gold
from .generation import (
    GenerationConfig,
    build_dataset_record,
    count_tokens,
    generate_instances,
    render_instruction,
    render_output,
    split_batches,
)
from .model import (
    DatasetRecord,
    EventAnnotation,
    EventSchema,
    ExtractionTuple,
    InstructionInstance,
    LabelSet,
    RelationTriple,
    SchemaPartition,
    ScoreReport,
    TaskKind,
    UnifiedSample,
    normalize_text,
    positive_labels,
    validate_sample,
)
from .negatives import (
    HardNegativeDictionary,
    RngStream,
    SimilarityConfig,
    assemble_schema_pool,
    build_hard_neg_dict,
)

__version__ = "0.1.0"

__all__ = [
    "CleaningConfig",
    "CleaningReport",
    "DatasetRecord",
    "EvalManifest",
    "EventAnnotation",
    "EventSchema",
    "ExtractionTuple",
    "GenerationConfig",
    "HardNegativeDictionary",
    "InstructionInstance",
    "LabelSet",
    "ParseOutcome",
    "RelationTriple",
    "RngStream",
    "SchemaPartition",
    "ScoreReport",
    "SimilarityConfig",
    "TaskKind",
    "UnifiedSample",
    "assemble_schema_pool",
    "build_dataset_record",
    "build_hard_neg_dict",
    "clean_dataset",
    "count_tokens",
    "dedup_within_split",
    "generate_instances",
    "micro_f1",
    "normalize_text",
    "parse_prediction",
    "positive_labels",
    "quality_filter",
    "remove_cross_split_leakage",
    "render_instruction",
    "render_output",
    "run_manifest",
    "split_batches",
    "tuples_of_gold",
    "validate_sample",
]
