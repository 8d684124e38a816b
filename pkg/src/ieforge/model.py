"""Shared data model: samples, label sets, instances, records, extraction tuples."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Union


class TaskKind(str, Enum):
    NER = "NER"
    RE = "RE"
    EE = "EE"


SPLITS = ("train", "val", "test")
LANGUAGES = ("en", "zh")

#: Sentinel emitted for event-argument roles with no value. Never part of a tuple.
NAN = "NAN"


def normalize_text(text: str) -> str:
    """Canonical form used for every equality comparison (dedup, leakage, scoring).

    Unicode NFC plus surrounding-whitespace trim. Internal whitespace and case
    are preserved. Idempotent.
    """
    return unicodedata.normalize("NFC", text).strip()


@dataclass(frozen=True)
class RelationTriple:
    relation: str
    head: str
    tail: str


@dataclass
class EventAnnotation:
    event_type: str
    trigger: str
    arguments: dict[str, list[str]] = field(default_factory=dict)  # role -> values


#: NER: entity type -> mention texts. RE: triples. EE: events.
Annotations = Union[dict[str, list[str]], list[RelationTriple], list[EventAnnotation]]


@dataclass
class UnifiedSample:
    """One annotated source text in the unified interchange shape."""

    sample_id: str
    dataset_name: str
    split: str
    language: str
    task: TaskKind
    text: str
    annotations: Annotations


@dataclass
class EventSchema:
    event_type: str
    trigger: bool = True
    arguments: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(set(self.arguments)) != len(self.arguments):
            raise ValueError(f"duplicate role names in event schema {self.event_type!r}")

    def to_obj(self) -> dict:
        return {"event_type": self.event_type, "trigger": self.trigger, "arguments": list(self.arguments)}


@dataclass
class LabelSet:
    """The predefined schema space of one dataset.

    NER/RE labels are plain texts; EE labels are role-structured EventSchemas.
    Order is significant: it is the canonical label order used everywhere a
    deterministic ordering over labels is needed.
    """

    task: TaskKind
    labels: list[str] | list[EventSchema]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("label set must be non-empty")
        names = self.label_names()
        if len(set(names)) != len(names):
            raise ValueError("labels must be unique within a label set")

    def label_names(self) -> list[str]:
        if self.task is TaskKind.EE:
            return [schema.event_type for schema in self.labels]
        return list(self.labels)

    def event_schema(self, event_type: str) -> EventSchema:
        if self.task is not TaskKind.EE:
            raise ValueError("event_schema() only applies to EE label sets")
        for schema in self.labels:
            if schema.event_type == event_type:
                return schema
        raise KeyError(event_type)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class SchemaPartition:
    """Per-sample split of the label space: positives, hard negatives,
    sampled other negatives, and the shuffled pool they form."""

    positive: frozenset[str]
    hard_negative: frozenset[str]
    other_negative_sampled: frozenset[str]
    pool: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.positive & self.hard_negative:
            raise ValueError("positive and hard_negative overlap")
        if self.positive & self.other_negative_sampled:
            raise ValueError("positive and other_negative_sampled overlap")
        if self.hard_negative & self.other_negative_sampled:
            raise ValueError("hard_negative and other_negative_sampled overlap")
        if set(self.pool) != self.positive | self.hard_negative | self.other_negative_sampled:
            raise ValueError("pool does not equal the union of its parts")
        if len(set(self.pool)) != len(self.pool):
            raise ValueError("pool contains duplicates")


@dataclass(frozen=True)
class InstructionInstance:
    """One serialized instruction/output pair plus provenance metadata."""

    dataset_name: str
    sample_id: str
    task: TaskKind
    language: str
    instruction_payload: str
    output_payload: str
    schema_batch: tuple[str, ...]
    batch_index: int


@dataclass
class DatasetRecord:
    """Per-dataset audit summary: schema space, volumes, batching statistics."""

    dataset_name: str
    domain: str
    schema_count: int
    schema_details: list
    sample_count: int
    split_num: int
    instruction_count: int
    split_size_histogram: dict[int, int]
    token_count: int

    def to_obj(self) -> dict:
        return {
            "dataset_name": self.dataset_name,
            "domain": self.domain,
            "schema_count": self.schema_count,
            "schema_details": self.schema_details,
            "sample_count": self.sample_count,
            "split_num": self.split_num,
            "instruction_count": self.instruction_count,
            "split_size_histogram": {str(k): v for k, v in sorted(self.split_size_histogram.items())},
            "token_count": self.token_count,
        }


class ExtractionTuple(NamedTuple):
    """A scoreable extraction, tagged with its facet.

    Facets and part layouts:
      ner      -> (entity_type, mention)
      re       -> (relation, head, tail)
      trigger  -> (event_type, trigger)
      argument -> (event_type, role, value)

    Parts are normalized, non-empty, and never the NAN sentinel.
    """

    facet: str
    parts: tuple[str, ...]


FACETS_BY_TASK = {
    TaskKind.NER: ("ner",),
    TaskKind.RE: ("re",),
    TaskKind.EE: ("trigger", "argument"),
}


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "ScoreReport":
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return cls(tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f1=f1)

    def to_obj(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def positive_labels(sample: UnifiedSample) -> set[str]:
    """Labels actually present in the sample's gold annotations.

    For EE these are the distinct event_type values.
    """
    if sample.task is TaskKind.NER:
        return {label for label, mentions in sample.annotations.items() if mentions}
    if sample.task is TaskKind.RE:
        return {triple.relation for triple in sample.annotations}
    return {event.event_type for event in sample.annotations}


def has_annotations(sample: UnifiedSample) -> bool:
    return bool(positive_labels(sample))


def validate_sample(sample: UnifiedSample, label_set: LabelSet) -> list[str]:
    """Check a sample against its label set; violations are data, not faults.

    Returns every violation found (empty list means ok). Pure: never mutates
    the sample.
    """
    if label_set.task is not sample.task:
        raise ValueError(f"label set task {label_set.task} does not match sample task {sample.task}")

    violations: list[str] = []
    known = set(label_set.label_names())

    if not normalize_text(sample.text):
        violations.append("empty text")
    if sample.split not in SPLITS:
        violations.append(f"unknown split: {sample.split!r}")
    if sample.language not in LANGUAGES:
        violations.append(f"unknown language: {sample.language!r}")

    if sample.task is TaskKind.NER:
        for label, mentions in sample.annotations.items():
            if label not in known:
                violations.append(f"unknown label: {label!r}")
            for mention in mentions:
                if not normalize_text(mention):
                    violations.append(f"empty mention under label {label!r}")
    elif sample.task is TaskKind.RE:
        seen: set[tuple[str, str, str]] = set()
        for triple in sample.annotations:
            if triple.relation not in known:
                violations.append(f"unknown label: {triple.relation!r}")
            if not normalize_text(triple.head) or not normalize_text(triple.tail):
                violations.append(f"empty component in triple for relation {triple.relation!r}")
                continue
            key = (
                normalize_text(triple.relation),
                normalize_text(triple.head),
                normalize_text(triple.tail),
            )
            if key in seen:
                violations.append(f"duplicate triple: {key!r}")
            seen.add(key)
    else:
        for event in sample.annotations:
            if event.event_type not in known:
                violations.append(f"unknown event type: {event.event_type!r}")
                continue
            schema = label_set.event_schema(event.event_type)
            if schema.trigger and not normalize_text(event.trigger):
                violations.append(f"empty trigger for event type {event.event_type!r}")
            for role, values in event.arguments.items():
                if role not in schema.arguments:
                    violations.append(f"unknown role {role!r} for event type {event.event_type!r}")
                for value in values:
                    if not normalize_text(value):
                        violations.append(f"empty argument value for role {role!r}")
    return violations


def annotation_key(sample: UnifiedSample):
    """Hashable canonical form of a sample's annotations, for equality checks
    between duplicate texts. Uses normalized components and set semantics."""
    if sample.task is TaskKind.NER:
        return frozenset(
            (normalize_text(label), normalize_text(mention))
            for label, mentions in sample.annotations.items()
            for mention in mentions
        )
    if sample.task is TaskKind.RE:
        return frozenset(
            (normalize_text(t.relation), normalize_text(t.head), normalize_text(t.tail))
            for t in sample.annotations
        )
    return frozenset(
        (
            normalize_text(event.event_type),
            normalize_text(event.trigger),
            frozenset(
                (normalize_text(role), tuple(normalize_text(v) for v in values))
                for role, values in event.arguments.items()
            ),
        )
        for event in sample.annotations
    )
