"""Schema-pool batching and instruction/output payload rendering."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import ConfigError
from .model import (
    NAN,
    DatasetRecord,
    EventSchema,
    InstructionInstance,
    LabelSet,
    TaskKind,
    UnifiedSample,
    normalize_text,
)
from .negatives import HardNegativeDictionary, RngStream, assemble_schema_pool

MODE_HARD_NEGATIVE = "hard_negative"
MODE_TRADITIONAL = "traditional_full_schema"

DEFAULT_TEMPLATES: dict[tuple[TaskKind, str], str] = {
    (TaskKind.NER, "en"): (
        "You are an expert in named entity recognition. Please extract entities "
        "that match the schema definition from the input. Return an empty list if "
        "the entity type does not exist. Please respond in the format of a JSON string."
    ),
    (TaskKind.RE, "en"): (
        "You are an expert in relationship extraction. Please extract relationship "
        "triples that match the schema definition from the input. Return an empty "
        "list for relationships that do not exist. Please respond in the format of "
        "a JSON string."
    ),
    (TaskKind.EE, "en"): (
        "You are an expert in event extraction. Please extract events from the "
        "input that conform to the schema definition. Return an empty list for "
        "events that do not exist, and return NAN for arguments that do not exist. "
        "If an argument has multiple values, please return a list. Respond in the "
        "format of a JSON string."
    ),
}

DEFAULT_SPLIT_NUM = {TaskKind.NER: 6, TaskKind.RE: 4, TaskKind.EE: 4}


@dataclass
class GenerationConfig:
    split_num: dict[TaskKind, int] = field(default_factory=lambda: dict(DEFAULT_SPLIT_NUM))
    mode: str = MODE_HARD_NEGATIVE
    templates: dict[tuple[TaskKind, str], str] = field(default_factory=lambda: dict(DEFAULT_TEMPLATES))

    def __post_init__(self) -> None:
        if self.mode not in (MODE_HARD_NEGATIVE, MODE_TRADITIONAL):
            raise ConfigError(f"unknown generation mode: {self.mode!r}")
        for task, value in self.split_num.items():
            if value < 1:
                raise ConfigError(f"split_num for {task} must be >= 1, got {value}")
        for key, template in self.templates.items():
            if not template:
                raise ConfigError(f"empty task-description template for {key}")

    def split_num_for(self, task: TaskKind) -> int:
        return self.split_num.get(task, DEFAULT_SPLIT_NUM[task])

    def template_for(self, task: TaskKind, language: str) -> str:
        try:
            return self.templates[(task, language)]
        except KeyError:
            raise ConfigError(f"no task-description template for ({task.value}, {language!r})") from None


def split_batches(pool: Sequence[str], split_num: int) -> list[list[str]]:
    """Chop a schema pool into sequential batches of roughly split_num labels.

    A final chunk smaller than split_num // 2 is merged into the previous
    one, so every batch size lies in [split_num // 2, split_num + split_num // 2],
    except a lone batch when the whole pool is smaller than split_num // 2.
    The batches are disjoint and concatenate to the pool exactly.
    """
    if split_num < 1:
        raise ValueError(f"split_num must be >= 1, got {split_num}")
    if not pool:
        raise ValueError("pool must be non-empty")
    chunks = [list(pool[i : i + split_num]) for i in range(0, len(pool), split_num)]
    if len(chunks) >= 2 and len(chunks[-1]) < split_num // 2:
        tail = chunks.pop()
        chunks[-1].extend(tail)
    return chunks


def _dumps(obj) -> str:
    # Canonical payload form: UTF-8, no ASCII escaping, single space after ':' and ','.
    return json.dumps(obj, ensure_ascii=False)


def render_instruction(
    task: TaskKind,
    language: str,
    batch: Sequence[str] | Sequence[EventSchema],
    text: str,
    config: GenerationConfig | None = None,
) -> str:
    """Serialize one instruction payload: instruction, schema, input, in that order.

    NER/RE schemas are the batch's label texts; EE schemas are objects with
    event_type, trigger and arguments. The input is the sample text verbatim.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    config = config or GenerationConfig()
    if task is TaskKind.EE:
        schema = [item.to_obj() if isinstance(item, EventSchema) else item for item in batch]
    else:
        schema = list(batch)
    return _dumps({"instruction": config.template_for(task, language), "schema": schema, "input": text})


def _dedup_ordered(items: Iterable, key: Callable) -> list:
    seen = set()
    out = []
    for item in items:
        k = key(item)
        if k not in seen:
            seen.add(k)
            out.append(item)
    return out


def render_output(task: TaskKind, batch: Sequence[str] | Sequence[EventSchema], annotations) -> str:
    """Serialize one output payload, keyed exactly by the batch in batch order.

    Queried labels with no gold annotation map to empty lists. Gold items
    keep their first-occurrence order, with duplicates collapsed. EE events
    render every schema role: missing roles carry the NAN sentinel, single
    values stay bare, multiple values become a list.
    """
    out: dict = {}
    if task is TaskKind.NER:
        for label in batch:
            mentions = _dedup_ordered(annotations.get(label, []), normalize_text)
            out[label] = list(mentions)
    elif task is TaskKind.RE:
        for label in batch:
            triples = [t for t in annotations if t.relation == label]
            triples = _dedup_ordered(
                triples, lambda t: (normalize_text(t.head), normalize_text(t.tail))
            )
            out[label] = [{"head": t.head, "tail": t.tail} for t in triples]
    else:
        for schema in batch:
            events = [e for e in annotations if e.event_type == schema.event_type]
            rendered = []
            for event in events:
                obj: dict = {}
                if schema.trigger:
                    obj["trigger"] = event.trigger
                arguments: dict = {}
                for role in schema.arguments:
                    values = event.arguments.get(role, [])
                    if not values:
                        arguments[role] = NAN
                    elif len(values) == 1:
                        arguments[role] = values[0]
                    else:
                        arguments[role] = list(values)
                obj["arguments"] = arguments
                rendered.append(obj)
            out[schema.event_type] = _dedup_ordered(rendered, lambda o: json.dumps(o, sort_keys=True))
    return _dumps(out)


def generate_instances(
    sample: UnifiedSample,
    label_set: LabelSet,
    hard_neg_dict: HardNegativeDictionary,
    config: GenerationConfig,
    rng: RngStream,
) -> list[InstructionInstance]:
    """Produce every instruction/output pair for one cleaned, validated sample.

    Hard-negative mode batches the sample's assembled schema pool;
    traditional mode batches the full label set in its fixed order, with no
    sampling and no shuffle. Every positive label lands in exactly one batch.
    """
    split_num = config.split_num_for(sample.task)
    if config.mode == MODE_TRADITIONAL:
        pool: Sequence[str] = label_set.label_names()
    else:
        pool = assemble_schema_pool(sample, label_set, hard_neg_dict, split_num, rng).pool

    instances = []
    for batch_index, batch_names in enumerate(split_batches(pool, split_num)):
        if sample.task is TaskKind.EE:
            batch = [label_set.event_schema(name) for name in batch_names]
        else:
            batch = batch_names
        instances.append(
            InstructionInstance(
                dataset_name=sample.dataset_name,
                sample_id=sample.sample_id,
                task=sample.task,
                language=sample.language,
                instruction_payload=render_instruction(
                    sample.task, sample.language, batch, sample.text, config
                ),
                output_payload=render_output(sample.task, batch, sample.annotations),
                schema_batch=tuple(batch_names),
                batch_index=batch_index,
            )
        )
    return instances


_CJK = re.compile(r"[㐀-䶿一-鿿豈-﫿]")


def default_token_count(text: str) -> int:
    """Crude bilingual token estimate: one token per whitespace-delimited
    non-CJK run, one per CJK character."""
    count = 0
    for run in text.split():
        count += len(_CJK.findall(run))
        count += sum(1 for segment in _CJK.split(run) if segment)
    return count


def count_tokens(payloads: Iterable[str], counter: Callable[[str], int] | None = None) -> int:
    counter = counter or default_token_count
    return sum(counter(p) for p in payloads)


def build_dataset_record(
    dataset_name: str,
    label_set: LabelSet,
    samples: Sequence[UnifiedSample],
    instances: Sequence[InstructionInstance],
    config: GenerationConfig,
    token_counter: Callable[[str], int] | None = None,
    domain: str = "",
) -> DatasetRecord:
    """Summarize one dataset after generation: schema space, volumes,
    batch-size histogram, and an approximate token count."""
    histogram = Counter(len(inst.schema_batch) for inst in instances)
    payloads = [p for inst in instances for p in (inst.instruction_payload, inst.output_payload)]
    if label_set.task is TaskKind.EE:
        details = [schema.to_obj() for schema in label_set.labels]
    else:
        details = list(label_set.labels)
    return DatasetRecord(
        dataset_name=dataset_name,
        domain=domain,
        schema_count=len(label_set),
        schema_details=details,
        sample_count=len(samples),
        split_num=config.split_num_for(label_set.task),
        instruction_count=len(instances),
        split_size_histogram=dict(histogram),
        token_count=count_tokens(payloads, token_counter),
    )
