"""Readers and writers for the toolkit's line-delimited and JSON file formats."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .adapters import annotations_from_obj, annotations_to_obj
from .model import (
    DatasetRecord,
    EventSchema,
    InstructionInstance,
    LabelSet,
    TaskKind,
    UnifiedSample,
)
from .negatives import HardNegativeDictionary


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def sample_to_obj(sample: UnifiedSample) -> dict:
    return {
        "id": sample.sample_id,
        "dataset": sample.dataset_name,
        "split": sample.split,
        "language": sample.language,
        "task": sample.task.value,
        "text": sample.text,
        "annotations": annotations_to_obj(sample),
    }


def sample_from_obj(obj: dict) -> UnifiedSample:
    task = TaskKind(obj["task"])
    return UnifiedSample(
        sample_id=str(obj["id"]),
        dataset_name=str(obj["dataset"]),
        split=str(obj["split"]),
        language=str(obj["language"]),
        task=task,
        text=str(obj["text"]),
        annotations=annotations_from_obj(task, obj.get("annotations") or ({} if task is TaskKind.NER else [])),
    )


def read_samples(path: str | Path) -> list[UnifiedSample]:
    samples = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                samples.append(sample_from_obj(json.loads(line)))
    return samples


def write_samples(samples: Iterable[UnifiedSample], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(_dumps(sample_to_obj(sample)) + "\n")


def read_label_set(path: str | Path) -> LabelSet:
    with Path(path).open(encoding="utf-8") as fh:
        obj = json.load(fh)
    task = TaskKind(obj["task"])
    if task is TaskKind.EE:
        labels = [
            EventSchema(
                event_type=str(item["event_type"]),
                trigger=bool(item.get("trigger", True)),
                arguments=[str(a) for a in item.get("arguments", [])],
            )
            for item in obj["labels"]
        ]
    else:
        labels = [str(x) for x in obj["labels"]]
    return LabelSet(task=task, labels=labels)


def write_label_set(label_set: LabelSet, path: str | Path) -> None:
    if label_set.task is TaskKind.EE:
        labels = [schema.to_obj() for schema in label_set.labels]
    else:
        labels = list(label_set.labels)
    Path(path).write_text(
        _dumps({"task": label_set.task.value, "labels": labels}) + "\n", encoding="utf-8"
    )


def read_curated_dict(path: str | Path) -> dict[str, list[str]]:
    """Curated dictionary file: one object mapping label -> list of labels."""
    with Path(path).open(encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError(f"curated dictionary must be one object: {path}")
    return {str(k): [str(x) for x in v] for k, v in obj.items()}


def write_hard_neg_dict(hn_dict: HardNegativeDictionary, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(hn_dict.to_obj(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def write_corpus(instances: Sequence[InstructionInstance], path: str | Path) -> None:
    """Corpus file: one record per instance with exactly the two fields
    'instruction' and 'output', in canonical (sample_id, batch_index) order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sorted(instances, key=lambda i: (i.dataset_name, i.sample_id, i.batch_index))
    with path.open("w", encoding="utf-8") as fh:
        for inst in ordered:
            fh.write(_dumps({"instruction": inst.instruction_payload, "output": inst.output_payload}) + "\n")


def write_corpus_sidecar(instances: Sequence[InstructionInstance], path: str | Path) -> None:
    """Provenance sidecar keyed by (dataset, sample_id, batch_index), in the
    same canonical order as the corpus file."""
    path = Path(path)
    ordered = sorted(instances, key=lambda i: (i.dataset_name, i.sample_id, i.batch_index))
    with path.open("w", encoding="utf-8") as fh:
        for inst in ordered:
            fh.write(
                _dumps(
                    {
                        "dataset": inst.dataset_name,
                        "sample_id": inst.sample_id,
                        "batch_index": inst.batch_index,
                        "task": inst.task.value,
                        "language": inst.language,
                        "schema_batch": list(inst.schema_batch),
                    }
                )
                + "\n"
            )


def write_dataset_record(record: DatasetRecord, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(record.to_obj(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def write_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
