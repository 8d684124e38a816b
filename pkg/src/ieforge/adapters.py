"""Adapters that unify raw dataset records into UnifiedSamples."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import AdapterError
from .model import (
    EventAnnotation,
    LabelSet,
    RelationTriple,
    TaskKind,
    UnifiedSample,
    normalize_text,
    validate_sample,
)

log = logging.getLogger(__name__)


@dataclass
class AdapterSpec:
    """Declarative description of how raw records map into the unified shape.

    kind "unified": records already are interchange objects
                    {id, dataset, split, language, task, text, annotations}.
    kind "jsonl":   arbitrary one-object-per-line records; `fields` names the
                    paths (dot-separated) of id, text and annotations.
    kind "conll":   token/tag row blocks with BIO tags, NER only.
    """

    kind: str
    task: TaskKind
    language: str
    fields: dict[str, str] = field(default_factory=dict)
    label_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ("unified", "jsonl", "conll"):
            raise AdapterError(f"unknown adapter kind: {self.kind!r}")
        if self.kind == "conll" and self.task is not TaskKind.NER:
            raise AdapterError("conll adapter only supports NER")


def read_raw_records(path: str | Path, adapter: AdapterSpec) -> Iterator[Any]:
    """Yield adapter-specific raw records from a file.

    For line-delimited kinds each record is the raw line (parsing happens in
    unify so malformed lines are skipped, not fatal); for conll each record
    is one sentence block of (token, tag) rows.
    """
    path = Path(path)
    if adapter.kind in ("unified", "jsonl"):
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield line
    else:
        block: list[tuple[str, str]] = []
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line.strip():
                    if block:
                        yield block
                        block = []
                    continue
                parts = line.split()
                tag = parts[-1] if len(parts) > 1 else "O"
                block.append((parts[0], tag))
        if block:
            yield block


def annotations_from_obj(task: TaskKind, obj: Any):
    """Parse interchange-shaped annotations for one task kind."""
    if task is TaskKind.NER:
        if not isinstance(obj, dict):
            raise AdapterError("NER annotations must be an object mapping type -> mentions")
        out: dict[str, list[str]] = {}
        for label, mentions in obj.items():
            if isinstance(mentions, str):
                mentions = [mentions]
            if not isinstance(mentions, list):
                raise AdapterError(f"mentions for {label!r} must be a list")
            seen: set[str] = set()
            kept = []
            for mention in mentions:
                key = normalize_text(str(mention))
                if key not in seen:  # duplicate (type, mention) pairs collapse
                    seen.add(key)
                    kept.append(str(mention))
            out[str(label)] = kept
        return out
    if task is TaskKind.RE:
        if not isinstance(obj, list):
            raise AdapterError("RE annotations must be a list of triples")
        triples = []
        for item in obj:
            try:
                triples.append(
                    RelationTriple(str(item["relation"]), str(item["head"]), str(item["tail"]))
                )
            except (TypeError, KeyError) as exc:
                raise AdapterError(f"malformed relation triple: {item!r}") from exc
        return triples
    if not isinstance(obj, list):
        raise AdapterError("EE annotations must be a list of events")
    events = []
    for item in obj:
        if not isinstance(item, dict) or "event_type" not in item:
            raise AdapterError(f"malformed event: {item!r}")
        arguments: dict[str, list[str]] = {}
        for role, values in (item.get("arguments") or {}).items():
            if isinstance(values, (str, int, float)):
                values = [values]
            arguments[str(role)] = [str(v) for v in values]
        events.append(
            EventAnnotation(
                event_type=str(item["event_type"]),
                trigger=str(item.get("trigger", "")),
                arguments=arguments,
            )
        )
    return events


def annotations_to_obj(sample: UnifiedSample) -> Any:
    if sample.task is TaskKind.NER:
        return {label: list(mentions) for label, mentions in sample.annotations.items()}
    if sample.task is TaskKind.RE:
        return [{"relation": t.relation, "head": t.head, "tail": t.tail} for t in sample.annotations]
    return [
        {
            "event_type": e.event_type,
            "trigger": e.trigger,
            "arguments": {role: list(values) for role, values in e.arguments.items()},
        }
        for e in sample.annotations
    ]


def _dig(obj: Any, path: str) -> Any:
    for key in path.split("."):
        if not isinstance(obj, dict) or key not in obj:
            raise AdapterError(f"missing field {path!r}")
        obj = obj[key]
    return obj


def _decode_bio(rows: list[tuple[str, str]], label_map: dict[str, str]) -> tuple[str, dict[str, list[str]]]:
    """Space-join tokens into text and decode BIO tags into type -> mentions."""
    text = " ".join(token for token, _ in rows)
    mentions: dict[str, list[str]] = {}
    current_type: str | None = None
    current_tokens: list[str] = []

    def flush() -> None:
        nonlocal current_type, current_tokens
        if current_type is not None and current_tokens:
            mention = " ".join(current_tokens)
            bucket = mentions.setdefault(current_type, [])
            if all(normalize_text(m) != normalize_text(mention) for m in bucket):
                bucket.append(mention)
        current_type, current_tokens = None, []

    for token, tag in rows:
        if tag == "O" or not tag:
            flush()
            continue
        if "-" in tag:
            prefix, _, raw_type = tag.partition("-")
        else:
            prefix, raw_type = "B", tag
        entity_type = label_map.get(raw_type, raw_type)
        if prefix == "B" or entity_type != current_type:
            flush()
            current_type = entity_type
        current_tokens.append(token)
    flush()
    return text, mentions


def unify(
    raw_records: Iterable[Any],
    adapter: AdapterSpec,
    dataset_name: str,
    split: str,
    label_set: LabelSet | None = None,
) -> tuple[list[UnifiedSample], list[tuple[int, str]]]:
    """Map raw records into UnifiedSamples, preserving input order.

    Unmappable records (and, when a label set is given, samples that fail
    validation) are skipped and logged with their record index; they are
    returned alongside the samples so callers can report them.
    """
    samples: list[UnifiedSample] = []
    skipped: list[tuple[int, str]] = []

    for index, record in enumerate(raw_records):
        try:
            if adapter.kind == "conll":
                text, mentions = _decode_bio(record, adapter.label_map)
                sample = UnifiedSample(
                    sample_id=f"{dataset_name}-{split}-{index}",
                    dataset_name=dataset_name,
                    split=split,
                    language=adapter.language,
                    task=adapter.task,
                    text=text,
                    annotations=mentions,
                )
            else:
                obj = json.loads(record) if isinstance(record, str) else record
                if not isinstance(obj, dict):
                    raise AdapterError("record is not an object")
                if adapter.kind == "unified":
                    if "text" not in obj:
                        raise AdapterError("missing field 'text'")
                    task = TaskKind(obj.get("task", adapter.task))
                    sample = UnifiedSample(
                        sample_id=str(obj.get("id", f"{dataset_name}-{split}-{index}")),
                        dataset_name=str(obj.get("dataset", dataset_name)),
                        split=str(obj.get("split", split)),
                        language=str(obj.get("language", adapter.language)),
                        task=task,
                        text=str(obj["text"]),
                        annotations=annotations_from_obj(task, obj.get("annotations") or _empty(task)),
                    )
                else:
                    fields = adapter.fields
                    text = str(_dig(obj, fields.get("text", "text")))
                    ann_path = fields.get("annotations")
                    raw_ann = _dig(obj, ann_path) if ann_path else _empty(adapter.task)
                    id_path = fields.get("id")
                    sample_id = str(_dig(obj, id_path)) if id_path else f"{dataset_name}-{split}-{index}"
                    sample = UnifiedSample(
                        sample_id=sample_id,
                        dataset_name=dataset_name,
                        split=split,
                        language=adapter.language,
                        task=adapter.task,
                        text=text,
                        annotations=annotations_from_obj(adapter.task, raw_ann),
                    )
            if label_set is not None:
                violations = validate_sample(sample, label_set)
                if violations:
                    raise AdapterError("; ".join(violations))
        except (ValueError, KeyError) as exc:
            log.warning("skipping record %d of %s/%s: %s", index, dataset_name, split, exc)
            skipped.append((index, str(exc)))
            continue
        samples.append(sample)
    return samples, skipped


def _empty(task: TaskKind):
    return {} if task is TaskKind.NER else []
