"""Parse model completions into extraction tuples and score span-based micro-F1."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .errors import AlignmentError, ManifestError
from .model import (
    FACETS_BY_TASK,
    NAN,
    EventSchema,
    ExtractionTuple,
    ScoreReport,
    TaskKind,
    UnifiedSample,
    normalize_text,
)

PARSE_CLEAN = "clean"
PARSE_RECOVERED = "recovered"
PARSE_FAILED = "failed"


@dataclass(frozen=True)
class ParseOutcome:
    tuples: frozenset[ExtractionTuple]
    parse_status: str
    diagnostics: tuple[str, ...] = ()


def extract_json_object(text: str) -> str | None:
    """Pull the outermost {...} region out of surrounding prose or code fences.

    Scans for the brace that matches the first opening brace, honoring string
    literals and escapes. Returns None when no balanced object exists.
    """
    start = text.find("{")
    if start < 0:
        return None
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if escaped:
            escaped = False
            continue
        if ch == "\\" and in_string:
            escaped = True
            continue
        if ch == '"':
            in_string = not in_string
            continue
        if in_string:
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
    return None


def _clean_part(value: Any) -> str | None:
    """Normalize one tuple component; None when empty or the NAN sentinel."""
    if value is None:
        return None
    text = normalize_text(str(value))
    if not text or text == NAN:
        return None
    return text


def _as_list(value: Any) -> list:
    if isinstance(value, list):
        return value
    if value is None:
        return []
    return [value]


def tuples_from_output(
    task: TaskKind,
    obj: Mapping[str, Any],
    queried: set[str] | None,
    diagnostics: list[str],
) -> set[ExtractionTuple]:
    """Extract facet-tagged tuples from a parsed output object.

    Labels outside the queried set are discarded (and noted in diagnostics);
    NAN values and empty lists contribute nothing. Tolerant of shape noise:
    malformed items are skipped with a diagnostic, never fatal.
    """
    tuples: set[ExtractionTuple] = set()
    for raw_label, value in obj.items():
        label = _clean_part(raw_label)
        if label is None:
            continue
        if queried is not None and label not in queried:
            diagnostics.append(f"label not queried: {label!r}")
            continue
        if task is TaskKind.NER:
            for mention in _as_list(value):
                part = _clean_part(mention)
                if part is not None:
                    tuples.add(ExtractionTuple("ner", (label, part)))
        elif task is TaskKind.RE:
            for item in _as_list(value):
                if not isinstance(item, Mapping):
                    diagnostics.append(f"malformed triple under {label!r}: {item!r}")
                    continue
                head = _clean_part(item.get("head"))
                tail = _clean_part(item.get("tail"))
                if head is None or tail is None:
                    diagnostics.append(f"incomplete triple under {label!r}: {item!r}")
                    continue
                tuples.add(ExtractionTuple("re", (label, head, tail)))
        else:
            for item in _as_list(value):
                if not isinstance(item, Mapping):
                    diagnostics.append(f"malformed event under {label!r}: {item!r}")
                    continue
                trigger = _clean_part(item.get("trigger"))
                if trigger is not None:
                    tuples.add(ExtractionTuple("trigger", (label, trigger)))
                arguments = item.get("arguments")
                if arguments is None:
                    continue
                if not isinstance(arguments, Mapping):
                    diagnostics.append(f"malformed arguments under {label!r}: {arguments!r}")
                    continue
                for raw_role, values in arguments.items():
                    role = _clean_part(raw_role)
                    if role is None:
                        continue
                    for v in _as_list(values):
                        part = _clean_part(v)
                        if part is not None:
                            tuples.add(ExtractionTuple("argument", (label, role, part)))
    return tuples


def _queried_names(queried_schemas: Sequence[str] | Sequence[EventSchema] | None) -> set[str] | None:
    if queried_schemas is None:
        return None
    names = set()
    for item in queried_schemas:
        name = item.event_type if isinstance(item, EventSchema) else item
        names.add(normalize_text(name))
    return names


def parse_prediction(
    task: TaskKind,
    queried_schemas: Sequence[str] | Sequence[EventSchema] | None,
    raw: str,
) -> ParseOutcome:
    """Parse one model completion into scoreable tuples.

    A strict parse of a well-formed object is 'clean'; otherwise the
    outermost {...} region is extracted and re-parsed ('recovered');
    anything else is 'failed' with an empty tuple set.
    """
    queried = _queried_names(queried_schemas)
    status = PARSE_CLEAN
    obj: Any = None
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, TypeError):
        obj = None
    if not isinstance(obj, dict):
        status = PARSE_RECOVERED
        region = extract_json_object(raw or "")
        if region is not None:
            try:
                obj = json.loads(region)
            except json.JSONDecodeError:
                obj = None
        if not isinstance(obj, dict):
            return ParseOutcome(frozenset(), PARSE_FAILED, ("no parseable object",))

    diagnostics: list[str] = []
    tuples = tuples_from_output(task, obj, queried, diagnostics)
    return ParseOutcome(frozenset(tuples), status, tuple(diagnostics))


def tuples_of_gold(task: TaskKind, sample: UnifiedSample, facet: str) -> set[ExtractionTuple]:
    """Gold extraction tuples for one facet of one validated sample."""
    tuples: set[ExtractionTuple] = set()
    if task is TaskKind.NER:
        if facet != "ner":
            raise ValueError(f"unknown NER facet: {facet!r}")
        for label, mentions in sample.annotations.items():
            key = _clean_part(label)
            for mention in mentions:
                part = _clean_part(mention)
                if key is not None and part is not None:
                    tuples.add(ExtractionTuple("ner", (key, part)))
    elif task is TaskKind.RE:
        if facet != "re":
            raise ValueError(f"unknown RE facet: {facet!r}")
        for triple in sample.annotations:
            parts = (_clean_part(triple.relation), _clean_part(triple.head), _clean_part(triple.tail))
            if all(p is not None for p in parts):
                tuples.add(ExtractionTuple("re", parts))
    else:
        if facet not in ("trigger", "argument"):
            raise ValueError(f"unknown EE facet: {facet!r}")
        for event in sample.annotations:
            etype = _clean_part(event.event_type)
            if etype is None:
                continue
            if facet == "trigger":
                trigger = _clean_part(event.trigger)
                if trigger is not None:
                    tuples.add(ExtractionTuple("trigger", (etype, trigger)))
            else:
                for role, values in event.arguments.items():
                    role_part = _clean_part(role)
                    if role_part is None:
                        continue
                    for value in values:
                        part = _clean_part(value)
                        if part is not None:
                            tuples.add(ExtractionTuple("argument", (etype, role_part, part)))
    return tuples


def micro_f1(
    gold_sets: Mapping[str, set[ExtractionTuple]],
    pred_sets: Mapping[str, set[ExtractionTuple]],
) -> ScoreReport:
    """Span-based micro-F1 over per-sample tuple sets aligned by sample id.

    Counts are pooled globally: tp = sum |gold & pred|, fp = sum |pred - gold|,
    fn = sum |gold - pred|. Samples without a prediction count as empty.
    """
    unknown = set(pred_sets) - set(gold_sets)
    if unknown:
        raise AlignmentError(f"predictions reference unknown sample ids: {sorted(unknown)[:5]}")
    tp = fp = fn = 0
    for sample_id, gold in gold_sets.items():
        pred = pred_sets.get(sample_id, set())
        tp += len(gold & pred)
        fp += len(pred - gold)
        fn += len(gold - pred)
    return ScoreReport.from_counts(tp, fp, fn)


@dataclass
class ManifestEntry:
    name: str
    task: TaskKind
    gold_path: Path
    pred_path: Path
    facets: tuple[str, ...]
    label_set_path: Path | None = None


@dataclass
class EvalManifest:
    benchmark: str
    entries: list[ManifestEntry]

    @classmethod
    def from_obj(cls, obj: dict, base_dir: Path | None = None) -> "EvalManifest":
        base = base_dir or Path(".")

        def resolve(p: str) -> Path:
            path = Path(p)
            return path if path.is_absolute() else base / path

        entries = []
        for item in obj.get("datasets", []):
            try:
                task = TaskKind(item["task"])
                entry = ManifestEntry(
                    name=str(item["name"]),
                    task=task,
                    gold_path=resolve(item["gold"]),
                    pred_path=resolve(item["predictions"]),
                    facets=tuple(item.get("facets", FACETS_BY_TASK[task])),
                    label_set_path=resolve(item["label_set"]) if item.get("label_set") else None,
                )
            except (KeyError, ValueError) as exc:
                raise ManifestError(f"invalid manifest entry {item!r}: {exc}") from exc
            for facet in entry.facets:
                if facet not in FACETS_BY_TASK[task]:
                    raise ManifestError(f"facet {facet!r} does not apply to task {task.value}")
            entries.append(entry)
        if not entries:
            raise ManifestError("manifest lists no datasets")
        return cls(benchmark=str(obj.get("benchmark", "benchmark")), entries=entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "EvalManifest":
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            obj = json.load(fh)
        return cls.from_obj(obj, base_dir=path.parent)


def read_predictions(path: Path) -> dict[str, list[str]]:
    """Load prediction records {sample_id, batch_index, completion}, grouped
    by sample id with completions in batch_index order."""
    rows: list[tuple[str, int, str]] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                rows.append((str(obj["sample_id"]), int(obj.get("batch_index", 0)), str(obj["completion"])))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ManifestError(f"bad prediction record at {path}:{line_no + 1}: {exc}") from exc
    grouped: dict[str, list[tuple[int, str]]] = {}
    for sample_id, batch_index, completion in rows:
        grouped.setdefault(sample_id, []).append((batch_index, completion))
    return {sid: [c for _, c in sorted(items)] for sid, items in grouped.items()}


def evaluate_dataset(
    entry: ManifestEntry,
    samples: Sequence[UnifiedSample],
    predictions: Mapping[str, Iterable[str]],
    queried: set[str] | None,
) -> dict:
    """Score one dataset: per-facet reports plus parse-status counts."""
    known_ids = {s.sample_id for s in samples}
    unknown = set(predictions) - known_ids
    if unknown:
        raise AlignmentError(
            f"{entry.name}: predictions reference unknown sample ids: {sorted(unknown)[:5]}"
        )

    outcomes: dict[str, list[ParseOutcome]] = {
        sid: [parse_prediction(entry.task, None, raw) for raw in raws]
        for sid, raws in predictions.items()
    }
    status_counts = {PARSE_CLEAN: 0, PARSE_RECOVERED: 0, PARSE_FAILED: 0}
    for results in outcomes.values():
        for outcome in results:
            status_counts[outcome.parse_status] += 1

    reports: dict[str, ScoreReport] = {}
    for facet in entry.facets:
        gold_sets = {s.sample_id: tuples_of_gold(entry.task, s, facet) for s in samples}
        pred_sets: dict[str, set[ExtractionTuple]] = {}
        for sid, results in outcomes.items():
            merged: set[ExtractionTuple] = set()
            for outcome in results:
                for t in outcome.tuples:
                    if t.facet != facet:
                        continue
                    if queried is not None and t.parts[0] not in queried:
                        continue
                    merged.add(t)
            pred_sets[sid] = merged
        reports[facet] = micro_f1(gold_sets, pred_sets)
    return {"facets": reports, "parse_status": status_counts}


def run_manifest(manifest: EvalManifest) -> dict:
    """Evaluate every dataset in a manifest and aggregate per-task averages.

    The Avg block holds the unweighted mean of per-dataset F1 within each
    (task, facet) group. Missing or unreadable files abort the run; no
    partial report is produced.
    """
    from .corpus_io import read_label_set, read_samples

    for entry in manifest.entries:
        for path in (entry.gold_path, entry.pred_path, entry.label_set_path):
            if path is not None and not Path(path).is_file():
                raise ManifestError(f"{entry.name}: missing file {path}")

    per_dataset: dict[str, dict] = {}
    groups: dict[tuple[str, str], list[float]] = {}
    for entry in manifest.entries:
        samples = read_samples(entry.gold_path)
        queried = None
        if entry.label_set_path is not None:
            label_set = read_label_set(entry.label_set_path)
            queried = {normalize_text(n) for n in label_set.label_names()}
        predictions = read_predictions(entry.pred_path)
        result = evaluate_dataset(entry, samples, predictions, queried)
        per_dataset[entry.name] = {"task": entry.task.value, **result}
        for facet, report in result["facets"].items():
            groups.setdefault((entry.task.value, facet), []).append(report.f1)

    averages = {
        f"{task}:{facet}": sum(values) / len(values) for (task, facet), values in groups.items()
    }
    return {"benchmark": manifest.benchmark, "datasets": per_dataset, "avg": averages}
