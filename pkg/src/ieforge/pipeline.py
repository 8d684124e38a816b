"""Config loading and stage orchestration for the command-line pipeline."""

from __future__ import annotations

import json
import logging
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus_io
from .adapters import AdapterSpec, read_raw_records, unify
from .cleaning import CleaningConfig, CleaningReport, clean_dataset
from .errors import ConfigError
from .generation import (
    MODE_HARD_NEGATIVE,
    MODE_TRADITIONAL,
    GenerationConfig,
    build_dataset_record,
    generate_instances,
)
from .model import SPLITS, InstructionInstance, TaskKind, UnifiedSample
from .negatives import RngStream, SimilarityConfig, build_hard_neg_dict

log = logging.getLogger(__name__)


@dataclass
class DatasetEntry:
    name: str
    domain: str
    task: TaskKind
    language: str
    adapter: AdapterSpec
    inputs: dict[str, Path]
    label_set_path: Path
    curated_dict_path: Path | None = None


@dataclass
class PipelineConfig:
    seed: int
    out_dir: Path
    datasets: list[DatasetEntry]
    cleaning: CleaningConfig = field(default_factory=CleaningConfig)
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    generate_splits: tuple[str, ...] = ("train",)


def _resolve(base: Path, value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else base / path


def load_config(path: str | Path) -> PipelineConfig:
    """Load and validate the declarative pipeline config (JSON).

    Relative paths are resolved against the config file's directory.
    """
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    base = path.parent

    try:
        cleaning_obj = dict(obj.get("cleaning", {}))
        stopwords = cleaning_obj.pop("stopwords", None)
        cleaning = CleaningConfig(**cleaning_obj)
        if stopwords:
            for language, words in stopwords.items():
                cleaning.stopwords[language] = frozenset(words)

        similarity = SimilarityConfig(**obj.get("similarity", {}))

        generation_obj = dict(obj.get("generation", {}))
        split_num_obj = generation_obj.pop("split_num", {})
        template_rows = generation_obj.pop("templates", [])
        generation = GenerationConfig(**generation_obj)
        for task_name, value in split_num_obj.items():
            generation.split_num[TaskKind(task_name)] = int(value)
        for row in template_rows:
            generation.templates[(TaskKind(row["task"]), str(row["language"]))] = str(row["text"])

        datasets = []
        for item in obj.get("datasets", []):
            task = TaskKind(item["task"])
            adapter_obj = dict(item.get("adapter", {"kind": "unified"}))
            adapter_obj.setdefault("kind", "unified")
            adapter = AdapterSpec(
                kind=adapter_obj["kind"],
                task=task,
                language=str(item.get("language", "en")),
                fields=adapter_obj.get("fields", {}),
                label_map=adapter_obj.get("label_map", {}),
            )
            inputs = {}
            for split, p in item.get("inputs", {}).items():
                if split not in SPLITS:
                    raise ConfigError(f"dataset {item.get('name')}: unknown split {split!r}")
                inputs[split] = _resolve(base, p)
            datasets.append(
                DatasetEntry(
                    name=str(item["name"]),
                    domain=str(item.get("domain", "")),
                    task=task,
                    language=str(item.get("language", "en")),
                    adapter=adapter,
                    inputs=inputs,
                    label_set_path=_resolve(base, item["label_set"]),
                    curated_dict_path=(
                        _resolve(base, item["curated_dict"]) if item.get("curated_dict") else None
                    ),
                )
            )
        if not datasets:
            raise ConfigError("config lists no datasets")

        return PipelineConfig(
            seed=int(obj.get("seed", 0)),
            out_dir=_resolve(base, str(obj.get("out_dir", "out"))),
            datasets=datasets,
            cleaning=cleaning,
            similarity=similarity,
            generation=generation,
            generate_splits=tuple(obj.get("generate_splits", ["train"])),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc


@dataclass
class DatasetResult:
    name: str
    samples_in: int
    samples_out: int
    instances: int
    tokens: int
    report: CleaningReport


def _ingest(entry: DatasetEntry, label_set) -> tuple[dict[str, list[UnifiedSample]], int, dict[str, int]]:
    splits: dict[str, list[UnifiedSample]] = {}
    total_in = 0
    skipped: dict[str, int] = {}
    for split, path in entry.inputs.items():
        records = read_raw_records(path, entry.adapter)
        samples, skips = unify(records, entry.adapter, entry.name, split, label_set)
        total_in += len(samples) + len(skips)
        skipped[split] = len(skips)
        splits[split] = samples
    return splits, total_in, skipped


def process_dataset(
    entry: DatasetEntry,
    config: PipelineConfig,
    rng: RngStream,
    generate: bool,
) -> DatasetResult:
    """Run ingest -> clean -> (dict -> generate ->) record for one dataset,
    writing all of its artifacts under out_dir/<name>/."""
    out = config.out_dir / entry.name
    out.mkdir(parents=True, exist_ok=True)
    try:
        label_set = corpus_io.read_label_set(entry.label_set_path)
        if label_set.task is not entry.task:
            raise ConfigError(
                f"dataset {entry.name}: label set task {label_set.task.value} "
                f"does not match configured task {entry.task.value}"
            )

        splits, total_in, skipped = _ingest(entry, label_set)
        cleaned, report = clean_dataset(splits, config.cleaning)
        for split, samples in cleaned.items():
            corpus_io.write_samples(samples, out / f"cleaned.{split}.jsonl")
        corpus_io.write_json(
            {**report.to_obj(), "skipped_at_ingest": skipped}, out / "cleaning_report.json"
        )

        instances: list[InstructionInstance] = []
        generated_samples: list[UnifiedSample] = []
        if generate:
            similarity = config.similarity
            if entry.curated_dict_path is not None:
                curated = corpus_io.read_curated_dict(entry.curated_dict_path)
                similarity = SimilarityConfig(
                    mode=similarity.mode,
                    lexical_threshold=similarity.lexical_threshold,
                    max_neighbors_per_key=similarity.max_neighbors_per_key,
                    curated_overrides=curated,
                )
            hn_dict = build_hard_neg_dict(label_set, similarity)
            corpus_io.write_hard_neg_dict(hn_dict, out / "hard_negative_dict.json")

            for split in config.generate_splits:
                split_samples = cleaned.get(split, [])
                generated_samples.extend(split_samples)
                split_instances: list[InstructionInstance] = []
                for sample in split_samples:
                    split_instances.extend(
                        generate_instances(sample, label_set, hn_dict, config.generation, rng)
                    )
                corpus_io.write_corpus(split_instances, out / f"corpus.{split}.jsonl")
                corpus_io.write_corpus_sidecar(split_instances, out / f"corpus.{split}.meta.jsonl")
                instances.extend(split_instances)

        all_cleaned = [s for samples in cleaned.values() for s in samples]
        record = build_dataset_record(
            entry.name,
            label_set,
            all_cleaned,
            instances,
            config.generation,
            domain=entry.domain,
        )
        corpus_io.write_dataset_record(record, out / "record.json")

        from . import figures

        figures.plot_cleaning_report(report, entry.name, out / "cleaning_report.png")
        if generate:
            figures.plot_batch_size_histogram(record, out / "batch_size_histogram.png")

        return DatasetResult(
            name=entry.name,
            samples_in=total_in,
            samples_out=len(all_cleaned),
            instances=len(instances),
            tokens=record.token_count,
            report=report,
        )
    except Exception:
        # Never leave partial artifacts behind for a failed dataset.
        shutil.rmtree(out, ignore_errors=True)
        raise


def run_pipeline(
    config: PipelineConfig,
    generate: bool,
    dataset_filter: set[str] | None = None,
) -> list[DatasetResult]:
    entries = config.datasets
    if dataset_filter:
        unknown = dataset_filter - {e.name for e in entries}
        if unknown:
            raise ConfigError(f"unknown dataset names in filter: {sorted(unknown)}")
        entries = [e for e in entries if e.name in dataset_filter]

    rng = RngStream(config.seed)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    for entry in entries:
        log.info("processing dataset %s", entry.name)
        results.append(process_dataset(entry, config, rng, generate))

    summary = {
        "seed": config.seed,
        "mode": config.generation.mode if generate else "audit",
        "datasets": [
            {
                "name": r.name,
                "samples_in": r.samples_in,
                "samples_out": r.samples_out,
                "instances": r.instances,
                "tokens": r.tokens,
            }
            for r in results
        ],
    }
    corpus_io.write_json(summary, config.out_dir / ("build_summary.json" if generate else "audit_summary.json"))
    return results


__all__ = [
    "DatasetEntry",
    "DatasetResult",
    "PipelineConfig",
    "load_config",
    "process_dataset",
    "run_pipeline",
    "MODE_HARD_NEGATIVE",
    "MODE_TRADITIONAL",
]
