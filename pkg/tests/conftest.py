"""Shared fixtures: label sets, samples, and an on-disk pipeline workspace."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from ieforge import (
    EventAnnotation,
    EventSchema,
    GenerationConfig,
    LabelSet,
    RelationTriple,
    SimilarityConfig,
    TaskKind,
    UnifiedSample,
)

NER_TEXT_WAR = (
    "The objective of the Basic Course on War is to provide for combatants of the EPR "
    "basic military knowledge for the armed conflict against the police and military "
    "apparatus of the bourgeoisie."
)

RE_TEXT_BERTINI = (
    "Born on May 1 , 1927 , in Brichevo , Bessarabia in the present-day Republic of "
    "Moldova , Mr. Bertini emigrated to Palestine with his family as a child and pursued "
    "musical studies there , in Milan , and in Paris , where he worked with Nadia "
    "Boulanger and Arthur Honegger."
)

EE_TEXT_MARINELLO = "Ethical and legal issues in hiring Marinello"


def make_sample(task, annotations, text="An ordinary sentence about things.", sample_id="s1",
                dataset="fixture", split="train", language="en"):
    return UnifiedSample(
        sample_id=sample_id,
        dataset_name=dataset,
        split=split,
        language=language,
        task=task,
        text=text,
        annotations=annotations,
    )


@pytest.fixture
def ner4_labels():
    return LabelSet(TaskKind.NER, ["location", "else", "organization", "person"])


@pytest.fixture
def re4_labels():
    return LabelSet(
        TaskKind.RE,
        ["place of birth", "country capital", "country of administrative divisions", "company"],
    )


def event_schemas():
    return [
        EventSchema("pardon", True, ["defendant"]),
        EventSchema("extradite", True, ["person", "agent", "destination", "origin"]),
        EventSchema("sue", True, ["place", "plaintiff"]),
        EventSchema("start position", True, ["person", "entity", "place"]),
    ]


@pytest.fixture
def ee4_labels():
    return LabelSet(TaskKind.EE, event_schemas())


# --- the 48-label counting fixture -----------------------------------------

FIXTURE48_POSITIVES = ("organization", "person")
FIXTURE48_CURATED = {
    "organization": ["company", "agency"],
    "person": ["politician", "artist"],
}


def fixture48_label_set() -> LabelSet:
    named = ["organization", "person", "company", "agency", "politician", "artist"]
    fillers = [f"type_{i:02d}" for i in range(1, 43)]
    return LabelSet(TaskKind.NER, named + fillers)


def fixture48_sample(sample_id="war-0001") -> UnifiedSample:
    return make_sample(
        TaskKind.NER,
        {"person": ["Marie Curie"], "organization": ["Radium Institute"]},
        text="Marie Curie joined the Radium Institute in Paris.",
        sample_id=sample_id,
        dataset="press48",
    )


def fixture48_similarity() -> SimilarityConfig:
    return SimilarityConfig(mode="curated_only", curated_overrides=dict(FIXTURE48_CURATED))


def fixture48_generation(mode="hard_negative") -> GenerationConfig:
    return GenerationConfig(split_num={TaskKind.NER: 4, TaskKind.RE: 4, TaskKind.EE: 4}, mode=mode)


# --- on-disk workspace for the CLI and determinism tests --------------------


def _jsonl(path: Path, rows) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def ner18_label_names() -> list[str]:
    return [
        "person", "organization", "location", "facility", "product", "event",
        "work of art", "law", "language", "date", "time", "percent", "money",
        "quantity", "ordinal", "cardinal", "nationality", "building",
    ]


def write_workspace(root: Path, seed: int = 7) -> Path:
    """Write a two-dataset pipeline workspace (NER with 18 labels, EE with 4
    event types) and return the config path."""
    data = root / "data"
    data.mkdir(parents=True, exist_ok=True)

    (data / "newswire.labels.json").write_text(
        json.dumps({"task": "NER", "labels": ner18_label_names()}), encoding="utf-8"
    )
    newswire_train = [
        {
            "id": "nw-1", "dataset": "newswire", "split": "train", "language": "en", "task": "NER",
            "text": "Ada Lovelace wrote the first program at the Analytical Engine project in London.",
            "annotations": {"person": ["Ada Lovelace"], "organization": ["Analytical Engine project"], "location": ["London"]},
        },
        {
            "id": "nw-2", "dataset": "newswire", "split": "train", "language": "en", "task": "NER",
            "text": "The treaty was signed on Tuesday by delegates from twelve nations.",
            "annotations": {"date": ["Tuesday"], "cardinal": ["twelve"]},
        },
        {
            "id": "nw-3", "dataset": "newswire", "split": "train", "language": "en", "task": "NER",
            "text": "Prices rose three percent after the announcement from the central bank.",
            "annotations": {"percent": ["three percent"], "organization": ["central bank"]},
        },
        {
            "id": "nw-4", "dataset": "newswire", "split": "train", "language": "en", "task": "NER",
            "text": "A crowd gathered outside the old courthouse before noon.",
            "annotations": {"building": ["courthouse"], "time": ["noon"]},
        },
        {
            "id": "nw-5", "dataset": "newswire", "split": "train", "language": "en", "task": "NER",
            "text": "Nothing notable happened in the quiet village either day.",
            "annotations": {},
        },
    ]
    newswire_test = [
        {
            "id": "nw-t1", "dataset": "newswire", "split": "test", "language": "en", "task": "NER",
            "text": "The museum reopened in April with a new exhibition of sculpture.",
            "annotations": {"date": ["April"]},
        },
        {
            "id": "nw-t2", "dataset": "newswire", "split": "test", "language": "en", "task": "NER",
            "text": "Engineers tested the new bridge for two weeks.",
            "annotations": {"quantity": ["two weeks"]},
        },
    ]
    _jsonl(data / "newswire.train.jsonl", newswire_train)
    _jsonl(data / "newswire.test.jsonl", newswire_test)
    (data / "newswire.curated.json").write_text(
        json.dumps({"person": ["nationality"], "organization": ["building", "facility"]}),
        encoding="utf-8",
    )

    (data / "incidents.labels.json").write_text(
        json.dumps({"task": "EE", "labels": [s.to_obj() for s in event_schemas()]}),
        encoding="utf-8",
    )
    incidents_train = [
        {
            "id": "inc-1", "dataset": "incidents", "split": "train", "language": "en", "task": "EE",
            "text": EE_TEXT_MARINELLO,
            "annotations": [
                {"event_type": "start position", "trigger": "hiring",
                 "arguments": {"person": ["Marinello"]}}
            ],
        },
        {
            "id": "inc-2", "dataset": "incidents", "split": "train", "language": "en", "task": "EE",
            "text": "The firm sued the supplier in Geneva over late shipments.",
            "annotations": [
                {"event_type": "sue", "trigger": "sued",
                 "arguments": {"place": ["Geneva"], "plaintiff": ["The firm"]}}
            ],
        },
        {
            "id": "inc-3", "dataset": "incidents", "split": "train", "language": "en", "task": "EE",
            "text": "No proceedings of interest were reported this week.",
            "annotations": [],
        },
    ]
    incidents_test = [
        {
            "id": "inc-t1", "dataset": "incidents", "split": "test", "language": "en", "task": "EE",
            "text": "The governor pardoned the defendant after the appeal.",
            "annotations": [
                {"event_type": "pardon", "trigger": "pardoned",
                 "arguments": {"defendant": ["the defendant"]}}
            ],
        },
    ]
    _jsonl(data / "incidents.train.jsonl", incidents_train)
    _jsonl(data / "incidents.test.jsonl", incidents_test)

    config = {
        "seed": seed,
        "out_dir": "out",
        "generate_splits": ["train"],
        "generation": {"split_num": {"NER": 6, "EE": 4}},
        "similarity": {"mode": "lexical_plus_curated", "lexical_threshold": 0.5},
        "datasets": [
            {
                "name": "newswire",
                "domain": "news",
                "task": "NER",
                "language": "en",
                "adapter": {"kind": "unified"},
                "inputs": {"train": "data/newswire.train.jsonl", "test": "data/newswire.test.jsonl"},
                "label_set": "data/newswire.labels.json",
                "curated_dict": "data/newswire.curated.json",
            },
            {
                "name": "incidents",
                "domain": "legal",
                "task": "EE",
                "language": "en",
                "adapter": {"kind": "unified"},
                "inputs": {"train": "data/incidents.train.jsonl", "test": "data/incidents.test.jsonl"},
                "label_set": "data/incidents.labels.json",
            },
        ],
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return config_path


def write_dirty_workspace(root: Path) -> Path:
    """Workspace with planted cleaning defects: a cross-split leak, an
    inconsistent duplicate pair, a consistent duplicate pair, and one sample
    per quality rule."""
    data = root / "data"
    data.mkdir(parents=True, exist_ok=True)
    (data / "dirty.labels.json").write_text(
        json.dumps({"task": "NER", "labels": ["person", "organization"]}), encoding="utf-8"
    )
    leak_text = "This exact sentence appears in train and test splits."
    train = [
        {"id": "d-1", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "Grace Hopper explained the compiler to the visitors.",
         "annotations": {"person": ["Grace Hopper"]}},
        {"id": "d-2", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": leak_text, "annotations": {}},
        {"id": "d-3", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "An ambiguous sentence with conflicting labels.",
         "annotations": {"person": ["labels"]}},
        {"id": "d-4", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "An ambiguous sentence with conflicting labels.",
         "annotations": {"organization": ["labels"]}},
        {"id": "d-5", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "A repeated sentence with agreeing labels from two files.",
         "annotations": {"person": ["labels"]}},
        {"id": "d-6", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "A repeated sentence with agreeing labels from two files.",
         "annotations": {"person": ["labels"]}},
        {"id": "d-7", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "#### $$$$ !!", "annotations": {}},
        {"id": "d-8", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "hi", "annotations": {}},
        {"id": "d-9", "dataset": "dirty", "split": "train", "language": "en", "task": "NER",
         "text": "the to of the to", "annotations": {}},
    ]
    test = [
        {"id": "d-t1", "dataset": "dirty", "split": "test", "language": "en", "task": "NER",
         "text": leak_text, "annotations": {}},
    ]
    _jsonl(data / "dirty.train.jsonl", train)
    _jsonl(data / "dirty.test.jsonl", test)

    config = {
        "seed": 3,
        "out_dir": "out",
        "datasets": [
            {
                "name": "dirty",
                "domain": "synthetic",
                "task": "NER",
                "language": "en",
                "adapter": {"kind": "unified"},
                "inputs": {"train": "data/dirty.train.jsonl", "test": "data/dirty.test.jsonl"},
                "label_set": "data/dirty.labels.json",
            }
        ],
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return config_path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith("test_a"):
                continue
            criterion = name.split("_")[1].upper()
            verdict = "PASS" if status == "passed" else "FAIL"
            lines[criterion] = f"{criterion} {verdict}  {name}"
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for key in sorted(lines):
            terminalreporter.write_line("  " + lines[key])
