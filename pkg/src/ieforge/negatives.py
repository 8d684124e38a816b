"""Hard-negative schema dictionary construction and per-sample schema pools."""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .model import LabelSet, SchemaPartition, TaskKind, UnifiedSample, positive_labels

_SPLIT_TOKENS = re.compile(r"[\s_]+")

MODES = ("curated_only", "lexical", "lexical_plus_curated")


@dataclass
class SimilarityConfig:
    """How schema-name similarity is decided when building the dictionary.

    The lexical route ranks label names by token-overlap similarity; the
    curated route takes explicitly authored neighbor lists. The default
    unions both, with curated entries listed first.
    """

    mode: str = "lexical_plus_curated"
    lexical_threshold: float = 0.5
    max_neighbors_per_key: int = 5
    curated_overrides: dict[str, list[str]] | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown similarity mode: {self.mode!r}")
        if not 0 <= self.lexical_threshold <= 1:
            raise ConfigError(f"lexical_threshold must lie in [0, 1], got {self.lexical_threshold}")
        if self.max_neighbors_per_key < 0:
            raise ConfigError("max_neighbors_per_key must be >= 0")


@dataclass
class HardNegativeDictionary:
    """Maps each schema to the schemas semantically confusable with it.

    Keys and values all belong to one dataset's label set; a key never lists
    itself. Symmetry is not required.
    """

    task: TaskKind
    entries: dict[str, list[str]]

    def neighbors(self, label: str) -> list[str]:
        return self.entries.get(label, [])

    def to_obj(self) -> dict:
        return {"task": self.task.value, "entries": {k: list(v) for k, v in self.entries.items()}}


@dataclass(frozen=True)
class RngStream:
    """Deterministic per-sample random streams derived from one global seed.

    The same (seed, dataset, sample_id) always yields an identical sequence,
    independent of the order samples are processed in.
    """

    seed: int

    def for_sample(self, dataset_name: str, sample_id: str) -> random.Random:
        key = f"{self.seed}\x1f{dataset_name}\x1f{sample_id}".encode("utf-8")
        digest = hashlib.sha256(key).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))


def label_tokens(label: str) -> frozenset[str]:
    return frozenset(t for t in _SPLIT_TOKENS.split(label.lower()) if t)


def token_overlap(a: str, b: str) -> float:
    """Jaccard similarity of the lowercased, whitespace/underscore-split
    token sets of two label names."""
    ta, tb = label_tokens(a), label_tokens(b)
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


def build_hard_neg_dict(label_set: LabelSet, sim: SimilarityConfig | None = None) -> HardNegativeDictionary:
    """Build the dictionary of semantically similar schemas over a label set.

    Lexical neighbors are the other labels whose name similarity meets the
    threshold, best first (ties broken by label-set order), capped per key.
    Curated overrides are validated against the label set and take
    precedence. Deterministic given its inputs.
    """
    sim = sim or SimilarityConfig()
    names = label_set.label_names()
    known = set(names)

    curated = sim.curated_overrides or {}
    for key, values in curated.items():
        for label in (key, *values):
            if label not in known:
                raise ConfigError(f"curated override references unknown label: {label!r}")

    entries: dict[str, list[str]] = {}
    for name in names:
        neighbors: list[str] = []
        if sim.mode in ("curated_only", "lexical_plus_curated"):
            neighbors.extend(x for x in curated.get(name, []) if x != name)
        if sim.mode in ("lexical", "lexical_plus_curated"):
            scored = [
                (token_overlap(name, other), -index, other)
                for index, other in enumerate(names)
                if other != name
            ]
            ranked = [
                other
                for score, _, other in sorted(scored, reverse=True)
                if score >= sim.lexical_threshold
            ][: sim.max_neighbors_per_key]
            neighbors.extend(x for x in ranked if x not in neighbors)
        entries[name] = neighbors
    return HardNegativeDictionary(task=label_set.task, entries=entries)


def assemble_schema_pool(
    sample: UnifiedSample,
    label_set: LabelSet,
    hard_neg_dict: HardNegativeDictionary,
    split_num: int,
    rng: RngStream,
) -> SchemaPartition:
    """Assemble one sample's schema pool: positives, their dictionary
    neighbors, and a small uniform sample of the remaining labels, shuffled.

    The sampled-other size is exactly min(split_num, |others|). Positives
    are always included, so no gold annotation can be dropped. Deterministic
    for a fixed stream seed regardless of processing order.
    """
    if split_num < 1:
        raise ValueError(f"split_num must be >= 1, got {split_num}")
    names = label_set.label_names()
    positive = positive_labels(sample)

    order = {name: i for i, name in enumerate(names)}
    hard: set[str] = set()
    for label in sorted(positive, key=order.__getitem__):
        hard.update(hard_neg_dict.neighbors(label))
    hard -= positive

    others = [n for n in names if n not in positive and n not in hard]
    sample_rng = rng.for_sample(sample.dataset_name, sample.sample_id)
    sampled = sample_rng.sample(others, min(split_num, len(others)))

    pool = [n for n in names if n in positive] + [n for n in names if n in hard] + sampled
    sample_rng.shuffle(pool)
    return SchemaPartition(
        positive=frozenset(positive),
        hard_negative=frozenset(hard),
        other_negative_sampled=frozenset(sampled),
        pool=tuple(pool),
    )
