"""Dataset cleaning: within-split dedup, cross-split leakage removal, quality filters."""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field

from .model import UnifiedSample, annotation_key, has_annotations, normalize_text

REASON_INCONSISTENT_DUP = "inconsistent_duplicate"
REASON_CROSS_SPLIT_LEAK = "cross_split_leak"
REASON_NON_ALPHA = "rule_non_alpha"
REASON_SHORT_UNLABELED = "rule_short_unlabeled"
REASON_STOPWORD = "rule_stopword"
REASON_COLLAPSED = "consistent_duplicate_collapsed"

REMOVAL_REASONS = (
    REASON_INCONSISTENT_DUP,
    REASON_CROSS_SPLIT_LEAK,
    REASON_NON_ALPHA,
    REASON_SHORT_UNLABELED,
    REASON_STOPWORD,
)

DEFAULT_STOPWORDS_EN = frozenset(
    """
    the to of a an and or in on at by for with as is are was were be been being
    it its this that these those he she they we you i his her their our your my
    from but not no so if then than there here what which who whom will would
    can could shall should may might must do does did have has had
    """.split()
)


@dataclass
class CleaningConfig:
    non_alpha_threshold: float = 0.80
    min_text_chars: int = 5
    stopword_threshold: float = 0.80
    stopwords: dict[str, frozenset[str]] = field(
        default_factory=lambda: {"en": DEFAULT_STOPWORDS_EN}
    )
    keep_first_on_consistent_duplicate: bool = True

    def __post_init__(self) -> None:
        for name, value in (
            ("non_alpha_threshold", self.non_alpha_threshold),
            ("stopword_threshold", self.stopword_threshold),
        ):
            if not 0 < value <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        if self.min_text_chars < 1:
            raise ValueError(f"min_text_chars must be >= 1, got {self.min_text_chars}")

    def stopwords_for(self, language: str) -> frozenset[str]:
        return self.stopwords.get(language, frozenset())


@dataclass
class CleaningReport:
    """Removal counts plus a per-sample rejection log.

    Invariant: input count = output count + sum of removal counts + collapsed count.
    """

    counts: Counter = field(default_factory=Counter)
    rejections: list[tuple[str, str]] = field(default_factory=list)

    def record(self, sample_id: str, reason: str) -> None:
        self.counts[reason] += 1
        self.rejections.append((sample_id, reason))

    def merge(self, other: "CleaningReport") -> None:
        self.counts.update(other.counts)
        self.rejections.extend(other.rejections)

    @property
    def removed(self) -> int:
        return sum(self.counts[r] for r in REMOVAL_REASONS)

    @property
    def collapsed(self) -> int:
        return self.counts[REASON_COLLAPSED]

    def to_obj(self) -> dict:
        counts = {reason: self.counts.get(reason, 0) for reason in (*REMOVAL_REASONS, REASON_COLLAPSED)}
        return {
            "counts": counts,
            "rejections": [{"sample_id": sid, "reason": reason} for sid, reason in self.rejections],
        }


def dedup_within_split(
    samples: list[UnifiedSample], config: CleaningConfig | None = None
) -> tuple[list[UnifiedSample], CleaningReport]:
    """Resolve texts that occur more than once inside one split.

    Copies with unequal annotation sets are ALL removed; copies with equal
    annotations collapse to a single kept instance (the first, per config).
    Removal is decided by normalized-text equality only, never arrival order.
    """
    config = config or CleaningConfig()
    if samples:
        keys = {(s.dataset_name, s.split) for s in samples}
        if len(keys) > 1:
            raise ValueError(f"samples span multiple (dataset, split) groups: {sorted(keys)}")

    report = CleaningReport()
    groups: dict[str, list[UnifiedSample]] = {}
    for sample in samples:
        groups.setdefault(normalize_text(sample.text), []).append(sample)

    chosen: dict[str, UnifiedSample | None] = {}
    for text, members in groups.items():
        if len(members) == 1:
            chosen[text] = members[0]
            continue
        annotation_keys = {annotation_key(s) for s in members}
        if len(annotation_keys) > 1:
            chosen[text] = None
            for member in members:
                report.record(member.sample_id, REASON_INCONSISTENT_DUP)
        else:
            keep = members[0] if config.keep_first_on_consistent_duplicate else members[-1]
            chosen[text] = keep
            for member in members:
                if member is not keep:
                    report.record(member.sample_id, REASON_COLLAPSED)

    kept = [s for s in samples if chosen[normalize_text(s.text)] is s]
    return kept, report


def remove_cross_split_leakage(
    train: list[UnifiedSample],
    val: list[UnifiedSample],
    test: list[UnifiedSample],
) -> tuple[list[UnifiedSample], list[UnifiedSample], CleaningReport]:
    """Drop train/val samples whose normalized text also appears in test.

    The test split is never modified.
    """
    report = CleaningReport()
    test_texts = {normalize_text(s.text) for s in test}

    def sweep(samples: list[UnifiedSample]) -> list[UnifiedSample]:
        kept = []
        for sample in samples:
            if normalize_text(sample.text) in test_texts:
                report.record(sample.sample_id, REASON_CROSS_SPLIT_LEAK)
            else:
                kept.append(sample)
        return kept

    return sweep(train), sweep(val), report


def _is_letter(ch: str) -> bool:
    # Unicode letter category; CJK ideographs count as letters.
    return unicodedata.category(ch).startswith("L")


def non_letter_fraction(text: str) -> float:
    """Fraction of non-letter characters over non-whitespace characters.

    Empty denominator (whitespace-only or empty text) counts as 1.0: such
    text carries no letters at all.
    """
    chars = [ch for ch in text if not ch.isspace()]
    if not chars:
        return 1.0
    return sum(1 for ch in chars if not _is_letter(ch)) / len(chars)


def stopword_fraction(text: str, stopwords: frozenset[str]) -> float | None:
    """Stopword share of whitespace tokens, or None for unsegmented text.

    Text that whitespace-splits into fewer than two tokens (single words,
    unsegmented Chinese) has no meaningful token statistics; the caller
    skips the stopword rule for it. Tokens are matched after lowercasing
    and stripping surrounding non-letter characters.
    """
    tokens = text.split()
    if len(tokens) < 2:
        return None

    def norm(token: str) -> str:
        start, end = 0, len(token)
        while start < end and not _is_letter(token[start]):
            start += 1
        while end > start and not _is_letter(token[end - 1]):
            end -= 1
        return token[start:end].lower()

    return sum(1 for t in tokens if norm(t) in stopwords) / len(tokens)


def quality_filter(sample: UnifiedSample, config: CleaningConfig | None = None) -> str | None:
    """Apply the three heuristic quality rules; returns a rejection reason or None.

    Rejects iff:
      (a) non-letter fraction over non-whitespace characters exceeds the
          threshold (strictly; a sample at exactly the threshold is kept);
      (b) character count is below the minimum AND the sample is unlabeled;
      (c) stopword-token fraction exceeds the threshold (skipped for
          unsegmented text, see stopword_fraction).
    """
    config = config or CleaningConfig()
    text = sample.text
    if non_letter_fraction(text) > config.non_alpha_threshold:
        return REASON_NON_ALPHA
    if len(text) < config.min_text_chars and not has_annotations(sample):
        return REASON_SHORT_UNLABELED
    fraction = stopword_fraction(text, config.stopwords_for(sample.language))
    if fraction is not None and fraction > config.stopword_threshold:
        return REASON_STOPWORD
    return None


def clean_dataset(
    splits: dict[str, list[UnifiedSample]],
    config: CleaningConfig | None = None,
) -> tuple[dict[str, list[UnifiedSample]], CleaningReport]:
    """Full cleaning pipeline for one dataset, in the fixed order
    dedup -> cross-split leakage -> quality filter.

    Idempotent: re-running on its own output removes nothing.
    """
    config = config or CleaningConfig()
    report = CleaningReport()

    deduped: dict[str, list[UnifiedSample]] = {}
    for split, samples in splits.items():
        kept, delta = dedup_within_split(samples, config)
        report.merge(delta)
        deduped[split] = kept

    train, val, delta = remove_cross_split_leakage(
        deduped.get("train", []), deduped.get("val", []), deduped.get("test", [])
    )
    report.merge(delta)
    deduped["train"] = train
    deduped["val"] = val

    cleaned: dict[str, list[UnifiedSample]] = {}
    for split in splits:
        kept = []
        for sample in deduped.get(split, []):
            reason = quality_filter(sample, config)
            if reason is None:
                kept.append(sample)
            else:
                report.record(sample.sample_id, reason)
        cleaned[split] = kept
    return cleaned, report
