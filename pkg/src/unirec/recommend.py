"""Ranking universities against a user's interest distribution.

A university scores by the mean log-probability of its features under
the user's smoothed multinomial, so records with missing attributes are
not penalized for having fewer features. Everything here is pure over
immutable snapshots; ties always break by name ascending.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .features import (
    Feature,
    STOPWORDS,
    _tokens,
    build_lexicon,
    university_features,
    vocabulary,
)
from .profile import UserProfile, interest_distribution, profile_vocabulary
from .schema import Dataset, EMPHASIS_ATTRIBUTES, SchemaError, UniversityProfile

log = logging.getLogger(__name__)

UNKNOWN_CLASS = "unknown"


@dataclass(frozen=True)
class Recommendation:
    name: str
    score: float
    matched_features: tuple[tuple[Feature, float], ...] = ()
    class_labels: dict[str, str] = field(default_factory=dict)


def score(profile: UserProfile, record: UniversityProfile, vocab: set[Feature], alpha: float = 1.0) -> float:
    """Mean log-probability of the record's features; strictly negative."""
    theta = interest_distribution(profile, vocab, alpha)
    return _score_features(theta, university_features(record))


def _score_features(theta: dict[Feature, float], features: set[Feature]) -> float:
    if not features:
        raise ValueError("cannot score a record with no features")
    return sum(math.log(theta[f]) for f in features) / len(features)


def _class_labels(record: UniversityProfile, dataset: Dataset) -> dict[str, str]:
    labels = {}
    state = record.values.get("state")
    if state:
        labels["state"] = str(state)
    for attr in dataset.schema.attributes:
        if attr.kind != "nominal" or attr.name in EMPHASIS_ATTRIBUTES:
            continue
        value = record.values.get(attr.name)
        if value is not None:
            labels[attr.name] = str(value)
    return labels


def _recommendation(
    record: UniversityProfile, theta: dict[Feature, float], profile: UserProfile, dataset: Dataset
) -> Recommendation | None:
    features = university_features(record, dataset.schema)
    if not features:
        log.warning("record %s has no features and is excluded from ranking", record.name)
        return None
    matched = [(f, theta[f]) for f in features if profile.counts.get(f, 0.0) > 0.0]
    matched.sort(key=lambda item: (-item[1], item[0].key))
    return Recommendation(
        name=record.name,
        score=_score_features(theta, features),
        matched_features=tuple(matched),
        class_labels=_class_labels(record, dataset),
    )


def _ranked(profile: UserProfile, dataset: Dataset, alpha: float) -> list[Recommendation]:
    if not dataset.records:
        return []
    theta = interest_distribution(profile, profile_vocabulary(dataset, profile), alpha)
    items = []
    for record in dataset.records:
        rec = _recommendation(record, theta, profile, dataset)
        if rec is not None:
            items.append(rec)
    items.sort(key=lambda r: (-r.score, r.name))
    return items


def recommend(profile: UserProfile, dataset: Dataset, k: int, alpha: float = 1.0) -> list[Recommendation]:
    """Top-k by score descending, name ascending on ties; deterministic."""
    if k <= 0:
        return []
    return _ranked(profile, dataset, alpha)[:k]


def class_recommend(
    profile: UserProfile, dataset: Dataset, attribute: str, per_class: int, alpha: float = 1.0
) -> dict[str, list[Recommendation]]:
    """Top per_class recommendations within each class of a nominal attribute.

    Classes appear in schema domain order; records missing the attribute
    rank under the distinguished "unknown" bucket, always last.
    """
    attr = dataset.schema.get(attribute)
    if attr.kind != "nominal":
        raise SchemaError(f"class_recommend needs a nominal attribute, got {attribute} ({attr.kind})")
    if per_class < 1:
        raise ValueError("per_class must be positive")
    buckets: dict[str, list[Recommendation]] = {label: [] for label in attr.effective_domain}
    buckets[UNKNOWN_CLASS] = []
    by_name = {record.name: record for record in dataset.records}
    for rec in _ranked(profile, dataset, alpha):
        value = by_name[rec.name].values.get(attribute)
        label = str(value) if value is not None else UNKNOWN_CLASS
        bucket = buckets[label]
        if len(bucket) < per_class:
            bucket.append(rec)
    return buckets


def search(dataset: Dataset, query: str, lexicon: dict[str, Feature] | None = None) -> list[tuple[str, int]]:
    """Keyword search over the dataset; (name, match count) pairs.

    A record matches per query token when the token equals its name, is a
    name substring of length >= 3, equals its state, or resolves through
    the lexicon to a feature the record has. Zero-count records are
    dropped; results sort by count descending, then name ascending. Pure:
    the service layer owns emitting the search event.
    """
    if lexicon is None:
        lexicon = build_lexicon(dataset)
    tokens = [t for t in _tokens(query) if t not in STOPWORDS]
    if not tokens:
        return []
    rows = []
    for record in dataset.records:
        name_lower = record.name.lower()
        state = record.values.get("state")
        state_lower = str(state).lower() if state else None
        features = university_features(record, dataset.schema)
        count = 0
        for token in tokens:
            if token == name_lower or (len(token) >= 3 and token in name_lower):
                count += 1
            elif state_lower is not None and token == state_lower:
                count += 1
            else:
                feature = lexicon.get(token)
                if feature is not None and feature in features:
                    count += 1
        if count:
            rows.append((record.name, count))
    rows.sort(key=lambda row: (-row[1], row[0]))
    return rows


__all__ = [
    "Recommendation",
    "UNKNOWN_CLASS",
    "class_recommend",
    "recommend",
    "score",
    "search",
    "university_features",
    "vocabulary",
]
