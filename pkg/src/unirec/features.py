"""Interest features: the shared vocabulary between users and universities.

A feature is either an (attribute, nominal value) pair from the canonical
schema or a free keyword token. University records expose their nominal
values as features; user queries and imported profile documents are
tokenized against a lexicon built from the schema so that domain words
("engineering", "private", state names) land on attribute features while
everything else stays a keyword.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .integrate import EMPHASIS_KEYWORDS
from .schema import (
    AttributeSchema,
    CANONICAL_SCHEMA,
    Dataset,
    EMPHASIS_ATTRIBUTES,
    SchemaError,
    UniversityProfile,
)

ATTRIBUTE_VALUE = "attribute-value"
KEYWORD = "keyword"

# dropped before lexicon lookup; deliberately small and free of domain words
STOPWORDS = frozenset(
    "a an and are as at be by for from has he in is it its of on or "
    "that the this to was were will with".split()
)

_TOKEN_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789+-")


@dataclass(frozen=True)
class Feature:
    kind: str
    attribute: str = ""
    value: str = ""
    token: str = ""

    @staticmethod
    def attr(attribute: str, value: str) -> "Feature":
        return Feature(ATTRIBUTE_VALUE, attribute=attribute, value=value)

    @staticmethod
    def kw(token: str) -> "Feature":
        if not token or token != token.lower():
            raise ValueError(f"keyword token must be lowercase and non-empty: {token!r}")
        return Feature(KEYWORD, token=token)

    @property
    def key(self) -> str:
        if self.kind == ATTRIBUTE_VALUE:
            return f"{self.attribute}={self.value}"
        return f"kw:{self.token}"

    @staticmethod
    def from_key(key: str) -> "Feature":
        if key.startswith("kw:"):
            return Feature.kw(key[3:])
        if "=" in key:
            attribute, value = key.split("=", 1)
            if attribute and value:
                return Feature.attr(attribute, value)
        raise ValueError(f"malformed feature key {key!r}")

    def validate(self, schema: AttributeSchema = CANONICAL_SCHEMA) -> None:
        """Attribute features must reference a schema attribute and its domain."""
        if self.kind == KEYWORD:
            Feature.kw(self.token)
            return
        attr = schema.get(self.attribute)  # raises SchemaError when unknown
        if attr.kind == "nominal" and not attr.accepts(self.value):
            raise SchemaError(f"{self.value!r} not in domain of {self.attribute}")


def _tokens(text: str) -> list[str]:
    tokens = []
    current: list[str] = []
    for ch in text.lower():
        if ch in _TOKEN_CHARS:
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    # a token must contain at least one alphanumeric ("+-" alone is noise)
    return [t for t in tokens if any(c.isalnum() for c in t)]


def build_lexicon(dataset: Optional[Dataset] = None, schema: AttributeSchema = CANONICAL_SCHEMA) -> dict[str, Feature]:
    """Token -> attribute feature table.

    Ambiguous tokens (the rating digits, band labels shared by expenses
    and number-of-applicants) resolve to the first schema attribute that
    declares them. YES/NO are meaningless alone and stay keywords;
    emphasis flags are reachable through their subject keywords instead.
    Observed state values are added when a dataset is supplied.
    """
    lexicon: dict[str, Feature] = {}

    def put(token: str, feature: Feature) -> None:
        lexicon.setdefault(token, feature)

    for attr in schema.attributes:
        if attr.kind != "nominal" or attr.name in EMPHASIS_ATTRIBUTES:
            continue
        for label in attr.effective_domain:
            put(label.lower(), Feature.attr(attr.name, label))
    for keyword, suffix in EMPHASIS_KEYWORDS.items():
        put(keyword, Feature.attr(f"academic-emphasis-{suffix}", "YES"))
    if dataset is not None:
        for record in dataset.records:
            state = record.values.get("state")
            if state:
                put(str(state).lower(), Feature.attr("state", str(state)))
    return lexicon


def tokenize_query(text: str, lexicon: dict[str, Feature]) -> list[Feature]:
    """Lexicon hits become attribute features, the rest keywords.

    Duplicates are preserved: repeating a term weights it in updates.
    """
    features = []
    for token in _tokens(text):
        if token in STOPWORDS:
            continue
        feature = lexicon.get(token)
        features.append(feature if feature is not None else Feature.kw(token))
    return features


def university_features(record: UniversityProfile, schema: AttributeSchema = CANONICAL_SCHEMA) -> set[Feature]:
    """Attribute features of one record.

    State and every present nominal value contribute; emphasis flags only
    where YES; numeric percents carry no nominal class and are excluded.
    """
    features: set[Feature] = set()
    state = record.values.get("state")
    if state:
        features.add(Feature.attr("state", str(state)))
    for attr in schema.attributes:
        if attr.kind != "nominal":
            continue
        value = record.values.get(attr.name)
        if value is None:
            continue
        if attr.name in EMPHASIS_ATTRIBUTES:
            if value == "YES":
                features.add(Feature.attr(attr.name, "YES"))
        else:
            features.add(Feature.attr(attr.name, str(value)))
    return features


def vocabulary(dataset: Dataset, extra: Iterable[Feature] = ()) -> set[Feature]:
    """Every feature realized in the dataset plus caller-observed extras."""
    vocab: set[Feature] = set()
    for record in dataset.records:
        vocab |= university_features(record, dataset.schema)
    vocab.update(extra)
    return vocab
