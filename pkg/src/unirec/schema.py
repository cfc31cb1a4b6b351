"""Canonical 20-attribute university schema and dataset containers.

The schema is pinned: attribute order, kinds and nominal domain spellings
are exactly those of the Universities-v2 relation and must not drift,
because ARFF emission is checked byte-for-byte against them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

Value = Union[str, float, None]

DATASET_FORMAT = "unirec-dataset"
DATASET_VERSION = 1

RELATION_NAME = "Universities-v2"

EMPHASIS_ATTRIBUTES = (
    "academic-emphasis-arts",
    "academic-emphasis-science",
    "academic-emphasis-commerce",
    "academic-emphasis-engg",
    "academic-emphasis-management",
    "academic-emphasis-education",
    "academic-emphasis-medical",
)

RATING_ATTRIBUTES = ("academics", "social", "quality-of-life")

PERCENT_ATTRIBUTES = (
    "percent-financial-aid",
    "percent-admittance",
    "percent-enrolled",
)


class SchemaError(ValueError):
    """A value or attribute violates the canonical schema."""


@dataclass(frozen=True)
class AttributeDef:
    """One attribute declaration.

    ``domain`` carries the declared nominal labels in declaration order.
    ``extra_values`` are labels the pipeline accepts in data rows even
    though the declaration omits them (the published no-of-students domain
    skips the 10-15 band while the binning rules produce it); they are
    flagged with diagnostics wherever they are introduced.
    """

    name: str
    kind: str  # "string" | "nominal" | "numeric"
    domain: tuple[str, ...] = ()
    extra_values: tuple[str, ...] = ()

    def accepts(self, label: str) -> bool:
        return label in self.domain or label in self.extra_values

    @property
    def effective_domain(self) -> tuple[str, ...]:
        """Declared labels plus accepted extras, extras slotted by band order."""
        if not self.extra_values:
            return self.domain
        merged = list(self.domain)
        for extra in self.extra_values:
            merged.insert(self._slot(extra, merged), extra)
        return tuple(merged)

    @staticmethod
    def _slot(extra: str, merged: list[str]) -> int:
        def low(label: str) -> float:
            head = label.rstrip("+-").split("-")[0]
            try:
                return float(head)
            except ValueError:
                return float("inf")

        # "5-" style open-below bands sort first regardless of bound
        def key(label: str) -> tuple[int, float]:
            return (0, low(label)) if label.endswith("-") and "-" not in label[:-1] else (1, low(label))

        for i, label in enumerate(merged):
            if key(extra) < key(label):
                return i
        return len(merged)


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute definitions."""

    attributes: tuple[AttributeDef, ...]

    def __post_init__(self):
        seen = set()
        for attr in self.attributes:
            if attr.name in seen:
                raise SchemaError(f"duplicate attribute {attr.name!r}")
            seen.add(attr.name)

    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def get(self, name: str) -> AttributeDef:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        raise SchemaError(f"unknown attribute {name!r}")

    def has(self, name: str) -> bool:
        return any(a.name == name for a in self.attributes)

    def nominal_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes if a.kind == "nominal")


CANONICAL_SCHEMA = AttributeSchema(
    (
        AttributeDef("name", "string"),
        AttributeDef("state", "string"),
        AttributeDef("location", "nominal", ("SUBURBAN", "URBAN", "SMALL-TOWN", "SMALL-CITY")),
        AttributeDef("control", "nominal", ("PRIVATE", "STATE")),
        AttributeDef("no-of-students", "nominal", ("5-", "05-10", "15-20", "20+"), extra_values=("10-15",)),
        AttributeDef("expenses", "nominal", ("4-", "04-07", "07-10", "10+")),
        AttributeDef("percent-financial-aid", "numeric"),
        AttributeDef("number-of-applicants", "nominal", ("01-10", "04-07", "07-10", "17+", "13-17", "4-")),
        AttributeDef("percent-admittance", "numeric"),
        AttributeDef("percent-enrolled", "numeric"),
        AttributeDef("academics", "nominal", ("1", "2", "3", "4", "5")),
        AttributeDef("social", "nominal", ("1", "2", "3", "4", "5")),
        AttributeDef("quality-of-life", "nominal", ("1", "2", "3", "4", "5")),
        AttributeDef("academic-emphasis-arts", "nominal", ("YES", "NO")),
        AttributeDef("academic-emphasis-science", "nominal", ("YES", "NO")),
        AttributeDef("academic-emphasis-commerce", "nominal", ("YES", "NO")),
        AttributeDef("academic-emphasis-engg", "nominal", ("YES", "NO")),
        AttributeDef("academic-emphasis-management", "nominal", ("YES", "NO")),
        AttributeDef("academic-emphasis-education", "nominal", ("YES", "NO")),
        AttributeDef("academic-emphasis-medical", "nominal", ("YES", "NO")),
    )
)


@dataclass
class UniversityProfile:
    """One canonical record: a value for each schema attribute.

    Missing values are ``None``; emphasis flags are never missing
    (absence of evidence reads as "NO").
    """

    values: dict[str, Value]

    @property
    def name(self) -> str:
        return str(self.values["name"])

    def get(self, attribute: str) -> Value:
        return self.values.get(attribute)

    def missing_count(self, schema: AttributeSchema = CANONICAL_SCHEMA) -> int:
        return sum(1 for a in schema.attributes if self.values.get(a.name) is None)

    def validate(self, schema: AttributeSchema = CANONICAL_SCHEMA) -> None:
        if not self.values.get("name"):
            raise SchemaError("record has no name")
        for attr in schema.attributes:
            value = self.values.get(attr.name)
            if value is None:
                if attr.name in EMPHASIS_ATTRIBUTES:
                    raise SchemaError(f"{self.name}: emphasis flag {attr.name} may not be missing")
                continue
            if attr.kind == "nominal":
                if not isinstance(value, str) or not attr.accepts(value):
                    raise SchemaError(f"{self.name}: {value!r} not in domain of {attr.name}")
            elif attr.kind == "numeric":
                if not isinstance(value, (int, float)):
                    raise SchemaError(f"{self.name}: {attr.name} must be numeric")
                if attr.name in PERCENT_ATTRIBUTES and not 0 <= value <= 100:
                    raise SchemaError(f"{self.name}: {attr.name}={value} outside [0, 100]")


@dataclass
class Dataset:
    """Schema plus records in deterministic (first-occurrence) order."""

    schema: AttributeSchema
    records: list[UniversityProfile] = field(default_factory=list)

    def __post_init__(self):
        names = [r.name for r in self.records]
        if len(names) != len(set(names)):
            raise SchemaError("record names are not pairwise distinct")

    def __len__(self) -> int:
        return len(self.records)

    def by_name(self, name: str) -> UniversityProfile:
        """Case-insensitive record lookup; raises KeyError when absent."""
        wanted = name.upper()
        for record in self.records:
            if record.name == wanted:
                return record
        raise KeyError(name)

    def validate(self) -> None:
        for record in self.records:
            record.validate(self.schema)


def _json_value(value: Value) -> Value:
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def dataset_to_json(dataset: Dataset) -> str:
    """Serialize to the versioned canonical interchange document."""
    doc = {
        "format": DATASET_FORMAT,
        "version": DATASET_VERSION,
        "relation": RELATION_NAME,
        "attributes": [
            {
                "name": a.name,
                "kind": a.kind,
                "domain": list(a.domain),
                "extra_values": list(a.extra_values),
            }
            for a in dataset.schema.attributes
        ],
        "records": [
            {name: _json_value(r.values.get(name)) for name in dataset.schema.names()}
            for r in dataset.records
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def dataset_from_json(text: str) -> Dataset:
    doc = json.loads(text)
    if doc.get("format") != DATASET_FORMAT:
        raise SchemaError(f"not a {DATASET_FORMAT} document")
    if doc.get("version") != DATASET_VERSION:
        raise SchemaError(f"unsupported dataset version {doc.get('version')!r}")
    schema = AttributeSchema(
        tuple(
            AttributeDef(
                a["name"],
                a["kind"],
                tuple(a.get("domain", ())),
                tuple(a.get("extra_values", ())),
            )
            for a in doc["attributes"]
        )
    )
    records = []
    for row in doc["records"]:
        values: dict[str, Value] = {}
        for attr in schema.attributes:
            raw = row.get(attr.name)
            if raw is not None and attr.kind == "numeric":
                raw = float(raw)
            values[attr.name] = raw
        records.append(UniversityProfile(values))
    dataset = Dataset(schema, records)
    dataset.validate()
    return dataset


def load_dataset(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return dataset_from_json(fh.read())


def save_dataset(dataset: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dataset_to_json(dataset))


def records_from_rows(rows: Iterable[Iterable[Value]], schema: AttributeSchema = CANONICAL_SCHEMA) -> list[UniversityProfile]:
    """Build profiles from positional rows (one value per schema attribute)."""
    names = schema.names()
    out = []
    for row in rows:
        row = list(row)
        if len(row) != len(names):
            raise SchemaError(f"row has {len(row)} fields, schema has {len(names)}")
        out.append(UniversityProfile(dict(zip(names, row))))
    return out
