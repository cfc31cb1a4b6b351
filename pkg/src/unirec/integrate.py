"""Deduplication and projection onto the canonical 20-attribute schema.

Raw records carry free-form source attributes (unit prefixes such as
``thous:``, multi-valued academic-emphasis pairs, extra attributes like
SAT scores). This stage:

* collapses duplicate instances by normalized name, keeping the copy
  with the fewest missing canonical values,
* normalizes range labels to the canonical spellings (``5-10`` pads to
  ``05-10``), bins exact numeric values into those ranges,
* expands academic-emphasis keywords into seven YES/NO flags,
* drops and reports every unmapped source attribute.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ingest import (
    Diagnostic,
    MISSING_TOKEN,
    MULTI_VALUED_ATTRIBUTES,
    RawRecord,
    SOURCE_ATTRIBUTE_MAP,
)
from .schema import (
    AttributeSchema,
    CANONICAL_SCHEMA,
    Dataset,
    EMPHASIS_ATTRIBUTES,
    PERCENT_ATTRIBUTES,
    RATING_ATTRIBUTES,
    UniversityProfile,
    Value,
)

# Raw emphasis keyword -> canonical flag suffix. Values outside this table
# are reported, never guessed.
EMPHASIS_KEYWORDS = {
    "liberal-arts": "arts",
    "arts": "arts",
    "fine-arts": "arts",
    "science": "science",
    "biology": "science",
    "chemistry": "science",
    "physics": "science",
    "mathematics": "science",
    "commerce": "commerce",
    "accounting": "commerce",
    "engineering": "engg",
    "engg": "engg",
    "computer-science": "engg",
    "management": "management",
    "business-administration": "management",
    "business": "management",
    "education": "education",
    "teaching": "education",
    "medicine": "medical",
    "medical": "medical",
    "nursing": "medical",
    "pre-med": "medical",
}

_RANGE_RE = re.compile(r"^(\d+)-(\d+)$")

# source attributes feeding each single-valued canonical attribute,
# inverted from the ingest projection table
_CANONICAL_SOURCES: dict[str, list[str]] = {}
for _src, _dst in SOURCE_ATTRIBUTE_MAP.items():
    _CANONICAL_SOURCES.setdefault(_dst, []).append(_src)


@dataclass
class IntegrationReport:
    raw_count: int = 0
    deduped_count: int = 0
    dropped_duplicates: list[tuple[str, int, list[int]]] = field(default_factory=list)
    unmapped_attributes: set[str] = field(default_factory=set)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def dropped_count(self) -> int:
        return sum(len(dropped) for _, _, dropped in self.dropped_duplicates)


def normalize_name(name: str) -> str:
    """Dedup key: uppercase, runs of internal whitespace become one hyphen."""
    return re.sub(r"\s+", "-", name.strip()).upper()


def strip_unit_prefix(token: str) -> str:
    """Drop unit/scale prefixes: ``thous:5-10`` -> ``5-10``."""
    if ":" in token:
        return token.rsplit(":", 1)[1]
    return token


def normalize_range_label(token: str) -> str:
    """Canonical range spelling: strip prefixes, zero-pad two-bound labels."""
    label = strip_unit_prefix(token)
    m = _RANGE_RE.match(label)
    if m:
        return f"{int(m.group(1)):02d}-{int(m.group(2)):02d}"
    return label


def bin_students(t: float) -> str:
    """Thousands of students -> range label, lower-inclusive bounds."""
    if t < 0:
        raise ValueError(f"student count must be >= 0, got {t}")
    if t < 5:
        return "5-"
    if t < 10:
        return "05-10"
    if t < 15:
        return "10-15"
    if t < 20:
        return "15-20"
    return "20+"


def bin_expenses(x: float) -> str:
    """Thousands of USD per year -> range label."""
    if x < 0:
        raise ValueError(f"expenses must be >= 0, got {x}")
    if x < 4:
        return "4-"
    if x < 7:
        return "04-07"
    if x < 10:
        return "07-10"
    return "10+"


def bin_applicants(a: float) -> str:
    """Thousands of applicants -> range label.

    The 10-13 band is spelled "01-10" to match the published domain; the
    label is emitted verbatim so downstream files stay comparable.
    """
    if a < 0:
        raise ValueError(f"applicant count must be >= 0, got {a}")
    if a < 4:
        return "4-"
    if a < 7:
        return "04-07"
    if a < 10:
        return "07-10"
    if a < 13:
        return "01-10"
    if a < 17:
        return "13-17"
    return "17+"


_BINNERS = {
    "no-of-students": bin_students,
    "expenses": bin_expenses,
    "number-of-applicants": bin_applicants,
}

# published spellings for band labels that the normalizer cannot derive
_LABEL_ALIASES = {
    "number-of-applicants": {"10-13": "01-10"},
}


def raw_missing_count(record: RawRecord) -> int:
    """How many single-valued canonical attributes the raw record leaves unfilled."""
    missing = 0
    for canonical, sources in _CANONICAL_SOURCES.items():
        value = None
        for src in sources:
            for candidate in record.values(src):
                if candidate != MISSING_TOKEN:
                    value = candidate
                    break
            if value is not None:
                break
        if value is None:
            missing += 1
    return missing


def dedupe(records: list[RawRecord]) -> tuple[list[RawRecord], IntegrationReport]:
    """At most one record per normalized name.

    Keeps the duplicate with the fewest missing canonical values, ties
    broken by earliest source position; output preserves the order in
    which each name first appears.
    """
    report = IntegrationReport(raw_count=len(records))
    groups: dict[str, list[int]] = {}
    order: list[str] = []
    for index, record in enumerate(records):
        key = normalize_name(record.name)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(index)

    kept: list[RawRecord] = []
    for key in order:
        indices = groups[key]
        best = min(indices, key=lambda i: (raw_missing_count(records[i]), i))
        kept.append(records[best])
        if len(indices) > 1:
            dropped = [i for i in indices if i != best]
            report.dropped_duplicates.append((key, best, dropped))
    report.deduped_count = len(kept)
    return kept, report


def _first_token(record: RawRecord, canonical: str) -> str | None:
    """Last value token of the first source pair feeding `canonical`.

    The last token skips leading scale markers in pairs such as
    ``(academics scale:1-5 2)``.
    """
    for src in _CANONICAL_SOURCES[canonical]:
        for attr, values in record.attributes:
            if attr == src:
                return values[-1]
    return None


def _numeric(token: str) -> float | None:
    try:
        return float(token)
    except ValueError:
        return None


def project(record: RawRecord, schema: AttributeSchema = CANONICAL_SCHEMA) -> tuple[UniversityProfile, list[Diagnostic]]:
    """Map a raw record onto the canonical attribute set.

    Unmapped source attributes are dropped with a warning; values that
    cannot be reconciled with an attribute's domain become missing with a
    diagnostic rather than inventing a label. Emphasis flags read NO when
    no mapped keyword provides evidence.
    """
    if not record.name:
        raise ValueError("cannot project a record without a name")
    line = record.source_span[0]
    diagnostics: list[Diagnostic] = []
    values: dict[str, Value] = {name: None for name in schema.names()}
    values["name"] = normalize_name(record.name)
    for flag in EMPHASIS_ATTRIBUTES:
        values[flag] = "NO"

    for attr in record.attribute_names():
        if attr not in SOURCE_ATTRIBUTE_MAP and attr not in MULTI_VALUED_ATTRIBUTES:
            diagnostics.append(Diagnostic("warning", f"{values['name']}: dropped unmapped attribute {attr!r}", line))

    for canonical in ("state",):
        token = _first_token(record, canonical)
        if token and token != MISSING_TOKEN:
            values[canonical] = token.upper()

    for canonical in ("location", "control"):
        token = _first_token(record, canonical)
        if token is None or token == MISSING_TOKEN:
            continue
        label = token.upper()
        attr_def = schema.get(canonical)
        if attr_def.accepts(label):
            values[canonical] = label
        else:
            diagnostics.append(
                Diagnostic("warning", f"{values['name']}: {token!r} not in domain of {canonical}, treated as missing", line)
            )

    for canonical, binner in _BINNERS.items():
        token = _first_token(record, canonical)
        if token is None or token == MISSING_TOKEN:
            continue
        attr_def = schema.get(canonical)
        number = _numeric(strip_unit_prefix(token))
        if number is not None:
            try:
                label = binner(number)
            except ValueError:
                diagnostics.append(
                    Diagnostic("warning", f"{values['name']}: negative {canonical} {token!r}, treated as missing", line)
                )
                continue
        else:
            label = normalize_range_label(token)
            label = _LABEL_ALIASES.get(canonical, {}).get(label, label)
        if label in attr_def.domain:
            values[canonical] = label
        elif label in attr_def.extra_values:
            values[canonical] = label
            diagnostics.append(
                Diagnostic("warning", f"{values['name']}: {canonical} label {label!r} is outside the declared domain", line)
            )
        else:
            diagnostics.append(
                Diagnostic("warning", f"{values['name']}: {canonical} value {token!r} not recognized, treated as missing", line)
            )

    for canonical in PERCENT_ATTRIBUTES:
        token = _first_token(record, canonical)
        if token is None or token == MISSING_TOKEN:
            continue
        number = _numeric(strip_unit_prefix(token))
        if number is None or not 0 <= number <= 100:
            diagnostics.append(
                Diagnostic("warning", f"{values['name']}: {canonical} value {token!r} not a percentage, treated as missing", line)
            )
        else:
            values[canonical] = number

    for canonical in RATING_ATTRIBUTES:
        token = _first_token(record, canonical)
        if token is None or token == MISSING_TOKEN:
            continue
        label = strip_unit_prefix(token)
        number = _numeric(label)
        if number is not None and number.is_integer():
            label = str(int(number))
        if label in schema.get(canonical).domain:
            values[canonical] = label
        else:
            diagnostics.append(
                Diagnostic("warning", f"{values['name']}: {canonical} rating {token!r} not in 1-5, treated as missing", line)
            )

    for keyword in record.values("academic-emphasis"):
        if keyword == MISSING_TOKEN:
            continue
        suffix = EMPHASIS_KEYWORDS.get(keyword)
        if suffix is None:
            diagnostics.append(
                Diagnostic("warning", f"{values['name']}: unmapped academic-emphasis keyword {keyword!r}", line)
            )
        else:
            values[f"academic-emphasis-{suffix}"] = "YES"

    return UniversityProfile(values), diagnostics


def build_dataset(records: list[RawRecord], schema: AttributeSchema = CANONICAL_SCHEMA) -> tuple[Dataset, IntegrationReport]:
    """Dedupe then project every record into a canonical Dataset."""
    kept, report = dedupe(records)
    profiles = []
    for record in kept:
        try:
            profile, diagnostics = project(record, schema)
        except ValueError as exc:
            report.diagnostics.append(Diagnostic("error", str(exc), record.source_span[0]))
            continue
        profiles.append(profile)
        report.diagnostics.extend(diagnostics)
    for record in records:
        for attr in record.attribute_names():
            if attr not in SOURCE_ATTRIBUTE_MAP and attr not in MULTI_VALUED_ATTRIBUTES:
                report.unmapped_attributes.add(attr)
    dataset = Dataset(schema, profiles)
    dataset.validate()
    return dataset, report
