"""Class-distribution profiling over the canonical dataset.

Counts records per nominal class and renders the class tables
(Sr. No, Class, Count, %). Percentages are truncated toward zero to two
decimals, never rounded: 54/238 prints 22.68, not 22.69. The denominator
is always the total post-dedup record count, including records missing
the attribute.
"""

from __future__ import annotations

from dataclasses import dataclass

from .schema import Dataset, EMPHASIS_ATTRIBUTES, SchemaError

EMPHASIS_DISPLAY = {
    "academic-emphasis-arts": "ARTS",
    "academic-emphasis-science": "SCIENCE",
    "academic-emphasis-commerce": "COMMERCE",
    "academic-emphasis-engg": "ENGINEERING",
    "academic-emphasis-management": "MANAGEMENT",
    "academic-emphasis-education": "EDUCATION",
    "academic-emphasis-medical": "MEDICAL",
}


@dataclass
class ClassDistribution:
    attribute: str
    rows: list[tuple[str, int, float]]  # (class label, count, truncated percent)
    total_records: int
    missing_count: int


def truncate_percent(count: int, total: int) -> float:
    """count/total as a percentage, truncated (toward zero) to 2 decimals."""
    if total == 0:
        return 0.0
    return (count * 10000 // total) / 100


def _percent_str(count: int, total: int) -> str:
    basis = count * 10000 // total if total else 0
    return f"{basis // 100}.{basis % 100:02d}"


def class_distribution(dataset: Dataset, attribute: str) -> ClassDistribution:
    """Per-class counts in domain order; missing tracked separately."""
    attr = dataset.schema.get(attribute)  # raises SchemaError when unknown
    if attr.kind != "nominal":
        raise SchemaError(f"{attribute} is not a nominal attribute")
    total = len(dataset.records)
    counts = {label: 0 for label in attr.effective_domain}
    missing = 0
    for record in dataset.records:
        value = record.values.get(attribute)
        if value is None:
            missing += 1
        else:
            counts[str(value)] += 1
    rows = [(label, counts[label], truncate_percent(counts[label], total)) for label in attr.effective_domain]
    return ClassDistribution(attribute, rows, total, missing)


def emphasis_distribution(dataset: Dataset) -> ClassDistribution:
    """Multi-label YES counts across the seven emphasis flags.

    Every record can contribute to several classes, so counts may sum
    above the record total; percents still use the record total.
    """
    total = len(dataset.records)
    rows = []
    for attribute in EMPHASIS_ATTRIBUTES:
        count = sum(1 for r in dataset.records if r.values.get(attribute) == "YES")
        rows.append((EMPHASIS_DISPLAY[attribute], count, truncate_percent(count, total)))
    return ClassDistribution("academic-emphasis", rows, total, 0)


def distribution_rows(dist: ClassDistribution) -> list[dict]:
    """Machine-readable view, one dict per class."""
    return [
        {
            "attribute": dist.attribute,
            "class": label,
            "count": count,
            "percent": percent,
            "total_records": dist.total_records,
        }
        for label, count, percent in dist.rows
    ]


def _render_table(dist: ClassDistribution, title: str, notes: list[str]) -> str:
    label_width = max([len("Class")] + [len(label) for label, _, _ in dist.rows])
    lines = [title.upper()]
    lines.append(f"{'Sr. No':<7} {'Class':<{label_width}} {'Count':>6} {'%':>7}")
    for serial, (label, count, _percent) in enumerate(dist.rows, start=1):
        percent = _percent_str(count, dist.total_records)
        lines.append(f"{serial:<7} {label:<{label_width}} {count:>6} {percent:>7}")
    if dist.missing_count:
        lines.append(f"missing: {dist.missing_count} of {dist.total_records}")
    lines.extend(notes)
    return "\n".join(lines)


CONTROL_NOTE = (
    "Note: control counts are tallied directly from the records; previously "
    "circulated figures for this table (61 PRIVATE / 103 STATE) duplicate the "
    "location counts and do not reflect the actual control split."
)


def _students_note(dist: ClassDistribution) -> str:
    combined = sum(count for label, count, _ in dist.rows if label in ("10-15", "15-20"))
    return (
        "Note: bands are lower-inclusive; 05-10 corresponds to the published 5-10 "
        f"class, and 10-15/15-20 combine into the published 10-20 class (combined: {combined})."
    )


def summary(dataset: Dataset) -> str:
    """Aligned text tables for every nominal attribute plus the emphasis flags."""
    sections = [f"Records: {len(dataset.records)}"]
    for attribute in dataset.schema.nominal_names():
        if attribute in EMPHASIS_ATTRIBUTES:
            continue
        dist = class_distribution(dataset, attribute)
        notes = []
        if attribute == "control":
            notes.append(CONTROL_NOTE)
        if attribute == "no-of-students":
            notes.append(_students_note(dist))
        sections.append(_render_table(dist, f"University classes based on {attribute}", notes))
    sections.append(
        _render_table(
            emphasis_distribution(dataset),
            "University classes based on academic emphasis",
            ["Note: multi-label; a university may count toward several emphases."],
        )
    )
    return "\n\n".join(sections) + "\n"
