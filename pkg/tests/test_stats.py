import pytest

from conftest import SUMMARY_GOLDEN

from unirec.schema import SchemaError
from unirec.stats import (
    CONTROL_NOTE,
    class_distribution,
    distribution_rows,
    emphasis_distribution,
    summary,
    truncate_percent,
)


@pytest.mark.parametrize(
    ("count", "total", "expected"),
    [
        (61, 238, 25.63),
        (103, 238, 43.27),
        (35, 238, 14.70),
        (36, 238, 15.12),
        (54, 238, 22.68),  # round() would give 22.69; truncation must not
        (70, 238, 29.41),
        (46, 238, 19.32),
        (68, 238, 28.57),
        (114, 238, 47.89),
        (93, 238, 39.07),
        (24, 238, 10.08),
        (92, 238, 38.65),
        (81, 238, 34.03),
        (28, 238, 11.76),
        (5, 9, 55.55),
        (7, 9, 77.77),
        (0, 5, 0.0),
        (5, 5, 100.0),
        (0, 0, 0.0),
    ],
)
def test_truncate_percent(count, total, expected):
    assert truncate_percent(count, total) == expected


def test_location_distribution(fixture_dataset):
    dist = class_distribution(fixture_dataset, "location")
    assert dist.rows == [
        ("SUBURBAN", 2, 22.22),
        ("URBAN", 5, 55.55),
        ("SMALL-TOWN", 0, 0.0),
        ("SMALL-CITY", 0, 0.0),
    ]
    assert dist.total_records == 9
    assert dist.missing_count == 2


def test_control_distribution(fixture_dataset):
    dist = class_distribution(fixture_dataset, "control")
    assert dist.rows == [("PRIVATE", 7, 77.77), ("STATE", 2, 22.22)]
    assert dist.missing_count == 0


def test_students_distribution_includes_extra_band(fixture_dataset):
    dist = class_distribution(fixture_dataset, "no-of-students")
    assert dist.rows == [
        ("5-", 4, 44.44),
        ("05-10", 4, 44.44),
        ("10-15", 0, 0.0),
        ("15-20", 1, 11.11),
        ("20+", 0, 0.0),
    ]


def test_emphasis_distribution_counts_yes_flags(fixture_dataset):
    dist = emphasis_distribution(fixture_dataset)
    assert dist.attribute == "academic-emphasis"
    assert dist.rows == [
        ("ARTS", 6, 66.66),
        ("SCIENCE", 5, 55.55),
        ("COMMERCE", 2, 22.22),
        ("ENGINEERING", 5, 55.55),
        ("MANAGEMENT", 4, 44.44),
        ("EDUCATION", 0, 0.0),
        ("MEDICAL", 1, 11.11),
    ]
    assert dist.missing_count == 0


def test_distribution_requires_nominal_attribute(fixture_dataset):
    with pytest.raises(SchemaError):
        class_distribution(fixture_dataset, "percent-enrolled")
    with pytest.raises(SchemaError):
        class_distribution(fixture_dataset, "nope")


def test_distribution_rows_shape(fixture_dataset):
    rows = distribution_rows(class_distribution(fixture_dataset, "control"))
    assert rows[0] == {
        "attribute": "control",
        "class": "PRIVATE",
        "count": 7,
        "percent": 77.77,
        "total_records": 9,
    }
    assert len(rows) == 2


def test_summary_matches_golden(fixture_dataset):
    assert summary(fixture_dataset) == SUMMARY_GOLDEN.read_text(encoding="utf-8")


def test_summary_carries_control_note(fixture_dataset):
    text = summary(fixture_dataset)
    assert CONTROL_NOTE in text
    assert "61 PRIVATE / 103 STATE" in CONTROL_NOTE
