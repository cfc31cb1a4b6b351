"""ARFF emission and parsing for the canonical universities relation.

Emission is byte-exact: header spellings, domain order, `?` for missing,
comma-joined rows, `\\n` line endings, no trailing whitespace. Parsing is
the inverse on emitted files and additionally tolerates blank lines and
`%` comments. Only the canonical relation is supported; sparse rows,
dates and quoted-string escapes are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

from .schema import (
    AttributeDef,
    AttributeSchema,
    CANONICAL_SCHEMA,
    Dataset,
    RELATION_NAME,
    UniversityProfile,
    SchemaError,
    Value,
)


class ArffError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class ArffDocument:
    """Lexical view of an ARFF file: declarations plus raw row fields."""

    relation: str
    schema: AttributeSchema
    rows: list[list[str]]
    row_lines: list[int]


def _render_value(record: UniversityProfile, attr: AttributeDef) -> str:
    value = record.values.get(attr.name)
    if value is None:
        return "?"
    if attr.kind == "numeric":
        number = float(value)
        return str(int(number)) if number.is_integer() else repr(number)
    text = str(value)
    if attr.kind == "nominal" and not attr.accepts(text):
        raise ArffError(f"record {record.name}: {text!r} not in domain of {attr.name}")
    if "," in text:
        raise ArffError(f"record {record.name}: {attr.name} value {text!r} contains a comma")
    return text


def _declaration(attr: AttributeDef) -> str:
    if attr.kind == "nominal":
        return f"@attribute {attr.name} {{{','.join(attr.domain)}}}"
    return f"@attribute {attr.name} {attr.kind}"


def emit_arff(dataset: Dataset) -> str:
    """Serialize; records in dataset order, one final newline."""
    lines = [f"@relation {RELATION_NAME}", ""]
    lines.extend(_declaration(attr) for attr in dataset.schema.attributes)
    lines.append("")
    lines.append("@data")
    for record in dataset.records:
        lines.append(",".join(_render_value(record, attr) for attr in dataset.schema.attributes))
    return "\n".join(lines) + "\n"


def _parse_declaration(body: str, lineno: int) -> AttributeDef:
    body = body.strip()
    if body.startswith("'"):
        raise ArffError("quoted attribute names are not supported", lineno)
    parts = body.split(None, 1)
    if len(parts) != 2:
        raise ArffError(f"malformed @attribute line: {body!r}", lineno)
    name, kind = parts[0], parts[1].strip()
    if kind.startswith("{"):
        if not kind.endswith("}"):
            raise ArffError(f"unterminated nominal domain for {name}", lineno)
        domain = tuple(label.strip() for label in kind[1:-1].split(","))
        if any(not label for label in domain):
            raise ArffError(f"empty label in domain of {name}", lineno)
        return AttributeDef(name, "nominal", domain)
    kind_lower = kind.lower()
    if kind_lower in ("numeric", "real", "integer"):
        return AttributeDef(name, "numeric")
    if kind_lower == "string":
        return AttributeDef(name, "string")
    raise ArffError(f"unsupported attribute type {kind!r} for {name}", lineno)


def parse_arff_document(text: str) -> ArffDocument:
    relation: str | None = None
    declarations: list[tuple[AttributeDef, int]] = []
    rows: list[list[str]] = []
    row_lines: list[int] = []
    in_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        lowered = line.lower()
        if lowered.startswith("@relation"):
            if relation is not None:
                raise ArffError("duplicate @relation", lineno)
            relation = line[len("@relation"):].strip()
        elif lowered.startswith("@attribute"):
            if in_data:
                raise ArffError("@attribute after @data", lineno)
            declarations.append((_parse_declaration(line[len("@attribute"):], lineno), lineno))
        elif lowered.startswith("@data"):
            if relation is None or not declarations:
                raise ArffError("@data before header is complete", lineno)
            in_data = True
        elif in_data:
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != len(declarations):
                raise ArffError(
                    f"row has {len(fields)} fields, expected {len(declarations)}", lineno
                )
            rows.append(fields)
            row_lines.append(lineno)
        else:
            raise ArffError(f"unexpected content outside @data: {line!r}", lineno)
    if relation is None:
        raise ArffError("missing @relation")
    if not in_data:
        raise ArffError("missing @data")

    schema = _check_canonical(relation, declarations)
    return ArffDocument(relation, schema, rows, row_lines)


def _check_canonical(relation: str, declarations: list[tuple[AttributeDef, int]]) -> AttributeSchema:
    if relation != RELATION_NAME:
        raise ArffError(f"unsupported relation {relation!r}, expected {RELATION_NAME!r}")
    canonical = CANONICAL_SCHEMA.attributes
    for position, (attr, lineno) in enumerate(declarations):
        if position >= len(canonical):
            raise ArffError(f"unknown attribute {attr.name!r}", lineno)
        expected = canonical[position]
        if attr.name != expected.name:
            raise ArffError(
                f"unknown attribute {attr.name!r}, expected {expected.name!r}", lineno
            )
        if attr.kind != expected.kind or attr.domain != expected.domain:
            raise ArffError(f"attribute {attr.name!r} does not match the canonical declaration", lineno)
    if len(declarations) < len(canonical):
        missing = canonical[len(declarations)].name
        raise ArffError(f"missing attribute declaration {missing!r}")
    # adopt the canonical schema so accepted-but-undeclared labels survive
    return CANONICAL_SCHEMA


def _parse_field(field: str, attr: AttributeDef, lineno: int) -> Value:
    if field == "?":
        return None
    if attr.kind == "numeric":
        try:
            return float(field)
        except ValueError:
            raise ArffError(f"{attr.name}: {field!r} is not numeric", lineno) from None
    if attr.kind == "nominal" and not attr.accepts(field):
        raise ArffError(f"{attr.name}: {field!r} not in declared domain", lineno)
    return field


def parse_arff(text: str) -> Dataset:
    """Inverse of emit_arff on its image; `%` comments and blank lines ignored."""
    document = parse_arff_document(text)
    schema = document.schema
    records = []
    for fields, lineno in zip(document.rows, document.row_lines):
        values = {}
        for field, attr in zip(fields, schema.attributes):
            values[attr.name] = _parse_field(field, attr, lineno)
        record = UniversityProfile(values)
        try:
            record.validate(schema)
        except SchemaError as exc:
            raise ArffError(str(exc), lineno) from None
        records.append(record)
    try:
        return Dataset(schema, records)
    except SchemaError as exc:
        raise ArffError(str(exc)) from None


def load_arff(path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_arff(fh.read())


def save_arff(dataset: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(emit_arff(dataset))
