"""Raw university dataset parsing.

The source format is a Lisp-style instance file: a sequence of
``(def-instance NAME (attr value...)*)`` forms, whitespace-insensitive,
with ``;`` comments running to end of line. Tokens are case-insensitive;
instance names normalize to uppercase, attribute names and values to
lowercase. ``?`` is an explicit missing-value marker.

Parsing is tolerant: a malformed form is skipped with an error diagnostic
and parsing continues. Deduplication and schema projection are later
stages; this module reports every well-formed form, duplicates included.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .schema import AttributeSchema, CANONICAL_SCHEMA

DEF_INSTANCE = "def-instance"
MISSING_TOKEN = "?"

_DELIMS = set(" \t\r\n();")


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "warning" | "error"
    message: str
    line: int

    def __post_init__(self):
        if self.severity not in ("warning", "error"):
            raise ValueError(f"bad severity {self.severity!r}")
        if not self.message:
            raise ValueError("diagnostic message must be non-empty")
        if self.line < 1:
            raise ValueError("diagnostic line must be positive")

    def __str__(self) -> str:
        return f"{self.severity}: line {self.line}: {self.message}"


@dataclass
class RawRecord:
    """One parsed instance before any schema projection.

    ``attributes`` is an ordered multimap: one entry per source pair, so
    multi-valued attributes such as academic-emphasis appear repeatedly.
    ``source_span`` is provenance only and excluded from equality so that
    serialize/re-parse round-trips compare equal.
    """

    name: str
    attributes: tuple[tuple[str, tuple[str, ...]], ...]
    source_span: tuple[int, int] = field(default=(1, 1), compare=False)

    def __post_init__(self):
        if not self.name:
            raise ValueError("record name must be non-empty")
        if self.source_span[0] > self.source_span[1]:
            raise ValueError("source_span start must be <= end")

    def values(self, attribute: str) -> list[str]:
        """All values for an attribute, concatenated across repeated pairs."""
        out: list[str] = []
        for name, vals in self.attributes:
            if name == attribute:
                out.extend(vals)
        return out

    def has(self, attribute: str) -> bool:
        return any(name == attribute for name, _ in self.attributes)

    def attribute_names(self) -> list[str]:
        seen: list[str] = []
        for name, _ in self.attributes:
            if name not in seen:
                seen.append(name)
        return seen


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    line = 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c in " \t\r":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append((c, line))
            i += 1
        else:
            j = i
            while j < n and text[j] not in _DELIMS:
                j += 1
            tokens.append((text[i:j], line))
            i = j
    return tokens


class _Cursor:
    def __init__(self, tokens: list[tuple[str, int]]):
        self.tokens = tokens
        self.pos = 0

    def eof(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> tuple[str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok


def _read_list(cur: _Cursor):
    """Read an already-opened list into a tree; returns (items, close_line).

    Atoms appear as (token, line) tuples, sublists as Python lists.
    close_line is None when input ends before the list closes.
    """
    items: list = []
    while not cur.eof():
        tok, line = cur.next()
        if tok == ")":
            return items, line
        if tok == "(":
            sub, closed = _read_list(cur)
            items.append(sub)
            if closed is None:
                return items, None
        else:
            items.append((tok, line))
    return items, None


def _is_atom(item) -> bool:
    return isinstance(item, tuple)


def _form_to_record(items: list, open_line: int, close_line: int,
                    records: list, diagnostics: list) -> None:
    if not items:
        diagnostics.append(Diagnostic("warning", "skipped empty form", open_line))
        return
    head = items[0]
    if not (_is_atom(head) and head[0].lower() == DEF_INSTANCE):
        label = head[0] if _is_atom(head) else "(...)"
        diagnostics.append(
            Diagnostic("warning", f"skipped non-instance form starting with {label!r}", open_line)
        )
        return

    def fail(message: str) -> None:
        diagnostics.append(Diagnostic("error", message, open_line))

    if len(items) < 2:
        fail("def-instance has no name")
        return
    if not _is_atom(items[1]):
        fail("def-instance name must be an atom")
        return
    name = items[1][0].upper()

    pairs: list[tuple[str, tuple[str, ...]]] = []
    for item in items[2:]:
        if _is_atom(item):
            fail(f"expected attribute pair in {name}, got {item[0]!r}")
            return
        if not item or not _is_atom(item[0]):
            fail(f"malformed attribute pair in {name}")
            return
        attr = item[0][0].lower()
        if any(not _is_atom(v) for v in item[1:]):
            fail(f"nested list in attribute pair {attr!r} of {name}")
            return
        values = tuple(v[0].lower() for v in item[1:])
        if not values:
            fail(f"attribute pair {attr!r} of {name} has no value")
            return
        pairs.append((attr, values))
    records.append(RawRecord(name, tuple(pairs), (open_line, close_line)))


def parse_raw(text: str) -> tuple[list[RawRecord], list[Diagnostic]]:
    """Parse instance forms in document order.

    Returns every well-formed record (duplicates included) plus
    diagnostics; one error diagnostic per skipped def-instance form, so
    records + errors account for every def-instance in the input.
    """
    records: list[RawRecord] = []
    diagnostics: list[Diagnostic] = []
    cur = _Cursor(_tokenize(text))
    while not cur.eof():
        tok, line = cur.next()
        if tok == "(":
            items, close_line = _read_list(cur)
            if close_line is None:
                head = items[0] if items else None
                if _is_atom(head) and head[0].lower() == DEF_INSTANCE:
                    diagnostics.append(Diagnostic("error", "unbalanced def-instance form at end of input", line))
                else:
                    diagnostics.append(Diagnostic("warning", "unbalanced form at end of input", line))
                return records, diagnostics
            _form_to_record(items, line, close_line, records, diagnostics)
        elif tok == ")":
            diagnostics.append(Diagnostic("warning", "unexpected ')'", line))
        else:
            diagnostics.append(Diagnostic("warning", f"stray token {tok!r}", line))
    return records, diagnostics


def load_raw_file(path: str) -> tuple[list[RawRecord], list[Diagnostic]]:
    """Read and parse a raw .data file; invalid UTF-8 raises."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValueError(f"{path} is not valid UTF-8: {exc}") from None
    return parse_raw(text)


# Raw attribute names that feed each canonical single-valued attribute.
# Used by validate_raw and by the integration stage; purely additive
# synonyms (the raw files spell number-of-applicants as no-applicants).
SOURCE_ATTRIBUTE_MAP = {
    "state": "state",
    "location": "location",
    "control": "control",
    "no-of-students": "no-of-students",
    "expenses": "expenses",
    "percent-financial-aid": "percent-financial-aid",
    "no-applicants": "number-of-applicants",
    "number-of-applicants": "number-of-applicants",
    "percent-admittance": "percent-admittance",
    "percent-enrolled": "percent-enrolled",
    "academics": "academics",
    "social": "social",
    "quality-of-life": "quality-of-life",
}

MULTI_VALUED_ATTRIBUTES = ("academic-emphasis",)


def validate_raw(record: RawRecord, schema: AttributeSchema = CANONICAL_SCHEMA) -> list[Diagnostic]:
    """Report (never mutate): unmapped attributes and repeated single-valued ones."""
    del schema  # the projection table, not the schema, decides mapping
    diagnostics = []
    line = record.source_span[0]
    seen: set[str] = set()
    for attr, _values in record.attributes:
        if attr not in SOURCE_ATTRIBUTE_MAP and attr not in MULTI_VALUED_ATTRIBUTES:
            if attr not in seen:
                diagnostics.append(
                    Diagnostic("warning", f"{record.name}: unmapped attribute {attr!r}", line)
                )
        elif attr in SOURCE_ATTRIBUTE_MAP and attr in seen:
            diagnostics.append(
                Diagnostic("warning", f"{record.name}: repeated single-valued attribute {attr!r}", line)
            )
        seen.add(attr)
    return diagnostics


def serialize_raw(records: list[RawRecord]) -> str:
    """Canonical s-expression text; parse_raw(serialize_raw(rs)) == rs."""
    chunks = []
    for record in records:
        lines = [f"({DEF_INSTANCE} {record.name}"]
        for attr, values in record.attributes:
            lines.append(f"  ({attr} {' '.join(values)})")
        chunks.append("\n".join(lines) + ")")
    return "\n\n".join(chunks) + ("\n" if chunks else "")


def records_to_jsonl(records: list[RawRecord]) -> str:
    """Line-delimited dump for pipeline handoff: one record per line."""
    lines = []
    for record in records:
        lines.append(
            json.dumps(
                {
                    "name": record.name,
                    "attributes": [[attr, list(values)] for attr, values in record.attributes],
                    "span": list(record.source_span),
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def records_from_jsonl(text: str) -> list[RawRecord]:
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            records.append(
                RawRecord(
                    doc["name"],
                    tuple((attr, tuple(values)) for attr, values in doc["attributes"]),
                    tuple(doc.get("span", (1, 1))),
                )
            )
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad record dump at line {lineno}: {exc}") from None
    return records
