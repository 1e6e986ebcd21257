"""Embedded schema text: the file's own description of its message layouts.

Every container stores a schema document in its header so the payload is
decodable from the file alone. The layout language is line oriented:

    message <Name>
      <field_number> <kind> <name> [unit:<momentum|length|none>]
    end

with kinds varint, zigzag, fixed64, bytes, message, packed-varint and
packed-zigzag. Canonical form lists fields in ascending field number, one
space between tokens, two-space indent, newline-terminated. A field of
kind ``message`` is named after the message it nests, which is how the
generic decoder resolves nesting without extra syntax.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateFieldError, InvariantViolation, SchemaError, SchemaSyntaxError
from .model import LINK_COLUMNS, PARTICLE_COLUMNS
from .quant import QuantizationScheme, dequantize
from .wire import (
    WireType,
    decode_packed_uvarints,
    encode_uvarint,
    read_message_fields,
    unpack_fixed64,
    zigzag_decode,
)

KINDS = frozenset({
    "varint", "zigzag", "fixed64", "bytes", "message",
    "packed-varint", "packed-zigzag",
})
UNITS = frozenset({"momentum", "length"})


@dataclass(frozen=True)
class FieldSpec:
    number: int
    kind: str
    name: str
    unit: str | None = None


@dataclass
class MessageSpec:
    name: str
    fields: list[FieldSpec]

    @property
    def by_number(self) -> dict[int, FieldSpec]:
        return {f.number: f for f in self.fields}


SchemaTable = dict[str, MessageSpec]


def _builtin_table() -> SchemaTable:
    particle_fields = [
        FieldSpec(number=number, kind=kind, name=name, unit=unit)
        for number, name, kind, unit in PARTICLE_COLUMNS
    ]
    messages = [
        MessageSpec("FileDescriptor", [
            FieldSpec(1, "varint", "format_version"),
            FieldSpec(2, "bytes", "description"),
            FieldSpec(3, "message", "QuantizationScheme"),
            FieldSpec(4, "varint", "requested_events"),
            FieldSpec(5, "bytes", "schema_text"),
        ]),
        MessageSpec("QuantizationScheme", [
            FieldSpec(1, "varint", "momentum_unit"),
            FieldSpec(2, "varint", "length_unit"),
        ]),
        MessageSpec("EventRecord", [
            FieldSpec(1, "varint", "event_number"),
            FieldSpec(2, "zigzag", "process_id"),
            FieldSpec(3, "fixed64", "weight"),
            FieldSpec(4, "message", "ParticleBlock"),
        ]),
        MessageSpec("ParticleBlock", particle_fields),
        MessageSpec("EventIndex", [
            FieldSpec(1, "packed-varint", "particle_count"),
            FieldSpec(2, "packed-varint", "max_pt_quantized"),
        ]),
        MessageSpec("FileStatistics", [
            FieldSpec(1, "varint", "actual_events"),
            FieldSpec(2, "varint", "total_particles"),
        ]),
    ]
    return {m.name: m for m in messages}


BUILTIN_TABLE = _builtin_table()


def print_schema(table: SchemaTable) -> str:
    """Render a table as canonical schema text."""
    lines = []
    for message in table.values():
        lines.append(f"message {message.name}")
        for f in sorted(message.fields, key=lambda f: f.number):
            line = f"  {f.number} {f.kind} {f.name}"
            if f.unit is not None:
                line += f" unit:{f.unit}"
            lines.append(line)
        lines.append("end")
    return "\n".join(lines) + "\n"


_CANONICAL = print_schema(BUILTIN_TABLE)


def canonical_schema() -> str:
    """The frozen format-version-1 schema text embedded in every file."""
    return _CANONICAL


def parse_schema(text: str) -> SchemaTable:
    """Parse schema text into a field table; strict about structure."""
    table: SchemaTable = {}
    current: MessageSpec | None = None
    seen_numbers: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "message":
            if current is not None:
                raise SchemaSyntaxError("nested message declaration", lineno)
            if len(tokens) != 2:
                raise SchemaSyntaxError("expected 'message <Name>'", lineno)
            name = tokens[1]
            if name in table:
                raise SchemaSyntaxError(f"message {name} declared twice", lineno)
            current = MessageSpec(name, [])
            seen_numbers = set()
        elif tokens[0] == "end":
            if current is None:
                raise SchemaSyntaxError("'end' outside a message", lineno)
            if len(tokens) != 1:
                raise SchemaSyntaxError("trailing tokens after 'end'", lineno)
            table[current.name] = current
            current = None
        else:
            if current is None:
                raise SchemaSyntaxError("field line outside a message", lineno)
            if len(tokens) not in (3, 4):
                raise SchemaSyntaxError("expected '<number> <kind> <name> [unit:...]'", lineno)
            try:
                number = int(tokens[0])
            except ValueError:
                raise SchemaSyntaxError(f"field number {tokens[0]!r} is not an integer", lineno)
            if number < 1:
                raise SchemaSyntaxError(f"field number {number} below 1", lineno)
            kind = tokens[1]
            if kind not in KINDS:
                raise SchemaSyntaxError(f"unknown kind {kind!r}", lineno)
            unit = None
            if len(tokens) == 4:
                ann = tokens[3]
                if not ann.startswith("unit:"):
                    raise SchemaSyntaxError(f"expected unit annotation, got {ann!r}", lineno)
                unit_name = ann[len("unit:"):]
                if unit_name == "none":
                    unit = None
                elif unit_name in UNITS:
                    unit = unit_name
                else:
                    raise SchemaSyntaxError(f"unknown unit {unit_name!r}", lineno)
            if number in seen_numbers:
                raise DuplicateFieldError(
                    f"line {lineno}: field number {number} repeated in message {current.name}")
            seen_numbers.add(number)
            current.fields.append(FieldSpec(number, kind, tokens[2], unit))
    if current is not None:
        raise SchemaSyntaxError(f"message {current.name} missing 'end'", len(text.splitlines()))
    return table


Tree = list[tuple[str, object]]


def generic_decode(data: bytes, table: SchemaTable, message_name: str,
                   scheme: QuantizationScheme | None = None) -> Tree:
    """Decode a message using only the schema table.

    Returns (name, value) pairs in encounter order. Packed columns with a
    unit annotation come back dequantized when a scheme is supplied.
    Unknown field numbers appear as ("unknown_<n>", raw payload bytes);
    canonical varints re-encode to their original bytes.
    """
    if message_name not in table:
        raise SchemaError(f"schema has no message named {message_name!r}")
    spec_by_number = table[message_name].by_number
    tree: Tree = []
    for tag, payload in read_message_fields(data):
        spec = spec_by_number.get(tag.field_number)
        if spec is None:
            raw = encode_uvarint(payload) if tag.wire_type is WireType.VARINT else payload
            tree.append((f"unknown_{tag.field_number}", raw))
            continue
        _check_wire_type(spec, tag.wire_type, message_name)
        if spec.kind == "varint":
            tree.append((spec.name, payload))
        elif spec.kind == "zigzag":
            tree.append((spec.name, zigzag_decode(payload)))
        elif spec.kind == "fixed64":
            tree.append((spec.name, unpack_fixed64(payload)))
        elif spec.kind == "bytes":
            tree.append((spec.name, payload))
        elif spec.kind == "message":
            tree.append((spec.name, generic_decode(payload, table, spec.name, scheme)))
        else:
            values = decode_packed_uvarints(payload)
            if spec.kind == "packed-zigzag":
                values = [(u >> 1) ^ -(u & 1) for u in values]
            if spec.unit is not None and scheme is not None:
                unit = scheme.momentum_unit if spec.unit == "momentum" else scheme.length_unit
                tree.append((spec.name, [dequantize(q, unit) for q in values]))
            else:
                tree.append((spec.name, values))
    return tree


_WIRE_FOR_KIND = {
    "varint": WireType.VARINT,
    "zigzag": WireType.VARINT,
    "fixed64": WireType.FIXED64,
    "bytes": WireType.LENGTH_DELIMITED,
    "message": WireType.LENGTH_DELIMITED,
    "packed-varint": WireType.LENGTH_DELIMITED,
    "packed-zigzag": WireType.LENGTH_DELIMITED,
}


def _check_wire_type(spec: FieldSpec, got: WireType, message_name: str) -> None:
    expected = _WIRE_FOR_KIND[spec.kind]
    if got is not expected:
        raise InvariantViolation(
            f"{message_name}.{spec.name}: wire type {int(got)}, schema expects {int(expected)}")


def event_json_from_tree(tree: Tree) -> dict:
    """Shape a generic EventRecord tree into the canonical JSON dict.

    Matches model.event_to_json_dict field for field: absent scalars take
    their defaults, every particle column key is present, link columns are
    shifted from the 1-based wire form to 0-based with -1 for no link.
    """
    out = {"event_number": 0, "process_id": 0, "weight": 1.0}
    particles: dict[str, list] = {name: [] for _n, name, _k, _u in PARTICLE_COLUMNS}
    for name, value in tree:
        if name == "ParticleBlock":
            for col_name, col in value:
                if col_name.startswith("unknown_"):
                    continue
                if col_name in LINK_COLUMNS:
                    particles[col_name] = [v - 1 for v in col]
                else:
                    particles[col_name] = col
        elif name in out:
            out[name] = value
    out["particles"] = particles
    return out
