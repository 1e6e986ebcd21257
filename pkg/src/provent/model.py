"""Event, particle-block and file-metadata types with their message codecs.

The field numbering here is normative and frozen for format version 1:

  FileDescriptor   1 format_version, 2 description, 3 scheme (nested
                   QuantizationScheme: 1 momentum_unit, 2 length_unit),
                   4 requested_events, 5 schema_text
  EventRecord      1 event_number, 2 process_id (zigzag), 3 weight
                   (fixed64), 4 particles (nested ParticleBlock)
  ParticleBlock    packed columns 1..15 in declaration order
  FileStatistics   1 actual_events, 2 total_particles

Scalar fields equal to their default are omitted on the wire; the default
is 0 except for weight, whose default is 1.0. Particle columns are packed
varint runs; signed columns go through zigzag. Mother/daughter links are
stored 1-based with 0 meaning "no link", and are exposed 0-based in memory
with NO_LINK (-1) for absent links.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvariantViolation, UnsupportedVersion
from .quant import QuantizationScheme, dequantize
from .wire import (
    WireType,
    decode_packed_uvarints,
    read_message_fields,
    unpack_fixed64,
    write_bytes_field,
    write_fixed64_field,
    write_packed_varints,
    write_packed_zigzag,
    write_varint_field,
    zigzag_decode,
    zigzag_encode,
)

FORMAT_VERSION = 1
NO_LINK = -1
DEFAULT_WEIGHT = 1.0

# (field_number, name, kind, unit); kind vocabulary matches the schema
# language, unit names the descriptor conversion factor that applies.
PARTICLE_COLUMNS = (
    (1, "pdg_id", "packed-zigzag", None),
    (2, "status", "packed-varint", None),
    (3, "px", "packed-zigzag", "momentum"),
    (4, "py", "packed-zigzag", "momentum"),
    (5, "pz", "packed-zigzag", "momentum"),
    (6, "mass", "packed-zigzag", "momentum"),
    (7, "mother1", "packed-varint", None),
    (8, "mother2", "packed-varint", None),
    (9, "daughter1", "packed-varint", None),
    (10, "daughter2", "packed-varint", None),
    (11, "barcode", "packed-zigzag", None),
    (12, "x", "packed-zigzag", "length"),
    (13, "y", "packed-zigzag", "length"),
    (14, "z", "packed-zigzag", "length"),
    (15, "t", "packed-zigzag", "length"),
)

LINK_COLUMNS = ("mother1", "mother2", "daughter1", "daughter2")
OPTIONAL_COLUMNS = ("barcode", "x", "y", "z", "t")
MOMENTUM_COLUMNS = ("px", "py", "pz", "mass")
VERTEX_COLUMNS = ("x", "y", "z", "t")
COLUMN_NAMES = tuple(c[1] for c in PARTICLE_COLUMNS)


@dataclass
class ParticleBlock:
    """Columnar particle attributes for one event; quantized integers in memory."""

    pdg_id: list[int] = field(default_factory=list)
    status: list[int] = field(default_factory=list)
    px: list[int] = field(default_factory=list)
    py: list[int] = field(default_factory=list)
    pz: list[int] = field(default_factory=list)
    mass: list[int] = field(default_factory=list)
    mother1: list[int] = field(default_factory=list)
    mother2: list[int] = field(default_factory=list)
    daughter1: list[int] = field(default_factory=list)
    daughter2: list[int] = field(default_factory=list)
    barcode: list[int] = field(default_factory=list)
    x: list[int] = field(default_factory=list)
    y: list[int] = field(default_factory=list)
    z: list[int] = field(default_factory=list)
    t: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pdg_id)

    def validate(self) -> "ParticleBlock":
        n = len(self.pdg_id)
        for name in COLUMN_NAMES:
            col = getattr(self, name)
            if name in OPTIONAL_COLUMNS:
                if col and len(col) != n:
                    raise InvariantViolation(
                        f"optional column {name} has length {len(col)}, expected 0 or {n}")
            elif len(col) != n:
                raise InvariantViolation(
                    f"column {name} has length {len(col)}, expected {n}")
        for name in LINK_COLUMNS:
            for v in getattr(self, name):
                if v != NO_LINK and not 0 <= v < n:
                    raise InvariantViolation(
                        f"{name} index {v} outside 0..{n - 1} and not NO_LINK")
        for v in self.status:
            if v < 0:
                raise InvariantViolation(f"status {v} is negative")
        return self


@dataclass
class EventRecord:
    event_number: int = 0
    process_id: int = 0
    weight: float = DEFAULT_WEIGHT
    particles: ParticleBlock = field(default_factory=ParticleBlock)


@dataclass
class FileDescriptor:
    format_version: int = FORMAT_VERSION
    description: str = ""
    scheme: QuantizationScheme = field(default_factory=QuantizationScheme)
    requested_events: int = 0
    schema_text: str = ""

    def validate(self) -> "FileDescriptor":
        if self.format_version != FORMAT_VERSION:
            raise UnsupportedVersion(
                f"format version {self.format_version}, this library reads {FORMAT_VERSION}")
        self.scheme.validate()
        return self


@dataclass
class FileStatistics:
    actual_events: int = 0
    total_particles: int = 0


def on_shell_energy(px: float, py: float, pz: float, mass: float) -> float:
    """Energy of an on-shell particle; the container never stores it."""
    return math.sqrt(px * px + py * py + pz * pz + mass * mass)


def encode_particles(block: ParticleBlock) -> bytes:
    block.validate()
    buf = bytearray()
    for number, name, kind, _unit in PARTICLE_COLUMNS:
        col = getattr(block, name)
        if name in LINK_COLUMNS:
            write_packed_varints(buf, number, [v + 1 for v in col])
        elif kind == "packed-varint":
            write_packed_varints(buf, number, col)
        else:
            write_packed_zigzag(buf, number, col)
    return bytes(buf)


_COLUMN_BY_NUMBER = {c[0]: c for c in PARTICLE_COLUMNS}


def decode_particles(data: bytes) -> ParticleBlock:
    block = ParticleBlock()
    for tag, payload in read_message_fields(data):
        col = _COLUMN_BY_NUMBER.get(tag.field_number)
        if col is None:
            continue
        _number, name, kind, _unit = col
        if tag.wire_type is not WireType.LENGTH_DELIMITED:
            raise InvariantViolation(
                f"column {name} must be length-delimited, got wire type {tag.wire_type}")
        values = decode_packed_uvarints(payload)
        if name in LINK_COLUMNS:
            values = [v - 1 for v in values]
        elif kind == "packed-zigzag":
            values = [(u >> 1) ^ -(u & 1) for u in values]
        setattr(block, name, values)
    return block.validate()


def encode_event(e: EventRecord) -> bytes:
    """Serialize one event; the same record always yields identical bytes."""
    buf = bytearray()
    if e.event_number:
        write_varint_field(buf, 1, e.event_number)
    if e.process_id:
        write_varint_field(buf, 2, zigzag_encode(e.process_id))
    if e.weight != DEFAULT_WEIGHT:
        if not math.isfinite(e.weight):
            raise InvariantViolation(f"event weight {e.weight!r} is not finite")
        write_fixed64_field(buf, 3, e.weight)
    write_bytes_field(buf, 4, encode_particles(e.particles))
    return bytes(buf)


def decode_event(data: bytes) -> EventRecord:
    """Inverse of encode_event; unknown fields are skipped, absent scalars default."""
    e = EventRecord()
    for tag, payload in read_message_fields(data):
        if tag.field_number == 1 and tag.wire_type is WireType.VARINT:
            e.event_number = payload
        elif tag.field_number == 2 and tag.wire_type is WireType.VARINT:
            e.process_id = zigzag_decode(payload)
        elif tag.field_number == 3 and tag.wire_type is WireType.FIXED64:
            e.weight = unpack_fixed64(payload)
        elif tag.field_number == 4 and tag.wire_type is WireType.LENGTH_DELIMITED:
            e.particles = decode_particles(payload)
    return e


def _decode_utf8(payload: bytes, what: str) -> str:
    try:
        return payload.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvariantViolation(f"{what} is not valid UTF-8") from exc


def encode_scheme(scheme: QuantizationScheme) -> bytes:
    buf = bytearray()
    write_varint_field(buf, 1, scheme.momentum_unit)
    write_varint_field(buf, 2, scheme.length_unit)
    return bytes(buf)


def decode_scheme(data: bytes) -> QuantizationScheme:
    momentum_unit = 0
    length_unit = 0
    for tag, payload in read_message_fields(data):
        if tag.field_number == 1 and tag.wire_type is WireType.VARINT:
            momentum_unit = payload
        elif tag.field_number == 2 and tag.wire_type is WireType.VARINT:
            length_unit = payload
    return QuantizationScheme(momentum_unit, length_unit).validate()


def encode_descriptor(d: FileDescriptor) -> bytes:
    d.validate()
    buf = bytearray()
    write_varint_field(buf, 1, d.format_version)
    if d.description:
        write_bytes_field(buf, 2, d.description.encode("utf-8"))
    write_bytes_field(buf, 3, encode_scheme(d.scheme))
    if d.requested_events:
        write_varint_field(buf, 4, d.requested_events)
    if d.schema_text:
        write_bytes_field(buf, 5, d.schema_text.encode("utf-8"))
    return bytes(buf)


def decode_descriptor(data: bytes) -> FileDescriptor:
    version = 0
    description = ""
    scheme = None
    requested = 0
    schema_text = ""
    for tag, payload in read_message_fields(data):
        if tag.field_number == 1 and tag.wire_type is WireType.VARINT:
            version = payload
        elif tag.field_number == 2 and tag.wire_type is WireType.LENGTH_DELIMITED:
            description = _decode_utf8(payload, "description")
        elif tag.field_number == 3 and tag.wire_type is WireType.LENGTH_DELIMITED:
            scheme = decode_scheme(payload)
        elif tag.field_number == 4 and tag.wire_type is WireType.VARINT:
            requested = payload
        elif tag.field_number == 5 and tag.wire_type is WireType.LENGTH_DELIMITED:
            schema_text = _decode_utf8(payload, "schema_text")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"format version {version}, this library reads {FORMAT_VERSION}")
    if scheme is None:
        raise InvariantViolation("descriptor has no quantization scheme")
    return FileDescriptor(version, description, scheme, requested, schema_text)


def encode_statistics(s: FileStatistics) -> bytes:
    buf = bytearray()
    if s.actual_events:
        write_varint_field(buf, 1, s.actual_events)
    if s.total_particles:
        write_varint_field(buf, 2, s.total_particles)
    return bytes(buf)


def decode_statistics(data: bytes) -> FileStatistics:
    s = FileStatistics()
    for tag, payload in read_message_fields(data):
        if tag.field_number == 1 and tag.wire_type is WireType.VARINT:
            s.actual_events = payload
        elif tag.field_number == 2 and tag.wire_type is WireType.VARINT:
            s.total_particles = payload
    return s


def event_to_json_dict(e: EventRecord, scheme: QuantizationScheme) -> dict:
    """Canonical JSON-ready view of an event: dequantized reals, -1 link sentinel.

    Every column key is present even when the column is empty; this is the
    shape `provent cat --format json` emits and independent readers must match.
    """
    particles: dict[str, list] = {}
    for _number, name, _kind, unit in PARTICLE_COLUMNS:
        col = getattr(e.particles, name)
        if unit == "momentum":
            particles[name] = [dequantize(q, scheme.momentum_unit) for q in col]
        elif unit == "length":
            particles[name] = [dequantize(q, scheme.length_unit) for q in col]
        else:
            particles[name] = list(col)
    return {
        "event_number": e.event_number,
        "process_id": e.process_id,
        "weight": e.weight,
        "particles": particles,
    }
