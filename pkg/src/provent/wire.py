"""Base-128 varint codec, zigzag mapping and tagged message framing.

This module is the normative byte-level encoding for the container format
(see docs/format.md). Everything persisted by this package is built from
three primitives: unsigned little-endian base-128 varints, the zigzag
signed-to-unsigned bijection, and (field_number << 3 | wire_type) tags.

Decoding is strict: truncated input, varints longer than 10 bytes, values
past bit 63 and non-canonical (overlong) encodings are all rejected, so a
value has exactly one wire representation.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Sequence, Union

from .errors import OverlongError, TruncatedError, UnknownWireTypeError

U64_MAX = (1 << 64) - 1
I64_MIN = -(1 << 63)
I64_MAX = (1 << 63) - 1
MAX_VARINT_LEN = 10
MAX_FIELD_NUMBER = (1 << 29) - 1

_SINGLE = [bytes((i,)) for i in range(0x80)]
_FIXED64 = struct.Struct("<d")


class WireType(IntEnum):
    VARINT = 0
    FIXED64 = 1
    LENGTH_DELIMITED = 2
    FIXED32 = 5


_KNOWN_WIRE_TYPES = frozenset(int(w) for w in WireType)


@dataclass(frozen=True)
class FieldTag:
    field_number: int
    wire_type: WireType

    def __post_init__(self):
        if not 1 <= self.field_number <= MAX_FIELD_NUMBER:
            raise ValueError(f"field number {self.field_number} outside 1..{MAX_FIELD_NUMBER}")

    def encode(self) -> bytes:
        return encode_uvarint((self.field_number << 3) | int(self.wire_type))


def uvarint_length(value: int) -> int:
    """Bytes needed to encode ``value``: max(1, ceil(bit_length/7))."""
    if value < 0x80:
        return 1
    return -(-value.bit_length() // 7)


def encode_uvarint(value: int) -> bytes:
    if value < 0:
        raise ValueError("uvarint cannot encode negative values")
    if value > U64_MAX:
        raise ValueError("uvarint value exceeds 64 bits")
    if value < 0x80:
        return _SINGLE[value]
    out = bytearray()
    while value >= 0x80:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)
    return bytes(out)


def append_uvarint(buf: bytearray, value: int) -> None:
    """Append the varint for ``value`` to ``buf`` without a temporary."""
    if value < 0:
        raise ValueError("uvarint cannot encode negative values")
    if value > U64_MAX:
        raise ValueError("uvarint value exceeds 64 bits")
    while value >= 0x80:
        buf.append((value & 0x7F) | 0x80)
        value >>= 7
    buf.append(value)


def decode_uvarint(data, offset: int = 0) -> tuple[int, int]:
    """Decode one varint at ``offset``; returns (value, bytes consumed).

    Raises TruncatedError when input ends mid-varint and OverlongError for
    encodings longer than 10 bytes, values past bit 63, or non-canonical
    trailing zero bytes.
    """
    result = 0
    shift = 0
    pos = offset
    end = len(data)
    while True:
        if pos >= end:
            raise TruncatedError(f"varint at offset {offset} ends before its final byte")
        byte = data[pos]
        pos += 1
        consumed = pos - offset
        if consumed == MAX_VARINT_LEN:
            if byte >= 0x80:
                raise OverlongError(f"varint at offset {offset} is longer than 10 bytes")
            if byte > 0x01:
                raise OverlongError(f"varint at offset {offset} overflows 64 bits")
        result |= (byte & 0x7F) << shift
        if byte < 0x80:
            if byte == 0 and consumed > 1:
                raise OverlongError(f"varint at offset {offset} is not canonical")
            return result, consumed
        shift += 7


def zigzag_encode(value: int) -> int:
    """Map a signed 64-bit integer to an unsigned one, small |value| first."""
    if not I64_MIN <= value <= I64_MAX:
        raise ValueError(f"{value} outside signed 64-bit range")
    return (value << 1) ^ (value >> 63)


def zigzag_decode(value: int) -> int:
    if not 0 <= value <= U64_MAX:
        raise ValueError(f"{value} outside unsigned 64-bit range")
    return (value >> 1) ^ -(value & 1)


Payload = Union[int, float, bytes, bytearray, memoryview]


def write_field(buf: bytearray, tag: FieldTag, payload: Payload) -> None:
    """Append one tagged field: varint int, fixed64 float, or length-prefixed bytes."""
    wt = tag.wire_type
    append_uvarint(buf, (tag.field_number << 3) | int(wt))
    if wt is WireType.VARINT:
        append_uvarint(buf, payload)
    elif wt is WireType.FIXED64:
        if isinstance(payload, float):
            buf += _FIXED64.pack(payload)
        else:
            if len(payload) != 8:
                raise ValueError("fixed64 payload must be 8 bytes")
            buf += payload
    elif wt is WireType.LENGTH_DELIMITED:
        append_uvarint(buf, len(payload))
        buf += payload
    elif wt is WireType.FIXED32:
        if len(payload) != 4:
            raise ValueError("fixed32 payload must be 4 bytes")
        buf += payload
    else:  # pragma: no cover - IntEnum restricts wire_type already
        raise UnknownWireTypeError(str(wt))


def write_varint_field(buf: bytearray, field_number: int, value: int) -> None:
    append_uvarint(buf, (field_number << 3) | 0)
    append_uvarint(buf, value)


def write_fixed64_field(buf: bytearray, field_number: int, value: float) -> None:
    append_uvarint(buf, (field_number << 3) | 1)
    buf += _FIXED64.pack(value)


def write_bytes_field(buf: bytearray, field_number: int, payload) -> None:
    append_uvarint(buf, (field_number << 3) | 2)
    append_uvarint(buf, len(payload))
    buf += payload


def write_packed_varints(buf: bytearray, field_number: int, values: Sequence[int]) -> None:
    """Append one length-delimited field holding concatenated varints.

    An empty sequence emits nothing: absent and empty columns share one
    canonical wire form.
    """
    if not values:
        return
    packed = bytearray()
    for v in values:
        while v >= 0x80:
            packed.append((v & 0x7F) | 0x80)
            v >>= 7
        if v < 0:
            raise ValueError("packed varint value is negative")
        packed.append(v)
    append_uvarint(buf, (field_number << 3) | 2)
    append_uvarint(buf, len(packed))
    buf += packed


def write_packed_zigzag(buf: bytearray, field_number: int, values: Sequence[int]) -> None:
    if not values:
        return
    packed = bytearray()
    for v in values:
        u = (v << 1) ^ (v >> 63)
        if not 0 <= u <= U64_MAX:
            raise ValueError(f"{v} outside signed 64-bit range")
        while u >= 0x80:
            packed.append((u & 0x7F) | 0x80)
            u >>= 7
        packed.append(u)
    append_uvarint(buf, (field_number << 3) | 2)
    append_uvarint(buf, len(packed))
    buf += packed


def decode_packed_uvarints(data) -> list[int]:
    out = []
    pos = 0
    end = len(data)
    while pos < end:
        value, used = decode_uvarint(data, pos)
        out.append(value)
        pos += used
    return out


def decode_packed_zigzag(data) -> list[int]:
    return [(u >> 1) ^ -(u & 1) for u in decode_packed_uvarints(data)]


def read_message_fields(data) -> Iterator[tuple[FieldTag, Payload]]:
    """Iterate (tag, payload) over a complete message body.

    Payloads are decoded ints for VARINT fields and byte slices for the
    fixed and length-delimited wire types. Unknown field numbers are
    yielded so callers can skip them; unknown wire types are corrupt input.
    Consumes exactly len(data) bytes or raises.
    """
    pos = 0
    end = len(data)
    while pos < end:
        key, used = decode_uvarint(data, pos)
        pos += used
        wt = key & 0x07
        field_number = key >> 3
        if wt not in _KNOWN_WIRE_TYPES:
            raise UnknownWireTypeError(f"wire type {wt} for field {field_number}")
        if field_number < 1:
            raise OverlongError(f"field number {field_number} below 1")
        tag = FieldTag(field_number, WireType(wt))
        if wt == WireType.VARINT:
            value, used = decode_uvarint(data, pos)
            pos += used
            yield tag, value
        elif wt == WireType.FIXED64:
            if pos + 8 > end:
                raise TruncatedError("fixed64 payload truncated")
            yield tag, bytes(data[pos:pos + 8])
            pos += 8
        elif wt == WireType.FIXED32:
            if pos + 4 > end:
                raise TruncatedError("fixed32 payload truncated")
            yield tag, bytes(data[pos:pos + 4])
            pos += 4
        else:
            length, used = decode_uvarint(data, pos)
            pos += used
            if pos + length > end:
                raise TruncatedError("length-delimited payload truncated")
            yield tag, bytes(data[pos:pos + length])
            pos += length


def unpack_fixed64(payload) -> float:
    return _FIXED64.unpack(payload)[0]
