"""Multi-entry container: a ZIP archive of STORED entries with random access.

Layout of a finished file, in write order:

    header                  encoded FileDescriptor
    0 .. N-1                one encoded EventRecord per entry
    index                   packed per-event summaries (EventIndex)
    statistics              FileStatistics
    promc_description.txt   the description string, verbatim
    promc_nevents.txt       decimal event count plus newline
    <central directory, end-of-central-directory record>

No compression is ever used; the size win comes from the varint encoding
itself, and STORED entries keep every payload directly addressable. The
text mirrors are readable with any stock unzip tool. No ZIP64: more than
65000 entries or 4 GiB offsets are hard writer errors in format version 1.

The reader operates over a ByteSource and reads only the tail (EOCD plus
central directory) and the header entry at open; each event access is one
ranged read, CRC-verified.
"""

from __future__ import annotations

import math
import struct
import zlib
from dataclasses import dataclass, field

from .errors import (
    ChecksumMismatch,
    InvariantViolation,
    LimitExceeded,
    MissingHeader,
    MissingIndex,
    NotAnArchive,
    OutOfRangeError,
    ProventError,
    UsageError,
)
from .model import (
    EventRecord,
    FileDescriptor,
    FileStatistics,
    decode_descriptor,
    decode_event,
    decode_statistics,
    encode_descriptor,
    encode_event,
    encode_statistics,
)
from .schema import canonical_schema
from .sources import ByteSource, open_source
from .wire import (
    WireType,
    decode_packed_uvarints,
    read_message_fields,
    write_packed_varints,
)

LOCAL_SIG = b"PK\x03\x04"
CENTRAL_SIG = b"PK\x01\x02"
EOCD_SIG = b"PK\x05\x06"
VERSION_NEEDED = 10
VERSION_MADE_BY = 20
# fixed 1980-01-01 00:00:00 DOS stamp keeps output byte-deterministic
DOS_TIME = 0
DOS_DATE = (1 << 5) | 1

MAX_ENTRIES = 0xFFFF
MAX_OFFSET = 0xFFFFFFFF

HEADER_ENTRY = "header"
INDEX_ENTRY = "index"
STATISTICS_ENTRY = "statistics"
DESCRIPTION_MIRROR = "promc_description.txt"
NEVENTS_MIRROR = "promc_nevents.txt"
METADATA_ENTRIES = 5

MESSAGE_SIZE_GUIDANCE = 1 << 20

_LOCAL = struct.Struct("<HHHHHIIIHH")
_CENTRAL = struct.Struct("<HHHHHHIIIHHHHHII")
_EOCD = struct.Struct("<HHHHIIH")


@dataclass(frozen=True)
class EntryRecord:
    name: str
    offset: int          # byte offset of the local header
    length: int          # payload byte count (STORED: compressed == uncompressed)
    crc32: int


@dataclass
class EventIndex:
    """Per-event summaries enabling selection without payload reads."""

    particle_count: list[int] = field(default_factory=list)
    max_pt_quantized: list[int] = field(default_factory=list)


def encode_index(index: EventIndex) -> bytes:
    buf = bytearray()
    write_packed_varints(buf, 1, index.particle_count)
    write_packed_varints(buf, 2, index.max_pt_quantized)
    return bytes(buf)


def decode_index(data: bytes) -> EventIndex:
    index = EventIndex()
    for tag, payload in read_message_fields(data):
        if tag.field_number == 1 and tag.wire_type is WireType.LENGTH_DELIMITED:
            index.particle_count = decode_packed_uvarints(payload)
        elif tag.field_number == 2 and tag.wire_type is WireType.LENGTH_DELIMITED:
            index.max_pt_quantized = decode_packed_uvarints(payload)
    if len(index.particle_count) != len(index.max_pt_quantized):
        raise InvariantViolation(
            f"index columns disagree: {len(index.particle_count)} counts, "
            f"{len(index.max_pt_quantized)} max-pt values")
    return index


def event_max_pt(e: EventRecord) -> int:
    """Largest quantized transverse momentum in the event (floor of the norm)."""
    best = 0
    for qx, qy in zip(e.particles.px, e.particles.py):
        pt = math.isqrt(qx * qx + qy * qy)
        if pt > best:
            best = pt
    return best


class Writer:
    """Sequential archive writer; one thread, appends define event ordinals."""

    def __init__(self, sink, descriptor: FileDescriptor):
        if not descriptor.schema_text:
            descriptor.schema_text = canonical_schema()
        descriptor.validate()
        self._sink = sink
        self._offset = 0
        self._entries: list[EntryRecord] = []
        self._closed = False
        self.descriptor = descriptor
        self.index = EventIndex()
        self._total_particles = 0
        self._add_entry(HEADER_ENTRY, encode_descriptor(descriptor))

    @property
    def event_count(self) -> int:
        return len(self.index.particle_count)

    def _add_entry(self, name: str, payload: bytes) -> None:
        if len(self._entries) >= MAX_ENTRIES:
            raise LimitExceeded(f"archive cannot hold more than {MAX_ENTRIES} entries")
        if self._offset > MAX_OFFSET or len(payload) > MAX_OFFSET:
            raise LimitExceeded("entry offset or size exceeds 4 GiB (no ZIP64 in version 1)")
        raw_name = name.encode("ascii")
        crc = zlib.crc32(payload)
        header = LOCAL_SIG + _LOCAL.pack(
            VERSION_NEEDED, 0, 0, DOS_TIME, DOS_DATE,
            crc, len(payload), len(payload), len(raw_name), 0) + raw_name
        self._sink.write(header)
        self._sink.write(payload)
        self._entries.append(EntryRecord(name, self._offset, len(payload), crc))
        self._offset += len(header) + len(payload)

    def append_event(self, e: EventRecord) -> None:
        if self._closed:
            raise UsageError("append_event on a closed writer")
        ordinal = self.event_count
        if e.event_number != ordinal:
            raise InvariantViolation(
                f"event_number {e.event_number} must equal its ordinal {ordinal}")
        self._add_entry(str(ordinal), encode_event(e))
        self.index.particle_count.append(len(e.particles))
        self.index.max_pt_quantized.append(event_max_pt(e))
        self._total_particles += len(e.particles)

    def close(self) -> FileStatistics:
        if self._closed:
            raise UsageError("writer already closed")
        stats = FileStatistics(self.event_count, self._total_particles)
        self._add_entry(INDEX_ENTRY, encode_index(self.index))
        self._add_entry(STATISTICS_ENTRY, encode_statistics(stats))
        self._add_entry(DESCRIPTION_MIRROR, self.descriptor.description.encode("utf-8"))
        self._add_entry(NEVENTS_MIRROR, f"{stats.actual_events}\n".encode("ascii"))
        cd_offset = self._offset
        cd_size = 0
        for entry in self._entries:
            raw_name = entry.name.encode("ascii")
            record = CENTRAL_SIG + _CENTRAL.pack(
                VERSION_MADE_BY, VERSION_NEEDED, 0, 0, DOS_TIME, DOS_DATE,
                entry.crc32, entry.length, entry.length,
                len(raw_name), 0, 0, 0, 0, 0, entry.offset) + raw_name
            self._sink.write(record)
            cd_size += len(record)
        if cd_offset > MAX_OFFSET:
            raise LimitExceeded("central directory offset exceeds 4 GiB")
        n = len(self._entries)
        self._sink.write(EOCD_SIG + _EOCD.pack(0, 0, n, n, cd_size, cd_offset, 0))
        self._sink.flush()
        self._closed = True
        return stats


def open_writer(sink, descriptor: FileDescriptor) -> Writer:
    return Writer(sink, descriptor)


_EOCD_MIN = 22
_EOCD_MAX_TAIL = _EOCD_MIN + 0xFFFF


class Reader:
    """Random-access reader; immutable after open, safe for concurrent reads."""

    def __init__(self, src: ByteSource):
        self._src = src
        self._load_directory()
        header = self.entries.get(HEADER_ENTRY)
        if header is None:
            raise MissingHeader("archive has no 'header' entry")
        self.descriptor = decode_descriptor(self.read_entry(HEADER_ENTRY))
        self.actual_events = sum(1 for name in self.entries if name.isdigit())
        self._index: EventIndex | None = None

    def _load_directory(self) -> None:
        total = self._src.length()
        if total < _EOCD_MIN:
            raise NotAnArchive(f"{total} bytes is too small for an archive")
        # comment-free files (all of ours) resolve on the small probe; the
        # wide probe only triggers for foreign archives with long comments
        tail_size = min(total, 1024)
        tail_start = total - tail_size
        tail = self._src.read_at(tail_start, tail_size)
        try:
            eocd_pos = self._find_eocd(tail, total, tail_start)
        except NotAnArchive:
            if tail_size >= min(total, _EOCD_MAX_TAIL):
                raise
            tail_size = min(total, _EOCD_MAX_TAIL)
            tail_start = total - tail_size
            tail = self._src.read_at(tail_start, tail_size)
            eocd_pos = self._find_eocd(tail, total, tail_start)
        (disk, cd_disk, _n_disk, n_total, cd_size, cd_offset, _comment_len) = _EOCD.unpack(
            tail[eocd_pos + 4:eocd_pos + _EOCD_MIN])
        if disk != 0 or cd_disk != 0:
            raise NotAnArchive("multi-disk archives are not supported")
        cd_end = cd_offset + cd_size
        if cd_end > total:
            raise NotAnArchive("central directory extends past end of file")
        if cd_offset >= tail_start:
            directory = tail[cd_offset - tail_start:cd_end - tail_start]
        else:
            directory = self._src.read_at(cd_offset, cd_size)
        self.entries = self._parse_directory(directory, n_total)

    @staticmethod
    def _find_eocd(tail: bytes, total: int, tail_start: int) -> int:
        pos = tail.rfind(EOCD_SIG)
        while pos != -1:
            if pos + _EOCD_MIN <= len(tail):
                comment_len = struct.unpack_from("<H", tail, pos + 20)[0]
                if tail_start + pos + _EOCD_MIN + comment_len == total:
                    return pos
            pos = tail.rfind(EOCD_SIG, 0, pos)
        raise NotAnArchive("no end-of-central-directory record found")

    @staticmethod
    def _parse_directory(data: bytes, expected: int) -> dict[str, EntryRecord]:
        entries: dict[str, EntryRecord] = {}
        pos = 0
        for _ in range(expected):
            if data[pos:pos + 4] != CENTRAL_SIG:
                raise NotAnArchive(f"bad central-directory signature at {pos}")
            try:
                (_made_by, _needed, _flags, method, _time, _date, crc, csize, usize,
                 name_len, extra_len, comment_len, _disk, _internal, _external,
                 local_offset) = _CENTRAL.unpack_from(data, pos + 4)
            except struct.error as exc:
                raise NotAnArchive(f"central-directory record at {pos} truncated") from exc
            try:
                name = data[pos + 46:pos + 46 + name_len].decode("utf-8")
            except UnicodeDecodeError as exc:
                raise NotAnArchive(f"entry name at {pos} is not valid UTF-8") from exc
            if method != 0:
                raise InvariantViolation(
                    f"entry {name!r} uses compression method {method}; only STORED is read")
            if csize != usize:
                raise InvariantViolation(f"entry {name!r} sizes disagree for STORED method")
            entries[name] = EntryRecord(name, local_offset, usize, crc)
            pos += 46 + name_len + extra_len + comment_len
        return entries

    def read_entry(self, name: str) -> bytes:
        entry = self.entries.get(name)
        if entry is None:
            raise KeyError(name)
        total = self._src.length()
        if entry.offset + 30 > total:
            raise NotAnArchive(f"entry {entry.name!r} points past end of file")
        # one ranged read covers the local header and, normally, the payload
        span = 30 + len(name.encode("utf-8")) + entry.length
        head = self._src.read_at(entry.offset, min(span, total - entry.offset))
        if head[:4] != LOCAL_SIG:
            raise NotAnArchive(f"bad local-header signature for entry {entry.name!r}")
        name_len, extra_len = struct.unpack_from("<HH", head, 26)
        data_start = 30 + name_len + extra_len
        if entry.offset + data_start + entry.length > total:
            raise NotAnArchive(f"entry {entry.name!r} payload extends past end of file")
        payload = head[data_start:data_start + entry.length]
        if len(payload) < entry.length:
            missing = entry.length - len(payload)
            payload += self._src.read_at(entry.offset + data_start + len(payload), missing)
        if zlib.crc32(payload) != entry.crc32:
            raise ChecksumMismatch(f"crc mismatch entry '{entry.name}'")
        return payload

    def read_event(self, k: int) -> EventRecord:
        if not 0 <= k < self.actual_events:
            raise OutOfRangeError(f"event {k} outside 0..{self.actual_events - 1}")
        return decode_event(self.read_entry(str(k)))

    def event_index(self) -> EventIndex:
        if self._index is None:
            if INDEX_ENTRY not in self.entries:
                raise MissingIndex("archive has no 'index' entry")
            self._index = decode_index(self.read_entry(INDEX_ENTRY))
        return self._index

    def select_events(self, predicate) -> list[int]:
        """Ordinals whose (particle_count, max_pt_quantized) satisfy the predicate.

        Evaluates against the stored index only; no event payload is read.
        """
        index = self.event_index()
        return [k for k, (count, max_pt)
                in enumerate(zip(index.particle_count, index.max_pt_quantized))
                if predicate(count, max_pt)]

    def statistics(self) -> FileStatistics:
        return decode_statistics(self.read_entry(STATISTICS_ENTRY))

    def close(self) -> None:
        self._src.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def open_reader(src) -> Reader:
    return Reader(open_source(src))


def verify_container(src) -> tuple[list[str], list[str]]:
    """Check a file end to end; returns (problems, warnings)."""
    from .schema import parse_schema

    problems: list[str] = []
    warnings: list[str] = []
    try:
        reader = open_reader(src)
    except (ProventError, EOFError) as exc:
        return [f"unreadable archive: {exc}"], warnings

    try:
        parse_schema(reader.descriptor.schema_text)
    except ProventError as exc:
        problems.append(f"schema does not parse: {exc}")

    for name in sorted(reader.entries):
        if name.isdigit():
            continue
        try:
            reader.read_entry(name)
        except (ProventError, EOFError) as exc:
            problems.append(str(exc))

    ordinals = sorted(int(name) for name in reader.entries if name.isdigit())
    if ordinals != list(range(len(ordinals))):
        problems.append("event entries are not the contiguous ordinals 0..N-1")

    recomputed = EventIndex()
    total_particles = 0
    for k in range(reader.actual_events):
        try:
            event = reader.read_event(k)
        except (ProventError, EOFError) as exc:
            problems.append(str(exc))
            recomputed.particle_count.append(-1)
            recomputed.max_pt_quantized.append(-1)
            continue
        entry = reader.entries[str(k)]
        if entry.length > MESSAGE_SIZE_GUIDANCE:
            warnings.append(
                f"event '{k}' message is {entry.length} bytes, above the 1 MiB guidance")
        recomputed.particle_count.append(len(event.particles))
        recomputed.max_pt_quantized.append(event_max_pt(event))
        total_particles += len(event.particles)

    try:
        stored = reader.event_index()
        if (stored.particle_count != recomputed.particle_count
                or stored.max_pt_quantized != recomputed.max_pt_quantized):
            problems.append("index mismatch: stored index disagrees with recomputed summaries")
    except ProventError as exc:
        problems.append(f"index unreadable: {exc}")

    try:
        stats = reader.statistics()
        if stats.actual_events != reader.actual_events:
            problems.append(
                f"statistics mismatch: {stats.actual_events} recorded, "
                f"{reader.actual_events} present")
        if stats.total_particles != total_particles:
            problems.append(
                f"statistics mismatch: {stats.total_particles} particles recorded, "
                f"{total_particles} present")
    except (ProventError, KeyError) as exc:
        problems.append(f"statistics unreadable: {exc}")

    try:
        mirror = reader.read_entry(NEVENTS_MIRROR).decode("ascii")
        if mirror != f"{reader.actual_events}\n":
            problems.append("text mirror mismatch: promc_nevents.txt disagrees with event count")
    except (ProventError, KeyError, UnicodeDecodeError) as exc:
        problems.append(f"promc_nevents.txt unreadable: {exc}")

    try:
        mirror = reader.read_entry(DESCRIPTION_MIRROR).decode("utf-8")
        if mirror != reader.descriptor.description:
            problems.append("text mirror mismatch: promc_description.txt disagrees with header")
    except (ProventError, KeyError, UnicodeDecodeError) as exc:
        problems.append(f"promc_description.txt unreadable: {exc}")

    return problems, warnings
