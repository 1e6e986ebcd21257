"""provent: a compact, self-describing, randomly accessible event container.

Numeric content is fixed-point quantized and stored as variable-length
integers, so soft pileup particles cost fewer bytes than hard signal
particles. Files are ZIP archives of uncompressed entries with an embedded
schema, readable with nothing but a ZIP tool and the format note.
"""

from .container import (
    EntryRecord,
    EventIndex,
    Reader,
    Writer,
    open_reader,
    open_writer,
    verify_container,
)
from .errors import ProventError
from .generator import SpectrumConfig, generate_events
from .hepmc import AsciiEvent, ConversionReport, parse_ascii_stream, to_event_record
from .model import (
    NO_LINK,
    EventRecord,
    FileDescriptor,
    FileStatistics,
    ParticleBlock,
    decode_event,
    encode_event,
    event_to_json_dict,
)
from .quant import QuantizationScheme, dequantize, quantize, wire_cost
from .schema import canonical_schema, generic_decode, parse_schema
from .sources import ByteSource, CountingSource, FileSource, HttpRangeSource, MemorySource

__version__ = "0.1.0"

__all__ = [
    "AsciiEvent",
    "ByteSource",
    "ConversionReport",
    "CountingSource",
    "EntryRecord",
    "EventIndex",
    "EventRecord",
    "FileDescriptor",
    "FileSource",
    "FileStatistics",
    "HttpRangeSource",
    "MemorySource",
    "NO_LINK",
    "ParticleBlock",
    "ProventError",
    "QuantizationScheme",
    "Reader",
    "SpectrumConfig",
    "Writer",
    "canonical_schema",
    "decode_event",
    "dequantize",
    "encode_event",
    "event_to_json_dict",
    "generate_events",
    "generic_decode",
    "open_reader",
    "open_writer",
    "parse_ascii_stream",
    "parse_schema",
    "quantize",
    "to_event_record",
    "verify_container",
    "wire_cost",
]
