import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from provent.errors import InvariantViolation, TruncatedError, UnsupportedVersion
from provent.model import (
    NO_LINK,
    EventRecord,
    FileDescriptor,
    FileStatistics,
    ParticleBlock,
    decode_descriptor,
    decode_event,
    decode_statistics,
    encode_descriptor,
    encode_event,
    encode_statistics,
    on_shell_energy,
)
from provent.quant import QuantizationScheme
from provent.wire import FieldTag, WireType, read_message_fields, write_field

Q60 = 2**60


def random_block(rng: random.Random, n: int) -> ParticleBlock:
    def links():
        return [rng.randint(-1, n - 1) if n else NO_LINK for _ in range(n)]

    block = ParticleBlock(
        pdg_id=[rng.randint(-(10**7), 10**7) for _ in range(n)],
        status=[rng.randint(0, 10**6) for _ in range(n)],
        px=[rng.randint(-Q60, Q60) for _ in range(n)],
        py=[rng.randint(-Q60, Q60) for _ in range(n)],
        pz=[rng.randint(-Q60, Q60) for _ in range(n)],
        mass=[rng.randint(0, Q60) for _ in range(n)],
        mother1=links(), mother2=links(), daughter1=links(), daughter2=links(),
    )
    if rng.random() < 0.5:
        block.barcode = [rng.randint(-Q60, Q60) for _ in range(n)]
    if rng.random() < 0.5:
        block.x = [rng.randint(-Q60, Q60) for _ in range(n)]
        block.y = [rng.randint(-Q60, Q60) for _ in range(n)]
        block.z = [rng.randint(-Q60, Q60) for _ in range(n)]
        block.t = [rng.randint(-Q60, Q60) for _ in range(n)]
    return block


def random_event(rng: random.Random, number: int) -> EventRecord:
    return EventRecord(
        event_number=number,
        process_id=rng.randint(-(10**6), 10**6),
        weight=rng.choice([1.0, 0.5, -2.25, 3.141592653589793, 1e-30]),
        particles=random_block(rng, rng.randint(0, 12)),
    )


class TestEventRoundtrip:
    def test_bulk_randomized_roundtrip(self):
        # 10^4 randomized events through encode/decode, exact equality
        rng = random.Random(20130620)
        for i in range(10_000):
            event = random_event(rng, i)
            assert decode_event(encode_event(event)) == event

    @given(st.data())
    @settings(max_examples=200, deadline=None)
    def test_roundtrip_property(self, data):
        seed = data.draw(st.integers(min_value=0, max_value=2**48))
        event = random_event(random.Random(seed), data.draw(st.integers(0, 10**9)))
        assert decode_event(encode_event(event)) == event

    def test_determinism(self):
        event = random_event(random.Random(5), 3)
        assert encode_event(event) == encode_event(event)

    def test_empty_event(self):
        event = EventRecord()
        data = encode_event(event)
        # number 0, process 0 and weight 1.0 are all defaults: only the
        # (empty) nested block is on the wire
        assert data == b"\x22\x00"
        assert decode_event(data) == event

    def test_weight_written_when_not_default(self):
        data = encode_event(EventRecord(weight=0.75))
        fields = {tag.field_number for tag, _ in read_message_fields(data)}
        assert fields == {3, 4}

    def test_non_finite_weight_rejected(self):
        with pytest.raises(InvariantViolation):
            encode_event(EventRecord(weight=float("inf")))

    def test_particle_at_rest_column_sizes(self):
        block = ParticleBlock(
            pdg_id=[25], status=[1], px=[0], py=[0], pz=[0], mass=[100000],
            mother1=[NO_LINK], mother2=[NO_LINK], daughter1=[NO_LINK], daughter2=[NO_LINK])
        data = encode_event(EventRecord(particles=block))
        [(tag, nested)] = read_message_fields(data)
        columns = {t.field_number: payload for t, payload in read_message_fields(nested)}
        assert len(columns[5]) == 1   # pz: zigzag(0) is one byte
        assert len(columns[6]) == 3   # mass: zigzag(100000)=200000, three bytes

    def test_unknown_field_skipped(self):
        base = encode_event(helpers.two_event_records()[0])
        extended = bytearray(base)
        write_field(extended, FieldTag(99, WireType.LENGTH_DELIMITED), b"future data")
        write_field(extended, FieldTag(12, WireType.VARINT), 7)
        assert decode_event(bytes(extended)) == decode_event(base)

    def test_truncated_message(self):
        data = encode_event(helpers.two_event_records()[0])
        with pytest.raises(TruncatedError):
            decode_event(data[:-3])

    def test_size_monotonicity(self):
        event = helpers.two_event_records()[0]
        small = encode_event(event)
        for name in ("px", "py", "pz", "mass"):
            setattr(event.particles, name,
                    [v * 1000 for v in getattr(event.particles, name)])
        assert len(encode_event(event)) > len(small)

    def test_non_packed_column_rejected(self):
        # a column arriving as bare varint fields instead of one packed run
        nested = bytearray()
        write_field(nested, FieldTag(3, WireType.VARINT), 42)
        message = bytearray()
        write_field(message, FieldTag(4, WireType.LENGTH_DELIMITED), bytes(nested))
        with pytest.raises(InvariantViolation, match="length-delimited"):
            decode_event(bytes(message))

    def test_link_sentinel_on_wire(self):
        block = ParticleBlock(
            pdg_id=[1, 2], status=[1, 1], px=[0, 0], py=[0, 0], pz=[0, 0],
            mass=[0, 0], mother1=[NO_LINK, 0], mother2=[NO_LINK, NO_LINK],
            daughter1=[1, NO_LINK], daughter2=[NO_LINK, NO_LINK])
        data = encode_event(EventRecord(particles=block))
        [(_, nested)] = read_message_fields(data)
        columns = {t.field_number: payload for t, payload in read_message_fields(nested)}
        assert columns[7] == b"\x00\x01"   # mother1: none, then particle 0
        assert columns[9] == b"\x02\x00"   # daughter1: particle 1, then none
        back = decode_event(data)
        assert back.particles.mother1 == [NO_LINK, 0]
        assert back.particles.daughter1 == [1, NO_LINK]


class TestBlockInvariants:
    def test_column_length_mismatch(self):
        block = ParticleBlock(pdg_id=[1, 2], status=[1])
        with pytest.raises(InvariantViolation):
            block.validate()

    def test_optional_column_wrong_length(self):
        block = ParticleBlock(pdg_id=[1], status=[1], px=[0], py=[0], pz=[0],
                              mass=[0], mother1=[-1], mother2=[-1],
                              daughter1=[-1], daughter2=[-1], barcode=[5, 6])
        with pytest.raises(InvariantViolation):
            block.validate()

    def test_link_out_of_range(self):
        block = ParticleBlock(pdg_id=[1], status=[1], px=[0], py=[0], pz=[0],
                              mass=[0], mother1=[3], mother2=[-1],
                              daughter1=[-1], daughter2=[-1])
        with pytest.raises(InvariantViolation):
            block.validate()

    def test_negative_status(self):
        block = ParticleBlock(pdg_id=[1], status=[-1], px=[0], py=[0], pz=[0],
                              mass=[0], mother1=[-1], mother2=[-1],
                              daughter1=[-1], daughter2=[-1])
        with pytest.raises(InvariantViolation):
            block.validate()


class TestDescriptor:
    def test_default_roundtrip(self):
        d = FileDescriptor(description="", schema_text="stub")
        assert decode_descriptor(encode_descriptor(d)) == d

    def test_full_roundtrip(self):
        d = FileDescriptor(
            description="dijet sample, 13 TeV",
            scheme=QuantizationScheme(1000, 50),
            requested_events=250,
            schema_text="message X\nend\n")
        assert decode_descriptor(encode_descriptor(d)) == d

    def test_non_default_unit_flows_through(self):
        d = FileDescriptor(scheme=QuantizationScheme(momentum_unit=1000))
        back = decode_descriptor(encode_descriptor(d))
        assert back.scheme.momentum_unit == 1000
        # a reader dequantizing with the carried unit recovers the value
        from provent.quant import dequantize, quantize
        assert dequantize(quantize(2.5, back.scheme.momentum_unit),
                          back.scheme.momentum_unit) == 2.5

    def test_unsupported_version(self):
        d = FileDescriptor(schema_text="stub")
        raw = bytearray(encode_descriptor(d))
        raw[1] = 2  # field 1 varint payload: bump version to 2
        with pytest.raises(UnsupportedVersion):
            decode_descriptor(bytes(raw))
        with pytest.raises(UnsupportedVersion):
            FileDescriptor(format_version=2).validate()

    def test_missing_scheme_rejected(self):
        with pytest.raises(InvariantViolation):
            decode_descriptor(b"\x08\x01")  # version only


class TestStatistics:
    def test_roundtrip(self):
        s = FileStatistics(actual_events=7, total_particles=321)
        assert decode_statistics(encode_statistics(s)) == s

    def test_empty(self):
        assert decode_statistics(encode_statistics(FileStatistics())) == FileStatistics()


class TestGolden:
    def test_two_event_fixture_bytes_are_stable(self, golden_two_events_path):
        assert helpers.two_event_file_bytes() == golden_two_events_path.read_bytes()


def test_on_shell_energy():
    assert on_shell_energy(3.0, 0.0, 4.0, 0.0) == 5.0
    assert on_shell_energy(0.0, 0.0, 0.0, 1.25) == 1.25
