"""Shared builders for deterministic fixture events and files."""

import io
from pathlib import Path

from provent.container import Writer, open_writer
from provent.generator import SpectrumConfig, generate_events
from provent.model import NO_LINK, EventRecord, FileDescriptor, ParticleBlock

FIXTURES = Path(__file__).parent / "fixtures"

GOLDEN_TWO_EVENTS = FIXTURES / "golden_two_events.promc"
GOLDEN_GENERATED = FIXTURES / "golden_generated.promc"
GOLDEN_MIXED = FIXTURES / "golden_mixed.promc"

GOLDEN_FILES = (GOLDEN_TWO_EVENTS, GOLDEN_GENERATED, GOLDEN_MIXED)


def two_event_records() -> list[EventRecord]:
    """Hand-built pair covering weights, lineage, vertices and empty columns.

    Quantized integers are written directly so the bytes are independent of
    any float rounding path.
    """
    first = EventRecord(
        event_number=0,
        process_id=-3,
        weight=0.75,
        particles=ParticleBlock(
            pdg_id=[2212, 25],
            status=[4, 1],
            px=[0, 1050000],
            py=[0, -200000],
            pz=[650000000, 1],
            mass=[93827, 12500000],
            mother1=[NO_LINK, 0],
            mother2=[NO_LINK, NO_LINK],
            daughter1=[1, NO_LINK],
            daughter2=[NO_LINK, NO_LINK],
            barcode=[1, 2],
            x=[0, 1500],
            y=[0, -2250],
            z=[-10, 125],
            t=[0, 63],
        ),
    )
    second = EventRecord(event_number=1, process_id=0, weight=1.0)
    return [first, second]


def write_container_bytes(events, descriptor: FileDescriptor) -> bytes:
    sink = io.BytesIO()
    writer = open_writer(sink, descriptor)
    for event in events:
        writer.append_event(event)
    writer.close()
    return sink.getvalue()


def two_event_file_bytes() -> bytes:
    return write_container_bytes(
        two_event_records(),
        FileDescriptor(description="golden two-event fixture", requested_events=2))


def generated_file_bytes() -> bytes:
    cfg = SpectrumConfig(n_events=5, pileup_mean=3.0, pt_soft=0.5, n_signal=1,
                         pt_hard_min=50.0, pt_hard_max=150.0, seed=7)
    return write_container_bytes(
        generate_events(cfg),
        FileDescriptor(description="golden generated fixture", requested_events=cfg.n_events))


def mixed_signal_pileup_events(n_pairs: int = 4) -> tuple[list[EventRecord], list[int]]:
    """Alternating pure-pileup / signal events, renumbered; returns (events, signal ordinals)."""
    pileup_cfg = SpectrumConfig(n_events=n_pairs, pileup_mean=5.0, pt_soft=0.5,
                                n_signal=0, seed=11)
    signal_cfg = SpectrumConfig(n_events=n_pairs, pileup_mean=5.0, pt_soft=0.5,
                                n_signal=2, pt_hard_min=60.0, pt_hard_max=150.0, seed=12)
    events: list[EventRecord] = []
    signal_ordinals: list[int] = []
    for soft, hard in zip(generate_events(pileup_cfg), generate_events(signal_cfg)):
        soft.event_number = len(events)
        events.append(soft)
        hard.event_number = len(events)
        signal_ordinals.append(hard.event_number)
        events.append(hard)
    return events, signal_ordinals


def mixed_file_bytes() -> bytes:
    events, _ = mixed_signal_pileup_events()
    return write_container_bytes(
        events, FileDescriptor(description="golden mixed signal/pileup fixture"))
