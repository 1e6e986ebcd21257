"""Parser for the HepMC2 IO_GenEvent ASCII subset and conversion to records.

Only E, V and P lines are data; banners and any other line kinds are
skipped. Fields are positional per the HepMC2 layout (see docs/format.md):

    E  <number> ... <n_vertices at position 8> ...
    V  <barcode> <id> <x> <y> <z> <t> ...
    P  <barcode> <pdg> <px> <py> <pz> <E> <m> <status> <theta> <phi>
       <end_vertex> ...

A particle's production vertex is the vertex it is listed under; an
end-vertex barcode of 0 means stable. Units are assumed GEV/MM; a U line
declaring anything else is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import DanglingReference, MalformedLine
from .model import NO_LINK, EventRecord, ParticleBlock
from .quant import QuantizationScheme, quantize


@dataclass
class AsciiParticle:
    barcode: int
    pdg_id: int
    px: float
    py: float
    pz: float
    energy: float
    mass: float
    status: int
    end_vertex: int
    production_vertex: int = 0


@dataclass
class AsciiVertex:
    barcode: int
    x: float
    y: float
    z: float
    t: float
    particle_barcodes: list[int] = field(default_factory=list)


@dataclass
class AsciiEvent:
    number: int
    n_vertices: int
    vertices: list[AsciiVertex] = field(default_factory=list)
    particles: list[AsciiParticle] = field(default_factory=list)


@dataclass
class ConversionReport:
    events: int = 0
    particles: int = 0
    truncated_links: int = 0

    def to_text(self) -> str:
        return (f"converted {self.events} events, {self.particles} particles, "
                f"{self.truncated_links} lineage links truncated")


def _number(token: str, lineno: int, cast):
    try:
        return cast(token)
    except ValueError:
        raise MalformedLine(f"token {token!r} is not a number", lineno) from None


def parse_ascii_stream(lines: Iterable[str]) -> Iterator[AsciiEvent]:
    event: AsciiEvent | None = None
    vertex: AsciiVertex | None = None
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        kind = line[0]
        tokens = line.split()
        if kind == "E" and tokens[0] == "E":
            if event is not None:
                yield _finish_event(event, lineno)
            if len(tokens) < 2:
                raise MalformedLine("E line has no event number", lineno)
            number = _number(tokens[1], lineno, int)
            n_vertices = _number(tokens[8], lineno, int) if len(tokens) > 8 else 0
            event = AsciiEvent(number, n_vertices)
            vertex = None
        elif kind == "V" and tokens[0] == "V":
            if event is None:
                raise MalformedLine("V line before any E line", lineno)
            if len(tokens) < 7:
                raise MalformedLine(f"V line has {len(tokens) - 1} fields, need at least 6", lineno)
            vertex = AsciiVertex(
                barcode=_number(tokens[1], lineno, int),
                x=_number(tokens[3], lineno, float),
                y=_number(tokens[4], lineno, float),
                z=_number(tokens[5], lineno, float),
                t=_number(tokens[6], lineno, float),
            )
            event.vertices.append(vertex)
        elif kind == "P" and tokens[0] == "P":
            if event is None:
                raise MalformedLine("P line before any E line", lineno)
            if vertex is None:
                raise MalformedLine("P line before any V line in this event", lineno)
            if len(tokens) < 12:
                raise MalformedLine(f"P line has {len(tokens) - 1} fields, need at least 11", lineno)
            particle = AsciiParticle(
                barcode=_number(tokens[1], lineno, int),
                pdg_id=_number(tokens[2], lineno, int),
                px=_number(tokens[3], lineno, float),
                py=_number(tokens[4], lineno, float),
                pz=_number(tokens[5], lineno, float),
                energy=_number(tokens[6], lineno, float),
                mass=_number(tokens[7], lineno, float),
                status=_number(tokens[8], lineno, int),
                end_vertex=_number(tokens[11], lineno, int),
                production_vertex=vertex.barcode,
            )
            vertex.particle_barcodes.append(particle.barcode)
            event.particles.append(particle)
        elif kind == "U" and tokens[0] == "U":
            if len(tokens) < 3 or tokens[1] != "GEV" or tokens[2] != "MM":
                raise MalformedLine(
                    f"units {' '.join(tokens[1:3])!r} unsupported, need GEV MM", lineno)
        # anything else (banners, weights, cross-sections, ...) is skipped
    if event is not None:
        yield _finish_event(event, lineno)


def _finish_event(event: AsciiEvent, lineno: int) -> AsciiEvent:
    known = {v.barcode for v in event.vertices}
    for p in event.particles:
        if p.end_vertex != 0 and p.end_vertex not in known:
            raise DanglingReference(
                f"particle {p.barcode} in event {event.number} ends at unknown "
                f"vertex {p.end_vertex} (before line {lineno + 1})")
    return event


def to_event_record(a: AsciiEvent, scheme: QuantizationScheme,
                    report: ConversionReport | None = None) -> EventRecord:
    """Quantize one parsed event; lineage is rebuilt from the vertex graph.

    Mothers are the incoming particles of the production vertex (those that
    end there), daughters the outgoing particles of the end vertex; both
    capped at the two lowest barcodes, with each capped vertex side counted
    once in the report. Particle energy is dropped.
    """
    particles = sorted(a.particles, key=lambda p: p.barcode)
    position = {p.barcode: i for i, p in enumerate(particles)}
    vertices = {v.barcode: v for v in a.vertices}
    incoming: dict[int, list[int]] = {bc: [] for bc in vertices}
    for p in particles:
        if p.end_vertex != 0:
            incoming[p.end_vertex].append(p.barcode)

    truncated: set[tuple[int, str]] = set()

    def links(barcodes: list[int], vertex_barcode: int, direction: str) -> tuple[int, int]:
        ordered = sorted(barcodes)
        if len(ordered) > 2:
            truncated.add((vertex_barcode, direction))
        first = position[ordered[0]] if len(ordered) > 0 else NO_LINK
        second = position[ordered[1]] if len(ordered) > 1 else NO_LINK
        return first, second

    block = ParticleBlock()
    for p in particles:
        block.pdg_id.append(p.pdg_id)
        block.status.append(p.status)
        block.px.append(quantize(p.px, scheme.momentum_unit))
        block.py.append(quantize(p.py, scheme.momentum_unit))
        block.pz.append(quantize(p.pz, scheme.momentum_unit))
        block.mass.append(quantize(p.mass, scheme.momentum_unit))
        m1, m2 = links(incoming[p.production_vertex], p.production_vertex, "in")
        block.mother1.append(m1)
        block.mother2.append(m2)
        if p.end_vertex != 0:
            d1, d2 = links(vertices[p.end_vertex].particle_barcodes, p.end_vertex, "out")
        else:
            d1, d2 = NO_LINK, NO_LINK
        block.daughter1.append(d1)
        block.daughter2.append(d2)
        block.barcode.append(p.barcode)
        production = vertices[p.production_vertex]
        block.x.append(quantize(production.x, scheme.length_unit))
        block.y.append(quantize(production.y, scheme.length_unit))
        block.z.append(quantize(production.z, scheme.length_unit))
        block.t.append(quantize(production.t, scheme.length_unit))

    if report is not None:
        report.events += 1
        report.particles += len(particles)
        report.truncated_links += len(truncated)

    return EventRecord(
        event_number=a.number,
        process_id=0,
        weight=1.0,
        particles=block.validate(),
    )
