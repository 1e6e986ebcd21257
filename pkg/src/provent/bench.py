"""Size benchmark: one event stream written four ways.

Baselines are defined here, in-repo, so the comparison is reproducible:

  ascii          HepMC2-style text (full-precision %.16e momenta)
  ascii_gzip     gzip of the text at level 6, zero mtime
  fixed_width    per particle 4 float64 (px py pz mass) + 6 int32 (pdg,
                 status, four lineage links) = 56 bytes, plus a 20-byte
                 event header; no varints anywhere
  varint_container  the complete container file, archive overhead included

Ratios are reported against fixed_width to three decimals. The report
renders as delimited text and, on request, as a bar-chart figure.
"""

from __future__ import annotations

import gzip
import io
import struct
from dataclasses import dataclass
from pathlib import Path

from .container import open_writer
from .model import EventRecord, FileDescriptor, on_shell_energy
from .quant import QuantizationScheme, dequantize

_EVENT_HEADER = struct.Struct("<IiId")  # number, process_id, n_particles, weight
_PARTICLE_FIXED = struct.Struct("<dddd6i")

ASCII_BANNER_TOP = "HepMC::Version 2.06.09\nHepMC::IO_GenEvent-START_EVENT_LISTING\n"
ASCII_BANNER_BOTTOM = "HepMC::IO_GenEvent-END_EVENT_LISTING\n"


@dataclass(frozen=True)
class SizeReport:
    ascii: int
    ascii_gzip: int
    fixed_width: int
    varint_container: int

    def ratios(self) -> dict[str, float]:
        base = self.fixed_width
        return {
            "ascii": round(self.ascii / base, 3),
            "ascii_gzip": round(self.ascii_gzip / base, 3),
            "fixed_width": 1.0,
            "varint_container": round(self.varint_container / base, 3),
        }

    def as_rows(self) -> list[tuple[str, int, float]]:
        ratios = self.ratios()
        return [(name, getattr(self, name), ratios[name])
                for name in ("ascii", "ascii_gzip", "fixed_width", "varint_container")]

    def to_csv(self) -> str:
        lines = ["format,bytes,ratio_vs_fixed_width"]
        lines += [f"{name},{size},{ratio:.3f}" for name, size, ratio in self.as_rows()]
        return "\n".join(lines) + "\n"


def event_to_ascii(e: EventRecord, scheme: QuantizationScheme) -> str:
    """HepMC2-flavoured text for one event, parseable by provent.hepmc."""
    n = len(e.particles)
    lines = [
        f"E {e.event_number} -1 0 0 0 {e.process_id} 0 1 0 0 0 1 {e.weight!r}",
        "U GEV MM",
        f"V -1 0 0 0 0 0 0 {n} 0",
    ]
    p = e.particles
    unit = scheme.momentum_unit
    for i in range(n):
        px = dequantize(p.px[i], unit)
        py = dequantize(p.py[i], unit)
        pz = dequantize(p.pz[i], unit)
        mass = dequantize(p.mass[i], unit)
        energy = on_shell_energy(px, py, pz, mass)
        lines.append(
            f"P {i + 1} {p.pdg_id[i]} {px:.16e} {py:.16e} {pz:.16e} "
            f"{energy:.16e} {mass:.16e} {p.status[i]} 0 0 0 0")
    return "\n".join(lines) + "\n"


def events_to_ascii(events: list[EventRecord], scheme: QuantizationScheme) -> bytes:
    body = "".join(event_to_ascii(e, scheme) for e in events)
    return (ASCII_BANNER_TOP + body + ASCII_BANNER_BOTTOM).encode("ascii")


def events_to_fixed_width(events: list[EventRecord], scheme: QuantizationScheme) -> bytes:
    unit = scheme.momentum_unit
    out = bytearray()
    for e in events:
        p = e.particles
        n = len(p)
        out += _EVENT_HEADER.pack(e.event_number, e.process_id, n, e.weight)
        for i in range(n):
            out += _PARTICLE_FIXED.pack(
                dequantize(p.px[i], unit), dequantize(p.py[i], unit),
                dequantize(p.pz[i], unit), dequantize(p.mass[i], unit),
                p.pdg_id[i], p.status[i],
                p.mother1[i], p.mother2[i], p.daughter1[i], p.daughter2[i])
    return bytes(out)


def events_to_container(events: list[EventRecord], scheme: QuantizationScheme,
                        description: str = "size benchmark") -> bytes:
    sink = io.BytesIO()
    writer = open_writer(sink, FileDescriptor(description=description, scheme=scheme))
    for e in events:
        writer.append_event(e)
    writer.close()
    return sink.getvalue()


def measure_sizes(events: list[EventRecord], scheme: QuantizationScheme) -> SizeReport:
    ascii_bytes = events_to_ascii(events, scheme)
    return SizeReport(
        ascii=len(ascii_bytes),
        ascii_gzip=len(gzip.compress(ascii_bytes, compresslevel=6, mtime=0)),
        fixed_width=len(events_to_fixed_width(events, scheme)),
        varint_container=len(events_to_container(events, scheme)),
    )


def render_size_figure(report: SizeReport, path: Path) -> None:
    """Bar chart of the four encodings, annotated with the ratios."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = report.as_rows()
    labels = [name.replace("_", "\n") for name, _size, _ratio in rows]
    sizes = [size / 1024.0 for _name, size, _ratio in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    bars = ax.bar(labels, sizes, color=["#888888", "#bbbbbb", "#5b8db8", "#c44e52"])
    for bar, (_name, _size, ratio) in zip(bars, rows):
        ax.annotate(f"{ratio:.3f}x", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                    ha="center", va="bottom", fontsize=9)
    ax.set_ylabel("size (KiB)")
    ax.set_title("same events, four encodings (ratio vs fixed-width)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report_files(report: SizeReport, report_dir: Path) -> list[Path]:
    report_dir = Path(report_dir)
    report_dir.mkdir(parents=True, exist_ok=True)
    csv_path = report_dir / "sizes.csv"
    csv_path.write_text(report.to_csv())
    png_path = report_dir / "sizes.png"
    render_size_figure(report, png_path)
    return [csv_path, png_path]
