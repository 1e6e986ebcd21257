"""Command-line surface: inspect, dump, extract, convert, generate, benchmark, verify.

Exit codes are stable for scripting: 0 success, 1 verification failure,
2 usage or input error. Reports and data go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import measure_sizes, write_report_files
from .container import METADATA_ENTRIES, Reader, open_reader, open_writer, verify_container
from .errors import ProventError
from .generator import SpectrumConfig, generate_events
from .hepmc import ConversionReport, parse_ascii_stream, to_event_record
from .model import FileDescriptor, on_shell_energy
from .quant import QuantizationScheme
from .schema import event_json_from_tree, generic_decode, parse_schema
from .sources import FileSource


def _fail(message: str, code: int = 2) -> int:
    print(f"provent: {message}", file=sys.stderr)
    return code


def _open(path: str) -> Reader:
    return open_reader(FileSource(path))


def cmd_info(args) -> int:
    reader = _open(args.file)
    d = reader.descriptor
    stats = reader.statistics()
    size = reader._src.length()
    payload = sum(entry.length for entry in reader.entries.values())
    overhead = size - payload
    n_entries = len(reader.entries)
    print(f"file: {args.file}")
    print(f"size: {size} bytes")
    print(f"format version: {d.format_version}")
    print(f"description: {d.description}")
    print(f"momentum unit: {d.scheme.momentum_unit} per GeV "
          f"({1000.0 / d.scheme.momentum_unit:g} MeV step)")
    print(f"length unit: {d.scheme.length_unit} per mm "
          f"({1.0 / d.scheme.length_unit:g} mm step)")
    print(f"events: {reader.actual_events}")
    print(f"total particles: {stats.total_particles}")
    print(f"requested events: {d.requested_events}")
    print(f"entries: {n_entries} ({reader.actual_events} events + {METADATA_ENTRIES} metadata)")
    print(f"payload bytes: {payload}")
    print(f"archive overhead: {overhead} bytes ({overhead / n_entries:.1f} per entry)")
    return 0


def cmd_schema(args) -> int:
    reader = _open(args.file)
    sys.stdout.write(reader.descriptor.schema_text)
    return 0


def cmd_extract(args) -> int:
    if args.count < 0:
        return _fail(f"event count must be >= 0, got {args.count}")
    reader = _open(args.src)
    take = min(args.count, reader.actual_events)
    with open(args.dst, "wb") as sink:
        writer = open_writer(sink, FileDescriptor(
            description=reader.descriptor.description,
            scheme=reader.descriptor.scheme,
            requested_events=reader.descriptor.requested_events,
            schema_text=reader.descriptor.schema_text,
        ))
        for k in range(take):
            writer.append_event(reader.read_event(k))
        writer.close()
    print(f"wrote {take} of {reader.actual_events} events to {args.dst}", file=sys.stderr)
    return 0


def cmd_convert(args) -> int:
    scheme = QuantizationScheme(args.momentum_unit, args.length_unit).validate()
    report = ConversionReport()
    with open(args.input, "r", encoding="utf-8") as stream, \
            open(args.output, "wb") as sink:
        writer = open_writer(sink, FileDescriptor(description=args.description, scheme=scheme))
        for ordinal, ascii_event in enumerate(parse_ascii_stream(stream)):
            record = to_event_record(ascii_event, scheme, report)
            record.event_number = ordinal
            writer.append_event(record)
        writer.close()
    print(report.to_text(), file=sys.stderr)
    return 0


def _config_from_args(args) -> SpectrumConfig:
    return SpectrumConfig(
        n_events=args.events,
        pileup_mean=args.pileup_mean,
        pt_soft=args.pt_soft,
        n_signal=args.n_signal,
        pt_hard_min=args.pt_hard_min,
        pt_hard_max=args.pt_hard_max,
        seed=args.seed,
    ).validate()


def cmd_generate(args) -> int:
    cfg = _config_from_args(args)
    scheme = QuantizationScheme()
    particles = 0
    with open(args.out, "wb") as sink:
        writer = open_writer(sink, FileDescriptor(
            description=f"generated spectrum (seed {cfg.seed})",
            scheme=scheme,
            requested_events=cfg.n_events,
        ))
        for event in generate_events(cfg, scheme):
            writer.append_event(event)
            particles += len(event.particles)
        writer.close()
    print(f"seed {cfg.seed}: wrote {cfg.n_events} events, {particles} particles to {args.out}",
          file=sys.stderr)
    return 0


def cmd_sizes(args) -> int:
    cfg = _config_from_args(args)
    scheme = QuantizationScheme()
    events = list(generate_events(cfg, scheme))
    report = measure_sizes(events, scheme)
    sys.stdout.write(report.to_csv())
    if args.report_dir is not None:
        paths = write_report_files(report, Path(args.report_dir))
        for path in paths:
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    problems, warnings = verify_container(FileSource(args.file))
    for warning in warnings:
        print(f"warn: {warning}")
    for problem in problems:
        print(f"fail: {problem}")
    if problems:
        print(f"{args.file}: {len(problems)} problem(s) found")
        return 1
    print(f"{args.file}: ok")
    return 0


def cmd_cat(args) -> int:
    reader = _open(args.file)
    if not 0 <= args.event < reader.actual_events:
        return _fail(f"event {args.event} outside 0..{reader.actual_events - 1}")
    table = parse_schema(reader.descriptor.schema_text)
    payload = reader.read_entry(str(args.event))
    tree = generic_decode(payload, table, "EventRecord", reader.descriptor.scheme)
    shaped = event_json_from_tree(tree)
    if args.format == "json":
        print(json.dumps(shaped, sort_keys=True))
        return 0
    particles = shaped["particles"]
    n = len(particles["pdg_id"])
    print(f"event {shaped['event_number']}  process_id {shaped['process_id']}  "
          f"weight {shaped['weight']}  particles {n}")
    header = (f"{'#':>5} {'pdg_id':>9} {'status':>6} {'px':>13} {'py':>13} {'pz':>13} "
              f"{'mass':>13} {'energy':>13} {'mothers':>9} {'daughters':>11}")
    print(header)
    for i in range(n):
        px, py, pz = particles["px"][i], particles["py"][i], particles["pz"][i]
        mass = particles["mass"][i]
        energy = on_shell_energy(px, py, pz, mass)
        mothers = f"{particles['mother1'][i]},{particles['mother2'][i]}"
        daughters = f"{particles['daughter1'][i]},{particles['daughter2'][i]}"
        print(f"{i:>5} {particles['pdg_id'][i]:>9} {particles['status'][i]:>6} "
              f"{px:>13.6g} {py:>13.6g} {pz:>13.6g} {mass:>13.6g} {energy:>13.6g} "
              f"{mothers:>9} {daughters:>11}")
    if particles["x"]:
        print("vertices (mm):")
        for i in range(n):
            print(f"{i:>5} x {particles['x'][i]:.6g} y {particles['y'][i]:.6g} "
                  f"z {particles['z'][i]:.6g} t {particles['t'][i]:.6g}")
    return 0


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--events", type=int, default=100, help="events to generate")
    parser.add_argument("--pileup-mean", type=float, default=100.0,
                        help="mean soft particles per event")
    parser.add_argument("--pt-soft", type=float, default=0.5,
                        help="exponential pT scale of soft particles, GeV")
    parser.add_argument("--n-signal", type=int, default=2,
                        help="hard particles per event")
    parser.add_argument("--pt-hard-min", type=float, default=50.0,
                        help="hard pT range lower edge, GeV")
    parser.add_argument("--pt-hard-max", type=float, default=150.0,
                        help="hard pT range upper edge, GeV")
    parser.add_argument("--seed", type=int, default=1, help="generator seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="provent",
        description="compact random-access container for collision event records")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="show file metadata and sizes")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("schema", help="dump the embedded schema text")
    p.add_argument("file")
    p.set_defaults(func=cmd_schema)

    p = sub.add_parser("extract", help="copy the first N events into a new file")
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("count", type=int)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("convert", help="convert a HepMC2 ASCII file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--description", default="")
    p.add_argument("--momentum-unit", type=int, default=QuantizationScheme().momentum_unit)
    p.add_argument("--length-unit", type=int, default=QuantizationScheme().length_unit)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("generate", help="write a synthetic signal+pileup file")
    _add_generator_flags(p)
    p.add_argument("out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sizes", help="benchmark one stream across four encodings")
    _add_generator_flags(p)
    p.add_argument("--report-dir", default=None,
                   help="also write sizes.csv and sizes.png here")
    p.set_defaults(func=cmd_sizes)

    p = sub.add_parser("verify", help="check archive integrity and invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cat", help="print one event via the embedded schema")
    p.add_argument("file")
    p.add_argument("event", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_cat)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProventError, EOFError, OSError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
