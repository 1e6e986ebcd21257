import gzip
import io

import helpers
from provent.bench import (
    SizeReport,
    event_to_ascii,
    events_to_ascii,
    events_to_container,
    events_to_fixed_width,
    measure_sizes,
    write_report_files,
)
from provent.generator import SpectrumConfig, generate_events
from provent.hepmc import parse_ascii_stream, to_event_record
from provent.quant import QuantizationScheme, dequantize

SCHEME = QuantizationScheme()


def pileup_events(n=40, seed=6):
    cfg = SpectrumConfig(n_events=n, pileup_mean=100.0, pt_soft=0.5,
                         n_signal=2, seed=seed)
    return list(generate_events(cfg))


class TestBaselines:
    def test_fixed_width_is_56_bytes_per_particle(self):
        events = pileup_events(5)
        data = events_to_fixed_width(events, SCHEME)
        particles = sum(len(e.particles) for e in events)
        assert len(data) == 20 * len(events) + 56 * particles

    def test_ascii_roundtrips_through_own_parser(self):
        events = pileup_events(3)
        text = events_to_ascii(events, SCHEME).decode("ascii")
        parsed = list(parse_ascii_stream(io.StringIO(text)))
        assert len(parsed) == len(events)
        bound = 0.5 / SCHEME.momentum_unit
        for original, ascii_event in zip(events, parsed):
            record = to_event_record(ascii_event, SCHEME)
            assert record.particles.pdg_id == original.particles.pdg_id
            for stored, back in zip(original.particles.px, record.particles.px):
                assert abs(dequantize(stored, SCHEME.momentum_unit)
                           - dequantize(back, SCHEME.momentum_unit)) <= 2 * bound

    def test_ascii_is_deterministic(self):
        events = pileup_events(2)
        assert events_to_ascii(events, SCHEME) == events_to_ascii(events, SCHEME)

    def test_gzip_is_deterministic(self):
        payload = events_to_ascii(pileup_events(2), SCHEME)
        assert gzip.compress(payload, 6, mtime=0) == gzip.compress(payload, 6, mtime=0)

    def test_container_matches_writer_output(self):
        events = pileup_events(2)
        from provent.model import FileDescriptor
        direct = helpers.write_container_bytes(
            events, FileDescriptor(description="size benchmark"))
        assert events_to_container(events, SCHEME) == direct

    def test_event_to_ascii_mentions_all_particles(self):
        events = pileup_events(1)
        text = event_to_ascii(events[0], SCHEME)
        assert text.count("\nP ") == len(events[0].particles)


class TestSizeReport:
    def test_report_fields_positive_and_ratios_rounded(self):
        report = measure_sizes(pileup_events(10), SCHEME)
        assert report.ascii > 0
        assert report.ascii_gzip > 0
        assert report.fixed_width > 0
        assert report.varint_container > 0
        ratios = report.ratios()
        assert ratios["fixed_width"] == 1.0
        assert ratios["varint_container"] == round(
            report.varint_container / report.fixed_width, 3)

    def test_csv_shape(self):
        report = SizeReport(ascii=400, ascii_gzip=100, fixed_width=200,
                            varint_container=90)
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == "format,bytes,ratio_vs_fixed_width"
        assert lines[1] == "ascii,400,2.000"
        assert lines[4] == "varint_container,90,0.450"

    def test_pileup_beats_fixed_width(self):
        report = measure_sizes(pileup_events(20), SCHEME)
        assert report.varint_container / report.fixed_width < 0.75
        assert report.ascii / report.varint_container > 2.0

    def test_hard_spectrum_compresses_worse_than_pileup(self):
        pileup = measure_sizes(pileup_events(20), SCHEME)
        hard_cfg = SpectrumConfig(n_events=20, pileup_mean=0.0, n_signal=100,
                                  pt_hard_min=500.0, pt_hard_max=2000.0, seed=6)
        hard = measure_sizes(list(generate_events(hard_cfg)), SCHEME)
        assert (hard.varint_container / hard.fixed_width
                > pileup.varint_container / pileup.fixed_width)


class TestReportFiles:
    def test_writes_csv_and_figure(self, tmp_path):
        report = measure_sizes(pileup_events(5), SCHEME)
        paths = write_report_files(report, tmp_path / "report")
        names = sorted(p.name for p in paths)
        assert names == ["sizes.csv", "sizes.png"]
        csv_text = (tmp_path / "report" / "sizes.csv").read_text()
        assert csv_text == report.to_csv()
        png = (tmp_path / "report" / "sizes.png").read_bytes()
        assert png[:8] == b"\x89PNG\r\n\x1a\n"
