import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

import helpers
from provent.container import open_reader
from provent.sources import CountingSource, FileSource, HttpRangeSource, MemorySource


class TestMemorySource:
    def test_reads(self):
        src = MemorySource(b"0123456789")
        assert src.length() == 10
        assert src.read_at(0, 4) == b"0123"
        assert src.read_at(7, 3) == b"789"
        assert src.read_at(5, 0) == b""

    def test_rejects_reads_past_end(self):
        src = MemorySource(b"0123456789")
        with pytest.raises(EOFError):
            src.read_at(8, 3)
        with pytest.raises(EOFError):
            src.read_at(-1, 2)


class TestFileSource:
    def test_matches_memory(self, tmp_path):
        payload = bytes(range(256)) * 7
        path = tmp_path / "blob.bin"
        path.write_bytes(payload)
        with FileSource(path) as src:
            assert src.length() == len(payload)
            assert src.read_at(0, 16) == payload[:16]
            assert src.read_at(300, 100) == payload[300:400]
            with pytest.raises(EOFError):
                src.read_at(len(payload) - 1, 2)


class TestCountingSource:
    def test_tallies_reads(self):
        src = CountingSource(MemorySource(b"x" * 100))
        src.read_at(0, 10)
        src.read_at(50, 25)
        assert src.reads == [(0, 10), (50, 25)]
        assert src.bytes_read == 35


class _RangeHandler(BaseHTTPRequestHandler):
    blob = b""

    def log_message(self, *args):
        pass

    def do_HEAD(self):
        self.send_response(200)
        self.send_header("Content-Length", str(len(self.blob)))
        self.send_header("Accept-Ranges", "bytes")
        self.end_headers()

    def do_GET(self):
        header = self.headers.get("Range")
        if header is None:
            self.send_response(200)
            self.send_header("Content-Length", str(len(self.blob)))
            self.end_headers()
            self.wfile.write(self.blob)
            return
        spec = header.split("=", 1)[1]
        start_text, end_text = spec.split("-", 1)
        start, end = int(start_text), int(end_text)
        chunk = self.blob[start:end + 1]
        self.send_response(206)
        self.send_header("Content-Range", f"bytes {start}-{end}/{len(self.blob)}")
        self.send_header("Content-Length", str(len(chunk)))
        self.end_headers()
        self.wfile.write(chunk)


@pytest.fixture
def range_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _RangeHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server
    finally:
        server.shutdown()
        thread.join()


class TestHttpRangeSource:
    def test_ranged_reads(self, range_server):
        _RangeHandler.blob = bytes(range(256)) * 3
        url = f"http://127.0.0.1:{range_server.server_address[1]}/blob"
        src = HttpRangeSource(url)
        assert src.length() == len(_RangeHandler.blob)
        assert src.read_at(10, 6) == _RangeHandler.blob[10:16]
        assert src.read_at(700, 20) == _RangeHandler.blob[700:720]
        with pytest.raises(EOFError):
            src.read_at(760, 100)

    def test_container_readable_over_http(self, range_server):
        # the network-access story: read individual events without the file
        from provent.generator import SpectrumConfig, generate_events
        from provent.model import FileDescriptor

        cfg = SpectrumConfig(n_events=100, pileup_mean=20.0, seed=4)
        _RangeHandler.blob = helpers.write_container_bytes(
            generate_events(cfg), FileDescriptor(description="over http"))
        expected = list(generate_events(cfg))
        url = f"http://127.0.0.1:{range_server.server_address[1]}/events.promc"
        counter = CountingSource(HttpRangeSource(url))
        reader = open_reader(counter)
        assert reader.actual_events == 100
        assert reader.read_event(42) == expected[42]
        # a handful of ranged requests, not a full download
        assert counter.bytes_read < len(_RangeHandler.blob) // 2
