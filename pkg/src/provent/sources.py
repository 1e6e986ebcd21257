"""Random-access byte sources the container reader operates over.

A ByteSource exposes only length() and read_at(offset, size); the reader
never needs more, which is what makes selective network access work. The
HTTP implementation issues one ranged GET per read_at and is meant for
range-capable servers (exercised against a local test server).
"""

from __future__ import annotations

import io
import os
import urllib.request


class ByteSource:
    def length(self) -> int:
        raise NotImplementedError

    def read_at(self, offset: int, size: int) -> bytes:
        """Read exactly ``size`` bytes at ``offset``; short reads are errors."""
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class MemorySource(ByteSource):
    def __init__(self, data: bytes):
        self._data = data

    def length(self) -> int:
        return len(self._data)

    def read_at(self, offset: int, size: int) -> bytes:
        if offset < 0 or size < 0 or offset + size > len(self._data):
            raise EOFError(
                f"read of {size} bytes at {offset} crosses end of {len(self._data)}-byte source")
        return self._data[offset:offset + size]


class FileSource(ByteSource):
    """Positioned reads over a local file; safe for concurrent readers."""

    def __init__(self, path):
        self._fd = os.open(os.fspath(path), os.O_RDONLY)
        self._length = os.fstat(self._fd).st_size

    def length(self) -> int:
        return self._length

    def read_at(self, offset: int, size: int) -> bytes:
        if offset < 0 or size < 0 or offset + size > self._length:
            raise EOFError(
                f"read of {size} bytes at {offset} crosses end of {self._length}-byte source")
        chunks = []
        remaining = size
        pos = offset
        while remaining > 0:
            chunk = os.pread(self._fd, remaining, pos)
            if not chunk:
                raise EOFError(f"file shrank below {self._length} bytes")
            chunks.append(chunk)
            pos += len(chunk)
            remaining -= len(chunk)
        return b"".join(chunks)

    def close(self) -> None:
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None


class CountingSource(ByteSource):
    """Wraps another source and records every read; used to verify locality."""

    def __init__(self, inner: ByteSource):
        self.inner = inner
        self.reads: list[tuple[int, int]] = []

    @property
    def bytes_read(self) -> int:
        return sum(size for _offset, size in self.reads)

    def length(self) -> int:
        return self.inner.length()

    def read_at(self, offset: int, size: int) -> bytes:
        self.reads.append((offset, size))
        return self.inner.read_at(offset, size)

    def close(self) -> None:
        self.inner.close()


class HttpRangeSource(ByteSource):
    """Ranged reads over HTTP using `Range: bytes=a-b` requests."""

    def __init__(self, url: str):
        self.url = url
        self._length = self._probe_length()

    def _probe_length(self) -> int:
        req = urllib.request.Request(self.url, method="HEAD")
        with urllib.request.urlopen(req) as resp:
            size = resp.headers.get("Content-Length")
            if size is None:
                raise IOError(f"{self.url}: server did not report a length")
            return int(size)

    def length(self) -> int:
        return self._length

    def read_at(self, offset: int, size: int) -> bytes:
        if offset < 0 or size < 0 or offset + size > self._length:
            raise EOFError(
                f"read of {size} bytes at {offset} crosses end of {self._length}-byte source")
        if size == 0:
            return b""
        req = urllib.request.Request(self.url)
        req.add_header("Range", f"bytes={offset}-{offset + size - 1}")
        with urllib.request.urlopen(req) as resp:
            if resp.status != 206:
                raise IOError(f"{self.url}: expected 206 partial content, got {resp.status}")
            data = resp.read()
        if len(data) != size:
            raise EOFError(f"{self.url}: ranged read returned {len(data)} of {size} bytes")
        return data


def open_source(target) -> ByteSource:
    """Build the right source for a path, URL, bytes or existing source."""
    if isinstance(target, ByteSource):
        return target
    if isinstance(target, (bytes, bytearray, memoryview)):
        return MemorySource(bytes(target))
    if isinstance(target, io.BytesIO):
        return MemorySource(target.getvalue())
    text = os.fspath(target)
    if isinstance(text, str) and text.startswith(("http://", "https://")):
        return HttpRangeSource(text)
    return FileSource(text)
