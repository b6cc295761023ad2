"""Binary array files and FASTA ingestion.

Every on-disk array is a flat sequence of fixed-width little-endian
unsigned integers, read and written strictly sequentially (forward or
backward) through buffers bounded by a constant block size.  The block
size defaults to 1 MiB and can be lowered or raised with the
CLCPACS_BUFFER_BYTES environment variable; each open stream tracks its
own peak buffered byte count so tests can assert the bound.

File suffixes used by an index directory (basename "index"):

    .ebwt     1 byte/symbol, end-markers stored as 0x00
    .id       4 bytes/row, color of the row's suffix (query = 0)
    .lcp      lcp_width bytes, N entries (row 1 stored as 0, meaning -1)
    .pos      8 bytes/row, 1-based suffix offset, length+1 = end-marker
    .lcpchi   lcp_width bytes, n_chi+1 entries (entry 1 stored as 0)
    .d        lcp_width bytes, N+1 entries (entry N+1 always 0)
    .clcpchi  lcp_width bytes, (n_chi+1) * m entries, row-major
    .fasta    normalized copy of the input records, for `verify`
"""

from __future__ import annotations

import os
import sys
from array import array
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import StreamError, ValidationError
from .model import Subset, SequenceRecord

FORWARD = "forward"
BACKWARD = "backward"

DEFAULT_BUFFER_BYTES = 1 << 20
BUFFER_ENV_VAR = "CLCPACS_BUFFER_BYTES"

EBWT_WIDTH = 1
ID_WIDTH = 4
POS_WIDTH = 8
END_MARKER_BYTE = 0

_NEEDS_SWAP = sys.byteorder != "little"

_TYPECODES = {}
for _code in "BHILQ":
    _TYPECODES.setdefault(array(_code).itemsize, _code)


def _typecode(width: int) -> str:
    try:
        return _TYPECODES[width]
    except KeyError:
        raise StreamError(f"unsupported element width {width}") from None


def buffer_limit() -> int:
    raw = os.environ.get(BUFFER_ENV_VAR)
    if raw is None:
        return DEFAULT_BUFFER_BYTES
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{BUFFER_ENV_VAR} must be an integer, got {raw!r}")
    if value < 16:
        raise ValidationError(f"{BUFFER_ENV_VAR} too small: {value}")
    return value


class IntWriter:
    """Appends fixed-width unsigned integers to a file."""

    def __init__(self, path: Path | str, width: int, buffer_bytes: int | None = None):
        self.path = Path(path)
        self.width = width
        self._code = _typecode(width)
        self._limit = 1 << (8 * width)
        self._cap = buffer_bytes or buffer_limit()
        self._chunk = max(1, self._cap // width)
        self._buf = array(self._code)
        self._fh = open(self.path, "wb")
        self.count = 0
        self.peak_buffered_bytes = 0

    def append(self, value: int) -> None:
        if value < 0 or value >= self._limit:
            raise StreamError(
                f"{self.path.name}: value {value} exceeds width {self.width}"
            )
        self._buf.append(value)
        self.count += 1
        if len(self._buf) >= self._chunk:
            self._flush()

    def extend(self, values: Iterable[int]) -> None:
        for v in values:
            self.append(v)

    def write_bytes_chunks(self, chunks: Iterable[bytes], count: int) -> None:
        """Bulk path for pre-encoded little-endian data (bounded chunks)."""
        self._flush()
        for chunk in chunks:
            if len(chunk) > self._cap:
                raise StreamError("bulk chunk larger than the buffer cap")
            self.peak_buffered_bytes = max(self.peak_buffered_bytes, len(chunk))
            self._fh.write(chunk)
        self.count += count

    def _flush(self) -> None:
        if self._buf:
            self.peak_buffered_bytes = max(
                self.peak_buffered_bytes, len(self._buf) * self.width
            )
            data = self._buf
            if _NEEDS_SWAP:
                data = array(self._code, data)
                data.byteswap()
            self._fh.write(data.tobytes())
            del self._buf[:]

    def close(self) -> int:
        self._flush()
        self._fh.close()
        return self.count

    def __enter__(self) -> "IntWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class IntReader:
    """Streams fixed-width unsigned integers from a file, forward or backward.

    Forward mode supports a one-element peek().
    """

    def __init__(
        self,
        path: Path | str,
        width: int,
        direction: str = FORWARD,
        buffer_bytes: int | None = None,
    ):
        self.path = Path(path)
        self.width = width
        self.direction = direction
        self._code = _typecode(width)
        self._cap = buffer_bytes or buffer_limit()
        self._chunk = max(1, self._cap // width) * width
        size = self.path.stat().st_size
        if size % width != 0:
            raise StreamError(
                f"{self.path.name}: size {size} is not a multiple of width {width}"
            )
        self.length = size // width
        self._fh = open(self.path, "rb")
        self._offset = size if direction == BACKWARD else 0
        self._buf: list[int] = []
        self._bufpos = 0
        self._yielded = 0
        self.peak_buffered_bytes = 0

    def _fill(self) -> bool:
        if self.direction == FORWARD:
            raw = self._fh.read(self._chunk)
            if not raw:
                return False
        else:
            if self._offset == 0:
                return False
            take = min(self._chunk, self._offset)
            self._offset -= take
            self._fh.seek(self._offset)
            raw = self._fh.read(take)
        if len(raw) % self.width != 0:
            raise StreamError(f"{self.path.name}: truncated read")
        chunk = array(self._code)
        chunk.frombytes(raw)
        if _NEEDS_SWAP:
            chunk.byteswap()
        self.peak_buffered_bytes = max(self.peak_buffered_bytes, len(raw))
        self._buf = chunk.tolist()
        if self.direction == BACKWARD:
            self._buf.reverse()
        self._bufpos = 0
        return True

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        if self._bufpos >= len(self._buf):
            if not self._fill():
                raise StopIteration
        value = self._buf[self._bufpos]
        self._bufpos += 1
        self._yielded += 1
        return value

    def peek(self) -> int | None:
        if self.direction != FORWARD:
            raise StreamError("peek is only available in forward mode")
        if self._bufpos >= len(self._buf):
            if not self._fill():
                return None
        return self._buf[self._bufpos]

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "IntReader":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def open_writer(path: Path | str, width: int) -> IntWriter:
    return IntWriter(path, width)


def open_reader(path: Path | str, width: int, direction: str = FORWARD) -> IntReader:
    return IntReader(path, width, direction)


class SentinelLcpReader:
    """LCP stream with the -1 sentinels materialized.

    Yields N+1 values for a stored LCP file of N entries: -1 for position 1
    (whose stored value is a placeholder 0), the stored values for positions
    2..N, then a virtual -1 for position N+1.
    """

    def __init__(self, path: Path | str, width: int):
        self.inner = IntReader(path, width, FORWARD)
        self.position = 0

    def __iter__(self) -> Iterator[int]:
        first = True
        for value in self.inner:
            self.position += 1
            if first:
                first = False
                yield -1
            else:
                yield value
        self.position += 1
        yield -1

    def close(self) -> None:
        self.inner.close()


@dataclass(frozen=True)
class IndexPaths:
    """File locations for one index directory."""

    directory: Path

    @property
    def manifest(self) -> Path:
        return self.directory / "index.json"

    @property
    def ebwt(self) -> Path:
        return self.directory / "index.ebwt"

    @property
    def id(self) -> Path:
        return self.directory / "index.id"

    @property
    def lcp(self) -> Path:
        return self.directory / "index.lcp"

    @property
    def pos(self) -> Path:
        return self.directory / "index.pos"

    @property
    def lcpchi(self) -> Path:
        return self.directory / "index.lcpchi"

    @property
    def d(self) -> Path:
        return self.directory / "index.d"

    @property
    def clcpchi(self) -> Path:
        return self.directory / "index.clcpchi"

    @property
    def fasta(self) -> Path:
        return self.directory / "index.fasta"


def parse_fasta(
    data: bytes | str, alphabet: str | None = "ACGT"
) -> list[tuple[str, str]]:
    """Parse FASTA text into (name, sequence) pairs, order preserved.

    Sequence lines are case-folded to upper case and must only use symbols
    of `alphabet` (None accepts anything).  The record name is the header
    line after '>', stripped.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError(f"FASTA input is not UTF-8: {exc}") from exc
    else:
        text = data
    allowed = set(alphabet.upper()) if alphabet is not None else None
    records: list[tuple[str, str]] = []
    name: str | None = None
    parts: list[str] = []

    def finish() -> None:
        if name is None:
            return
        seq = "".join(parts)
        if not seq:
            raise ValidationError(f"record {name!r}: empty sequence")
        records.append((name, seq))

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            finish()
            name = line[1:].strip()
            if not name:
                raise ValidationError(f"line {lineno}: empty FASTA header")
            parts = []
        else:
            if name is None:
                raise ValidationError(f"line {lineno}: sequence data before any header")
            chunk = line.upper()
            if allowed is not None:
                for ch in chunk:
                    if ch not in allowed:
                        raise ValidationError(
                            f"line {lineno}: illegal symbol {ch!r} (alphabet {alphabet!r})"
                        )
            parts.append(chunk)
    finish()
    if not records:
        raise ValidationError("no FASTA headers found")
    return records


def records_from_fasta(
    data: bytes | str, chi_name: str, alphabet: str = "ACGT"
) -> list[SequenceRecord]:
    """Build comparison-run records: query (chi) first with color 0."""
    pairs = parse_fasta(data, alphabet)
    names = [n for n, _ in pairs]
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})[0]
        raise ValidationError(f"duplicate record name {dup!r}")
    if chi_name not in names:
        raise ValidationError(f"query record {chi_name!r} not present in the input")
    if len(pairs) < 2:
        raise ValidationError("need at least one subject record besides the query")
    ordered = [(n, s) for n, s in pairs if n == chi_name]
    ordered += [(n, s) for n, s in pairs if n != chi_name]
    out = []
    for color, (n, s) in enumerate(ordered):
        subset = Subset.QUERY if color == 0 else Subset.SUBJECT
        out.append(SequenceRecord(name=n, color=color, subset=subset, text=s))
    return out


def write_fasta(records: Iterable[SequenceRecord], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(f">{r.name}\n{r.text}\n")
