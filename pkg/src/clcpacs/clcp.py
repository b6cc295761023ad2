"""Single-pass colored-LCP scan and the blocked query-suffix matrix.

The scan walks (id, lcp, depth) row by row, maintaining per-interval
state of Theta(m) elements:

  alpha     minimum lcp since the last query row (flcp from the interval's
            upper query suffix),
  zeta      maximum depth value seen since the last query row, minus 1
            (-1 while none seen),
  g         flcp between the interval's two query suffixes, read one entry
            ahead from the query-only lcp file.

For a subject row the LCP with the upper query suffix is alpha; the LCP
with the lower one is g when alpha > g and max(zeta, g) otherwise.  Rows
before the first query suffix take 0 upward, rows after the last take 0
downward.

Query-row values live in a (n_chi+1) x m matrix on disk, processed in
blocks of Q rows.  The scan seeds each matrix row exactly once (the row's
upward values combined with the previous interval's downward values), and
two propagation passes, backward then forward, refine each entry at most
once apiece by min-ing a neighbour row against the inter-suffix gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from . import streams
from .errors import InputInconsistencyError, ValidationError
from .model import CollectionManifest
from .streams import BACKWARD, IndexPaths, IntReader

DEFAULT_BLOCK_ROWS = 4096

RowSink = Callable[[int, int, int, int], None]


class AllocationTracker:
    """Counts live working-buffer elements so tests can pin the bound."""

    def __init__(self) -> None:
        self.current = 0
        self.peak = 0

    def alloc(self, n: int) -> None:
        self.current += n
        if self.current > self.peak:
            self.peak = self.current

    def free(self, n: int) -> None:
        self.current -= n


def default_block_rows(n_chi: int) -> int:
    return min(n_chi + 1, DEFAULT_BLOCK_ROWS)


class ClcpChiMatrix:
    """Disk-backed (n_chi+1) x m matrix, touched only in Q-row blocks.

    Matrix row c (0-based) belongs to the rank-c query suffix; rank 0 is
    the end-marker suffix, whose entries stay 0.
    """

    def __init__(
        self,
        path: Path | str,
        rows: int,
        cols: int,
        width: int,
        block_rows: int | None = None,
        tracker: AllocationTracker | None = None,
        count_writes: bool = False,
    ):
        self.path = Path(path)
        self.rows = rows
        self.cols = cols
        self.width = width
        self.block_rows = block_rows or default_block_rows(rows - 1)
        if self.block_rows < 2:
            raise ValidationError(f"block rows must be >= 2, got {self.block_rows}")
        self.tracker = tracker or AllocationTracker()
        self.write_counts = [0] * (rows * cols) if count_writes else None
        self._limit = 1 << (8 * width)
        self._buf: list[int] | None = None
        self._base = 0
        self._fh = None
        self._mode = None

    # -- seed pass ---------------------------------------------------

    def begin_seed(self) -> None:
        self._fh = open(self.path, "wb")
        self._mode = "seed"
        self._buf = [0] * (self.block_rows * self.cols)
        self.tracker.alloc(len(self._buf))
        self._base = 0

    def _encode(self, values: list[int]) -> bytes:
        out = bytearray()
        for v in values:
            if v < 0 or v >= self._limit:
                raise ValidationError(f"matrix value {v} exceeds width {self.width}")
            out += v.to_bytes(self.width, "little")
        return bytes(out)

    def _decode(self, raw: bytes) -> list[int]:
        w = self.width
        return [
            int.from_bytes(raw[o : o + w], "little") for o in range(0, len(raw), w)
        ]

    def _flush_seed_block(self) -> None:
        take = min(self.block_rows, self.rows - self._base)
        self._fh.write(self._encode(self._buf[: take * self.cols]))
        for i in range(len(self._buf)):
            self._buf[i] = 0
        self._base += self.block_rows

    def store_row(self, rank: int, values: list[int]) -> None:
        if rank < self._base:
            raise InputInconsistencyError("matrix seed writes must move forward")
        while rank >= self._base + self.block_rows:
            self._flush_seed_block()
        off = (rank - self._base) * self.cols
        self._buf[off : off + self.cols] = values
        if self.write_counts is not None:
            base = rank * self.cols
            for j in range(self.cols):
                self.write_counts[base + j] += 1

    def finish_seed(self) -> None:
        while self._base < self.rows:
            self._flush_seed_block()
        self.tracker.free(len(self._buf))
        self._buf = None
        self._fh.close()
        self._fh = None
        self._mode = None

    # -- propagation passes -------------------------------------------

    def _block_bounds(self) -> list[tuple[int, int]]:
        bounds = []
        lo = 0
        while lo < self.rows:
            bounds.append((lo, min(lo + self.block_rows, self.rows)))
            lo += self.block_rows
        return bounds

    def _read_block(self, lo: int, hi: int) -> list[int]:
        self._fh.seek(lo * self.cols * self.width)
        raw = self._fh.read((hi - lo) * self.cols * self.width)
        return self._decode(raw)

    def _write_block(self, lo: int, block: list[int]) -> None:
        self._fh.seek(lo * self.cols * self.width)
        self._fh.write(self._encode(block))

    def _count_row_write(self, rank: int) -> None:
        if self.write_counts is not None:
            base = rank * self.cols
            for j in range(self.cols):
                self.write_counts[base + j] += 1

    def propagate_backward(self, lcpchi_path: Path | str) -> None:
        """matrix[c] <- max(matrix[c], min(gap(c, c+1), matrix[c+1]))."""
        m = self.cols
        gaps = IntReader(lcpchi_path, self.width, BACKWARD)
        self._fh = open(self.path, "r+b")
        carry: list[int] = [0] * m
        self.tracker.alloc(m)
        have_carry = False
        block_elems = self.block_rows * self.cols
        self.tracker.alloc(block_elems)
        try:
            for lo, hi in reversed(self._block_bounds()):
                block = self._read_block(lo, hi)
                for c in range(hi - 1, lo - 1, -1):
                    if c == self.rows - 1:
                        off = (c - lo) * m
                        carry[:] = block[off : off + m]
                        have_carry = True
                        continue
                    gap = next(gaps)
                    off = (c - lo) * m
                    if not have_carry:
                        raise InputInconsistencyError("backward pass lost its neighbour row")
                    for j in range(m):
                        cand = carry[j]
                        if gap < cand:
                            cand = gap
                        if cand > block[off + j]:
                            block[off + j] = cand
                    self._count_row_write(c)
                    carry[:] = block[off : off + m]
                self._write_block(lo, block)
        finally:
            self.tracker.free(block_elems)
            self.tracker.free(m)
            gaps.close()
            self._fh.close()
            self._fh = None

    def propagate_forward(self, lcpchi_path: Path | str) -> None:
        """matrix[c] <- max(matrix[c], min(gap(c-1, c), matrix[c-1]))."""
        m = self.cols
        gaps = IntReader(lcpchi_path, self.width, streams.FORWARD)
        next(gaps)  # entry for rank 0 is the -1 placeholder
        self._fh = open(self.path, "r+b")
        carry: list[int] = [0] * m
        self.tracker.alloc(m)
        have_carry = False
        block_elems = self.block_rows * self.cols
        self.tracker.alloc(block_elems)
        try:
            for lo, hi in self._block_bounds():
                block = self._read_block(lo, hi)
                for c in range(lo, hi):
                    off = (c - lo) * m
                    if c == 0:
                        carry[:] = block[off : off + m]
                        have_carry = True
                        continue
                    gap = next(gaps)
                    if not have_carry:
                        raise InputInconsistencyError("forward pass lost its neighbour row")
                    for j in range(m):
                        cand = carry[j]
                        if gap < cand:
                            cand = gap
                        if cand > block[off + j]:
                            block[off + j] = cand
                    self._count_row_write(c)
                    carry[:] = block[off : off + m]
                self._write_block(lo, block)
        finally:
            self.tracker.free(block_elems)
            self.tracker.free(m)
            gaps.close()
            self._fh.close()
            self._fh = None

    # -- reading -------------------------------------------------------

    def iter_rows(self) -> Iterator[list[int]]:
        with open(self.path, "rb") as fh:
            row_bytes = self.cols * self.width
            per_block = self.block_rows * row_bytes
            while True:
                raw = fh.read(per_block)
                if not raw:
                    break
                vals = self._decode(raw)
                for off in range(0, len(vals), self.cols):
                    yield vals[off : off + self.cols]


@dataclass
class ScanResult:
    rows_processed: int
    matrix: ClcpChiMatrix
    tracker: AllocationTracker
    sum_subject: list[int] = field(default_factory=list)


def scan_forward(
    paths: IndexPaths,
    manifest: CollectionManifest,
    block_rows: int | None = None,
    on_row: RowSink | None = None,
    matrix_path: Path | str | None = None,
    tracker: AllocationTracker | None = None,
    count_writes: bool = False,
) -> ScanResult:
    """One forward pass over rows 1..N; seeds the matrix and emits rows.

    Raises InputInconsistencyError when alpha disagrees with the stored
    query-gap value at a query row, or when stream lengths disagree with
    the manifest.
    """
    n = manifest.total_rows
    m = manifest.num_subjects
    n_chi = manifest.query.length
    width = manifest.lcp_width
    tracker = tracker or AllocationTracker()
    q = block_rows or default_block_rows(n_chi)
    if q < 2:
        raise ValidationError(f"block rows must be >= 2, got {q}")

    matrix = ClcpChiMatrix(
        matrix_path or paths.clcpchi,
        rows=n_chi + 1,
        cols=m,
        width=width,
        block_rows=q,
        tracker=tracker,
        count_writes=count_writes,
    )
    inf = manifest.max_lcp + 1
    ids = IntReader(paths.id, streams.ID_WIDTH)
    lcps = IntReader(paths.lcp, width)
    ds = IntReader(paths.d, width)
    gaps = IntReader(paths.lcpchi, width)
    if gaps.length != n_chi + 1:
        raise InputInconsistencyError(
            f"lcpchi has {gaps.length} entries, expected {n_chi + 1}"
        )
    next(gaps)  # rank-0 placeholder

    first_u = [-1] * m
    last_l = [-1] * m
    pending = [0] * m
    tracker.alloc(3 * m)
    sum_subject = [0] * m

    matrix.begin_seed()
    alpha = 0
    zeta = -1
    g = 0
    chi_rank = -1
    rows = 0
    try:
        for color, lcp_v, d_v in zip(ids, lcps, ds):
            rows += 1
            if lcp_v < alpha:
                alpha = lcp_v
            dm1 = d_v - 1
            if dm1 > zeta:
                zeta = dm1
            if color == 0:
                chi_rank += 1
                if chi_rank >= 1:
                    if alpha != g:
                        raise InputInconsistencyError(
                            f"row {rows}: running lcp minimum {alpha} != stored "
                            f"query gap {g} at query rank {chi_rank + 1}"
                        )
                    matrix.store_row(
                        chi_rank - 1,
                        [
                            f if f > p else p
                            for f, p in zip(first_u, pending)
                        ],
                    )
                for r in range(m):
                    pending[r] = last_l[r] if last_l[r] > 0 else 0
                    first_u[r] = -1
                    last_l[r] = -1
                g = next(gaps, 0) if chi_rank < n_chi else 0
                alpha = inf
                zeta = -1
            else:
                if color > m:
                    raise InputInconsistencyError(
                        f"row {rows}: color {color} out of range (m = {m})"
                    )
                u = alpha if chi_rank >= 0 else 0
                if chi_rank == n_chi:
                    l = 0
                elif alpha > g:
                    l = g
                else:
                    l = zeta if zeta > g else g
                if on_row is not None:
                    on_row(rows, color, u, l)
                idx = color - 1
                if first_u[idx] < 0:
                    first_u[idx] = u
                clcp_v = u if u > l else l
                sum_subject[idx] += clcp_v
                last_l[idx] = l
        if rows != n:
            raise InputInconsistencyError(
                f"streams held {rows} rows, manifest says {n}"
            )
        if chi_rank != n_chi:
            raise InputInconsistencyError(
                f"saw {chi_rank + 1} query rows, expected {n_chi + 1}"
            )
        matrix.store_row(
            n_chi,
            [f if f > p else p for f, p in zip(first_u, pending)],
        )
        matrix.finish_seed()
    finally:
        tracker.free(3 * m)
        ids.close()
        lcps.close()
        ds.close()
        gaps.close()

    return ScanResult(
        rows_processed=rows, matrix=matrix, tracker=tracker, sum_subject=sum_subject
    )


def compute_clcp(
    paths: IndexPaths,
    manifest: CollectionManifest,
    block_rows: int | None = None,
    on_row: RowSink | None = None,
    matrix_path: Path | str | None = None,
    count_writes: bool = False,
) -> ScanResult:
    """Full stage: forward scan, backward pass, forward pass."""
    result = scan_forward(
        paths,
        manifest,
        block_rows=block_rows,
        on_row=on_row,
        matrix_path=matrix_path,
        count_writes=count_writes,
    )
    result.matrix.propagate_backward(paths.lcpchi)
    result.matrix.propagate_forward(paths.lcpchi)
    return result


def open_matrix(
    paths: IndexPaths, manifest: CollectionManifest, block_rows: int | None = None
) -> ClcpChiMatrix:
    """Handle onto an already-computed matrix file."""
    return ClcpChiMatrix(
        paths.clcpchi,
        rows=manifest.query.length + 1,
        cols=manifest.num_subjects,
        width=manifest.lcp_width,
        block_rows=block_rows,
    )
