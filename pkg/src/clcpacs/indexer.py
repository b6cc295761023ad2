"""Build the disk-resident index of a collection.

The sorted-suffix order is computed on the concatenation of all records,
with each record's end-marker encoded as a distinct integer below every
alphabet symbol (query marker lowest).  Markers occur exactly once each,
so no suffix comparison ever crosses one: the concatenation order equals
the per-record suffix order, and Kasai's LCP walk stops at markers by
itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import streams
from .errors import StreamError, ValidationError
from .model import LCP_WIDTHS, CollectionManifest, SequenceRecord
from .streams import IndexPaths, IntReader, IntWriter


@dataclass(frozen=True)
class SuffixRef:
    """A suffix identified by record and 1-based start offset.

    offset == length + 1 denotes the end-marker suffix.
    """

    record_index: int
    offset: int


def _encode_collection(records: Sequence[SequenceRecord]):
    """Map the collection to one integer sequence with distinct markers.

    Marker of record j -> j; symbol c -> num_records + rank(c).  Returns
    (encoded list, symbol bytes list with 0 at markers, record start
    offsets, record lengths).
    """
    num = len(records)
    symbols = sorted({ch for r in records for ch in r.text})
    sym_rank = {ch: num + i for i, ch in enumerate(symbols)}
    encoded: list[int] = []
    raw: list[int] = []
    starts: list[int] = []
    for j, rec in enumerate(records):
        starts.append(len(encoded))
        encoded.extend(sym_rank[ch] for ch in rec.text)
        raw.extend(ord(ch) for ch in rec.text)
        encoded.append(j)
        raw.append(streams.END_MARKER_BYTE)
    return encoded, raw, starts, [r.length for r in records]


def _suffix_sort(encoded: Sequence[int]) -> np.ndarray:
    """Sorted suffix start positions by prefix doubling (stable lexsort)."""
    enc = np.asarray(encoded, dtype=np.int64)
    n = len(enc)
    order = np.argsort(enc, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    vals = enc[order]
    comp = np.empty(n, dtype=np.int64)
    comp[0] = 0
    comp[1:] = np.cumsum(vals[1:] != vals[:-1])
    rank[order] = comp
    k = 1
    while k < n and rank[order[-1]] != n - 1:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1 = rank[order]
        r2 = second[order]
        comp = np.empty(n, dtype=np.int64)
        comp[0] = 0
        comp[1:] = np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = comp
        k *= 2
    return order


def _kasai_lcp(encoded: list[int], sa: np.ndarray) -> list[int]:
    """LCP of adjacent sorted suffixes; entry 0 is the placeholder 0."""
    n = len(encoded)
    rank = [0] * n
    sa_list = sa.tolist()
    for j, p in enumerate(sa_list):
        rank[p] = j
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa_list[r - 1]
        # markers are unique, so the walk always stops inside the record
        while encoded[i + h] == encoded[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


def choose_lcp_width(max_lcp: int) -> int:
    # +1 so the derived per-row depth values (up to max_lcp + 1) fit too
    for width in LCP_WIDTHS:
        if max_lcp + 1 < (1 << (8 * width)):
            return width
    raise ValidationError(f"max_lcp {max_lcp} does not fit any supported width")


def _chunks(arr: np.ndarray, dtype: str, cap: int) -> Iterable[bytes]:
    itemsize = np.dtype(dtype).itemsize
    step = max(1, cap // itemsize)
    for lo in range(0, len(arr), step):
        yield arr[lo : lo + step].astype(dtype).tobytes()


def build_index(
    records: Sequence[SequenceRecord],
    out_dir: Path | str,
    lcp_width: int | str = "auto",
    sigma: int | None = None,
) -> CollectionManifest:
    """Write index.{ebwt,id,lcp,pos,lcpchi,json,fasta} into out_dir."""
    records = tuple(records)
    observed = {ch for r in records for ch in r.text}
    if sigma is None:
        sigma = len(observed)
    elif sigma < len(observed):
        raise ValidationError(
            f"declared sigma {sigma} below the {len(observed)} distinct symbols present"
        )

    encoded, raw, starts, lengths = _encode_collection(records)
    n = len(encoded)
    sa = _suffix_sort(encoded)
    lcp = _kasai_lcp(encoded, sa)
    max_lcp = max(lcp) if n > 1 else 0

    if lcp_width == "auto":
        width = choose_lcp_width(max_lcp)
    else:
        width = int(lcp_width)
        if width not in LCP_WIDTHS:
            raise ValidationError(f"lcp_width must be one of {LCP_WIDTHS} or auto")

    starts_arr = np.asarray(starts, dtype=np.int64)
    rec_of = np.searchsorted(starts_arr, sa, side="right") - 1
    offsets = sa - starts_arr[rec_of] + 1
    raw_arr = np.asarray(raw, dtype=np.uint8)
    ebwt = np.where(offsets >= 2, raw_arr[np.maximum(sa - 1, 0)], streams.END_MARKER_BYTE)

    out = IndexPaths(Path(out_dir))
    out.directory.mkdir(parents=True, exist_ok=True)
    cap = streams.buffer_limit()
    with IntWriter(out.ebwt, streams.EBWT_WIDTH) as w:
        w.write_bytes_chunks(_chunks(ebwt, "<u1", cap), n)
    with IntWriter(out.id, streams.ID_WIDTH) as w:
        w.write_bytes_chunks(_chunks(rec_of, "<u4", cap), n)
    with IntWriter(out.pos, streams.POS_WIDTH) as w:
        w.write_bytes_chunks(_chunks(offsets, "<u8", cap), n)
    lcp_arr = np.asarray(lcp, dtype=np.int64)
    if max_lcp >= (1 << (8 * width)):
        raise StreamError(f"lcp_width {width} cannot hold max_lcp {max_lcp}")
    with IntWriter(out.lcp, width) as w:
        w.write_bytes_chunks(_chunks(lcp_arr, f"<u{width}", cap), n)

    provisional = CollectionManifest(
        records=records,
        sigma=sigma,
        lcp_width=width,
        max_lcp=max_lcp,
        max_lcp_chi=0,
    )
    provisional.validate()
    max_lcp_chi = extract_lcp_chi(
        IntReader(out.lcp, width),
        IntReader(out.id, streams.ID_WIDTH),
        provisional,
        out.lcpchi,
    )
    manifest = CollectionManifest(
        records=records,
        sigma=sigma,
        lcp_width=width,
        max_lcp=max_lcp,
        max_lcp_chi=max_lcp_chi,
    )
    manifest.save(out.manifest)
    streams.write_fasta(records, out.fasta)
    return manifest


def extract_lcp_chi(
    lcp: Iterable[int],
    ids: Iterable[int],
    manifest: CollectionManifest,
    out_path: Path | str,
) -> int:
    """Write the query-only LCP file: n_chi+1 entries, entry 1 stored as 0.

    Entry c (c >= 2) is the minimum of lcp over the rows strictly after the
    (c-1)-th query row up to and including the c-th query row, which equals
    the LCP array of the query string indexed alone.
    """
    n_chi = manifest.query.length
    inf = manifest.max_lcp + 1
    cur = inf
    count = 0
    rows = 0
    max_chi = 0
    with IntWriter(out_path, manifest.lcp_width) as w:
        for lcp_v, id_v in zip(lcp, ids):
            rows += 1
            if lcp_v < cur:
                cur = lcp_v
            if id_v == 0:
                if count == 0:
                    w.append(0)
                else:
                    w.append(cur)
                    if cur > max_chi:
                        max_chi = cur
                count += 1
                cur = inf
    if rows != manifest.total_rows:
        raise StreamError(
            f"lcp/id streams have {rows} rows, manifest says {manifest.total_rows}"
        )
    if count != n_chi + 1:
        raise StreamError(
            f"found {count} query rows, expected {n_chi + 1} from the manifest"
        )
    return max_chi
