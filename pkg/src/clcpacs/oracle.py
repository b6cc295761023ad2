"""Brute-force reference implementations and the verify harness.

Everything here recomputes results from first principles: suffixes are
materialized and compared directly, neighbour scans walk the sorted rows,
matching statistics come from substring search.  None of it shares code
with the streaming paths; the only common ground is the end-marker
ordering rule.  Quadratic costs throughout, so callers keep N small.
"""

from __future__ import annotations

import math
import random
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import streams
from .acs import accumulate, finalize, ms_for_target
from .clcp import compute_clcp, open_matrix
from .darray import build_d_array, build_d_array_for_index
from .errors import VerifyMismatch
from .indexer import build_index
from .model import CollectionManifest, SequenceRecord, Subset
from .streams import IndexPaths, IntReader, SentinelLcpReader


@dataclass
class NaiveIndex:
    suffixes: list[tuple[int, int]]  # (record_index, 1-based offset)
    ebwt: list[int]  # byte values, 0 for an end-marker
    ids: list[int]
    lcp: list[int]  # stored convention: first entry 0
    pos: list[int]


def _suffix_tuples(records: Sequence[SequenceRecord]):
    num = len(records)
    ranks = {ch: i for i, ch in enumerate(sorted({c for r in records for c in r.text}))}
    out = []
    for ridx, rec in enumerate(records):
        marker = ridx - num  # below every symbol rank, ordered by record
        for off in range(1, rec.length + 2):
            key = tuple(ranks[c] for c in rec.text[off - 1 :]) + (marker,)
            out.append((key, ridx, off))
    return out


def naive_index(records: Sequence[SequenceRecord]) -> NaiveIndex:
    entries = sorted(_suffix_tuples(records), key=lambda e: e[0])
    suffixes = [(ridx, off) for _k, ridx, off in entries]
    ebwt = []
    ids = []
    pos = []
    for ridx, off in suffixes:
        rec = records[ridx]
        ebwt.append(ord(rec.text[off - 2]) if off >= 2 else 0)
        ids.append(records[ridx].color)
        pos.append(off)
    lcp = [0]
    for prev, cur in zip(entries, entries[1:]):
        a, b = prev[0], cur[0]
        h = 0
        while h < len(a) and h < len(b) and a[h] == b[h]:
            h += 1
        lcp.append(h)
    return NaiveIndex(suffixes=suffixes, ebwt=ebwt, ids=ids, lcp=lcp, pos=pos)


@dataclass
class NaiveClcp:
    """Per-row upper/lower values against every color, 0 for null neighbours."""

    upper: list[list[int]]  # [row][color]
    lower: list[list[int]]

    def clcp(self, row: int, color: int) -> int:
        return max(self.upper[row][color], self.lower[row][color])


def naive_clcp(records: Sequence[SequenceRecord]) -> NaiveClcp:
    idx = naive_index(records)
    n = len(idx.ids)
    colors = max(idx.ids) + 1
    upper = [[0] * colors for _ in range(n)]
    lower = [[0] * colors for _ in range(n)]
    inf = n + max(idx.lcp, default=0) + 1
    full = (1 << colors) - 1
    for i in range(n):
        rm = inf
        seen = 0
        for j in range(i - 1, -1, -1):
            rm = min(rm, idx.lcp[j + 1])
            t = idx.ids[j]
            if not (seen >> t) & 1:
                upper[i][t] = rm
                seen |= 1 << t
                if seen == full:
                    break
        rm = inf
        seen = 0
        for j in range(i + 1, n):
            rm = min(rm, idx.lcp[j])
            t = idx.ids[j]
            if not (seen >> t) & 1:
                lower[i][t] = rm
                seen |= 1 << t
                if seen == full:
                    break
    return NaiveClcp(upper=upper, lower=lower)


def naive_d(lcp_stored: Sequence[int], ids: Sequence[int]) -> list[int]:
    """Depth entries by enumerating every candidate interval directly.

    Takes the stored lcp array (first entry a placeholder) and returns the
    N+1 entries of the depth file.
    """
    n = len(ids)
    lcp = list(lcp_stored)
    lcp[0] = -1
    depths = [0] * n
    for a in range(n):
        rm = n + 1
        has_q = ids[a] == 0
        has_s = ids[a] != 0
        for b in range(a + 1, n):
            rm = min(rm, lcp[b])
            if rm < 1:
                break
            has_q = has_q or ids[b] == 0
            has_s = has_s or ids[b] != 0
            right = lcp[b + 1] if b + 1 < n else -1
            if lcp[a] < rm and right < rm and has_q and has_s:
                if rm + 1 > depths[a]:
                    depths[a] = rm + 1
    return depths + [0]


def naive_ms(s: str, t: str) -> list[int]:
    out = []
    for j in range(len(s)):
        length = 0
        while j + length < len(s) and s[j : j + length + 1] in t:
            length += 1
        out.append(length)
    return out


def naive_acs(s: str, t: str, sigma: int) -> float:
    def side(base: str, other: str) -> float:
        total = sum(naive_ms(base, other))
        if total == 0:
            return math.inf
        avg = total / len(base)
        return (
            math.log(len(other)) / math.log(sigma) / avg
            - 2 * (math.log(len(base)) / math.log(sigma)) / (len(base) + 1)
        )
    a = side(s, t)
    b = side(t, s)
    if math.isinf(a) or math.isinf(b):
        return math.inf
    return (a + b) / 2


def naive_chi_matrix(records: Sequence[SequenceRecord]) -> list[list[int]]:
    """Expected finalized matrix: one row per query suffix in rank order."""
    idx = naive_index(records)
    table = naive_clcp(records)
    m = max(idx.ids)
    rows = []
    for i, color in enumerate(idx.ids):
        if color == 0:
            rows.append([table.clcp(i, r) for r in range(1, m + 1)])
    return rows


def random_records(
    rng: random.Random,
    sigma: int = 4,
    max_len: int = 32,
    max_m: int = 6,
    min_m: int = 2,
) -> list[SequenceRecord]:
    alphabet = "ACGT"[:sigma]
    m = rng.randint(min_m, max_m)
    recs = []
    for i in range(m + 1):
        length = rng.randint(1, max_len)
        text = "".join(rng.choice(alphabet) for _ in range(length))
        subset = Subset.QUERY if i == 0 else Subset.SUBJECT
        name = "chi" if i == 0 else f"s{i}"
        recs.append(SequenceRecord(name=name, color=i, subset=subset, text=text))
    return recs


def read_all(path: Path, width: int) -> list[int]:
    with IntReader(path, width) as r:
        return list(r)


@dataclass
class VerifyStats:
    rows: int
    num_subjects: int
    max_lcp: int
    block_rows: int
    peak_elements: int
    peak_stack_depth: int
    max_matrix_writes: int


def _diff(name: str, expected: Sequence, actual: Sequence) -> None:
    if len(expected) != len(actual):
        raise VerifyMismatch(name, min(len(expected), len(actual)),
                             f"length {len(expected)}", f"length {len(actual)}")
    for i, (e, a) in enumerate(zip(expected, actual)):
        if e != a:
            raise VerifyMismatch(name, i, e, a)


def verify_records(
    records: Sequence[SequenceRecord],
    block_rows: int | None = None,
    work_dir: Path | str | None = None,
) -> VerifyStats:
    """Run the streaming pipeline on scratch space and diff every output.

    Raises VerifyMismatch at the first disagreement.
    """
    with tempfile.TemporaryDirectory(dir=work_dir) as tmp:
        paths = IndexPaths(Path(tmp))
        manifest = build_index(records, paths.directory)
        build_d_array_for_index(paths, manifest)
        compute_clcp(paths, manifest, block_rows=block_rows)
        return verify_built_index(paths, manifest, block_rows=block_rows)


def verify_built_index(
    paths: IndexPaths,
    manifest: CollectionManifest,
    block_rows: int | None = None,
) -> VerifyStats:
    """Diff a fully-built index directory against brute-force derivations.

    Existing stage files are only read; the depth array and the matrix are
    re-derived into scratch space for the stack-depth, memory and
    write-count checks.
    """
    records = manifest.records
    width = manifest.lcp_width
    m = manifest.num_subjects
    for path in (paths.ebwt, paths.id, paths.lcp, paths.pos, paths.lcpchi,
                 paths.d, paths.clcpchi):
        if not path.exists():
            raise VerifyMismatch(path.name, 0, "file present", "missing")
    oracle_idx = naive_index(records)

    _diff("ebwt", oracle_idx.ebwt, read_all(paths.ebwt, streams.EBWT_WIDTH))
    _diff("id", oracle_idx.ids, read_all(paths.id, streams.ID_WIDTH))
    _diff("lcp", oracle_idx.lcp, read_all(paths.lcp, width))
    _diff("pos", oracle_idx.pos, read_all(paths.pos, streams.POS_WIDTH))

    query_alone = naive_index([records[0]])
    _diff("lcpchi", query_alone.lcp, read_all(paths.lcpchi, width))

    expected_d = naive_d(oracle_idx.lcp, oracle_idx.ids)
    _diff("d", expected_d, read_all(paths.d, width))

    table = naive_clcp(records)
    expected_rows = [
        (i + 1, color, table.upper[i][0], table.lower[i][0])
        for i, color in enumerate(oracle_idx.ids)
        if color != 0
    ]
    expected_matrix = naive_chi_matrix(records)

    with tempfile.TemporaryDirectory() as tmp:
        scratch = Path(tmp)
        lcp_reader = SentinelLcpReader(paths.lcp, width)
        id_reader = IntReader(paths.id, streams.ID_WIDTH)
        try:
            d_result = build_d_array(lcp_reader, id_reader, manifest, scratch / "re.d")
        finally:
            lcp_reader.close()
            id_reader.close()
        _diff("d(rederived)", expected_d, read_all(scratch / "re.d", width))
        if d_result.peak_stack_depth > manifest.max_lcp + 2:
            raise VerifyMismatch(
                "stack_depth", 0, f"<= {manifest.max_lcp + 2}", d_result.peak_stack_depth
            )

        emitted: list[tuple[int, int, int, int]] = []
        scan = compute_clcp(
            paths,
            manifest,
            block_rows=block_rows,
            on_row=lambda row, color, u, l: emitted.append((row, color, u, l)),
            matrix_path=scratch / "re.clcpchi",
            count_writes=True,
        )
        _diff("rows", expected_rows, emitted)
        _diff("clcpchi(rederived)", expected_matrix, list(scan.matrix.iter_rows()))

        budget = 3 * m + scan.matrix.block_rows * m + manifest.max_lcp + 2
        if scan.tracker.peak > budget:
            raise VerifyMismatch(
                "working_buffer_elements", 0, f"<= {budget}", scan.tracker.peak
            )
        max_writes = max(scan.matrix.write_counts) if scan.matrix.write_counts else 0
        if max_writes > 3:
            raise VerifyMismatch("matrix_write_count", 0, "<= 3", max_writes)

    stored = open_matrix(paths, manifest, block_rows=block_rows)
    _diff("clcpchi", expected_matrix, list(stored.iter_rows()))

    acc = accumulate(emitted, stored)
    report = finalize(acc, manifest)
    for idx, sub in enumerate(report.subjects):
        rec = manifest.record_by_color(idx + 1)
        expected_acs = naive_acs(manifest.query.text, rec.text, manifest.sigma)
        if math.isinf(expected_acs) != math.isinf(sub.acs) or (
            not math.isinf(expected_acs) and abs(expected_acs - sub.acs) > 1e-12
        ):
            raise VerifyMismatch(f"acs[{rec.name}]", 0, expected_acs, sub.acs)
        _diff(
            f"ms[{rec.name} vs query]",
            naive_ms(rec.text, manifest.query.text),
            ms_for_target(paths, manifest, rec.color, block_rows=block_rows),
        )
        _diff(
            f"ms[query vs {rec.name}]",
            naive_ms(manifest.query.text, rec.text),
            ms_for_target(paths, manifest, 0, versus_color=rec.color, block_rows=block_rows),
        )

    return VerifyStats(
        rows=manifest.total_rows,
        num_subjects=m,
        max_lcp=manifest.max_lcp,
        block_rows=block_rows or stored.block_rows,
        peak_elements=scan.tracker.peak,
        peak_stack_depth=d_result.peak_stack_depth,
        max_matrix_writes=max_writes,
    )


def verify_random(
    trials: int,
    seed: int,
    sigma: int = 4,
    max_len: int = 32,
    max_m: int = 6,
    block_rows: int | None = None,
) -> VerifyStats:
    """Seeded random instances through verify_records; returns the last stats."""
    rng = random.Random(seed)
    stats = None
    for _ in range(trials):
        recs = random_records(rng, sigma=sigma, max_len=max_len, max_m=max_m)
        q = block_rows if block_rows is not None else rng.choice([2, 3, 4096])
        stats = verify_records(recs, block_rows=q)
    assert stats is not None
    return stats
