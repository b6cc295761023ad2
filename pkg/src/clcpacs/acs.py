"""Matching statistics and average-common-substring distances.

For a base string s of length n compared against t of length n_t over an
alphabet of size sigma, with per-position longest-match sum S:

    d(s, t)    = S / n
    norm(s, t) = log_sigma(n_t) / d(s, t) - 2 * log_sigma(n) / (n + 1)
    distance   = (norm(s, t) + norm(t, s)) / 2

A zero sum in either direction leaves the distance undefined; it is
flagged and rendered as "inf" instead of aborting the run.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from . import streams
from .clcp import ClcpChiMatrix
from .errors import StreamError, ValidationError
from .model import CollectionManifest
from .streams import IndexPaths, IntReader

RowQuad = tuple[int, int, int, int]


@dataclass
class AcsAccumulators:
    """Per-subject running sums: subject rows and finalized query rows."""

    sum_subject: list[int]
    sum_query: list[int]


@dataclass
class SubjectDistance:
    name: str
    length: int
    sum_query: int
    sum_subject: int
    d_query_subject: float
    d_subject_query: float
    norm_query_subject: float
    norm_subject_query: float
    acs: float
    undefined: bool


@dataclass
class AcsReport:
    query_name: str
    query_length: int
    sigma: int
    subjects: list[SubjectDistance]

    def to_tsv(self) -> str:
        lines = [
            "subject_name\td_query_subject\td_subject_query\tnorm_qs\tnorm_sq\tacs"
        ]
        for s in self.subjects:
            lines.append(
                "\t".join(
                    (
                        s.name,
                        repr(s.d_query_subject),
                        repr(s.d_subject_query),
                        repr(s.norm_query_subject),
                        repr(s.norm_subject_query),
                        repr(s.acs),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def to_phylip(self) -> str:
        """One row per subject: name plus its distance to the query."""
        lines = [str(len(self.subjects))]
        for s in self.subjects:
            lines.append(f"{s.name[:10]:<10} {repr(s.acs)}")
        return "\n".join(lines) + "\n"


def accumulate_query_sums(matrix: ClcpChiMatrix) -> list[int]:
    """Column sums of the finalized matrix, skipping the end-marker rank."""
    sums = [0] * matrix.cols
    for rank, row in enumerate(matrix.iter_rows()):
        if rank == 0:
            continue
        for j, v in enumerate(row):
            sums[j] += v
    return sums


def accumulate(rows: Iterable[RowQuad], matrix: ClcpChiMatrix) -> AcsAccumulators:
    """Sum subject-row values and finalized query-row values per color.

    End-marker subject rows carry value 0, so including them leaves the
    sums untouched; the averages divide by the text lengths only.
    """
    sum_subject = [0] * matrix.cols
    for _row, color, u, l in rows:
        if color < 1 or color > matrix.cols:
            raise StreamError(f"row stream color {color} out of range")
        sum_subject[color - 1] += u if u > l else l
    return AcsAccumulators(
        sum_subject=sum_subject, sum_query=accumulate_query_sums(matrix)
    )


def _log_base(x: int, sigma: int) -> float:
    return math.log(x) / math.log(sigma)


def finalize(
    acc: AcsAccumulators, manifest: CollectionManifest, sigma: int | None = None
) -> AcsReport:
    """Turn accumulated sums into normalized symmetric distances."""
    sigma = manifest.sigma if sigma is None else sigma
    if sigma < 2:
        raise ValidationError(f"sigma must be >= 2 for the normalization, got {sigma}")
    n_chi = manifest.query.length
    subjects = []
    for idx in range(manifest.num_subjects):
        rec = manifest.record_by_color(idx + 1)
        n_r = rec.length
        sum_q = acc.sum_query[idx]
        sum_s = acc.sum_subject[idx]
        d_qr = sum_q / n_chi
        d_rq = sum_s / n_r
        undefined = sum_q == 0 or sum_s == 0
        if sum_q == 0:
            norm_qr = math.inf
        else:
            norm_qr = _log_base(n_r, sigma) / d_qr - 2 * _log_base(n_chi, sigma) / (n_chi + 1)
        if sum_s == 0:
            norm_rq = math.inf
        else:
            norm_rq = _log_base(n_chi, sigma) / d_rq - 2 * _log_base(n_r, sigma) / (n_r + 1)
        acs = math.inf if undefined else (norm_qr + norm_rq) / 2
        subjects.append(
            SubjectDistance(
                name=rec.name,
                length=n_r,
                sum_query=sum_q,
                sum_subject=sum_s,
                d_query_subject=d_qr,
                d_subject_query=d_rq,
                norm_query_subject=norm_qr,
                norm_subject_query=norm_rq,
                acs=acs,
                undefined=undefined,
            )
        )
    return AcsReport(
        query_name=manifest.query.name,
        query_length=n_chi,
        sigma=sigma,
        subjects=subjects,
    )


def matching_statistics(
    rows: Iterable[RowQuad],
    pos_values: Iterable[int],
    target_color: int,
    length: int,
) -> list[int]:
    """Scatter subject-row values into text order for one subject color.

    `rows` is the emitted (row, color, u, l) stream in row order and
    `pos_values` the full pos array for rows 1..N; positions beyond the
    text (the end-marker suffix) are dropped.
    """
    ms = [0] * length
    pos_iter: Iterator[tuple[int, int]] = enumerate(pos_values, start=1)
    here = 0
    for row, color, u, l in rows:
        if color != target_color:
            continue
        while here < row:
            here, p = next(pos_iter)
        if p <= length:
            ms[p - 1] = u if u > l else l
    return ms


def matching_statistics_query(
    matrix_rows: Iterable[list[int]],
    ids: Iterable[int],
    pos_values: Iterable[int],
    versus_color: int,
    n_chi: int,
) -> list[int]:
    """Scatter the finalized matrix column for one subject into text order."""
    ms = [0] * n_chi
    rank_rows = iter(matrix_rows)
    for color, p in zip(ids, pos_values):
        if color != 0:
            continue
        row = next(rank_rows)
        if p <= n_chi:
            ms[p - 1] = row[versus_color - 1]
    return ms


def ms_for_target(
    paths: IndexPaths,
    manifest: CollectionManifest,
    target_color: int,
    versus_color: int | None = None,
    block_rows: int | None = None,
) -> list[int]:
    """Matching statistics of one record against the other side.

    A subject target is matched against the query; the query target (color
    0) needs `versus_color` naming the subject column to read.
    """
    from .clcp import open_matrix, scan_forward

    if target_color == 0:
        if versus_color is None or versus_color < 1 or versus_color > manifest.num_subjects:
            raise ValidationError("query-side matching statistics need a subject to compare against")
        matrix = open_matrix(paths, manifest, block_rows=block_rows)
        ids = IntReader(paths.id, streams.ID_WIDTH)
        poss = IntReader(paths.pos, streams.POS_WIDTH)
        try:
            return matching_statistics_query(
                matrix.iter_rows(), ids, poss, versus_color, manifest.query.length
            )
        finally:
            ids.close()
            poss.close()
    if target_color < 1 or target_color > manifest.num_subjects:
        raise ValidationError(f"no subject with color {target_color}")
    collected: list[RowQuad] = []
    target = target_color

    def keep(row: int, color: int, u: int, l: int) -> None:
        if color == target:
            collected.append((row, color, u, l))

    with tempfile.TemporaryDirectory() as tmp:
        scan_forward(
            paths,
            manifest,
            block_rows=block_rows,
            on_row=keep,
            matrix_path=Path(tmp) / "scratch.clcpchi",
        )
    poss = IntReader(paths.pos, streams.POS_WIDTH)
    try:
        rec = manifest.record_by_color(target)
        return matching_statistics(collected, poss, target, rec.length)
    finally:
        poss.close()
