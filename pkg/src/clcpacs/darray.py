"""Depth array over colored lcp-intervals, built in one forward scan.

Entry i holds 1 + the largest k such that a k-lcp interval starting at row
i contains suffixes of both the query and some subject (0 when no such
interval starts there).  Only depths k >= 1 are recorded, so stored values
are always 0 or >= 2; the trivial depth-0 interval spanning the whole
collection never contributes.

The scan simulates interval openings and closings with a stack of frames
(k, start, color flags).  Frames carry strictly increasing k from bottom
to top; flags propagate to the parent frame on every pop, so an interval
is colored exactly when any row it spans touched both subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from . import streams
from .errors import InputInconsistencyError
from .model import CollectionManifest, ColorFlags
from .streams import IndexPaths, IntReader, IntWriter, SentinelLcpReader


@dataclass
class IntervalFrame:
    k: int
    start: int
    flags: ColorFlags


@dataclass
class DArrayResult:
    path: Path
    length: int
    peak_stack_depth: int


def build_d_array(
    lcp: Iterable[int],
    ids: Iterable[int],
    manifest: CollectionManifest,
    out_path: Path | str,
) -> DArrayResult:
    """Scan boundaries 1..N+1 and write the N+1 depth entries.

    `lcp` must yield the N+1 boundary values with the -1 sentinels at
    positions 1 and N+1 (see SentinelLcpReader); `ids` yields the N row
    colors.
    """
    n = manifest.total_rows
    values = [0] * (n + 1)
    stack = [IntervalFrame(k=-1, start=1, flags=ColorFlags())]
    peak_depth = 1
    id_iter = iter(ids)
    prev_is_query = False

    for i, lcp_v in enumerate(lcp, start=1):
        carried = ColorFlags()
        lb = i - 1
        top = stack[-1]
        while top.k > lcp_v:
            frame = stack.pop()
            frame.flags.merge(carried)
            if frame.k >= 1 and frame.flags.colored:
                if frame.k + 1 > values[frame.start]:
                    values[frame.start] = frame.k + 1
            carried = frame.flags
            lb = frame.start
            top = stack[-1]
            top.flags.merge(carried)
        if top.k < lcp_v:
            flags = ColorFlags(carried.has_query, carried.has_subject)
            # the new interval already spans row i-1
            if prev_is_query:
                flags.has_query = True
            else:
                flags.has_subject = True
            stack.append(IntervalFrame(k=lcp_v, start=lb, flags=flags))
            if len(stack) > peak_depth:
                peak_depth = len(stack)
            top = stack[-1]
        else:
            top.flags.merge(carried)
        if i <= n:
            color = next(id_iter)
            prev_is_query = color == 0
            if prev_is_query:
                top.flags.has_query = True
            else:
                top.flags.has_subject = True

    if len(stack) != 1 or stack[0].k != -1:
        raise InputInconsistencyError(
            "interval stack not reduced to its sentinel; lcp input is corrupt"
        )

    out_path = Path(out_path)
    with IntWriter(out_path, manifest.lcp_width) as w:
        w.extend(values[1:])
        w.append(0)
    return DArrayResult(path=out_path, length=n + 1, peak_stack_depth=peak_depth)


def build_d_array_for_index(paths: IndexPaths, manifest: CollectionManifest) -> DArrayResult:
    lcp = SentinelLcpReader(paths.lcp, manifest.lcp_width)
    ids = IntReader(paths.id, streams.ID_WIDTH)
    try:
        return build_d_array(lcp, ids, manifest, paths.d)
    finally:
        lcp.close()
        ids.close()
