"""Shared fixtures: the three-string demo collection and its known values.

The demo collection is small enough to check by hand; every frozen array
below was derived from the sorted-suffix table of
{ACGCGCC (query), ACGAGACGAT, AACGCCGCCGGCA} over ACGT.
"""

import pytest

from clcpacs import IndexPaths, SequenceRecord, Subset, build_index
from clcpacs.clcp import compute_clcp
from clcpacs.darray import build_d_array_for_index

DEMO_CHI = "ACGCGCC"
DEMO_S1 = "ACGAGACGAT"
DEMO_S2 = "AACGCCGCCGGCA"

DEMO_FASTA = f">chi\n{DEMO_CHI}\n>s1\n{DEMO_S1}\n>s2\n{DEMO_S2}\n"

# stored convention: the first entry is a placeholder 0 (conceptually -1)
DEMO_LCP = [0, 0, 0, 0, 1, 1, 4, 3, 4, 1, 1, 0, 1, 1, 2, 3, 1, 3, 2, 4, 5,
            3, 2, 0, 2, 2, 1, 2, 3, 4, 2, 1, 0]

DEMO_ID = [0, 1, 2, 2, 2, 1, 1, 2, 0, 1, 1, 0, 2, 0, 2, 2, 1, 1, 0, 2, 2,
           0, 2, 1, 1, 1, 2, 0, 2, 2, 0, 2, 1]

DEMO_POS = [8, 11, 14, 13, 1, 1, 6, 2, 1, 4, 9, 7, 12, 6, 5, 8, 2, 7, 4, 3,
            6, 2, 9, 5, 3, 8, 11, 5, 4, 7, 3, 10, 10]

_E = lambda ch: 0 if ch == "$" else ord(ch)
DEMO_EBWT = [_E(c) for c in
             ["C", "T", "A", "C", "$", "$", "G", "A", "$", "G", "G", "C",
              "G", "G", "G", "G", "A", "A", "G", "A", "C", "A", "C", "A",
              "C", "C", "G", "C", "C", "C", "C", "C", "A"]]

DEMO_LCPCHI = [0, 0, 0, 1, 1, 3, 0, 2]

DEMO_D = [0] * 34
for _row, _v in {4: 2, 6: 4, 8: 5, 12: 2, 14: 3, 17: 3, 19: 5, 24: 2,
                 27: 3, 28: 4}.items():
    DEMO_D[_row - 1] = _v

# (row, color, upper, lower) for every subject row, in row order
DEMO_SUBJECT_ROWS = [
    (2, 1, 0, 0), (3, 2, 0, 0), (4, 2, 0, 1), (5, 2, 0, 1), (6, 1, 0, 3),
    (7, 1, 0, 3), (8, 2, 0, 4), (10, 1, 1, 0), (11, 1, 1, 0), (13, 2, 1, 1),
    (15, 2, 2, 1), (16, 2, 2, 1), (17, 1, 1, 2), (18, 1, 1, 2), (20, 2, 4, 3),
    (21, 2, 4, 3), (23, 2, 2, 0), (24, 1, 0, 1), (25, 1, 0, 1), (26, 1, 0, 1),
    (27, 2, 0, 2), (29, 2, 3, 2), (30, 2, 3, 2), (32, 2, 1, 0), (33, 1, 0, 0),
]

# final upper/lower values of the query rows against colors (1, 2)
DEMO_CHI_ROWS = {
    1: ((0, 0), (0, 0)),
    9: ((3, 4), (1, 0)),
    12: ((0, 0), (1, 1)),
    14: ((0, 1), (1, 2)),
    19: ((2, 1), (0, 4)),
    22: ((2, 3), (0, 2)),
    28: ((1, 2), (0, 3)),
    31: ((1, 2), (0, 1)),
}

DEMO_MATRIX = [[0, 0], [3, 4], [1, 1], [1, 2], [2, 4], [2, 3], [1, 3], [1, 2]]

DEMO_MS_S1_VS_CHI = [3, 2, 1, 1, 1, 3, 2, 1, 1, 0]
DEMO_MS_CHI_VS_S1 = [3, 2, 1, 2, 1, 1, 1]

DEMO_SUM_QUERY = [11, 19]
DEMO_SUM_SUBJECT = [15, 30]
DEMO_ACS = [0.67, 0.34]


def demo_records():
    return [
        SequenceRecord("chi", 0, Subset.QUERY, DEMO_CHI),
        SequenceRecord("s1", 1, Subset.SUBJECT, DEMO_S1),
        SequenceRecord("s2", 2, Subset.SUBJECT, DEMO_S2),
    ]


@pytest.fixture
def demo_index(tmp_path):
    """Fully built pipeline for the demo collection."""
    paths = IndexPaths(tmp_path / "idx")
    manifest = build_index(demo_records(), paths.directory, sigma=4)
    build_d_array_for_index(paths, manifest)
    rows = []
    scan = compute_clcp(
        paths, manifest, on_row=lambda r, c, u, l: rows.append((r, c, u, l))
    )
    return paths, manifest, scan, rows
