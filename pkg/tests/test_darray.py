import random

import pytest

from clcpacs import (
    IndexPaths,
    InputInconsistencyError,
    IntReader,
    SequenceRecord,
    Subset,
    build_d_array,
    build_index,
)
from clcpacs import oracle
from clcpacs.darray import build_d_array_for_index

from conftest import DEMO_D, demo_records


def read_all(path, width):
    with IntReader(path, width) as r:
        return list(r)


def test_demo_collection_depths(tmp_path):
    paths = IndexPaths(tmp_path)
    manifest = build_index(demo_records(), tmp_path, sigma=4)
    result = build_d_array_for_index(paths, manifest)
    assert read_all(paths.d, manifest.lcp_width) == DEMO_D
    assert result.length == 34
    assert read_all(paths.d, manifest.lcp_width)[-1] == 0


def test_disjoint_alphabets_give_all_zero(tmp_path):
    records = [
        SequenceRecord("q", 0, Subset.QUERY, "ACACAC"),
        SequenceRecord("s1", 1, Subset.SUBJECT, "GTGTG"),
        SequenceRecord("s2", 2, Subset.SUBJECT, "GGTT"),
    ]
    paths = IndexPaths(tmp_path)
    manifest = build_index(records, tmp_path)
    build_d_array_for_index(paths, manifest)
    assert set(read_all(paths.d, manifest.lcp_width)) == {0}


def test_matches_quadratic_enumeration_on_random_instances(tmp_path):
    rng = random.Random(17)
    for trial in range(60):
        recs = oracle.random_records(rng, sigma=rng.choice([2, 4]), max_len=24, max_m=5)
        out = tmp_path / f"t{trial}"
        paths = IndexPaths(out)
        manifest = build_index(recs, out)
        build_d_array_for_index(paths, manifest)
        naive = oracle.naive_index(recs)
        assert read_all(paths.d, manifest.lcp_width) == oracle.naive_d(naive.lcp, naive.ids)


def test_stack_depth_bounded_by_max_lcp(tmp_path):
    rng = random.Random(23)
    for trial in range(20):
        recs = oracle.random_records(rng, sigma=2, max_len=32, max_m=4)
        out = tmp_path / f"t{trial}"
        paths = IndexPaths(out)
        manifest = build_index(recs, out)
        result = build_d_array_for_index(paths, manifest)
        assert result.peak_stack_depth <= manifest.max_lcp + 2


def test_positive_entries_mark_colored_intervals(tmp_path):
    # every non-zero depth must be realizable by an interval holding both subsets
    paths = IndexPaths(tmp_path)
    manifest = build_index(demo_records(), tmp_path, sigma=4)
    build_d_array_for_index(paths, manifest)
    d = read_all(paths.d, manifest.lcp_width)
    lcp = read_all(paths.lcp, manifest.lcp_width)
    ids = read_all(paths.id, 4)
    lcp[0] = -1
    n = len(ids)
    for start0, value in enumerate(d[:-1]):
        if value == 0:
            continue
        k = value - 1
        rm = n
        found = False
        for b in range(start0 + 1, n):
            rm = min(rm, lcp[b])
            if rm < k:
                break
            right = lcp[b + 1] if b + 1 < n else -1
            if rm == k and lcp[start0] < k and right < k:
                span = ids[start0 : b + 1]
                found = 0 in span and any(c != 0 for c in span)
                if found:
                    break
        assert found, f"depth {value} at row {start0 + 1} has no colored interval"


def test_corrupt_lcp_leaves_stack_unreduced(tmp_path):
    manifest = build_index(demo_records(), tmp_path, sigma=4)
    # a final boundary that never drops back to -1 leaves open frames
    bad_lcp = [-1] + [3] * 32
    ids = [0] * 8 + [1] * 25
    with pytest.raises(InputInconsistencyError, match="sentinel"):
        build_d_array(bad_lcp, ids, manifest, tmp_path / "bad.d")
