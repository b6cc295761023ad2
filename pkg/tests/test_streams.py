import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clcpacs import (
    IntReader,
    IntWriter,
    SentinelLcpReader,
    StreamError,
    ValidationError,
    parse_fasta,
)
from clcpacs.streams import BACKWARD, records_from_fasta


@given(
    width=st.sampled_from([1, 2, 4, 8]),
    values=st.lists(st.integers(min_value=0, max_value=255), max_size=200),
)
@settings(max_examples=60, deadline=None)
def test_round_trip_forward_and_backward(tmp_path_factory, width, values):
    path = tmp_path_factory.mktemp("rt") / "a.bin"
    with IntWriter(path, width) as w:
        w.extend(values)
    with IntReader(path, width) as r:
        assert list(r) == values
    with IntReader(path, width, BACKWARD) as r:
        assert list(r) == list(reversed(values))


def test_little_endian_layout(tmp_path):
    path = tmp_path / "a.bin"
    with IntWriter(path, 2) as w:
        w.extend([3, 1, 4])
    assert path.read_bytes() == bytes([3, 0, 1, 0, 4, 0])


def test_width_overflow_rejected(tmp_path):
    path = tmp_path / "a.bin"
    with IntWriter(path, 2) as w:
        with pytest.raises(StreamError, match="exceeds width"):
            w.append(1 << 16)


def test_truncated_file_rejected(tmp_path):
    path = tmp_path / "a.bin"
    path.write_bytes(b"\x01\x02\x03")
    with pytest.raises(StreamError, match="not a multiple"):
        IntReader(path, 2)


def test_peek_does_not_consume(tmp_path):
    path = tmp_path / "a.bin"
    with IntWriter(path, 4) as w:
        w.extend([10, 20])
    with IntReader(path, 4) as r:
        assert r.peek() == 10
        assert next(r) == 10
        assert r.peek() == 20
        assert next(r) == 20
        assert r.peek() is None
    with IntReader(path, 4, BACKWARD) as r:
        with pytest.raises(StreamError):
            r.peek()


def test_buffer_stays_under_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("CLCPACS_BUFFER_BYTES", "64")
    path = tmp_path / "a.bin"
    with IntWriter(path, 8) as w:
        w.extend(range(1000))
        assert w.peak_buffered_bytes <= 64
    for direction in ("forward", BACKWARD):
        with IntReader(path, 8, direction) as r:
            total = sum(1 for _ in r)
            assert total == 1000
            assert r.peak_buffered_bytes <= 64


def test_sentinel_lcp_reader(tmp_path):
    path = tmp_path / "a.lcp"
    with IntWriter(path, 1) as w:
        w.extend([0, 0, 2, 1])  # stored; first entry is the placeholder
    r = SentinelLcpReader(path, 1)
    assert list(r) == [-1, 0, 2, 1, -1]
    r.close()


def test_parse_fasta_basic():
    assert parse_fasta(">a\nACG\nT\n") == [("a", "ACGT")]


def test_parse_fasta_empty_sequence():
    with pytest.raises(ValidationError, match="empty sequence"):
        parse_fasta(">a\n\n>b\nA\n")


def test_parse_fasta_demo_collection():
    from conftest import DEMO_FASTA

    recs = parse_fasta(DEMO_FASTA)
    assert [(n, len(s)) for n, s in recs] == [("chi", 7), ("s1", 10), ("s2", 13)]


def test_parse_fasta_illegal_symbol_reports_line():
    with pytest.raises(ValidationError, match="line 4"):
        parse_fasta(">a\nACG\n>b\nACX\n")


def test_parse_fasta_case_folds():
    assert parse_fasta(">a\nacgt\n") == [("a", "ACGT")]


def test_parse_fasta_no_headers():
    with pytest.raises(ValidationError, match="no FASTA headers"):
        parse_fasta("ACGT\n")


def test_records_from_fasta_orders_query_first():
    recs = records_from_fasta(">s1\nAC\n>q\nGG\n", "q")
    assert [r.name for r in recs] == ["q", "s1"]
    assert [r.color for r in recs] == [0, 1]


def test_records_from_fasta_unknown_query():
    with pytest.raises(ValidationError, match="not present"):
        records_from_fasta(">a\nAC\n", "nope")
