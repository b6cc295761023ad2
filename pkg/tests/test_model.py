import itertools
import random

import pytest

from clcpacs import (
    CollectionManifest,
    ColorFlags,
    SequenceRecord,
    Subset,
    ValidationError,
    end_marker_compare,
)

from conftest import demo_records


def test_marker_sorts_below_symbols():
    assert end_marker_compare(0, "A") == -1
    assert end_marker_compare("A", 0) == 1


def test_marker_vs_marker_by_record_position():
    assert end_marker_compare(1, 2) == -1
    assert end_marker_compare(2, 1) == 1
    assert end_marker_compare(1, 1) == 0


def test_symbols_compare_lexicographically():
    assert end_marker_compare("A", "C") == -1
    assert end_marker_compare("T", "T") == 0


def test_negative_color_rejected():
    with pytest.raises(ValidationError):
        end_marker_compare(-1, 0)


def test_comparator_total_order_on_random_triples():
    rng = random.Random(7)
    domain = [0, 1, 2, 3, "A", "C", "G", "T"]
    for _ in range(300):
        a, b, c = (rng.choice(domain) for _ in range(3))
        ab, ba = end_marker_compare(a, b), end_marker_compare(b, a)
        assert ab == -ba
        # transitivity over the sampled triple
        for x, y, z in itertools.permutations((a, b, c)):
            if end_marker_compare(x, y) <= 0 and end_marker_compare(y, z) <= 0:
                assert end_marker_compare(x, z) <= 0


def _manifest(records):
    return CollectionManifest(
        records=tuple(records), sigma=4, lcp_width=1, max_lcp=5, max_lcp_chi=3
    )


def test_manifest_validates_demo():
    _manifest(demo_records()).validate()


def test_manifest_rejects_duplicate_names():
    recs = demo_records()
    recs[2] = SequenceRecord("s1", 2, Subset.SUBJECT, "AAA")
    with pytest.raises(ValidationError, match="duplicate"):
        _manifest(recs).validate()


def test_manifest_rejects_two_queries():
    recs = demo_records()
    recs.append(SequenceRecord("q2", 3, Subset.QUERY, "AC"))
    with pytest.raises(ValidationError):
        _manifest(recs).validate()


def test_manifest_rejects_query_not_first():
    recs = demo_records()
    recs[0], recs[1] = recs[1], recs[0]
    with pytest.raises(ValidationError):
        _manifest(recs).validate()


def test_manifest_rejects_narrow_width():
    m = CollectionManifest(
        records=tuple(demo_records()), sigma=4, lcp_width=1, max_lcp=256, max_lcp_chi=3
    )
    with pytest.raises(ValidationError, match="max_lcp"):
        m.validate()


def test_manifest_json_round_trip(tmp_path):
    manifest = _manifest(demo_records())
    path = tmp_path / "index.json"
    manifest.save(path)
    texts = {r.name: r.text for r in demo_records()}
    loaded = CollectionManifest.load(path, texts=texts)
    assert loaded == manifest
    # stable key set, documented in the README
    import json

    doc = json.loads(path.read_text())
    assert set(doc) == {
        "total_rows", "num_subjects", "sigma", "lcp_width",
        "max_lcp", "max_lcp_chi", "records",
    }
    assert set(doc["records"][0]) == {"name", "color", "subset", "length"}
    assert doc["total_rows"] == 33
    assert doc["num_subjects"] == 2


def test_manifest_load_rejects_wrong_text_length(tmp_path):
    manifest = _manifest(demo_records())
    path = tmp_path / "index.json"
    manifest.save(path)
    texts = {r.name: r.text for r in demo_records()}
    texts["s1"] = "AC"
    with pytest.raises(ValidationError):
        CollectionManifest.load(path, texts=texts)


def test_color_flags():
    f = ColorFlags()
    assert not f.colored
    f.add_color(3)
    assert not f.colored
    f.add_color(0)
    assert f.colored
    g = ColorFlags()
    g.merge(f)
    assert g.colored
