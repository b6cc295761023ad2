"""Core domain types: sequence records, the collection manifest, colors.

A comparison run partitions the collection into one query string (color 0)
and m subject strings (colors 1..m).  The query record always comes first
in manifest order, so its end-marker sorts before every other end-marker.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ValidationError

QUERY_COLOR = 0

#: Widths (bytes per element) accepted for LCP-valued files.
LCP_WIDTHS = (1, 2, 4, 8)


class Subset(Enum):
    QUERY = "query"
    SUBJECT = "subject"


@dataclass(frozen=True)
class SequenceRecord:
    """One string of the collection, excluding its end-marker."""

    name: str
    color: int
    subset: Subset
    text: str

    @property
    def length(self) -> int:
        return len(self.text)

    def validate(self) -> None:
        if self.length < 1:
            raise ValidationError(f"record {self.name!r}: empty sequence")
        if self.subset is Subset.QUERY and self.color != QUERY_COLOR:
            raise ValidationError(f"record {self.name!r}: query must have color 0")
        if self.subset is Subset.SUBJECT and self.color == QUERY_COLOR:
            raise ValidationError(f"record {self.name!r}: color 0 is reserved for the query")


@dataclass(frozen=True)
class CollectionManifest:
    """Binds the disk-resident arrays of one indexed collection together.

    total_rows is N = sum of (length + 1) over all records: every suffix,
    end-marker suffixes and the query's suffixes included.
    """

    records: tuple[SequenceRecord, ...]
    sigma: int
    lcp_width: int
    max_lcp: int
    max_lcp_chi: int

    @property
    def total_rows(self) -> int:
        return sum(r.length + 1 for r in self.records)

    @property
    def num_subjects(self) -> int:
        return sum(1 for r in self.records if r.subset is Subset.SUBJECT)

    @property
    def query(self) -> SequenceRecord:
        return self.records[0]

    def record_by_color(self, color: int) -> SequenceRecord:
        for r in self.records:
            if r.color == color:
                return r
        raise ValidationError(f"no record with color {color}")

    def record_by_name(self, name: str) -> SequenceRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise ValidationError(f"no record named {name!r}")

    def validate(self) -> None:
        if len(self.records) < 2:
            raise ValidationError("a collection needs at least 2 records")
        queries = [r for r in self.records if r.subset is Subset.QUERY]
        if len(queries) != 1:
            raise ValidationError(f"exactly one query record required, got {len(queries)}")
        if self.records[0].subset is not Subset.QUERY:
            raise ValidationError("the query record must come first in manifest order")
        names = [r.name for r in self.records]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})[0]
            raise ValidationError(f"duplicate record name {dup!r}")
        for i, r in enumerate(self.records):
            r.validate()
            if r.color != i:
                raise ValidationError(f"record {r.name!r}: color {r.color} != manifest position {i}")
        if self.sigma < 1:
            raise ValidationError("sigma must be >= 1")
        if self.lcp_width not in LCP_WIDTHS:
            raise ValidationError(f"lcp_width must be one of {LCP_WIDTHS}")
        if self.max_lcp >= 1 << (8 * self.lcp_width):
            raise ValidationError(
                f"lcp_width {self.lcp_width} cannot hold max_lcp {self.max_lcp}"
            )

    def to_json(self) -> str:
        doc = {
            "total_rows": self.total_rows,
            "num_subjects": self.num_subjects,
            "sigma": self.sigma,
            "lcp_width": self.lcp_width,
            "max_lcp": self.max_lcp,
            "max_lcp_chi": self.max_lcp_chi,
            "records": [
                {
                    "name": r.name,
                    "color": r.color,
                    "subset": r.subset.value,
                    "length": r.length,
                }
                for r in self.records
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str, texts: dict[str, str] | None = None) -> "CollectionManifest":
        """Parse a manifest document.

        Record texts are not stored in the manifest; pass `texts` (name ->
        sequence) when the in-memory records should carry them, e.g. for
        verification runs.  Without them, records get placeholder texts of
        the recorded length.
        """
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"manifest is not valid JSON: {exc}") from exc
        try:
            records = tuple(
                SequenceRecord(
                    name=entry["name"],
                    color=entry["color"],
                    subset=Subset(entry["subset"]),
                    text=(
                        texts[entry["name"]]
                        if texts is not None
                        else "?" * entry["length"]
                    ),
                )
                for entry in doc["records"]
            )
            manifest = cls(
                records=records,
                sigma=doc["sigma"],
                lcp_width=doc["lcp_width"],
                max_lcp=doc["max_lcp"],
                max_lcp_chi=doc["max_lcp_chi"],
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"manifest is missing a required key: {exc}") from exc
        for entry, record in zip(doc["records"], records):
            if record.length != entry["length"]:
                raise ValidationError(
                    f"record {record.name!r}: text length {record.length} != manifest length {entry['length']}"
                )
        if doc["total_rows"] != manifest.total_rows:
            raise ValidationError("manifest total_rows does not match record lengths")
        if doc["num_subjects"] != manifest.num_subjects:
            raise ValidationError("manifest num_subjects does not match records")
        manifest.validate()
        return manifest

    def save(self, path: Path) -> None:
        path.write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: Path, texts: dict[str, str] | None = None) -> "CollectionManifest":
        return cls.from_json(path.read_text(encoding="utf-8"), texts=texts)


@dataclass
class ColorFlags:
    """Which subsets an lcp-interval has touched so far."""

    has_query: bool = False
    has_subject: bool = False

    @property
    def colored(self) -> bool:
        return self.has_query and self.has_subject

    def add_color(self, color: int) -> None:
        if color == QUERY_COLOR:
            self.has_query = True
        else:
            self.has_subject = True

    def merge(self, other: "ColorFlags") -> None:
        self.has_query = self.has_query or other.has_query
        self.has_subject = self.has_subject or other.has_subject


def end_marker_compare(a: int | str, b: int | str) -> int:
    """Order suffix symbols where an int is an end-marker's color.

    Returns -1/0/1.  End-markers sort below every alphabet symbol and
    among themselves by record position (query record first); an
    end-marker equals nothing but itself, so an LCP comparison always
    stops when it meets a pair of end-markers from distinct records.
    """
    a_marker = isinstance(a, int)
    b_marker = isinstance(b, int)
    if a_marker and b_marker:
        if a < 0 or b < 0:
            raise ValidationError("end-marker colors are non-negative")
        return -1 if a < b else (1 if a > b else 0)
    if a_marker:
        return -1
    if b_marker:
        return 1
    return -1 if a < b else (1 if a > b else 0)
