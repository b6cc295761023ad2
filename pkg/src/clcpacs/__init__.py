"""Colored longest-common-prefix scans and multi-string ACS distances."""

from .acs import AcsAccumulators, AcsReport, accumulate, finalize, ms_for_target
from .clcp import AllocationTracker, ClcpChiMatrix, compute_clcp, open_matrix, scan_forward
from .darray import build_d_array, build_d_array_for_index
from .errors import (
    ClcpError,
    InputInconsistencyError,
    StreamError,
    ValidationError,
    VerifyMismatch,
)
from .indexer import build_index, extract_lcp_chi
from .model import (
    CollectionManifest,
    ColorFlags,
    SequenceRecord,
    Subset,
    end_marker_compare,
)
from .streams import (
    IndexPaths,
    IntReader,
    IntWriter,
    SentinelLcpReader,
    parse_fasta,
    records_from_fasta,
)

__version__ = "0.1.0"

__all__ = [
    "AcsAccumulators",
    "AcsReport",
    "AllocationTracker",
    "ClcpChiMatrix",
    "ClcpError",
    "CollectionManifest",
    "ColorFlags",
    "IndexPaths",
    "InputInconsistencyError",
    "IntReader",
    "IntWriter",
    "SentinelLcpReader",
    "SequenceRecord",
    "StreamError",
    "Subset",
    "ValidationError",
    "VerifyMismatch",
    "accumulate",
    "build_d_array",
    "build_d_array_for_index",
    "build_index",
    "compute_clcp",
    "end_marker_compare",
    "extract_lcp_chi",
    "finalize",
    "ms_for_target",
    "open_matrix",
    "parse_fasta",
    "records_from_fasta",
    "scan_forward",
]
