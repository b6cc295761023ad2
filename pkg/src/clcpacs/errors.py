"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 1, StreamError and
plain OSError -> 2, VerifyMismatch -> 3.
"""


class ClcpError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(ClcpError):
    """Bad input: malformed FASTA, inconsistent manifest, illegal flag values."""


class StreamError(ClcpError):
    """Binary array file problem: truncated file, width overflow, bad length."""


class InputInconsistencyError(ClcpError):
    """Cross-checks between index arrays failed; the index files disagree."""


class VerifyMismatch(ClcpError):
    """Brute-force re-derivation disagreed with the fast pipeline."""

    def __init__(self, array: str, position: int, expected, actual):
        self.array = array
        self.position = position
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"{array}[{position}]: expected {expected!r}, got {actual!r}"
        )
