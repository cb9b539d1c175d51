"""Perfect-code constructions: equitable partitions, splittability, twofold codes and MDS-based codes."""

from .core import (
    BinaryCode,
    BinaryWord,
    Check,
    CodeFormatError,
    MultisetCode,
    PreconditionError,
    QuaternaryCode,
    code_distance,
    parse_code,
    read_code,
    write_code,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryCode",
    "BinaryWord",
    "Check",
    "CodeFormatError",
    "MultisetCode",
    "PreconditionError",
    "QuaternaryCode",
    "code_distance",
    "parse_code",
    "read_code",
    "write_code",
]
