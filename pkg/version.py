"""
Version utility module for package, record-schema and file-format versions.
Supports major.minor.patch format with proper comparison logic.
"""

import re
import json
from pathlib import Path
from typing import Tuple

VERSION_FILE = Path(__file__).resolve().parent / "version.json"


class Version:
    """Represents a semantic version with comparison capabilities."""

    def __init__(self, version_string: str):
        """
        Initialize a Version object from a version string.

        Args:
            version_string: Version in format "major.minor.patch"

        Raises:
            ValueError: If version string is invalid
        """
        self.version_string = version_string.strip()
        self.major, self.minor, self.patch = self._parse_version(version_string)

    @staticmethod
    def _parse_version(version_string: str) -> Tuple[int, int, int]:
        # Accept a leading 'v' (e.g. v1.0.0)
        version_string = version_string.strip().lstrip('vV')

        match = re.match(r'^(\d+)\.(\d+)\.(\d+)$', version_string)
        if not match:
            raise ValueError(f"Invalid version format: {version_string}. Expected format: major.minor.patch")

        major, minor, patch = map(int, match.groups())
        return major, minor, patch

    def _key(self) -> Tuple[int, int, int]:
        return (self.major, self.minor, self.patch)

    def __str__(self) -> str:
        return f"{self.major}.{self.minor}.{self.patch}"

    def __repr__(self) -> str:
        return f"Version('{self.version_string}')"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self._key() < other._key()

    def __le__(self, other) -> bool:
        return self < other or self == other

    def __gt__(self, other) -> bool:
        if not isinstance(other, Version):
            return NotImplemented
        return self._key() > other._key()

    def __ge__(self, other) -> bool:
        return self > other or self == other

    def __hash__(self) -> int:
        return hash(self._key())

    def can_read(self, written: 'Version') -> bool:
        """
        Check whether a reader at this version understands data written at another.

        Records stay readable across minor and patch changes of the same major
        version, as long as the writer is not newer than the reader.

        Args:
            written: Version stamped into the record

        Returns:
            True if the record can be read
        """
        return written.major == self.major and written <= self


def _load_version_file() -> dict:
    with open(VERSION_FILE, "r") as f:
        return json.load(f)


def package_version() -> Version:
    """Return the toolkit version from version.json."""
    return Version(_load_version_file()["version"])


def record_schema() -> Version:
    """Return the schema version stamped into every JSON record."""
    return Version(_load_version_file()["record_schema"])


def edge_list_format() -> int:
    """Return the edge-list format revision written in file headers."""
    return int(_load_version_file()["edge_list_format"])


def check_record_version(version_string: str) -> Version:
    """
    Validate the schema version of a record about to be read.

    Args:
        version_string: Version string found in the record

    Returns:
        Parsed version

    Raises:
        ValueError: If the version is malformed or incompatible
    """
    written = Version(version_string)
    reader = record_schema()
    if not reader.can_read(written):
        raise ValueError(f"Record schema {written} is not readable by schema {reader}")
    return written

