"""
Atomic artifact writers for reports, plot data and digraph files.

Every file is written to a temporary sibling first and renamed into place, so
an interrupted run never leaves a half-written report behind.
"""

import os
import sys
import io
import csv
import json
import logging
import tempfile
import threading
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from pydantic import BaseModel

logger = logging.getLogger(__name__)

_lock = threading.Lock()

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write text atomically using temporary file + rename.

    Args:
        path: Destination file
        text: Full file contents

    Returns:
        Resolved destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    with _lock:
        temp_fd, temp_path = tempfile.mkstemp(
            dir=target.parent,
            prefix=f"{target.name}.tmp.",
            suffix=""
        )
        try:
            with os.fdopen(temp_fd, 'w', newline='') as temp_file:
                temp_file.write(text)
            # Atomic rename (requires same filesystem)
            os.replace(temp_path, target)
        finally:
            if os.path.exists(temp_path):
                os.unlink(temp_path)

    logger.debug(f"Wrote {target} ({len(text)} bytes)")
    return target


def to_json(payload: Any) -> str:
    """Serialize a pydantic model or plain JSON data with a trailing newline."""
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(indent=2) + "\n"
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as CSV text with the given header line."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def emit(text: str, output: Optional[PathLike] = None, stream: Optional[io.TextIOBase] = None) -> None:
    """
    Send rendered output to a file (atomically) or to a stream.

    Args:
        text: Rendered output
        output: File path; when omitted the text goes to ``stream``
        stream: Stream for console output (defaults to stdout)
    """
    if output is not None:
        atomic_write_text(output, text)
        return
    (stream or sys.stdout).write(text)
