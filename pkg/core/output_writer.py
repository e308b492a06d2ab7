"""Output writer for CSV, JSON and DOT artifacts."""

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO


class OutputWriter:
    """Writes one artifact to a file (UTF-8) or to a data stream.

    The data stream carries machine-parseable content only; summaries belong
    on the diagnostics stream.
    """

    def __init__(self, output_path: Optional[Path] = None, stream: Optional[TextIO] = None):
        self.output_path = Path(output_path) if output_path is not None else None
        self.stream = stream

    def write_text(self, text: str) -> Optional[Path]:
        """Write raw text; returns the file path when writing to disk."""
        if not text.endswith("\n"):
            text += "\n"
        if self.output_path is not None:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self.output_path.write_text(text, encoding="utf-8")
            return self.output_path
        stream = self.stream if self.stream is not None else sys.stdout
        stream.write(text)
        stream.flush()
        return None

    def write_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Optional[Path]:
        """Write a header line plus rows, '\\n' line endings."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return self.write_text(buffer.getvalue())

    def write_json(self, payload: Any) -> Optional[Path]:
        return self.write_text(json.dumps(payload, indent=2, ensure_ascii=False))
