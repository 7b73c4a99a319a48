"""Append-only review log for human curation.

Entries are JSONL on local disk; the latest entry per case determines its
status. Writes are serialized through a lock and flushed per append so the
log survives restarts.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

VALID_STATUSES = ("unreviewed", "approved", "flagged")


@dataclass
class ReviewEntry:
    case_id: str
    status: str
    note: str = ""
    reviewer: str = ""
    timestamp: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


class ReviewLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: list[ReviewEntry] = []
        self._latest: dict[str, ReviewEntry] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                data = json.loads(line)
                entry = ReviewEntry(**data)
                self._entries.append(entry)
                self._latest[entry.case_id] = entry

    def append(self, case_id: str, status: str, note: str = "", reviewer: str = "") -> ReviewEntry:
        if not case_id:
            raise ValueError("case_id must be non-empty")
        if status not in VALID_STATUSES:
            raise ValueError(f"status must be one of {VALID_STATUSES}, got {status!r}")
        entry = ReviewEntry(
            case_id=case_id,
            status=status,
            note=note,
            reviewer=reviewer,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.to_dict(), ensure_ascii=False) + "\n")
                fh.flush()
            self._entries.append(entry)
            self._latest[entry.case_id] = entry
        return entry

    def latest(self, case_id: str) -> ReviewEntry | None:
        return self._latest.get(case_id)

    def status_of(self, case_id: str) -> str:
        entry = self._latest.get(case_id)
        return entry.status if entry else "unreviewed"

    def note_of(self, case_id: str) -> str:
        entry = self._latest.get(case_id)
        return entry.note if entry else ""

    def current(self, status: str | None = None) -> list[ReviewEntry]:
        """Latest entry per case, optionally filtered by status."""
        entries = list(self._latest.values())
        if status is not None:
            entries = [e for e in entries if e.status == status]
        return sorted(entries, key=lambda e: e.case_id)

    def tallies(self) -> dict[str, int]:
        counts = {"approved": 0, "flagged": 0, "unreviewed": 0}
        for entry in self._latest.values():
            counts[entry.status] = counts.get(entry.status, 0) + 1
        counts["total_entries"] = len(self._entries)
        return counts
