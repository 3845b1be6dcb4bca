"""
Episode Log

Tamper-evident JSONL log of episode records.

- Header line, then one line per EpisodeRecord
- Every record line carries ``previous_hash``, the SHA-256 of the line before it
- No timestamps or random ids, so identical runs write identical files
"""

import hashlib
import json
import threading
from pathlib import Path
from typing import Any, Optional

import structlog

from ..metrics import EpisodeRecord

logger = structlog.get_logger(__name__)

LOG_VERSION = "1.0"


def _hash_content(content: str) -> str:
    return hashlib.sha256(content.encode()).hexdigest()


def _line(payload: dict[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class EpisodeLog:
    """
    Append-only, hash-chained episode log.

    Args:
        path: JSONL file (truncated on open)
        run_hash: Config hash of the run, stored in the header
    """

    def __init__(self, path: Path, run_hash: Optional[str] = None):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._count = 0

        header = {"log_version": LOG_VERSION, "run_hash": run_hash}
        line = _line(header)
        with open(self.path, "w") as f:
            f.write(line + "\n")
        self._previous_hash = _hash_content(line)

    def append(self, record: EpisodeRecord, cell: Optional[dict[str, Any]] = None) -> None:
        """Write one record, chained to the previous line."""
        with self._lock:
            entry = {"record": record.to_dict(), "previous_hash": self._previous_hash}
            if cell is not None:
                entry["cell"] = cell
            line = _line(entry)
            with open(self.path, "a") as f:
                f.write(line + "\n")
            self._previous_hash = _hash_content(line)
            self._count += 1

    @property
    def count(self) -> int:
        return self._count

    def get_stats(self) -> dict[str, Any]:
        return {
            "path": str(self.path),
            "records": self._count,
            "head_hash": self._previous_hash,
        }


def verify_integrity(path: Path) -> dict[str, Any]:
    """
    Recompute the hash chain of a log file.

    Returns:
        Dictionary with ``valid``, ``records_checked`` and the line numbers of
        ``chain_failures``
    """
    path = Path(path)
    if not path.exists():
        return {"valid": False, "error": "Log file not found"}

    results: dict[str, Any] = {
        "file": str(path),
        "valid": True,
        "records_checked": 0,
        "chain_failures": [],
    }

    previous_hash = None
    with open(path, "r") as f:
        for i, line in enumerate(f):
            content = line.rstrip("\n")
            try:
                data = json.loads(content)
            except json.JSONDecodeError:
                results["valid"] = False
                results["error"] = f"Invalid JSON at line {i}"
                break

            if i == 0:
                if "log_version" not in data:
                    results["valid"] = False
                    results["error"] = "Missing header"
                    break
                previous_hash = _hash_content(content)
                continue

            results["records_checked"] += 1
            if data.get("previous_hash") != previous_hash:
                results["chain_failures"].append(i)
                results["valid"] = False
            previous_hash = _hash_content(content)

    if not results["valid"]:
        logger.warning("episode_log_tampered", path=str(path), failures=results["chain_failures"])
    return results
