"""
Reporting
Report files, run manifests and the hash-chained episode log.
"""

from .episode_log import EpisodeLog, verify_integrity
from .manifest import RunManifest, load_manifest, package_versions
from .writers import CSV_COLUMNS, write_report_csv, write_report_json, write_reports

__all__ = [
    "CSV_COLUMNS",
    "EpisodeLog",
    "RunManifest",
    "load_manifest",
    "package_versions",
    "verify_integrity",
    "write_report_csv",
    "write_report_json",
    "write_reports",
]
