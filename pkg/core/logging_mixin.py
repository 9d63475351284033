import json
import time
from typing import List, Optional

from .report import Report


class LoggingMixin:
    """Timestamped log ring; ``_logs`` is a deque bounded by TWISTKIT_LOG_MAX."""

    def _append_log(self, msg: str) -> None:
        ts = time.strftime("%Y-%m-%d %H:%M:%S")
        with self.lock:
            self._logs.append(f"[{ts}] {msg}")

    def _log_report(self, report: Report) -> None:
        self._append_log(f"{report.command}: {report.status} in {report.timings.get('total_ms')} ms")
        if report.witness is not None:
            self._append_log(f"{report.command}: witness {json.dumps(report.witness, sort_keys=True)}")

    def get_logs(self, limit: int = 200, command: Optional[str] = None) -> List[str]:
        """Newest ``limit`` lines (all when limit <= 0), optionally only those naming ``command``."""
        with self.lock:
            lines = list(self._logs)
        if command is not None:
            lines = [line for line in lines if f"] {command}:" in line]
        if limit <= 0 or limit >= len(lines):
            return lines
        return lines[-limit:]

    def clear_logs(self) -> None:
        with self.lock:
            self._logs.clear()
