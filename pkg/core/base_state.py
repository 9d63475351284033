import threading
import time
from collections import deque
from pathlib import Path
from typing import Deque, Optional, Sequence, Tuple, Union

from . import config
from .document import Document, load
from .errors import DocumentError
from .report import Report


class BaseState:
    def __init__(self) -> None:
        # field for documents that do not declare one ("q" or "fp:P")
        self.field_spec: str = config.DEFAULT_FIELD

        # word-length window for A-infinity commands; None means bound + 3
        self.max_word: Optional[int] = config.MAX_WORD

        self.seed: int = config.SEED

        # last finished command, kept for --verbose and for tests
        self.last_report: Optional[Report] = None
        self.last_document: Optional[Document] = None

        # sync primitives (RLock to allow nested acquire in same thread)
        self.lock = threading.RLock()

        # log buffer
        self._logs: Deque[str] = deque(maxlen=config.LOG_MAX)

    # ---------- helpers shared by the command mixins ----------

    def _load(self, path: Union[str, Path], field: Optional[str] = None) -> Document:
        doc = load(path, field or self.field_spec)
        self._append_log(f"Loaded {path} over {doc.field}")
        return doc

    def _window(self, window: Optional[Sequence[int]], size: int = 2) -> Optional[Tuple[int, ...]]:
        if window is None:
            return None
        window = tuple(int(v) for v in window)
        if len(window) != size:
            raise DocumentError("window", f"expected {size} bounds, got {len(window)}")
        return window

    def _word_window(self, max_word: Optional[int], bound: int) -> int:
        if max_word is not None:
            return max_word
        if self.max_word is not None:
            return self.max_word
        return bound + 3

    def _finish(self, report: Report, command: str, started: float,
                document: Optional[Document] = None) -> Report:
        report.command = command
        report.timings = {"total_ms": round((time.perf_counter() - started) * 1000.0, 3)}
        with self.lock:
            self.last_report = report
            self.last_document = document
        self._log_report(report)
        return report

