import time
from typing import Optional, Sequence

from .bitwisted import check_bitwisted, one_sided_flags
from .quiver import check_dg_quiver
from .report import Report
from .twisted import check_twisted, classify


class CheckMixin:
    def check_dg(self, path: str, name: Optional[str] = None, field: Optional[str] = None) -> Report:
        """Leibniz, associativity and unit axioms of a DG quiver.

        A document without quivers is still checked: every complex in it was
        validated (d^2 = 0) while loading.
        """
        started = time.perf_counter()
        doc = self._load(path, field)
        if not doc.names("quivers") and name is None:
            report = Report(details={"complexes": doc.names("complexes")})
            return self._finish(report, "check dg", started)
        qname, Q = doc.single("quivers", name)
        report = check_dg_quiver(Q)
        report.details["quiver"] = qname
        report.details["objects"] = list(Q.objects)
        self._append_log(f"Checked quiver {qname} with {len(Q.objects)} objects")
        return self._finish(report, "check dg", started)

    def check_twisted(self, path: str, window: Optional[Sequence[int]] = None, name: Optional[str] = None,
                      field: Optional[str] = None) -> Report:
        started = time.perf_counter()
        doc = self._load(path, field)
        tname, T = doc.single("twisted", name)
        window = self._window(window)
        cells = T.cells(*window) if window else T.cells()
        report = check_twisted(T, cells)
        report.window = [cells[0], cells[-1]] if cells else list(window or [])
        report.details["name"] = tname
        if not T.streamed:
            report.details["shape"] = classify(T)
        self._append_log(f"Checked twisted complex {tname} on {len(cells)} cells")
        return self._finish(report, "check twisted", started)

    def check_bitwisted(self, path: str, window: Optional[Sequence[int]] = None, name: Optional[str] = None,
                        field: Optional[str] = None) -> Report:
        started = time.perf_counter()
        doc = self._load(path, field)
        bname, B = doc.single("bicomplexes", name)
        window = self._window(window, 4)
        report = check_bitwisted(B, window)
        report.window = list(window) if window else None
        report.details["name"] = bname
        report.details["shape"] = one_sided_flags(B, window)
        self._append_log(f"Checked bicomplex {bname} on {len(B.cells(window))} cells")
        return self._finish(report, "check bitwisted", started)
