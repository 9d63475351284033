import time
from typing import Optional, Sequence, Tuple

from .bitwisted import (
    bicomplex_equal,
    convolutions_agree,
    convolve_bicomplex,
    convolve_twice,
    cxcol,
    cxcol_inverse,
    cxrow,
    cxrow_inverse,
    reflect,
    sigma,
)
from .complexes import homology_dims
from .document import Document, empty
from .errors import StructuralError
from .report import Report
from .twisted import TwistedCategory, convolve

ROWCOL_MODES = ("row", "col", "reflect", "sigma", "row-inverse", "col-inverse")


class ConvolveMixin:
    def convolve(self, path: str, window: Optional[Sequence[int]] = None,
                 degrees: Optional[Sequence[int]] = None, name: Optional[str] = None,
                 field: Optional[str] = None) -> Tuple[Report, Document]:
        """Convolution of a twisted complex over Ch; streamed inputs are cut to certified degrees."""
        started = time.perf_counter()
        doc = self._load(path, field)
        tname, T = doc.single("twisted", name)
        window = self._window(window) or (None, None)
        conv = convolve(T, *window, degrees=self._window(degrees))
        out = empty(doc.field)
        cname = out.complex_ref(conv.complex, f"conv_{tname}")
        report = Report(window=[conv.cells[0], conv.cells[-1]] if conv.cells else None)
        report.details.update({
            "name": cname,
            "dims": {str(n): k for n, k in conv.complex.space.dims},
            "homology": {str(n): h for n, h in homology_dims(conv.complex).items()},
        })
        if T.streamed:
            report.details["degrees"] = list(conv.degrees)
        self._append_log(f"Convolved {tname} over {len(conv.cells)} cells")
        return self._finish(report, "convolve", started, out), out

    def rowcol(self, path: str, mode: str, window: Optional[Sequence[int]] = None,
               name: Optional[str] = None, field: Optional[str] = None) -> Tuple[Report, Document]:
        """Move between complexes of complexes and bicomplexes.

        Each mode also checks the identity that ties its output to its input:
        the convolutions agree for ``row``/``col``, the operation is an
        involution for ``reflect``/``sigma``, and the inverses round-trip.
        """
        if mode not in ROWCOL_MODES:
            raise StructuralError(f"unknown mode {mode!r}; expected one of {', '.join(ROWCOL_MODES)}")
        started = time.perf_counter()
        doc = self._load(path, field)
        out = empty(doc.field)
        window = self._window(window, 4)
        if mode in ("row", "col"):
            tname, CC = doc.single("twisted", name)
            if not isinstance(CC.category, TwistedCategory):
                raise StructuralError(f"{tname} is not a complex of complexes")
            B = cxrow(CC) if mode == "row" else cxcol(CC)
            agree = convolutions_agree(convolve_bicomplex(B, layout=mode), convolve_twice(CC))
            report = Report() if agree else Report.failed({"identity": f"convolution_of_cx{mode}"})
            report.details["name"] = out.add_bicomplex(f"cx{mode}_{tname}", B)
        elif mode in ("reflect", "sigma"):
            bname, B = doc.single("bicomplexes", name)
            op = reflect if mode == "reflect" else sigma
            image = op(B)
            ok = bicomplex_equal(op(image), B, window)
            report = Report() if ok else Report.failed({"identity": f"{mode}_involution"})
            report.details["name"] = out.add_bicomplex(f"{mode}_{bname}", image)
        else:
            bname, B = doc.single("bicomplexes", name)
            if mode == "row-inverse":
                CC, back = cxrow_inverse(B, window), cxrow
            else:
                CC, back = cxcol_inverse(B, window), cxcol
            ok = bicomplex_equal(back(CC), B, window)
            report = Report() if ok else Report.failed({"identity": f"{mode}_round_trip"})
            report.details["name"] = out.add_twisted(f"{mode.replace('-', '_')}_{bname}", CC)
        report.window = list(window) if window else None
        report.details["mode"] = mode
        self._append_log(f"rowcol {mode} on {path}: {report.status}")
        return self._finish(report, "rowcol", started, out), out
