import time
from typing import Optional, Sequence, Tuple

from .ainfty import is_alg_morphism, is_ainfty_algebra, stasheff_window
from .document import Document, empty
from .errors import DocumentError
from .modules import is_closed_mod_morphism, is_module
from .report import Report
from .twisted import truncate


class AinftyMixin:
    def check_algebra(self, path: str, max_word: Optional[int] = None, name: Optional[str] = None,
                      field: Optional[str] = None) -> Report:
        started = time.perf_counter()
        doc = self._load(path, field)
        aname, alg = doc.single("algebras", name)
        N = self._word_window(max_word, alg.bound)
        report = is_ainfty_algebra(alg, N)
        report.details.update({"name": aname, "bound": alg.bound})
        self._append_log(f"Stasheff relations of {aname} on words of length <= {N}: {report.status}")
        return self._finish(report, "ainfty check-algebra", started)

    def check_module(self, path: str, max_word: Optional[int] = None, name: Optional[str] = None,
                     field: Optional[str] = None) -> Report:
        started = time.perf_counter()
        doc = self._load(path, field)
        mname, mod = doc.single("modules", name)
        N = self._word_window(max_word, mod.reach)
        report = is_module(mod, N)
        report.details.update({"name": mname, "side": mod.side, "bound": mod.bound})
        self._append_log(f"Module relations of {mname} on words of length <= {N}: {report.status}")
        return self._finish(report, "ainfty check-module", started)

    def check_morphism(self, path: str, max_word: Optional[int] = None, name: Optional[str] = None,
                       field: Optional[str] = None) -> Report:
        """Algebra morphisms must commute with the bar differentials; module morphisms must be closed."""
        started = time.perf_counter()
        doc = self._load(path, field)
        if doc.names("alg_morphisms") and (name is None or name in doc.data["alg_morphisms"]):
            fname, f = doc.single("alg_morphisms", name)
            N = self._word_window(max_word, max(f.bound, f.source.bound, f.target.bound))
            report = is_alg_morphism(f, N)
            report.details["kind"] = "algebra"
        elif doc.names("mod_morphisms"):
            fname, f = doc.single("mod_morphisms", name)
            N = self._word_window(max_word, max(f.bound, f.source.reach, f.target.reach))
            report = is_closed_mod_morphism(f, N)
            report.details["kind"] = "module"
        else:
            raise DocumentError("alg_morphisms", "document holds no morphism to check")
        report.details["name"] = fname
        self._append_log(f"Morphism {fname} on words of length <= {N}: {report.status}")
        return self._finish(report, "ainfty check-morphism", started)

    def bar(self, path: str, window: Optional[Sequence[int]] = None, max_word: Optional[int] = None,
            name: Optional[str] = None, field: Optional[str] = None) -> Tuple[Report, Document]:
        """Write the bar of an algebra (or, failing that, of a module) truncated to a window of indices."""
        started = time.perf_counter()
        doc = self._load(path, field)
        if name in doc.data["algebras"] or (name is None and not doc.names("modules")):
            ename, ent = doc.single("algebras", name)
            bound = ent.bound
        else:
            ename, ent = doc.single("modules", name)
            bound = ent.reach
        window = self._window(window)
        if window is None:
            cells = stasheff_window(self._word_window(max_word, bound))
            window = (cells[0], cells[-1])
        T = truncate(ent.bar, *window)
        out = empty(doc.field)
        tname = out.add_twisted(f"bar_{ename}", T)
        report = Report(window=list(window))
        report.details.update({
            "name": tname,
            "objects": {str(i): {str(n): k for n, k in T.obj(i).space.dims} for i in T.cells()},
            "arrows": [[i, j] for i in T.cells() for j in T.targets(i)],
        })
        self._append_log(f"Bar of {ename} on indices {window[0]}..{window[1]}")
        return self._finish(report, "ainfty bar", started, out), out
