import time
from typing import Optional, Tuple

from .complexes import complex_equal
from .document import Document
from .errors import DocumentError, StructuralError
from .modules import AInfModule
from .report import Report
from .retract import RetractData, homology_retract
from .transfer import TransferResult, check_rho_identity, transfer, verify_transfer


class TransferMixin:
    def _transfer_inputs(self, module_path: str, retract_path: Optional[str], onto_homology: bool,
                         name: Optional[str], field: Optional[str]) -> Tuple[Document, str, AInfModule, RetractData]:
        doc = self._load(module_path, field).copy()
        mname, mod = doc.single("modules", name)
        if onto_homology:
            return doc, mname, mod, homology_retract(mod.E)
        if retract_path is not None:
            _, r = self._load(retract_path, doc.field.spec).single("retracts")
        elif doc.names("retracts"):
            _, r = doc.single("retracts")
        else:
            raise DocumentError("retracts", "no retract given; pass a retract document or --onto-homology")
        if not complex_equal(r.P, mod.E):
            raise StructuralError(f"retract does not start at the complex of module {mname}")
        return doc, mname, mod, RetractData(mod.E, r.Q, r.f, r.g, r.h)

    def transfer(self, module_path: str, retract_path: Optional[str] = None, max_word: Optional[int] = None,
                 onto_homology: bool = False, name: Optional[str] = None,
                 field: Optional[str] = None) -> Tuple[Report, Document]:
        """Transferred module on Q with phi, psi and H, written next to the input entities."""
        started = time.perf_counter()
        doc, mname, mod, r = self._transfer_inputs(module_path, retract_path, onto_homology, name, field)
        N = self._word_window(max_word, mod.reach)
        result = transfer(mod, r, N)
        names = self._write_result(doc, mname, mod, result)
        report = Report(window=[1, N])
        report.details.update(names)
        report.details["arities"] = sorted(i for i, q in result.q.items() if not q.is_zero)
        report.details["dims"] = {str(n): k for n, k in r.Q.space.dims}
        self._append_log(f"Transferred {mname} onto a complex of total dimension {r.Q.space.total_dim}")
        return self._finish(report, "transfer", started, doc), doc

    def verify_transfer(self, module_path: str, retract_path: Optional[str] = None,
                        max_word: Optional[int] = None, onto_homology: bool = False,
                        name: Optional[str] = None, field: Optional[str] = None) -> Report:
        """Recompute the transfer and check every identity it promises on words of length <= N."""
        started = time.perf_counter()
        doc, mname, mod, r = self._transfer_inputs(module_path, retract_path, onto_homology, name, field)
        N = self._word_window(max_word, mod.reach)
        result = transfer(mod, r, N)
        report = verify_transfer(mod, r, result, N)
        if report.ok:
            report = check_rho_identity(mod, r, N)
        report.details["name"] = mname
        self._append_log(f"Verified transfer of {mname} up to word length {N}: {report.status}")
        return self._finish(report, "transfer verify", started)

    def _write_result(self, doc: Document, mname: str, mod: AInfModule, result: TransferResult):
        algebra = doc.entity_ref(mod.algebra)
        qname = doc.add_module(f"{mname}_transferred", result.module, algebra)
        return {
            "module": qname,
            "phi": doc.add_mod_morphism(f"{mname}_phi", result.phi, mname, qname),
            "psi": doc.add_mod_morphism(f"{mname}_psi", result.psi, qname, mname),
            "H": doc.add_mod_morphism(f"{mname}_H", result.H, mname, mname),
        }
