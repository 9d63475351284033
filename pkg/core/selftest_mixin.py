"""Randomized property families behind ``twistkit selftest``.

Each family builds one random valid instance from its own seed and returns
None when every identity holds, or a small dict naming the one that broke.
"""

import random
import time
from typing import Any, Callable, Dict, Optional, Sequence

from .bitwisted import (
    bicomplex_equal,
    complex_of_complexes_equal,
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
from .complexes import hom_diff
from .errors import StructuralError
from .field import Field
from .graded import gmap_compose, gmap_equal
from .random_data import (
    MODES,
    random_complex_of_complexes,
    random_morphism,
    random_seeds,
    random_transfer_problem,
    random_twisted,
    rng_for,
)
from .report import Report
from .transfer import transfer, truncation_agrees, verify_transfer
from .twisted import convolve, convolve_morphism, tw_compose, tw_diff, tw_identity, tw_is_zero

Witness = Optional[Dict[str, Any]]


def _twisted(field: Field, rng: random.Random):
    return random_twisted(field, rng, 0, rng.randint(0, 3), mode=rng.choice(MODES))


def family_twisted_d2(field: Field, rng: random.Random) -> Witness:
    T = _twisted(field, rng)
    S = _twisted(field, rng)
    f = random_morphism(T, S, rng.randint(-1, 1), rng)
    dd = tw_diff(tw_diff(f))
    if not tw_is_zero(dd, T.cells(), S.cells()):
        return {"check": "d_squared"}
    return None


def family_convolution(field: Field, rng: random.Random) -> Witness:
    S, T, U = (_twisted(field, rng) for _ in range(3))
    cs, ct, cu = convolve(S), convolve(T), convolve(U)
    f = random_morphism(S, T, rng.randint(-1, 1), rng)
    g = random_morphism(T, U, rng.randint(-1, 1), rng)
    lhs = convolve_morphism(tw_diff(f), cs, ct)
    rhs = hom_diff(convolve_morphism(f, cs, ct), cs.complex, ct.complex)
    if not gmap_equal(lhs, rhs):
        return {"check": "differential"}
    composed = convolve_morphism(tw_compose(g, f), cs, cu)
    if not gmap_equal(composed, gmap_compose(convolve_morphism(g, ct, cu), convolve_morphism(f, cs, ct))):
        return {"check": "composition"}
    if not gmap_equal(convolve_morphism(tw_identity(S), cs, cs), cs.complex.identity):
        return {"check": "identity"}
    return None


def family_diagrams(field: Field, rng: random.Random) -> Witness:
    CC = random_complex_of_complexes(field, rng, (0, rng.randint(0, 2)), (0, rng.randint(0, 2)))
    row, col = cxrow(CC), cxcol(CC)
    twice = convolve_twice(CC)
    if not convolutions_agree(convolve_bicomplex(row, layout="row"), twice):
        return {"check": "convolution_of_cxrow"}
    if not convolutions_agree(convolve_bicomplex(col, layout="col"), twice):
        return {"check": "convolution_of_cxcol"}
    if not bicomplex_equal(reflect(col), row):
        return {"check": "reflect_of_cxcol"}
    if not bicomplex_equal(reflect(reflect(row)), row):
        return {"check": "reflect_involution"}
    if not bicomplex_equal(sigma(sigma(row)), row):
        return {"check": "sigma_involution"}
    if not complex_of_complexes_equal(cxrow_inverse(row), CC):
        return {"check": "cxrow_round_trip"}
    if not complex_of_complexes_equal(cxcol_inverse(col), CC):
        return {"check": "cxcol_round_trip"}
    return None


def family_transfer(field: Field, rng: random.Random) -> Witness:
    mod, r = random_transfer_problem(field, rng)
    result = transfer(mod, r, 5)
    report = verify_transfer(mod, r, result, 5)
    if not report.ok:
        return {"check": "transfer", **report.witness}
    if not truncation_agrees(result, transfer(mod, r, 7)):
        return {"check": "truncation"}
    return None


FAMILIES: Dict[str, Callable[[Field, random.Random], Witness]] = {
    "twisted_d2": family_twisted_d2,
    "convolution": family_convolution,
    "diagrams": family_diagrams,
    "transfer": family_transfer,
}

# Instances per family when no count is given.
DEFAULT_COUNTS: Dict[str, int] = {"twisted_d2": 200, "convolution": 100, "diagrams": 100, "transfer": 100}


class SelftestMixin:
    def selftest(self, seed: Optional[int] = None, count: Optional[int] = None, field: Optional[str] = None,
                 families: Optional[Sequence[str]] = None) -> Report:
        started = time.perf_counter()
        seed = self.seed if seed is None else seed
        F = Field.from_spec(field or self.field_spec)
        chosen = list(families or FAMILIES)
        for fam in chosen:
            if fam not in FAMILIES:
                raise StructuralError(f"unknown property family {fam!r}")
        report = Report()
        ran: Dict[str, int] = {}
        for fam in chosen:
            ran[fam] = 0
            n = DEFAULT_COUNTS[fam] if count is None else count
            for k, s in enumerate(random_seeds(seed, n)):
                witness = FAMILIES[fam](F, rng_for(s))
                ran[fam] += 1
                if witness is not None:
                    self._append_log(f"selftest {fam} instance {k} (seed {s}) failed: {witness}")
                    report = Report.failed({"family": fam, "instance": k, "seed": s, **witness})
                    break
            if not report.ok:
                break
            self._append_log(f"selftest {fam}: {n} instances passed")
        report.details.update({"seed": seed, "field": F.spec, "count": count, "families": ran})
        return self._finish(report, "selftest", started)
