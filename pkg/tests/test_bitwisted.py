import pytest
from hypothesis import given, settings, strategies as st

from core.bitwisted import (
    TwistedBicomplex,
    bicomplex_equal,
    check_bitwisted,
    complex_of_complexes_equal,
    convolutions_agree,
    convolve_bicomplex,
    convolve_twice,
    cxcol,
    cxcol_inverse,
    cxrow,
    cxrow_inverse,
    monodromy,
    one_sided_flags,
    reflect,
    reflect_morphism,
    sigma,
    sigma_morphism,
)
from core.categories import ChCategory
from core.errors import OneSidedError, PreconditionError
from core.field import Field
from core.graded import gmap_equal, gmap_from_entries, gmap_scale
from core.random_data import random_bicomplex, random_complex_of_complexes, random_morphism, rng_for
from core.twisted import TwistedCategory, TwistedComplex, check_twisted, tw_diff, tw_equal

from .conftest import interval, point

seeds = st.integers(min_value=0, max_value=2**30)


def _single_row(field, outer_index):
    """One row k -> k => k -> k joined by the identity, placed at ``outer_index``."""
    C = interval(field)
    cat = ChCategory(field)
    inner = TwistedComplex.bounded(cat, {0: C, 1: C}, {(0, 1): C.identity})
    return TwistedComplex.bounded(TwistedCategory(cat), {outer_index: inner}, {})


def _backwards(field):
    """A horizontally backwards arrow (1, 1) -> (1, 0) of degree 2 between points."""
    src, tgt = point(field, 0), point(field, 2)
    alpha = gmap_from_entries(src.space, tgt.space, 2, {0: {(0, 0): field(5)}}, field)
    B = TwistedBicomplex.bounded(ChCategory(field), {(1, 1): src, (1, 0): tgt}, {((1, 1), (1, 0)): alpha})
    return B, alpha


def test_cxrow_signs_rows_by_outer_index(Q):
    even = cxrow(_single_row(Q, 0))
    odd = cxrow(_single_row(Q, 1))
    ident = interval(Q).identity
    assert gmap_equal(even.arrow((0, 0), (0, 1)), ident)
    assert gmap_equal(odd.arrow((1, 0), (1, 1)), gmap_scale(-1, ident))
    assert check_bitwisted(odd).ok
    assert even.cells() == [(0, 0), (0, 1)]


def test_sigma_sign_and_one_sidedness(Q):
    B, alpha = _backwards(Q)
    assert check_bitwisted(B).ok
    assert gmap_equal(sigma(B).arrow((1, 1), (1, 0)), gmap_scale(-1, alpha))
    assert one_sided_flags(B) == {"vertically_one_sided": True, "horizontally_one_sided": False}
    with pytest.raises(OneSidedError) as err:
        cxcol_inverse(B)
    assert err.value.witness == {"i": 1, "j": 1, "k": 1, "l": 0}
    CC = cxrow_inverse(B)
    assert CC.cells() == [1]


def test_reflect_is_the_transpose(Q):
    B, alpha = _backwards(Q)
    R = reflect(B)
    assert R.cells() == [(0, 1), (1, 1)]
    assert gmap_equal(R.arrow((1, 1), (0, 1)), alpha)
    assert R.obj((0, 1)) is B.obj((1, 0))
    assert one_sided_flags(R) == {"vertically_one_sided": False, "horizontally_one_sided": True}


def test_broken_bicomplex_witness_names_both_cells(Q):
    C = interval(Q)
    alpha = gmap_from_entries(C.space, C.space, 0, {0: {(0, 0): Q.one}}, Q)
    B = TwistedBicomplex.bounded(ChCategory(Q), {(0, 0): C, (0, 1): C}, {((0, 0), (0, 1)): alpha})
    report = check_bitwisted(B)
    assert report.witness == {"i": 0, "j": 0, "k": 0, "l": 1, "degree": 1, "residual_degrees": [0]}
    with pytest.raises(PreconditionError):
        convolve_bicomplex(B)


def test_window_restricts_cells(Q):
    B = random_bicomplex(Q, rng_for(11), (0, 2), (0, 2))
    assert B.cells((0, 1, 1, 2)) == [c for c in B.cells() if c[0] <= 1 and c[1] >= 1]
    assert check_bitwisted(B, (0, 1, 1, 2)).ok


def test_monodromy_of_a_single_row(Q):
    CC = _single_row(Q, 0)
    M = monodromy(CC)
    assert M.cells() == [0, 1]
    assert all(M.obj(i).cells() == [0] for i in M.cells())
    assert check_twisted(cxrow(M), cxrow(M).cells()).ok


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_convolution_diagrams_commute(seed):
    F101 = Field.from_spec("fp:101")
    rng = rng_for(seed)
    CC = random_complex_of_complexes(F101, rng, (0, rng.randint(0, 2)), (0, rng.randint(0, 2)))
    row, col = cxrow(CC), cxcol(CC)
    assert check_bitwisted(row).ok
    twice = convolve_twice(CC)
    assert convolutions_agree(convolve_bicomplex(row, layout="row"), twice)
    assert convolutions_agree(convolve_bicomplex(col, layout="col"), twice)
    assert bicomplex_equal(reflect(col), row)


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from(["vertical", "horizontal", "general"]))
def test_reflect_and_sigma_are_involutions(seed, mode):
    F7 = Field.from_spec("fp:7")
    B = random_bicomplex(F7, rng_for(seed), (0, 1), (-1, 1), mode=mode)
    assert check_bitwisted(B).ok
    assert check_bitwisted(sigma(B)).ok
    assert check_bitwisted(reflect(B)).ok
    assert bicomplex_equal(reflect(reflect(B)), B)
    assert bicomplex_equal(sigma(sigma(B)), B)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_one_sided_round_trips(seed):
    F7 = Field.from_spec("fp:7")
    rng = rng_for(seed)
    CC = random_complex_of_complexes(F7, rng)
    assert complex_of_complexes_equal(cxrow_inverse(cxrow(CC)), CC)
    assert complex_of_complexes_equal(cxcol_inverse(cxcol(CC)), CC)
    V = random_bicomplex(F7, rng, mode="vertical")
    assert bicomplex_equal(cxrow(cxrow_inverse(V)), V)
    H = random_bicomplex(F7, rng, mode="horizontal")
    assert bicomplex_equal(cxcol(cxcol_inverse(H)), H)


def test_complexes_of_complexes_are_compared_entrywise(Q):
    Ch = ChCategory(Q)
    outer = TwistedCategory(Ch)

    def rows(inner, value=1):
        alpha = gmap_from_entries(inner.space, inner.space, 0, {0: {(0, 0): Q(value)}, 1: {(0, 0): Q(value)}}, Q)
        cone = TwistedComplex.bounded(Ch, {0: inner, 1: inner}, {(0, 1): alpha})
        return TwistedComplex.bounded(outer, {0: cone}, {})

    C = interval(Q)
    assert complex_of_complexes_equal(rows(C), rows(C))
    assert not complex_of_complexes_equal(rows(C), rows(C, value=2))
    assert not complex_of_complexes_equal(rows(C), TwistedComplex.bounded(outer, {0: TwistedComplex.trivial(Ch, C)}, {}))
    assert not complex_of_complexes_equal(rows(C), TwistedComplex.bounded(outer, {1: rows(C).obj(0)}, {}))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_sigma_and_reflect_commute_with_the_differential(seed):
    F7 = Field.from_spec("fp:7")
    rng = rng_for(seed)
    B = random_bicomplex(F7, rng, mode="general")
    D = random_bicomplex(F7, rng, mode="general")
    f = random_morphism(B, D, rng.randint(-1, 1), rng)
    sB, sD = sigma(B), sigma(D)
    assert tw_equal(sigma_morphism(tw_diff(f), sB, sD), tw_diff(sigma_morphism(f, sB, sD)), B.cells(), D.cells())
    rB, rD = reflect(B), reflect(D)
    assert tw_equal(reflect_morphism(tw_diff(f), rB, rD), tw_diff(reflect_morphism(f, rB, rD)),
                    rB.cells(), rD.cells())
