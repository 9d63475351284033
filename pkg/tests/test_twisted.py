from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from core import config
from core.ainfty import stasheff_window
from core.categories import ChCategory
from core.complexes import complex_equal, hom_diff, homology_dims, truncate_degrees
from core.errors import PreconditionError, StructuralError, SupportError
from core.field import Field
from core.graded import GradedSpace, gmap_compose, gmap_equal, gmap_from_entries
from core.random_data import (
    random_morphism,
    random_twisted,
    rng_for,
    upper_triangular_algebra,
)
from core.twisted import (
    TwistedCategory,
    TwistedComplex,
    check_twisted,
    classify,
    convolve,
    convolve_morphism,
    tw_compose,
    tw_diff,
    tw_equal,
    tw_identity,
    tw_is_zero,
    tw_scale,
    tw_sub,
    truncate,
    twisted_residual,
)

from .conftest import interval, point

seeds = st.integers(min_value=0, max_value=2**30)


def _two_term(field, alpha_entries):
    C = interval(field)
    alpha = gmap_from_entries(C.space, C.space, 0, alpha_entries, field)
    return TwistedComplex.bounded(ChCategory(field), {0: C, 1: C}, {(0, 1): alpha})


def test_cone_of_identity_is_twisted_and_acyclic(Q):
    T = _two_term(Q, {0: {(0, 0): Q.one}, 1: {(0, 0): Q.one}})
    report = check_twisted(T, T.cells())
    assert report.ok
    conv = convolve(T)
    assert dict(conv.complex.space.dims) == {0: 1, 1: 2, 2: 1}
    assert homology_dims(conv.complex) == {}


def test_broken_arrow_reports_first_cell(Q):
    T = _two_term(Q, {0: {(0, 0): Q.one}})
    report = check_twisted(T, T.cells())
    assert not report.ok
    assert report.witness == {"i": 0, "j": 1, "degree": 1, "residual_degrees": [0]}
    with pytest.raises(PreconditionError) as err:
        convolve(T)
    assert err.value.witness["i"] == 0


def test_arrow_of_wrong_degree_is_structural(Q):
    C = interval(Q)
    odd = gmap_from_entries(C.space, C.space, 1, {0: {(0, 0): Q.one}}, Q)
    with pytest.raises(StructuralError):
        TwistedComplex.bounded(ChCategory(Q), {0: C, 1: C}, {(0, 1): odd})
    with pytest.raises(StructuralError):
        TwistedComplex.bounded(ChCategory(Q), {0: C}, {(0, 1): C.identity})


def test_single_object_convolution_is_a_suspension(Q):
    C = interval(Q, 2)
    T = TwistedComplex.trivial(ChCategory(Q), C, index=1)
    conv = convolve(T)
    assert dict(conv.complex.space.dims) == {1: 1, 2: 1}
    assert conv.complex.d.block(1).to_dense().to_list() == [[Q(-2)]]


def test_identity_is_closed_and_neutral(Q, rng):
    T = random_twisted(Q, rng, 0, 2)
    S = random_twisted(Q, rng, 0, 1)
    cells = T.cells()
    assert tw_is_zero(tw_diff(tw_identity(T)), cells)
    f = random_morphism(T, S, 0, rng)
    assert tw_equal(tw_compose(tw_identity(S), f), f, cells, S.cells())
    assert tw_equal(tw_compose(f, tw_identity(T)), f, cells, S.cells())


def test_composition_is_summed_over_the_middle_index(Q):
    # off-diagonal components are nonzero when the second object sits one degree lower
    T = TwistedComplex.bounded(ChCategory(Q), {0: point(Q, 0), 1: point(Q, -1)}, {})
    f = random_morphism(T, T, 0, rng_for(3), density=1.0)
    g = random_morphism(T, T, 0, rng_for(4), density=1.0)
    gf = tw_compose(g, f)
    expected = (gmap_compose(g.component(0, 0), f.component(0, 0))
                + gmap_compose(g.component(1, 0), f.component(0, 1)))
    assert gmap_equal(gf.component(0, 0), expected)


def test_twisted_category_equality_uses_cells(Q, rng):
    T = random_twisted(Q, rng, 0, 1)
    cat = TwistedCategory(ChCategory(Q))
    f = random_morphism(T, T, 1, rng)
    assert cat.equal(f, f)
    assert cat.is_zero(tw_sub(f, f))
    assert cat.equal(tw_scale(2, f), cat.add(f, f))
    assert cat.same_object(T, T)


def test_classify_bounded_and_bar(Q):
    C = interval(Q)
    T = _two_term(Q, {0: {(0, 0): Q.one}, 1: {(0, 0): Q.one}})
    assert classify(T) == {"bounded": True, "bounded_above": True, "bounded_below": True, "one_sided": True}
    backwards = TwistedComplex.bounded(ChCategory(Q), {0: C, 1: C},
                                       {(1, 0): gmap_from_entries(C.space, C.space, 2, {}, Q)})
    assert classify(backwards)["one_sided"]
    bar = upper_triangular_algebra(Q).bar
    assert classify(bar) == {"bounded": False, "bounded_above": True, "bounded_below": False, "one_sided": True}


def test_truncation_keeps_inner_arrows(Q):
    bar = upper_triangular_algebra(Q).bar
    T = truncate(bar, -2, 0)
    assert T.cells() == [-2, -1, 0]
    assert T.targets(-2) == (-1,)
    assert gmap_equal(T.arrow(-1, 0), bar.arrow(-1, 0))
    assert check_twisted(T, T.cells()).ok
    assert classify(T)["bounded"]


def test_unbounded_complex_needs_a_window(Q):
    bar = upper_triangular_algebra(Q).bar
    with pytest.raises(SupportError):
        bar.cells()
    with pytest.raises(SupportError):
        convolve(bar)


def test_streamed_convolution_is_stable_in_the_window(Q):
    alg = upper_triangular_algebra(Q)
    N = 3
    small = convolve(alg.bar, -(N - 1), 0)
    large = convolve(alg.bar, -(N + 1), 0)
    assert small.degrees == (1 - N, None)
    assert dict(small.complex.space.dims) == {-2: 27, -1: 9, 0: 3}
    assert complex_equal(truncate_degrees(large.complex, 1 - N, None), small.complex)


def test_streamed_degrees_outside_the_stable_range_are_refused(Q):
    alg = upper_triangular_algebra(Q)
    with pytest.raises(SupportError):
        convolve(alg.bar, -1, 0, degrees=(-3, 0))
    conv = convolve(alg.bar, -1, 0, degrees=(-1, 0))
    assert dict(conv.complex.space.dims) == {-1: 9, 0: 3}


def test_bar_residuals_vanish_on_the_stasheff_window(Q):
    bar = upper_triangular_algebra(Q).bar
    for i in stasheff_window(4):
        for j in stasheff_window(4):
            assert twisted_residual(bar, i, j) is None


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(["one_sided", "general"]), st.sampled_from(["q", "fp:101"]))
def test_random_twisted_complexes_pass_and_d_squares_to_zero(seed, mode, spec):
    F = Field.from_spec(spec)
    rng = rng_for(seed)
    T = random_twisted(F, rng, 0, 2, mode=mode)
    S = random_twisted(F, rng, -1, 1, mode=mode)
    assert check_twisted(T, T.cells()).ok
    f = random_morphism(T, S, rng.randint(-1, 1), rng)
    assert tw_is_zero(tw_diff(tw_diff(f)), T.cells(), S.cells())


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_convolution_intertwines_differentials(seed):
    F101 = Field.from_spec("fp:101")
    rng = rng_for(seed)
    T = random_twisted(F101, rng, 0, 2)
    S = random_twisted(F101, rng, 0, 1)
    U = random_twisted(F101, rng, 1, 2)
    ct, cs, cu = convolve(T), convolve(S), convolve(U)
    f = random_morphism(T, S, rng.randint(-1, 1), rng)
    g = random_morphism(S, U, 0, rng)
    assert gmap_equal(convolve_morphism(tw_diff(f), ct, cs),
                      hom_diff(convolve_morphism(f, ct, cs), ct.complex, cs.complex))
    assert gmap_equal(convolve_morphism(tw_compose(g, f), ct, cu),
                      gmap_compose(convolve_morphism(g, cs, cu), convolve_morphism(f, ct, cs)))
    assert gmap_equal(convolve_morphism(tw_identity(T), ct, ct), ct.complex.identity)


def test_convolution_of_empty_window(Q):
    C = interval(Q)
    T = TwistedComplex.bounded(ChCategory(Q), {0: C}, {})
    conv = convolve(T, 3, 4)
    assert conv.cells == ()
    assert conv.complex.space == GradedSpace.of({})


def test_threaded_checks_share_one_memo(Q, monkeypatch):
    monkeypatch.setattr(config, "THREADS", 4)
    bar = upper_triangular_algebra(Q).bar
    cells = stasheff_window(5)
    assert check_twisted(bar, cells).ok
    with ThreadPoolExecutor(max_workers=8) as ex:
        seen = list(ex.map(lambda _: (bar.obj(-3), bar.arrow(-3, -2), bar.targets(-3)), range(32)))
    first = seen[0]
    assert all(s[0] is first[0] and s[1] is first[1] and s[2] == first[2] for s in seen)
