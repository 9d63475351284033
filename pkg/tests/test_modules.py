import random

import pytest
from hypothesis import given, settings, strategies as st

from core.ainfty import AInfAlgebra
from core.complexes import tensor_map, tensor_power, zero_differential
from core.errors import StructuralError
from core.field import Field
from core.graded import GradedSpace, gmap_compose, gmap_equal, gmap_from_entries, gmap_scale
from core.modules import (
    LEFT,
    AInfModule,
    ModMorphism,
    NodCategory,
    bar_mod_morphism,
    bar_module_left,
    bar_module_right,
    is_closed_mod_morphism,
    is_module,
    mod_compose,
    mod_diff,
    mod_equal,
    mod_identity,
    mod_scale,
    modules_equal,
    read_back,
    strict_morphism,
)
from core.random_data import (
    free_module,
    random_closed_morphism,
    random_complex,
    random_gmap,
    random_mod_morphism,
    rng_for,
    upper_triangular_algebra,
)
from core.twisted import tw_compose, tw_diff, tw_equal

seeds = st.integers(min_value=0, max_value=2**30)


def _same(component, expected):
    if component is None:
        return expected.is_zero
    return gmap_equal(component, expected)


def _loose_module(field, seed):
    """A = E = k in degrees -1, 0, 1 with random m's and p's up to arity 3."""
    rng = random.Random(seed)
    A = zero_differential(GradedSpace.of({-1: 1, 0: 1, 1: 1}), field)
    m = {i: random_gmap(tensor_power(A, i).space, A.space, 2 - i, field, rng, 1.0) for i in (2, 3)}
    alg = AInfAlgebra(A, m, 3)
    p = {i: random_gmap(tensor_power(A, i).space, A.space, 2 - i, field, rng, 1.0) for i in (2, 3)}
    return AInfModule(A, alg, p, 3)


def test_free_modules_satisfy_the_relations(Q, rng):
    alg = upper_triangular_algebra(Q)
    assert is_module(free_module(alg), 4).ok
    V = random_complex(Q, rng, -1, 0, 2)
    report = is_module(free_module(alg, V), 3)
    assert report.ok
    assert report.window == [1, 3]


def test_module_bar_arrows(Q):
    mod = _loose_module(Q, 5)
    E, A = mod.E, mod.A
    m2, m3, p2, p3 = mod.algebra.m[2], mod.algebra.m[3], mod.p[2], mod.p[3]
    bar = mod.bar
    assert bar.obj(0) is E
    assert gmap_equal(bar.arrow(-1, 0), p2)
    assert _same(bar.arrow(-2, -1), tensor_map(E.identity, m2) - tensor_map(p2, A.identity))
    assert _same(bar.arrow(-3, -1), -tensor_map(E.identity, m3) - tensor_map(p3, A.identity))
    assert bar_module_right(mod) is bar
    with pytest.raises(StructuralError):
        bar_module_left(mod)


def test_left_modules_put_letters_first(Q):
    alg = upper_triangular_algebra(Q)
    m2 = alg.m[2]
    left = AInfModule(alg.A, alg, {2: m2}, 2, LEFT)
    assert gmap_equal(left.bar.arrow(-1, 0), m2)
    assert is_module(left, 4).ok


def test_bar_morphism_signs(Q):
    mod = _loose_module(Q, 7)
    rng = random.Random(8)
    for degree in (0, 1):
        f = random_mod_morphism(mod, mod, degree, 2, rng, 1.0)
        F = bar_mod_morphism(f)
        A = mod.A
        assert _same(F.component(0, 0), f.f[1])
        assert _same(F.component(-1, -1), gmap_scale(-1 if degree % 2 else 1, tensor_map(f.f[1], A.identity)))
        assert _same(F.component(-3, -2), tensor_map(f.f[2], A.identity, A.identity))
        assert F.component(-2, 0) is None


def test_read_back_recovers_the_data(Q, rng):
    alg = upper_triangular_algebra(Q)
    M = free_module(alg)
    f = random_mod_morphism(M, M, 0, 2, rng)
    assert mod_equal(read_back(bar_mod_morphism(f), M, M, 2), f)


def test_component_shapes_are_validated(Q):
    alg = upper_triangular_algebra(Q)
    M = free_module(alg)
    with pytest.raises(StructuralError):
        ModMorphism(M, M, 0, {1: gmap_from_entries(M.E.space, M.E.space, 1, {}, Q)}, 1)
    with pytest.raises(StructuralError):
        AInfModule(M.E, alg, {2: alg.m[2]}, 2, "middle")


def test_identity_and_scalars_are_closed(Q):
    alg = upper_triangular_algebra(Q)
    M = free_module(alg)
    assert not mod_diff(mod_identity(M)).f
    assert not mod_diff(mod_scale(3, mod_identity(M)), check=4).f
    assert is_closed_mod_morphism(mod_identity(M), 4).ok


def test_projection_onto_e00_is_not_a_module_map(Q):
    alg = upper_triangular_algebra(Q)
    M = free_module(alg)
    proj = gmap_from_entries(M.E.space, M.E.space, 0, {0: {(0, 0): Q.one}}, Q)
    report = is_closed_mod_morphism(strict_morphism(M, M, proj), 2)
    assert not report.ok
    assert report.witness["i"] == -1
    assert report.witness["j"] == 0
    assert report.witness["word_length"] == 2
    assert report.window == [1, 2]


def test_composition_reads_back_the_bar_composite(Q, rng):
    alg = upper_triangular_algebra(Q)
    M = free_module(alg)
    f = random_mod_morphism(M, M, 0, 2, rng, 1.0)
    g = random_mod_morphism(M, M, 0, 2, rng, 1.0)
    gf = mod_compose(g, f, check=4)
    assert gf.degree == 0
    assert _same(gf.comp(1), gmap_compose(g.f[1], f.f[1]))
    assert mod_equal(mod_compose(mod_identity(M), f), f)
    assert tw_equal(bar_mod_morphism(gf), tw_compose(bar_mod_morphism(g), bar_mod_morphism(f)), [-3, -2, -1, 0])


def test_nod_category_identities(Q, rng):
    alg = upper_triangular_algebra(Q)
    nod = NodCategory(alg, check=3)
    M = free_module(alg)
    f = random_mod_morphism(M, M, 0, 2, rng)
    assert nod.equal(nod.compose(nod.identity(M), f), f)
    assert nod.is_zero(nod.add(f, nod.scale(-1, f)))
    assert nod.same_object(M, free_module(alg))
    assert not nod.same_object(M, M.without_structure())
    assert nod.describe(f)["degree"] == 0
    assert modules_equal(M, M)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_module_differential_squares_to_zero(seed):
    F101 = Field.from_spec("fp:101")
    rng = rng_for(seed)
    alg = upper_triangular_algebra(F101)
    M = free_module(alg, random_complex(F101, rng, -1, 0, 1))
    N = free_module(alg, random_complex(F101, rng, -1, 0, 1))
    f = random_mod_morphism(M, N, rng.randint(-1, 1), 2, rng)
    assert not mod_diff(mod_diff(f, check=3), check=3).f
    assert tw_equal(bar_mod_morphism(mod_diff(f)), tw_diff(bar_mod_morphism(f)), [-2, -1, 0])
    g = random_mod_morphism(N, M, rng.randint(-1, 1), 2, rng)
    gf = mod_compose(g, f, check=3)
    assert tw_equal(bar_mod_morphism(gf), tw_compose(bar_mod_morphism(g), bar_mod_morphism(f)), [-2, -1, 0])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_random_closed_morphisms_are_closed(seed):
    F101 = Field.from_spec("fp:101")
    rng = rng_for(seed)
    alg = upper_triangular_algebra(F101)
    M = free_module(alg, random_complex(F101, rng, -1, 0, 1))
    assert is_closed_mod_morphism(random_closed_morphism(M, M, rng), 3).ok
