import random

import pytest
from hypothesis import given, settings, strategies as st

from core.complexes import (
    complex_equal,
    direct_sum,
    hom_complex,
    hom_diff,
    homology_dims,
    perturb,
    shift,
    solve_boundary,
    suspend,
    tensor,
    tensor_map,
    unit_complex,
    unitor,
    zero_differential,
)
from core.errors import PreconditionError, StructuralError
from core.field import Field
from core.graded import (
    GradedSpace,
    basis,
    dm_from_dok,
    gmap,
    gmap_add,
    gmap_compose,
    gmap_equal,
    gmap_from_entries,
    gmap_identity,
    gmap_inverse,
    gmap_scale,
    gmap_zero,
    tensor_spaces,
)
from core.random_data import random_automorphism, random_complex, random_gmap

from .conftest import interval, point

seeds = st.integers(min_value=0, max_value=2**30)


# ---------- graded maps ----------

def test_compose_with_identity_and_zero(Q, rng):
    S = GradedSpace.of({0: 2, 1: 3})
    T = GradedSpace.of({1: 1, 2: 2})
    f = random_gmap(S, T, 1, Q, rng, 0.8)
    assert gmap_equal(gmap_compose(gmap_identity(T, Q), f), f)
    assert gmap_compose(gmap_zero(T, S, -1, Q), f).is_zero


def test_compose_matches_dense_product():
    F7 = Field.from_spec("fp:7")
    r = random.Random(7)
    S = GradedSpace.of({0: 3})
    f = random_gmap(S, S, 0, F7, r, 1.0)
    g = random_gmap(S, S, 0, F7, r, 1.0)
    dense_f = f.block(0).to_dense().to_list()
    dense_g = g.block(0).to_dense().to_list()
    expected = [[sum((dense_g[i][k] * dense_f[k][j] for k in range(3)), F7.zero) for j in range(3)]
                for i in range(3)]
    assert gmap_compose(g, f).block(0).to_dense().to_list() == expected


def test_addition_laws():
    F5 = Field.from_spec("fp:5")
    r = random.Random(5)
    S = GradedSpace.of({-1: 2, 0: 2})
    f, g, h = (random_gmap(S, S, 1, F5, r) for _ in range(3))
    assert gmap_equal(gmap_add(f, gmap_zero(S, S, 1, F5)), f)
    assert gmap_equal(gmap_scale(1, f), f)
    assert gmap_equal(gmap_add(gmap_add(f, g), h), gmap_add(f, gmap_add(g, h)))


def test_equality_ignores_encoding(Q):
    S = GradedSpace.of({0: 2})
    M = dm_from_dok({(0, 1): Q(3)}, (2, 2), Q)
    f = gmap(S, S, 0, {0: M}, Q)
    g = gmap(S, S, 0, {0: M.to_dense()}, Q)
    assert gmap_equal(f, g)
    assert not gmap_equal(f, gmap_add(f, gmap_identity(S, Q)))


def test_shape_mismatch_is_structural(Q):
    S = GradedSpace.of({0: 2})
    with pytest.raises(StructuralError):
        gmap(S, S, 0, {0: dm_from_dok({}, (3, 2), Q)}, Q)
    with pytest.raises(StructuralError):
        gmap_add(gmap_zero(S, S, 0, Q), gmap_zero(S, S, 1, Q))


def test_inverse_of_random_automorphism(Q, rng):
    S = GradedSpace.of({0: 3, 2: 2})
    U, Uinv = random_automorphism(S, Q, rng)
    assert gmap_equal(gmap_compose(U, Uinv), gmap_identity(S, Q))
    with pytest.raises(StructuralError):
        gmap_inverse(gmap_zero(S, S, 0, Q))


def test_tensor_spaces_flatten():
    E = GradedSpace.of({0: 1, 1: 2})
    F = GradedSpace.of({-1: 1})
    G = GradedSpace.of({0: 2})
    assert tensor_spaces(tensor_spaces(E, F), G) == tensor_spaces(E, F, G)
    assert tensor_spaces(E, F, G).dim(0) == 4
    assert basis(tensor_spaces(E, F), 0) == (((1, 0), (-1, 0)), ((1, 1), (-1, 0)))


# ---------- complexes ----------

def test_hom_of_interval_has_dims_121(Q):
    E = interval(Q)
    H = hom_complex(E, E)
    assert dict(H.complex.space.dims) == {-1: 1, 0: 2, 1: 1}
    assert homology_dims(H.complex) == {}
    assert hom_diff(E.identity, E, E).is_zero


def test_hom_of_points(Q):
    k = unit_complex(Q)
    H = hom_complex(k, k)
    assert dict(H.complex.space.dims) == {0: 1}
    assert H.complex.d.is_zero


def test_tensor_with_unit_and_identities(Q):
    E = interval(Q)
    ExK = tensor(E, unit_complex(Q))
    assert dict(ExK.space.dims) == dict(E.space.dims)
    assert gmap_equal(gmap_compose(E.d, unitor(E)), gmap_compose(unitor(E), ExK.d))
    assert gmap_equal(tensor_map(E.identity, E.identity), tensor(E, E).identity)


def test_koszul_sign_on_odd_maps(Q):
    E = interval(Q)
    EE = tensor(E, E)
    # id x d picks up (-1)^{|x|} on x y
    f = tensor_map(E.identity, E.d)
    key = ((1, 0), (0, 0))
    col = basis(EE.space, 1).index(key)
    row = basis(EE.space, 2).index(((1, 0), (1, 0)))
    assert f.block(1).to_dense().to_list()[row][col] == -Q.one


def test_shift_examples(Q):
    E = interval(Q)
    assert complex_equal(shift(E, 0), E)
    assert complex_equal(shift(shift(E, 1), -1), E)
    assert dict(shift(point(Q), 1).space.dims) == {-1: 1}
    assert gmap_equal(suspend(E, 1).d, gmap_scale(-1, shift(E, 1).d))


def test_direct_sum(Q):
    E = interval(Q)
    one = direct_sum([E])
    assert complex_equal(one.complex, E)
    zero = zero_differential(GradedSpace.of({}), Q)
    two = direct_sum([E, zero])
    assert complex_equal(two.complex, E)
    ds = direct_sum([E, point(Q)])
    assert gmap_equal(gmap_compose(ds.projection(0), ds.inclusion(0)), E.identity)


def test_perturb_examples(Q):
    space = GradedSpace.of({0: 1, 1: 1})
    E = zero_differential(space, Q)
    assert complex_equal(perturb(E, gmap_zero(space, space, 1, Q)), E)
    f = gmap_from_entries(space, space, 1, {0: {(0, 0): Q.one}}, Q)
    cone = perturb(E, f)
    assert gmap_equal(cone.d, f)
    assert homology_dims(cone) == {}


def test_perturb_rejects_non_maurer_cartan(Q):
    E = interval(Q)
    f = gmap_from_entries(E.space, E.space, 1, {0: {(0, 0): Q(2)}}, Q)
    # on k in degrees 0, 1, 2 with d = 0, f o f hits degree 0 -> 2
    g = gmap_from_entries(GradedSpace.of({0: 1, 1: 1, 2: 1}), GradedSpace.of({0: 1, 1: 1, 2: 1}), 1,
                          {0: {(0, 0): Q.one}, 1: {(0, 0): Q.one}}, Q)
    assert perturb(E, f).d.block(0).to_dense().to_list() == [[Q(3)]]
    with pytest.raises(PreconditionError) as err:
        perturb(zero_differential(g.source, Q), g)
    assert not err.value.residual.is_zero


def test_perturbing_a_tensor_complex(Q):
    E = tensor(interval(Q), interval(Q))
    assert perturb(E, gmap_zero(E.space, E.space, 1, Q)) is E
    flat = perturb(E, gmap_scale(-1, E.d))
    assert flat.space.factors == ()
    assert flat.d.is_zero
    assert dict(flat.space.dims) == dict(E.space.dims)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_random_maurer_cartan_perturbation_squares_to_zero(seed):
    F7 = Field.from_spec("fp:7")
    r = random.Random(seed)
    E = random_complex(F7, r, -1, 1, 2)
    # conjugating d by an automorphism gives a Maurer-Cartan element U d U^-1 - d
    U, Uinv = random_automorphism(E.space, F7, r)
    f = gmap_add(gmap_compose(U, gmap_compose(E.d, Uinv)), gmap_scale(-1, E.d))
    P = perturb(E, f)
    assert gmap_compose(P.d, P.d).is_zero


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_hom_differential_squares_to_zero(seed):
    F101 = Field.from_spec("fp:101")
    r = random.Random(seed)
    E = random_complex(F101, r, -1, 1, 2)
    F = random_complex(F101, r, -1, 1, 2)
    H = hom_complex(E, F)
    assert gmap_compose(H.complex.d, H.complex.d).is_zero
    f = random_gmap(E.space, F.space, r.randint(-1, 1), F101, r)
    assert hom_diff(hom_diff(f, E, F), E, F).is_zero


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_solve_boundary_finds_preimages(seed):
    r = random.Random(seed)
    E = random_complex(Field.from_spec("q"), r, 0, 1, 2)
    F = random_complex(Field.from_spec("q"), r, 0, 1, 2)
    x = random_gmap(E.space, F.space, 0, E.field, r)
    y = hom_diff(x, E, F)
    z = solve_boundary(E, F, y)
    assert z is not None
    assert gmap_equal(hom_diff(z, E, F), y)


def test_solve_boundary_reports_cycles_that_are_not_boundaries(Q):
    k = unit_complex(Q)
    assert solve_boundary(k, k, k.identity) is None
