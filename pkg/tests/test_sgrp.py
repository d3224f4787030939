import numpy as np
import pytest
from hypothesis import given, strategies as st

from semistrict import fixtures as fx
from semistrict.cat2gp import cat2_from_cat1, multinerve_of, trivial_cat2
from semistrict.catgp import (cat1_to_internal, discrete_cat1, discrete_internal, fundamental_internal_category,
                              nerve_of, one_object_cat1, unit_map)
from semistrict.errors import TruncationTooShallow
from semistrict.groups import cyclic, symmetric
from semistrict.grp import groups_equal, is_isomorphic, trivial_hom
from semistrict.sgrp import (SimplicialHom, TruncSimpGroup, constant_bisimp, diagonal_of,
                             homotopy_orders, identity_map, is_weak_equivalence_simp, moore_homotopy,
                             product_bisimp, product_simp)

from conftest import small_groups


def test_discrete_nerve_homotopy():
    n = nerve_of(discrete_internal(symmetric(3)), 3)
    assert is_isomorphic(moore_homotopy(n, 0), symmetric(3))
    assert moore_homotopy(n, 1).order == 1


def test_one_object_nerve_homotopy():
    n = nerve_of(cat1_to_internal(one_object_cat1(cyclic(2))), 3)
    assert moore_homotopy(n, 0).order == 1
    assert is_isomorphic(moore_homotopy(n, 1), cyclic(2))


def test_top_dimension_is_too_shallow():
    n = nerve_of(cat1_to_internal(fx.e3()), 3)
    with pytest.raises(TruncationTooShallow):
        moore_homotopy(n, 3)


def test_constant_vertical_diagonal_is_horizontal():
    s = nerve_of(cat1_to_internal(fx.e3()), 3)
    d = diagonal_of(constant_bisimp(s, axis=1))
    for n in range(4):
        assert d.level(n) is s.level(n)
    for n in range(1, 4):
        for i in range(n + 1):
            assert np.array_equal(d.face(n, i).map, s.face(n, i).map)


def test_k_z2_3_diagonal():
    d = diagonal_of(multinerve_of(trivial_cat2(cyclic(2)), 5))
    assert [d.level(n).order for n in range(4)] == [1, 2, 16, 512]
    # Moore degree n of a group model carries pi_{n+1} of the space
    assert homotopy_orders(d, upto=3) == [1, 1, 2, 1]
    assert is_isomorphic(moore_homotopy(d, 2), cyclic(2))


def test_levelwise_trivial_diagonal():
    one = cyclic(1)
    s = TruncSimpGroup.constant(one, 3)
    d = diagonal_of(constant_bisimp(s))
    assert all(d.level(n).order == 1 for n in range(4))


def test_identity_is_weak_equivalence():
    s = nerve_of(cat1_to_internal(fx.e3()), 3)
    assert is_weak_equivalence_simp(identity_map(s))


def test_unit_map_is_weak_equivalence():
    # a diagonal whose homotopy vanishes above 1
    h = diagonal_of(multinerve_of(cat2_from_cat1(fx.e3(), 1), 3))
    assert homotopy_orders(h) == [2, 1, 1]
    assert is_weak_equivalence_simp(unit_map(h))


def test_collapse_of_e3_is_not_weak_equivalence():
    s = nerve_of(cat1_to_internal(fx.e3()), 3)
    pt = TruncSimpGroup.constant(cyclic(1), 3)
    f = SimplicialHom(s, pt, lambda n: trivial_hom(s.level(n), pt.level(n)))
    assert f.validate().ok
    assert not is_weak_equivalence_simp(f)


def test_fundamental_category_of_nerve_is_original():
    y = cat1_to_internal(fx.e3())
    p = fundamental_internal_category(nerve_of(y, 3))
    assert p.c1.order == y.c1.order and p.c0.order == y.c0.order
    assert np.array_equal(p.d0.map, y.d0.map) and np.array_equal(p.d1.map, y.d1.map)


def test_fundamental_category_of_constant_is_discrete():
    g = symmetric(3)
    p = fundamental_internal_category(TruncSimpGroup.constant(g, 3))
    assert p.c1.order == 6 and np.array_equal(p.d0.map, np.arange(6))


def test_validate_detects_broken_face():
    s = nerve_of(cat1_to_internal(fx.e3()), 2)
    broken = TruncSimpGroup(2, s.level, lambda n, i: s.face(n, 1 - i) if n == 1 else s.face(n, i), s.degen)
    assert not broken.validate().ok


@given(small_groups, st.integers(1, 3))
def test_nerve_homotopy_vanishes_above_one(g, kind):
    x = [discrete_cat1, one_object_cat1, lambda a: fx.identity_crossed(a)][kind - 1]
    if kind == 2 and not _abelian(g):
        return
    n = nerve_of(cat1_to_internal(x(g)), 4)
    assert all(moore_homotopy(n, k).order == 1 for k in range(2, 4))


def _abelian(g):
    return bool(np.array_equal(g.table, g.table.T))


def _levelwise_product_matches(a, b):
    da, db = diagonal_of(a), diagonal_of(b)
    dp = diagonal_of(product_bisimp(a, b))
    ps = product_simp(da, db)
    for n in range(min(dp.trunc, ps.trunc) + 1):
        if not groups_equal(dp.level(n), ps.level(n)):
            return False
    for n in range(1, dp.trunc + 1):
        for i in range(n + 1):
            if not np.array_equal(dp.face(n, i).map, ps.face(n, i).map):
                return False
    return True


@pytest.mark.parametrize("pair", [("K(Z/2,3)", "E3@1"), ("disc2(D4)", "K(Z/3,3)"), ("E3@1", "A@2")])
def test_diagonal_commutes_with_products(pair):
    fixtures = dict(fx.valid_fixtures())
    a, b = (multinerve_of(fixtures[n], 2) for n in pair)
    assert _levelwise_product_matches(a, b)
