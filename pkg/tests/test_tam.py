import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from semistrict import fixtures as fx
from semistrict.cat2gp import cat2_from_cat1, discrete_multinerve, search_retraction, trivial_cat2
from semistrict.catgp import discrete_cat1, one_object_cat1
from semistrict.errors import NotA1Nerve, NotGroupLevel, NotInH, TruncationTooShallow
from semistrict.groups import cyclic, symmetric, trivial_group
from semistrict.grp import is_isomorphic
from semistrict.tam import (CatFunctor, MultiSimpSet, bar_comparison, bar_from_monoid, category_of_nerve,
                            codiscrete_groupoid, collapsed_homotopy, constant_monoid, discrete_category,
                            equivalence_of_categories, equivalence_report, external_equivalence_criteria,
                            group_level_homotopy, groupoid_of_group, hom_category, identity_msmap, is_1_nerve,
                            is_external_equivalence_2, is_h, is_k, is_strict_2_groupoid, is_weak_2_groupoid,
                            materialize, monoid_from_h, monoid_nerve_2, msset_from_dict, msset_to_dict,
                            nerve_of_category, nerve_of_nerve, nerve_of_nerve_map, point_msset, product_msset,
                            set_nerve_of_internal_2nerve, stored_msset, t2_product_formula, t_functor,
                            underlying_set)

from conftest import small_groups

SMALL_CAT1 = fx.small_cat1_fixtures()


def _ds(x):
    return discrete_multinerve(x, search_retraction(x), 2)


# categories and 1-nerves

def test_one_object_groupoid_nerve_sizes():
    s = nerve_of_category(groupoid_of_group(cyclic(2)), 4)
    assert [s.size((n,)) for n in range(5)] == [1, 2, 4, 8, 16]
    assert s.validate().ok


def test_doubled_top_level_is_not_a_nerve():
    s = nerve_of_category(groupoid_of_group(cyclic(2)), 2)
    n2 = s.size((2,))
    sizes = {(0,): 1, (1,): 2, (2,): 2 * n2}
    faces, degens = {}, {}
    for i in range(2):
        faces[(0, (1,), i)] = s.face(0, (1,), i)
        degens[(0, (1,), i)] = s.degen(0, (1,), i)
    for i in range(3):
        faces[(0, (2,), i)] = np.tile(s.face(0, (2,), i), 2)
    degens[(0, (0,), 0)] = s.degen(0, (0,), 0)
    t = stored_msset((2,), sizes, faces, degens, labels={d: [str(k) for k in range(n)] for d, n in sizes.items()})
    assert t.validate().ok
    with pytest.raises(NotA1Nerve) as exc:
        category_of_nerve(t)
    assert exc.value.details["level"] == 2
    assert not is_1_nerve(t)


def test_codiscrete_round_trip():
    c = codiscrete_groupoid(["a", "b"])
    assert c.validate().ok
    s = nerve_of_category(c, 3)
    d = category_of_nerve(s)
    assert (d.n_obj, d.n_arr) == (2, 4)
    ident = CatFunctor(c, d, np.arange(2), np.arange(4))
    assert ident.validate().ok
    assert equivalence_of_categories(ident)


def test_shallow_nerve_rejected():
    s = nerve_of_category(codiscrete_groupoid("ab"), 1)
    with pytest.raises(TruncationTooShallow):
        category_of_nerve(s)


def test_equivalence_examples():
    c = codiscrete_groupoid(["a", "b"])
    pt = discrete_category(["a"])
    inc = CatFunctor(pt, c, [0], [0])
    assert equivalence_of_categories(inc)
    z2 = groupoid_of_group(cyclic(2))
    collapse = CatFunctor(z2, pt, [0], [0, 0])
    r = equivalence_report(collapse)
    assert not r["faithful"] and r["full"] and r["essentially_surjective"]
    s3 = groupoid_of_group(symmetric(3))
    assert equivalence_of_categories(CatFunctor(s3, s3, [0], np.arange(6)))


@given(small_groups)
def test_group_nerve_round_trip(g):
    c = groupoid_of_group(g)
    d = category_of_nerve(nerve_of_category(c, 3))
    assert d.validate().ok and d.is_groupoid()
    assert np.array_equal(d.comp, c.comp) and np.array_equal(d.pairs, c.pairs)


@given(st.integers(1, 5))
def test_codiscrete_is_equivalent_to_point(n):
    c = codiscrete_groupoid([str(k) for k in range(n)])
    pt = discrete_category(["*"])
    F = CatFunctor(c, pt, np.zeros(n), np.zeros(n * n))
    assert equivalence_of_categories(F)
    assert len(c.iso_classes[1]) == 1


@given(small_groups)
def test_automorphisms_of_group_groupoid(g):
    assert is_isomorphic(groupoid_of_group(g).automorphism_group(0), g)


# weak 2-groupoids

@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_nerve_of_nerve_is_weak_2_groupoid(x):
    rep = is_weak_2_groupoid(nerve_of_nerve(x))
    assert rep.ok, rep.as_dict()


def test_monoid_nerve_fails_at_t():
    s = monoid_nerve_2(["e", "a"], [[0, 1], [1, 1]], 0)
    rep = is_weak_2_groupoid(s)
    assert rep.failing == "T_groupoid"
    assert rep.holds("rows_are_groupoid_nerves") and rep.holds("segal_equivalences")


def test_row0_not_constant():
    N = nerve_of_category(codiscrete_groupoid("ab"), 2)
    s = MultiSimpSet((2, 2), lambda d: N.size((d[1],)),
                     lambda a, d, i: np.arange(N.size((d[1],))) if a == 0 else N.face(0, (d[1],), i),
                     lambda a, d, i: np.arange(N.size((d[1],))) if a == 0 else N.degen(0, (d[1],), i),
                     lambda d: N.labels((d[1],)))
    assert s.validate().ok
    rep = is_weak_2_groupoid(s)
    assert rep.failing == "row0_constant"


def test_t_of_discrete_rows_is_same_sets():
    s = monoid_nerve_2(["e", "a"], [[0, 1], [1, 0]], 0)
    T = t_functor(s)
    for p in range(3):
        assert T.size((p,)) == s.size((p, 0))


@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_t_is_bar_of_pi0(x):
    from semistrict.catgp import cat1_to_internal, pi0
    k = pi0(cat1_to_internal(x)).order
    T = t_functor(nerve_of_nerve(x))
    assert [T.size((p,)) for p in range(3)] == [1, k, k * k]


def test_t_of_contractible_rows_is_point():
    T = t_functor(nerve_of_nerve(fx.identity_crossed(symmetric(3))))
    assert all(T.size((p,)) == 1 for p in range(3))


def test_strict_2_groupoid_adds_bijectivity():
    rep = is_strict_2_groupoid(nerve_of_nerve(fx.e3()))
    assert rep.ok and rep.holds("segal_bijective")


def test_hom_category_of_one_object():
    s = nerve_of_nerve(one_object_cat1(cyclic(2)))
    h = hom_category(s, 0, 0)
    assert (h.n_obj, h.n_arr) == (1, 2)


# collapsed homotopy

def test_collapsed_homotopy_discrete():
    h = collapsed_homotopy(nerve_of_nerve(discrete_cat1(symmetric(3))))
    assert len(h.pi0) == 1
    assert is_isomorphic(h.pi1, symmetric(3)) and h.pi2.order == 1


def test_collapsed_homotopy_one_object():
    h = collapsed_homotopy(nerve_of_nerve(one_object_cat1(cyclic(2))))
    assert h.pi1.order == 1 and is_isomorphic(h.pi2, cyclic(2))
    assert h.as_dict() == {"pi0": ["*"], "pi1": "1", "pi2": "Z/2"}


def test_collapsed_homotopy_needs_group_level():
    with pytest.raises(NotGroupLevel):
        collapsed_homotopy(monoid_nerve_2(["e", "a"], [[0, 1], [1, 0]], 0))


@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_collapsed_formula_matches_diagonal(x):
    s = nerve_of_nerve(x)
    h = collapsed_homotopy(s, check=True)
    oracle = group_level_homotopy(s, upto=4)
    assert len(h.pi0) == oracle[0].order
    assert is_isomorphic(h.pi1, oracle[1]) and is_isomorphic(h.pi2, oracle[2])
    assert all(g.order == 1 for g in oracle[3:])


@pytest.mark.parametrize("x", SMALL_CAT1[:6], ids=lambda x: x.name)
def test_underlying_set_of_multinerve_matches(x):
    # the same formula read off U of the (truncated) internal 2-nerve of a cat2 direction
    from semistrict.cat2gp import multinerve_of
    y = cat2_from_cat1(x, 1)
    s = underlying_set(multinerve_of(y, 3))
    h = collapsed_homotopy(s)
    oracle = group_level_homotopy(s, upto=2)
    assert len(h.pi0) == oracle[0].order
    assert is_isomorphic(h.pi1, oracle[1]) and is_isomorphic(h.pi2, oracle[2])


# external equivalences

MAPS = fx.map_suite()


@pytest.mark.parametrize("name,f,expected", MAPS, ids=[m[0] for m in MAPS])
def test_external_equivalence_criteria(name, f, expected):
    rep = external_equivalence_criteria(nerve_of_nerve_map(f))
    assert rep.ok
    assert rep.extras["definitional"] == expected == rep.extras["pi_criterion"]


def test_map_suite_shape():
    assert sum(e for _, _, e in MAPS) == 4 and len(MAPS) == 10
    names = dict((n, f) for n, f, _ in MAPS)
    # one map kills pi_1 and one kills pi_2 of the weak 2-groupoid
    r1 = external_equivalence_criteria(nerve_of_nerve_map(names["E3->pt"])).extras
    r2 = external_equivalence_criteria(nerve_of_nerve_map(names["one(Z/2)->pt"])).extras
    assert not r1["pi1_iso"] and r1["pi2_iso"]
    assert r2["pi1_iso"] and not r2["pi2_iso"]


def test_identity_is_external_equivalence():
    s = nerve_of_nerve(fx.e3())
    assert is_external_equivalence_2(identity_msmap(s))


# 3-nerves

def test_set_nerve_of_trivial_is_point():
    x = trivial_cat2(trivial_group())
    s = set_nerve_of_internal_2nerve(_ds(x))
    assert all(s.size(d) == 1 for d in s.degrees())


@pytest.mark.parametrize("x,r", fx.retraction_fixtures(), ids=lambda v: getattr(v, "name", ""))
def test_set_nerve_in_h(x, r):
    nv = discrete_multinerve(x, r, 2)
    s = set_nerve_of_internal_2nerve(nv)
    rep = is_h(s)
    assert rep.ok, rep.as_dict()
    f = t2_product_formula(nv, s)
    assert f["ok"]


def test_k_z2_3_t2_is_trivial():
    nv = _ds(trivial_cat2(cyclic(2)))
    f = t2_product_formula(nv)
    assert f["pi0pi0"] == ["()"] or len(f["pi0pi0"]) == 1
    T2 = t_functor(t_functor(set_nerve_of_internal_2nerve(nv)))
    assert all(T2.size((p,)) == 1 for p in range(3))


def test_point_is_in_h_and_k():
    s = point_msset((2, 2, 2))
    assert is_h(s).ok and is_k(s).ok


def test_non_bijective_inner_segal_is_not_k():
    s = set_nerve_of_internal_2nerve(_ds(cat2_from_cat1(fx.klein_crossed(), 2)))
    assert is_h(s).ok
    rep = is_k(s)
    assert rep.failing == "slices_strict"


def test_monoid_round_trip():
    s = set_nerve_of_internal_2nerve(_ds(trivial_cat2(cyclic(2))))
    m = monoid_from_h(s)
    assert m.validate().ok
    f, ok = bar_comparison(s, m)
    assert ok


@pytest.mark.parametrize("x,r", fx.retraction_fixtures()[:5], ids=lambda v: getattr(v, "name", ""))
def test_bar_of_monoid_is_identity_up_to_bijection(x, r):
    s = set_nerve_of_internal_2nerve(discrete_multinerve(x, r, 2))
    _, ok = bar_comparison(s)
    assert ok


def test_trivial_monoid_bar_is_point():
    b = bar_from_monoid(constant_monoid(["e"], [[0]], 0))
    assert all(b.size(d) == 1 for d in b.degrees())
    assert is_h(b).ok


def test_non_group_monoid_bar_fails_t2():
    b = bar_from_monoid(constant_monoid(["e", "a"], [[0, 1], [1, 1]], 0))
    rep = is_h(b)
    assert rep.failing == "T2_groupoid"


def test_monoid_from_non_h_raises():
    b = bar_from_monoid(constant_monoid(["e", "a"], [[0, 1], [1, 1]], 0))
    with pytest.raises(NotInH):
        monoid_from_h(b)


# storage

def test_msset_json_round_trip():
    s = nerve_of_nerve(fx.e3())
    d = msset_to_dict(s)
    text = json.dumps(d, sort_keys=True)
    back = msset_from_dict(json.loads(text))
    assert json.dumps(msset_to_dict(back), sort_keys=True) == text
    assert back.validate().ok


def test_stored_copy_validates():
    s = materialize(product_msset([nerve_of_category(codiscrete_groupoid("ab"), 2)] * 2))
    assert s.validate().ok
    assert s.size((2,)) == 64


def test_validate_detects_broken_degeneracy():
    N = nerve_of_category(codiscrete_groupoid("ab"), 2)
    bad = MultiSimpSet((2,), N.size, N.face,
                       lambda a, d, i: np.zeros(N.size(_up(d)), dtype=np.int64)[: N.size(d)] if d == (1,) else N.degen(a, d, i),
                       N.labels)
    assert not bad.validate().ok


def _up(d):
    return (d[0] + 1,)
