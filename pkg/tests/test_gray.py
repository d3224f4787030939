import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from semistrict import fixtures as fx
from semistrict.cat2gp import cat2_from_cat1, homotopy_groups_cat2
from semistrict.catgp import cat1_to_internal, discrete_cat1, one_object_cat1, pi0, pi1
from semistrict.errors import NotAMonoid
from semistrict.gray import (StrictTwoGroupoid, TwoGroupMonoid, discrete_two_groupoid, groupoid_of_cat1,
                             homotopy_of_bar, monoid_of_abelian_2cells, monoid_of_cat1,
                             monoid_of_group_1cells, one_cells_from_group, one_object_from_monoid,
                             pi2_groupoid, trivial_monoid, two_cells_from_group, two_groupoid_of_cat1,
                             two_nerve)
from semistrict.groups import cyclic, symmetric
from semistrict.grp import is_abelian, is_isomorphic
from semistrict.tam import is_h, is_k, is_weak_2_groupoid, monoid_from_h

from conftest import SMALL_GROUPS

ABELIAN = [g for g in SMALL_GROUPS if is_abelian(g)]
abelian_groups = st.sampled_from(ABELIAN)
SMALL_CAT1 = fx.small_cat1_fixtures()[:8]


def test_two_cells_example():
    h = pi2_groupoid(two_cells_from_group(cyclic(3)))
    assert h.pi0 == ["*"] and h.pi1.order == 1 and is_isomorphic(h.pi2, cyclic(3))
    assert h.as_dict() == {"pi0": ["*"], "pi1": "1", "pi2": "Z/3"}


def test_discrete_example():
    h = pi2_groupoid(discrete_two_groupoid(["a", "b", "c"]))
    assert h.pi0 == ["a", "b", "c"] and h.pi1.order == 1 and h.pi2.order == 1


@given(abelian_groups)
def test_one_cells(g):
    h = pi2_groupoid(one_cells_from_group(g))
    assert is_isomorphic(h.pi1, g) and h.pi2.order == 1


@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_two_groupoid_of_cat1(x):
    y = cat1_to_internal(x)
    c = two_groupoid_of_cat1(x)
    assert c.validate().ok
    h = pi2_groupoid(c)
    assert len(h.pi0) == 1
    assert is_isomorphic(h.pi1, pi0(y)) and is_isomorphic(h.pi2, pi1(y))


@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_groupoid_of_cat1(x):
    y = cat1_to_internal(x)
    h = pi2_groupoid(groupoid_of_cat1(x))
    assert len(h.pi0) == pi0(y).order
    assert is_isomorphic(h.pi1, pi1(y)) and h.pi2.order == 1


def test_nonabelian_two_cells_fail_interchange():
    rep = two_cells_from_group(symmetric(3)).validate()
    assert not rep.ok and rep.violations[0].code == "interchange"


def test_broken_globularity():
    d = two_groupoid_of_cat1(fx.e3()).to_json()
    d["cells1"]["target"] = [0] * len(d["cells1"]["target"])
    d["objects"] = ["a", "b"]
    rep = StrictTwoGroupoid.from_json(d).validate()
    assert not rep.ok


def test_two_groupoid_json_round_trip():
    x = two_groupoid_of_cat1(fx.a3_in_s3())
    back = StrictTwoGroupoid.from_json(json.loads(json.dumps(x.to_json())))
    assert back.to_json() == x.to_json() and back.validate().ok


# the 2-nerve

@given(abelian_groups)
def test_two_nerve_sizes(a):
    s = two_nerve(two_cells_from_group(a), 2)
    n = a.order
    assert all(s.size((q, r)) == n ** (q * r) for q in range(3) for r in range(3))
    assert s.validate().ok


@pytest.mark.parametrize("x", SMALL_CAT1[:5], ids=lambda x: x.name)
def test_two_nerve_is_weak_2_groupoid(x):
    s = two_nerve(groupoid_of_cat1(x), 2)
    assert s.validate().ok
    assert is_weak_2_groupoid(s).ok


# monoids

def test_trivial_monoid_is_point():
    b = one_object_from_monoid(trivial_monoid())
    assert all(b.size(d) == 1 for d in b.degrees())
    assert homotopy_of_bar(trivial_monoid()).orders() == (1, 1, 1)


def test_two_cells_monoid_gives_pi3():
    m = monoid_of_abelian_2cells(cyclic(2))
    assert homotopy_of_bar(m).as_dict() == {"pi1": "1", "pi2": "1", "pi3": "Z/2"}
    b = one_object_from_monoid(m)
    assert b.size((1, 1, 1)) == 2 and b.size((2, 2, 2)) == 2 ** 8


def test_one_cells_monoid():
    h = homotopy_of_bar(monoid_of_group_1cells(cyclic(2)))
    assert h.as_dict() == {"pi1": "1", "pi2": "Z/2", "pi3": "1"}


@given(st.sampled_from([g for g in ABELIAN if g.order <= 3]))
def test_bar_is_strict(a):
    b = one_object_from_monoid(monoid_of_abelian_2cells(a))
    assert b.validate().ok
    assert is_h(b).ok and is_k(b).ok


@pytest.mark.parametrize("m", [trivial_monoid(), monoid_of_abelian_2cells(cyclic(2)),
                               monoid_of_group_1cells(cyclic(3)), monoid_of_cat1(fx.e3())],
                         ids=lambda m: m.name)
def test_bar_round_trip(m):
    b = one_object_from_monoid(m)
    assert is_k(b).ok
    back = monoid_from_h(b)
    assert back.validate().ok
    nu = two_nerve(m.carrier, 2)
    assert all(back.carrier.size(d) == nu.size(d) for d in nu.degrees())


@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_cat1_carrier_matches_cat2(x):
    h = homotopy_of_bar(monoid_of_cat1(x))
    oracle = homotopy_groups_cat2(cat2_from_cat1(x, 1), 3)
    for got, want in zip((h.pi1, h.pi2, h.pi3), oracle):
        assert is_isomorphic(got, want)


@pytest.mark.parametrize("x", SMALL_CAT1, ids=lambda x: x.name)
def test_pi2_pi3_abelian(x):
    h = homotopy_of_bar(monoid_of_cat1(x))
    assert is_abelian(h.pi2) and is_abelian(h.pi3)


def test_nonabelian_one_cells_not_a_monoid():
    m = monoid_of_group_1cells(symmetric(3))
    rep = m.validate()
    assert not rep.ok
    with pytest.raises(NotAMonoid):
        m.check()


def test_nonassociative_multiplication():
    a = cyclic(3)
    sub = (np.arange(3)[:, None] - np.arange(3)[None, :]) % 3
    m = TwoGroupMonoid(two_cells_from_group(a), [[0]], [[0]], sub, 0)
    assert "associativity" in [v.code for v in m.validate().violations]


def test_monoid_json_round_trip():
    m = monoid_of_cat1(fx.a3_in_s3())
    back = TwoGroupMonoid.from_json(json.loads(json.dumps(m.to_json())))
    assert back.to_json() == m.to_json() and back.validate().ok


def test_discrete_carrier_monoid():
    # a monoid on a discrete 2-groupoid is an ordinary group on the objects
    g = cyclic(4)
    x = discrete_two_groupoid([g.label(k) for k in range(4)])
    m = TwoGroupMonoid(x, g.table, g.table, g.table, 0)
    assert m.validate().ok
    h = homotopy_of_bar(m)
    assert is_isomorphic(h.pi1, g) and h.pi2.order == 1 and h.pi3.order == 1


def test_discrete_cat1_carrier():
    h = homotopy_of_bar(monoid_of_cat1(discrete_cat1(symmetric(3))))
    assert is_isomorphic(h.pi1, symmetric(3))
    h = homotopy_of_bar(monoid_of_cat1(one_object_cat1(cyclic(2))))
    assert h.as_dict() == {"pi1": "1", "pi2": "Z/2", "pi3": "1"}
