import numpy as np
import pytest
from hypothesis import given, strategies as st

from semistrict import fixtures as fx
from semistrict.catgp import (Cat1Group, Cat1Morphism, CrossedModule, cat1_from_crossed_module,
                              cat1_to_internal, crossed_module_of, discrete_cat1, internal_to_cat1,
                              is_weak_equivalence_cat1, nerve_of, pi0, pi1,
                              validate_cat1, validate_crossed_module, validate_internal)
from semistrict.errors import InvalidInput, NotACrossedModule
from semistrict.groups import abelian, cyclic, symmetric
from semistrict.grp import (GroupAction, GroupHom, Subgroup, first_noncommuting_pair, is_abelian,
                            is_isomorphic, kernel_of)
from semistrict.sgrp import moore_homotopy

CAT1 = [(n, x) for n, x in fx.valid_fixtures() if isinstance(x, Cat1Group)]
BAD_CAT1 = [(n, x, c) for n, x, c in fx.invalid_fixtures() if isinstance(x, Cat1Group)]


def test_discrete_z2_valid():
    assert validate_cat1(discrete_cat1(cyclic(2))).ok


def test_s3_trivial_endos_commutator():
    rep = validate_cat1(fx.bad_s3())
    assert rep.codes() == ["commutator"]
    v = rep.violations[0]
    assert v.message == "[ker d, ker t] ≠ 1"
    s3 = symmetric(3)
    a, b = (s3.index(lab) for lab in v.witness)
    assert s3.mul(a, b) != s3.mul(b, a)


def test_e3_valid_and_internal():
    x = fx.e3()
    assert x.g.order == 8 and validate_cat1(x).ok
    y = cat1_to_internal(x)
    assert y.c0.order == 4 and y.c1.order == 8
    assert is_isomorphic(pi0(y), cyclic(2)) and pi1(y).order == 1
    assert [nerve_of(y, 5).level(n).order for n in range(5)] == [4, 8, 16, 32, 64]


def test_discrete_internal_is_identity():
    y = cat1_to_internal(discrete_cat1(symmetric(3)))
    assert y.c0.order == y.c1.order == 6
    assert np.array_equal(y.i.map, np.arange(6))
    assert is_isomorphic(pi0(y), symmetric(3)) and pi1(y).order == 1


def test_point_with_pi1():
    z2, one = cyclic(2), cyclic(1)
    x = cat1_from_crossed_module(CrossedModule(GroupHom(z2, one, [0, 0]), GroupAction.trivial(one, z2)))
    y = cat1_to_internal(x)
    assert pi0(y).order == 1 and is_isomorphic(pi1(y), z2)


def test_a3_in_s3_trivial_action_rejected():
    s3 = symmetric(3)
    cube = [i for i in range(6) if s3.mul(s3.mul(i, i), i) == s3.identity]
    A3 = Subgroup(s3, cube)
    x = CrossedModule(A3.inclusion(), GroupAction.trivial(s3, A3.as_group()))
    assert "equivariance" in validate_crossed_module(x).codes()
    with pytest.raises(NotACrossedModule):
        cat1_from_crossed_module(x)


@pytest.mark.parametrize("name,x", CAT1, ids=[n for n, _ in CAT1])
def test_round_trip(name, x):
    back = internal_to_cat1(cat1_to_internal(x))
    assert np.array_equal(back.d.map, x.d.map) and np.array_equal(back.t.map, x.t.map)


@pytest.mark.parametrize("name,x", CAT1, ids=[n for n, _ in CAT1])
def test_valid_iff_internal_category(name, x):
    assert validate_internal(cat1_to_internal(x)).ok


@pytest.mark.parametrize("name,x,code", BAD_CAT1, ids=[n for n, _, _ in BAD_CAT1])
def test_invalid_has_no_internal_category(name, x, code):
    assert code in validate_cat1(x).codes()
    try:
        y = cat1_to_internal(x, check=False)
    except InvalidInput:
        return          # im d is not even a subgroup
    assert not validate_internal(y).ok or not np.array_equal(internal_to_cat1(y).t.map, x.t.map)


@pytest.mark.parametrize("name,x", CAT1, ids=[n for n, _ in CAT1])
def test_derived_crossed_module(name, x):
    assert validate_crossed_module(crossed_module_of(x)).ok


def test_weak_equivalence_examples():
    E3 = fx.e3()
    idm = Cat1Morphism(E3, E3, np.arange(8))
    assert is_weak_equivalence_cat1(idm)
    quot = Cat1Morphism(E3, discrete_cat1(cyclic(2)), np.arange(8) % 4 % 2)
    assert is_weak_equivalence_cat1(quot)
    inc = Cat1Morphism(discrete_cat1(cyclic(2)), discrete_cat1(cyclic(4)), [0, 2])
    assert not is_weak_equivalence_cat1(inc)


@pytest.mark.parametrize("x", fx.pi_fixtures(), ids=lambda x: x.name)
def test_closed_form_matches_moore(x):
    y = cat1_to_internal(x)
    n = nerve_of(y, 3)
    assert is_isomorphic(pi0(y), moore_homotopy(n, 0))
    assert is_isomorphic(pi1(y), moore_homotopy(n, 1))
    assert is_abelian(pi1(y))


_CM_GROUPS = [cyclic(2), cyclic(3), cyclic(4), abelian(2, 2), symmetric(3)]


@given(st.sampled_from(_CM_GROUPS), st.sampled_from(_CM_GROUPS), st.data())
def test_crossed_module_output_satisfies_commutator(m, p, data):
    if not is_abelian(m):
        return
    # central boundary, trivial action: always a crossed module
    centre = [c for c in range(p.order) if all(p.mul(c, g) == p.mul(g, c) for g in range(p.order))]
    homs = fx._homs_to(m, p, centre)
    bd = homs[data.draw(st.integers(0, len(homs) - 1))]
    x = cat1_from_crossed_module(CrossedModule(GroupHom(m, p, bd), GroupAction.trivial(p, m)))
    assert first_noncommuting_pair(x.g, kernel_of(x.d), kernel_of(x.t)) is None
    assert validate_cat1(x).ok


@given(st.sampled_from([n for n, _ in CAT1]))
def test_pi1_abelian(name):
    x = dict(CAT1)[name]
    assert is_abelian(pi1(cat1_to_internal(x)))
