import numpy as np
import pytest
from hypothesis import given, strategies as st

from semistrict.errors import NotAHomomorphism, NotNormal
from semistrict.groups import cyclic, abelian, klein
from semistrict.grp import (FinGroup, GroupAction, Subgroup, commutator_of, direct_product,
                            fiber_product, find_isomorphism, generated, groups_equal, hom_violation,
                            homs_equal, image_of, is_isomorphic, is_normal, kernel_of, make_hom,
                            quotient_by, semidirect_product, trivial_subgroup, validate_group, whole)

from conftest import SMALL_GROUPS, small_groups


def sign_map(s3):
    # transpositions are labelled "(ab)", 3-cycles "(abc)"
    return np.asarray([int(len(s3.label(i)) == 4) for i in range(s3.order)])


def test_z2_table_valid():
    g = FinGroup(["e", "a"], [[0, 1], [1, 0]], 0)
    assert validate_group(g).ok


def test_repeated_row_entry_is_not_latin():
    g = FinGroup(["e", "a"], [[0, 1], [1, 1]], 0)
    rep = validate_group(g)
    assert "latin" in rep.codes()
    assert "not a Latin square" in rep.violations[0].message


def test_nonassociative_latin_square():
    # a Latin square of order 5 with identity 0 that is not a group
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    rep = validate_group(FinGroup(list("eabcd"), t, 0))
    assert rep.codes() == ["associativity"]
    assert rep.violations[0].message.startswith("associativity fails at (")


def test_sign_is_hom(s3):
    z2 = cyclic(2)
    sgn = make_hom(s3, z2, sign_map(s3))
    assert kernel_of(sgn).order == 3
    assert image_of(sgn).order == 2


def test_identity_is_hom(s3):
    assert make_hom(s3, s3, np.arange(6)) is not None


def test_transposition_swap_is_not_hom(s3):
    labels = [s3.label(i) for i in range(6)]
    m = np.arange(6)
    a, b = labels.index("(12)"), labels.index("(13)")
    m[a], m[b] = b, a
    # swapping two transpositions while fixing the third is no automorphism
    with pytest.raises(NotAHomomorphism):
        make_hom(s3, s3, m)


def test_quotient_z4():
    z4 = cyclic(4)
    q, pr = quotient_by(z4, Subgroup(z4, [0, 2]))
    assert is_isomorphic(q, cyclic(2))
    assert kernel_of(pr) == Subgroup(z4, [0, 2])


def test_quotient_by_trivial(s3):
    q, _ = quotient_by(s3, trivial_subgroup(s3))
    assert is_isomorphic(q, s3)


def test_quotient_non_normal(s3):
    t = s3.index("(12)")
    with pytest.raises(NotNormal):
        quotient_by(s3, Subgroup(s3, [s3.identity, t]))


def test_fiber_product_mod2():
    z4, z2 = cyclic(4), cyclic(2)
    mod2 = make_hom(z4, z2, np.arange(4) % 2)
    P, p1, p2 = fiber_product(mod2, mod2)
    assert P.order == 8
    assert np.array_equal(mod2.map[p1.map], mod2.map[p2.map])


def test_fiber_product_of_identities_is_diagonal(s3):
    idh = make_hom(s3, s3, np.arange(6))
    P, p1, p2 = fiber_product(idh, idh)
    assert P.order == 6 and np.array_equal(p1.map, p2.map)


def test_semidirect_examples(s3):
    z2, z3, z4 = cyclic(2), cyclic(3), cyclic(4)
    assert is_isomorphic(semidirect_product(GroupAction.trivial(z4, z2)), abelian(2, 4))
    inv = GroupAction(z2, z3, [[0, 1, 2], [0, 2, 1]])
    assert inv.validate().ok
    assert is_isomorphic(semidirect_product(inv), s3)
    one = FinGroup(["e"], [[0]], 0)
    assert is_isomorphic(semidirect_product(GroupAction.trivial(one, z3)), z3)


def test_find_isomorphism_examples(s3):
    assert find_isomorphism(cyclic(4), klein()) is None
    f = find_isomorphism(s3, s3)
    assert f is not None and hom_violation(f) is None
    from semistrict.groups import dihedral, permutation_group
    other = permutation_group([(1, 2, 0), (1, 0, 2)])
    assert find_isomorphism(dihedral(3), other) is not None


def test_commutator_in_s3_is_a3(s3):
    assert commutator_of(whole(s3), whole(s3)).order == 3


def test_groups_equal_detects_table_change():
    a = cyclic(3)
    b = FinGroup(a.elements, a.table, a.identity)
    assert groups_equal(a, b)
    assert not groups_equal(a, FinGroup(["0", "2", "1"], a.table, a.identity))


# properties

@given(small_groups, small_groups, st.data())
def test_kernel_image_orders(g, h, data):
    if data.draw(st.booleans()):
        f = make_hom(g, h, np.full(g.order, h.identity))
    else:
        f = make_hom(g, g, np.arange(g.order))
    assert g.order == kernel_of(f).order * image_of(f).order


@given(small_groups, st.data())
def test_quotient_kernel_roundtrip(g, data):
    x, y = data.draw(st.integers(0, g.order - 1)), data.draw(st.integers(0, g.order - 1))
    n = generated(g, [x, y])
    if not is_normal(n):
        return
    _, pr = quotient_by(g, n)
    assert kernel_of(pr) == n


@given(small_groups, st.data())
def test_commutator_symmetric(g, data):
    a = generated(g, [data.draw(st.integers(0, g.order - 1))])
    b = generated(g, [data.draw(st.integers(0, g.order - 1))])
    assert commutator_of(a, b) == commutator_of(b, a)


@given(small_groups, small_groups)
def test_trivial_semidirect_is_direct(m, p):
    assert is_isomorphic(semidirect_product(GroupAction.trivial(p, m)), direct_product(m, p).as_fingroup())


@given(small_groups)
def test_fixture_groups_validate(g):
    assert validate_group(g).ok


@given(small_groups, st.data())
def test_fiber_product_square_commutes(g, data):
    idx = data.draw(st.integers(0, g.order - 1))
    n = generated(g, [idx])
    if not is_normal(n):
        return
    q, pr = quotient_by(g, n)
    P, p1, p2 = fiber_product(pr, pr)
    assert np.array_equal(pr.map[p1.map], pr.map[p2.map])
    assert P.order == g.order * n.order


@pytest.mark.parametrize("g", SMALL_GROUPS, ids=lambda g: g.name)
def test_identity_isomorphism_is_hom(g):
    f = find_isomorphism(g, g)
    assert f is not None and hom_violation(f) is None and homs_equal(f, f)
