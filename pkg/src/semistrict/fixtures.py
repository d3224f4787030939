"""Curated and seeded fixtures shared by tests, demos and the corpus generator."""
from __future__ import annotations

import numpy as np

from .catgp import (Cat1Group, Cat1Morphism, CrossedModule, cat1_from_crossed_module,
                    discrete_cat1, one_object_cat1)
from .cat2gp import Cat2Group, cat2_from_cat1, discrete_cat2, search_retraction, trivial_cat2
from .grp import (FinGroup, GroupAction, GroupHom, Subgroup, TupleGroup, generated, is_abelian,
                  is_normal)
from .groups import abelian, cyclic, dicyclic, dihedral, klein, symmetric, trivial_group
from .sgrp import TruncBisimpGroup


def _endo(g, fn):
    """Endomorphism of a product group given on label tuples."""
    idx = {g.label(i): i for i in range(g.order)}
    out = []
    for i in range(g.order):
        a = tuple(int(v) for v in g.label(i).strip("()").split(","))
        out.append(idx["(" + ",".join(map(str, fn(a))) + ")"])
    return np.array(out)


def e3():
    """Crossed module Z/2 -> Z/4 (inclusion, trivial action) as a cat1-group on Z/2 x Z/4."""
    M, P = cyclic(2), cyclic(4)
    return cat1_from_crossed_module(CrossedModule(GroupHom(M, P, [0, 2]), GroupAction.trivial(P, M)),
                                    name="E3")


def klein_crossed():
    """Z/2 -> Z/2 x Z/2 onto the first factor, trivial action."""
    M, P = cyclic(2), klein()
    x = CrossedModule(GroupHom(M, P, [0, P.index("(1,0)")]), GroupAction.trivial(P, M))
    return cat1_from_crossed_module(x, name="A")


def normal_crossed(g, normal, name):
    act = GroupAction.by_conjugation(g, normal)
    return cat1_from_crossed_module(CrossedModule(normal.inclusion(act.module), act), name=name)


def a3_in_s3():
    s3 = symmetric(3)
    cube = [i for i in range(6) if s3.mul(s3.mul(i, i), i) == s3.identity]
    return normal_crossed(s3, Subgroup(s3, cube), "A3<S3")


def sign_twisted():
    """Z/3 with S3 acting through the sign, trivial boundary."""
    s3, z3 = symmetric(3), cyclic(3)
    order2 = [i for i in range(6) if s3.mul(i, i) == s3.identity and i != s3.identity]
    act = np.array([[(-m) % 3 if p in order2 else m for m in range(3)] for p in range(6)])
    x = CrossedModule(GroupHom(z3, s3, np.full(3, s3.identity)), GroupAction(s3, z3, act))
    return cat1_from_crossed_module(x, name="Z3~S3")


def identity_crossed(g, name=None):
    """g -> g identity with conjugation: contractible."""
    return normal_crossed(g, Subgroup(g, np.arange(g.order)), name or f"id({g.name})")


def valid_fixtures():
    """Twelve valid cat1/cat2 structures: (name, object)."""
    out = [
        ("disc(S3)", discrete_cat1(symmetric(3))),
        ("one(Z/2)", one_object_cat1(cyclic(2))),
        ("one(Z/2xZ/2)", one_object_cat1(klein())),
        ("E3", e3()),
        ("A3<S3", a3_in_s3()),
        ("Z3~S3", sign_twisted()),
        ("K(Z/2,3)", trivial_cat2(cyclic(2))),
        ("K(Z/3,3)", trivial_cat2(cyclic(3))),
        ("E3@1", cat2_from_cat1(e3(), 1)),
        ("A@2", cat2_from_cat1(klein_crossed(), 2)),
        ("disc2(D4)", discrete_cat2(dihedral(4))),
        ("id(Q8)", identity_crossed(dicyclic(2), "id(Q8)")),
    ]
    return out


def bad_s3():
    s3 = symmetric(3)
    e = np.full(6, s3.identity)
    return Cat1Group(s3, e, e, name="bad_s3")


def invalid_fixtures():
    """Six invalid structures: (name, object, violated identity code)."""
    v = klein()
    z3 = cyclic(3)
    e3_ = np.zeros(3, dtype=np.int64)
    return [
        ("bad_s3", bad_s3(), "commutator"),
        ("K(S3,3)", trivial_cat2(symmetric(3)), "commutator1"),
        ("dt!=t", Cat1Group(v, _endo(v, lambda a: (a[0], 0)), _endo(v, lambda a: (a[0], a[0])),
                            name="dt!=t"), "dt=t"),
        ("td!=d", Cat1Group(v, _endo(v, lambda a: (a[0], 0)), _endo(v, lambda a: (a[1], 0)),
                            name="td!=d"), "td=d"),
        ("d not hom", Cat1Group(z3, np.array([0, 1, 1]), e3_, name="d not hom"), "d_hom"),
        ("non-commuting", Cat2Group(v, _endo(v, lambda a: (a[0], 0)), _endo(v, lambda a: (a[0], 0)),
                                    _endo(v, lambda a: (a[0], a[0])), _endo(v, lambda a: (a[0], a[0])),
                                    name="non-commuting"), "d1d2=d2d1"),
    ]


# ---------------------------------------------------------------------------
# seeded random crossed modules

def _catalog():
    return [cyclic(2), cyclic(3), cyclic(4), cyclic(6), klein(), abelian(2, 4), symmetric(3),
            dihedral(4), dicyclic(2), dihedral(5), dihedral(6)]


def normal_subgroups(g):
    """Normal subgroups generated by at most two elements, deterministic order."""
    seen = {}
    n = g.order
    for a in range(n):
        for b in range(a, n):
            h = generated(g, [a, b])
            if is_normal(h):
                seen.setdefault(h.indices.tobytes(), h)
    return sorted(seen.values(), key=lambda h: (h.order, tuple(h.indices)))


def random_crossed_modules(seed=0, count=10):
    """Crossed modules over groups of order at most 16 chosen by a seeded generator."""
    rng = np.random.default_rng(seed)
    cat = _catalog()
    out = []
    while len(out) < count:
        kind = rng.integers(3)
        P = cat[rng.integers(len(cat))]
        if kind == 0:
            subs = normal_subgroups(P)
            N = subs[rng.integers(len(subs))]
            x = normal_crossed(P, N, f"r{len(out)}:{N.order}<{P.name}")
        else:
            ab = [g for g in cat if is_abelian(g) and g.order * P.order <= 64]
            if not ab:
                continue
            M = ab[rng.integers(len(ab))]
            if kind == 1:
                bd = np.full(M.order, P.identity)
                tag = "0"
            else:
                centre = [c for c in range(P.order) if all(P.mul(c, g) == P.mul(g, c) for g in range(P.order))]
                homs = _homs_to(M, P, centre)
                bd = homs[rng.integers(len(homs))]
                tag = "z"
            x = CrossedModule(GroupHom(M, P, bd), GroupAction.trivial(P, M))
            x = cat1_from_crossed_module(x, name=f"r{len(out)}:{M.name}-{tag}->{P.name}")
        if x.g.order <= 64:
            out.append(x)
    return out


def _homs_to(M, P, targets):
    """Homomorphisms from a cyclic or product-of-cyclic M into P with image in ``targets``."""
    labels = [M.label(i) for i in range(M.order)]
    if labels[1].startswith("("):
        ns = [int(v) + 1 for v in labels[-1].strip("()").split(",")]
        coords = [tuple(int(v) for v in l.strip("()").split(",")) for l in labels]
    else:
        ns = [M.order]
        coords = [(i,) for i in range(M.order)]
    gens = []
    for k in range(len(ns)):
        gens.append([c for c in targets if _power(P, c, ns[k]) == P.identity])
    out = []

    def rec(k, imgs):
        if k == len(ns):
            m = np.array([_word(P, imgs, c) for c in coords])
            out.append(m)
            return
        for c in gens[k]:
            rec(k + 1, imgs + [c])
    rec(0, [])
    return out


def _power(P, c, n):
    x = P.identity
    for _ in range(n):
        x = int(P.mul(x, c))
    return x


def _word(P, imgs, coord):
    x = P.identity
    for c, k in zip(imgs, coord):
        x = int(P.mul(x, _power(P, c, k)))
    return x


def pi_fixtures(seed=0):
    """Twenty cat1-groups: ten curated and ten random."""
    curated = [x for _, x in valid_fixtures() if isinstance(x, Cat1Group)]
    curated += [klein_crossed(), identity_crossed(symmetric(3)), discrete_cat1(cyclic(4)),
                one_object_cat1(cyclic(3))]
    return curated[:10] + random_crossed_modules(seed, 10)


def small_cat1_fixtures(seed=0, max_order=32):
    return [x for x in pi_fixtures(seed) if x.g.order <= max_order]


# ---------------------------------------------------------------------------
# retraction fixtures

def retraction_fixtures():
    """cat2-groups that carry retraction data, with the data found by the search."""
    xs = [trivial_cat2(cyclic(2)), trivial_cat2(cyclic(3)), cat2_from_cat1(klein_crossed(), 2),
          cat2_from_cat1(klein_crossed(), 1), cat2_from_cat1(e3(), 1), cat2_from_cat1(e3(), 2),
          discrete_cat2(symmetric(3))]
    out = []
    for x in xs:
        r = search_retraction(x)
        if r is not None:
            out.append((x, r))
    return out


def perturb_level(b, p, q):
    """Copy of a bisimplicial group with the (p, q) group relabelled (same table, new labels)."""
    g = b.level(p, q)
    if isinstance(g, TupleGroup):
        fac = [FinGroup([e + "'" for e in f.elements], f.table, f.identity, name=f.name) for f in g.factors]
        new = TupleGroup(fac, rows=g.rows, name=f"{g.name}'")
    else:
        new = FinGroup([e + "'" for e in g.elements], g.table, g.identity, name=f"{g.name}'")

    def lv(pp, qq):
        return new if (pp, qq) == (p, q) else b.level(pp, qq)

    def wrap(h, dst):
        src = lv(*dst[0])
        tgt = lv(*dst[1])
        if src is h.source and tgt is h.target:
            return h
        return GroupHom(src, tgt, builder=lambda: h.map)

    def face(a, pp, qq, i):
        t = (pp - 1, qq) if a == 0 else (pp, qq - 1)
        return wrap(b.face(a, pp, qq, i), ((pp, qq), t))

    def degen(a, pp, qq, i):
        t = (pp + 1, qq) if a == 0 else (pp, qq + 1)
        return wrap(b.degen(a, pp, qq, i), ((pp, qq), t))

    return TruncBisimpGroup(b.trunc, lv, face, degen, name=f"perturbed({b.name})")


# ---------------------------------------------------------------------------
# maps between nerve-of-nerve objects

def _hom_by(f_src, f_tgt, fn):
    return Cat1Morphism(f_src, f_tgt, np.array([fn(i) for i in range(f_src.g.order)]))


def map_suite():
    """Ten cat1 morphisms: (name, morphism, expected equivalence)."""
    trivial = discrete_cat1(trivial_group(), name="pt")
    z2, z4 = cyclic(2), cyclic(4)
    E3 = e3()
    disc_z2 = discrete_cat1(z2, name="disc(Z/2)")
    disc_z4 = discrete_cat1(z4, name="disc(Z/4)")
    one_z2 = one_object_cat1(z2, name="one(Z/2)")
    one_z4 = one_object_cat1(z4, name="one(Z/4)")
    contr = identity_crossed(z2, "contractible(Z/2)")
    # E3 -> disc(Z/2): (m, p) -> p mod 2
    quot = _hom_by(E3, disc_z2, lambda i: (i % 4) % 2)
    ident = lambda x: Cat1Morphism(x, x, np.arange(x.g.order), name=f"id({x.name})")
    to_pt = lambda x: Cat1Morphism(x, trivial, np.zeros(x.g.order, dtype=np.int64), name=f"{x.name}->pt")
    return [
        ("id(E3)", ident(E3), True),
        ("id(one(Z/2))", ident(one_z2), True),
        ("E3->disc(Z/2)", quot, True),
        ("contractible->pt", to_pt(contr), True),
        ("disc(Z/2)->pt", to_pt(disc_z2), False),
        ("one(Z/2)->pt", to_pt(one_z2), False),
        ("E3->pt", to_pt(E3), False),
        ("disc(Z/2)->disc(Z/4)", Cat1Morphism(disc_z2, disc_z4, np.array([0, 2])), False),
        ("one(Z/2)->one(Z/4)", Cat1Morphism(one_z2, one_z4, np.array([0, 2])), False),
        ("pt->disc(Z/2)", Cat1Morphism(trivial, disc_z2, np.array([0])), False),
    ]
