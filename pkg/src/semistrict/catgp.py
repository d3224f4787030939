"""cat¹-groups, internal categories in groups, crossed modules and their nerves.

Arrow conventions for an internal category C1 ⇉ C0:

* ``d0`` is the source, ``d1`` the target, ``i`` the identity;
* a composable pair (f, g) means "f then g", i.e. d1(f) = d0(g);
* in the nerve, an n-simplex is a string f_1 .. f_n of composable arrows and
  d_0 of a 1-simplex is its target, d_1 its source.

The composition of a cat¹-group is forced: c(f, g) = f · i(d1 f)^-1 · g.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (InternalConsistencyError, InvalidInput, NotACrossedModule,
                     NotAMorphism, QuotientIllFormed, TruncationTooShallow)
from .grp import (FinGroup, GroupAction, GroupHom, Quotient, Subgroup, TupleGroup,
                  fiber_product, first_noncommuting_pair, hom_violation, identity_hom,
                  image_of, intersect, is_abelian, is_normal, join_equal, kernel_of,
                  semidirect_product, whole)
from .limits import LIMITS, check_elements
from .report import ValidationReport
from .sgrp import SimplicialHom, TruncSimpGroup, edge_map


def _endo(g, m, name=None):
    m = np.asarray(m)
    if m.shape != (g.order,) or (m.size and (m.min() < 0 or m.max() >= g.order)):
        raise InvalidInput(f"endomorphism {name or ''} must be an index array of length {g.order}")
    return GroupHom(g, g, m, name=name)


class Cat1Group:
    """A group with endomorphisms d (source) and t (target)."""

    def __init__(self, g, d, t, name=None):
        self.g = g
        self.d = d if isinstance(d, GroupHom) else _endo(g, d, "d")
        self.t = t if isinstance(t, GroupHom) else _endo(g, t, "t")
        self.name = name

    def to_json(self, group_name):
        return {"group": group_name, "d": self.d.map.tolist(), "t": self.t.map.tolist()}

    def __repr__(self):
        return f"<Cat1Group {self.name or ''} |G|={self.g.order}>"


def discrete_cat1(g, name=None):
    ar = np.arange(g.order)
    return Cat1Group(g, ar, ar, name=name or f"disc({g.name})")


def one_object_cat1(a, name=None):
    """C0 = 1, C1 = a; needs a abelian to be valid."""
    e = np.full(a.order, a.identity)
    return Cat1Group(a, e, e, name=name or f"one({a.name})")


def validate_cat1(x):
    """Check dt = t, td = d and [ker d, ker t] = 1 (plus that d, t are homs)."""
    rep = ValidationReport(subject=x.name or "cat1")
    _cat1_checks(rep, x.g, x.d, x.t, "")
    return rep


def _cat1_checks(rep, g, d, t, suffix):
    for nm, f in (("d", d), ("t", t)):
        bad = hom_violation(f)
        if bad is not None:
            rep.add(f"{nm}{suffix}_hom", f"{nm}{suffix} is not a homomorphism",
                    [g.label(bad[0]), g.label(bad[1])])
    dm, tm = d.map, t.map
    bad = np.flatnonzero(dm[tm] != tm)
    if len(bad):
        rep.add(f"d{suffix}t{suffix}=t{suffix}", f"d{suffix}t{suffix} != t{suffix}", g.label(bad[0]))
    bad = np.flatnonzero(tm[dm] != dm)
    if len(bad):
        rep.add(f"t{suffix}d{suffix}=d{suffix}", f"t{suffix}d{suffix} != d{suffix}", g.label(bad[0]))
    pair = first_noncommuting_pair(g, kernel_of(d), kernel_of(t))
    if pair is not None:
        rep.add(f"commutator{suffix}", f"[ker d{suffix}, ker t{suffix}] ≠ 1",
                [g.label(pair[0]), g.label(pair[1])])


# ---------------------------------------------------------------------------
# internal categories

class InternalCatGp:
    """Internal category in groups: c1 ⇉ c0 with identity i and composition.

    ``comp`` is an index table over composable pairs, or None for the forced
    composition f · i(d1 f)^-1 · g.
    """

    def __init__(self, c1, c0, d0, d1, i, comp=None, name=None):
        self.c1, self.c0 = c1, c0
        self.d0, self.d1, self.i = d0, d1, i
        self._comp = comp
        self.name = name

    @cached_property
    def pairs(self):
        """Composable pairs (f, g) with d1 f = d0 g, as a 2-column array."""
        f, g = join_equal(self.d1.map, self.d0.map)
        return np.stack([f, g], axis=1)

    @cached_property
    def comp_table(self):
        n = self.c1.order
        check_elements(n * n, "composition table")
        tab = np.full((n, n), -1, dtype=np.int64)
        f, g = self.pairs[:, 0], self.pairs[:, 1]
        if self._comp is None:
            c1 = self.c1
            tab[f, g] = c1.mul(c1.mul(f, c1.inv(self.i.map[self.d1.map[f]])), g)
        else:
            tab[f, g] = np.asarray(self._comp)[f, g]
        tab.setflags(write=False)
        return tab

    def compose(self, f, g):
        return self.comp_table[f, g]

    @cached_property
    def arrow_pair_group(self):
        """C1 ×_{C0} C1 as a group with its projections."""
        return fiber_product(self.d1, self.d0)

    def __repr__(self):
        return f"<InternalCatGp |C1|={self.c1.order} |C0|={self.c0.order}>"


def validate_internal(y):
    rep = ValidationReport(subject=y.name or "internal category")
    for nm, f in (("d0", y.d0), ("d1", y.d1), ("i", y.i)):
        bad = hom_violation(f)
        if bad is not None:
            rep.add(f"{nm}_hom", f"{nm} is not a homomorphism", list(bad))
    ar0 = np.arange(y.c0.order)
    if not np.array_equal(y.d0.map[y.i.map], ar0):
        rep.add("d0i=id", "d0 i != id")
    if not np.array_equal(y.d1.map[y.i.map], ar0):
        rep.add("d1i=id", "d1 i != id")
    P, pr1, pr2 = y.arrow_pair_group
    rows = np.asarray(P.rows)
    f = y.c1.index_of(rows[:, :len(y.c1.factors)])
    g = y.c1.index_of(rows[:, len(y.c1.factors):])
    c = y.comp_table[f, g]
    if (c < 0).any():
        rep.add("composition_defined", "composition undefined on a composable pair")
        return rep
    cm = GroupHom(P, y.c1, c)
    bad = hom_violation(cm)
    if bad is not None:
        rep.add("composition_hom", "composition is not a homomorphism", list(bad))
    if not np.array_equal(y.d1.map[c], y.d1.map[g]):
        rep.add("target_of_composite", "d1 c != d1 pr2")
    if not np.array_equal(y.d0.map[c], y.d0.map[f]):
        rep.add("source_of_composite", "d0 c != d0 pr1")
    arr = np.arange(y.c1.order)
    left = y.comp_table[y.i.map[y.d0.map[arr]], arr]
    right = y.comp_table[arr, y.i.map[y.d1.map[arr]]]
    if not np.array_equal(left, arr):
        rep.add("left_unit", "c(i d0 f, f) != f", int(np.flatnonzero(left != arr)[0]))
    if not np.array_equal(right, arr):
        rep.add("right_unit", "c(f, i d1 f) != f", int(np.flatnonzero(right != arr)[0]))
    # associativity on composable triples
    pi, hj = join_equal(y.d1.map[g], y.d0.map)
    a, b, h = f[pi], g[pi], hj
    lhs = y.comp_table[y.comp_table[a, b], h]
    rhs = y.comp_table[a, y.comp_table[b, h]]
    if not np.array_equal(lhs, rhs):
        k = int(np.flatnonzero(lhs != rhs)[0])
        rep.add("associativity", "composition is not associative", [int(a[k]), int(b[k]), int(h[k])])
    return rep


def cat1_to_internal(x, check=True):
    """C0 = im d (labels from G), C1 = G, forced composition."""
    if check:
        rep = validate_cat1(x)
        if not rep.ok:
            raise InvalidInput("not a valid cat1-group: " + "; ".join(v.message for v in rep.violations))
    img = image_of(x.d)
    c0 = img.as_group(name="im d")
    pos_t = img.position(x.t.map)
    if check and not np.array_equal(img.indices[np.minimum(pos_t, len(img.indices) - 1)], x.t.map):
        raise InvalidInput("t does not land in im d")
    d0 = GroupHom(x.g, c0, img.position(x.d.map))
    d1 = GroupHom(x.g, c0, np.minimum(pos_t, len(img.indices) - 1))
    i = GroupHom(c0, x.g, img.indices)
    return InternalCatGp(x.g, c0, d0, d1, i, name=x.name)


def internal_to_cat1(y):
    d = y.i.compose(y.d0)
    t = y.i.compose(y.d1)
    return Cat1Group(y.c1, GroupHom(y.c1, y.c1, d.map), GroupHom(y.c1, y.c1, t.map), name=y.name)


def discrete_internal(g, name=None):
    ident = identity_hom(g)
    return InternalCatGp(g, g, ident, ident, ident, name=name)


# ---------------------------------------------------------------------------
# crossed modules

class CrossedModule:
    def __init__(self, boundary, action, name=None):
        self.boundary = boundary
        self.action = action
        self.name = name

    @property
    def M(self):
        return self.boundary.source

    @property
    def P(self):
        return self.boundary.target


def validate_crossed_module(x):
    rep = ValidationReport(subject=x.name or "crossed module")
    M, P, a = x.M, x.P, x.action.act
    if x.action.group is not P and x.action.group.order != P.order:
        rep.add("action_group", "action is not by the codomain of the boundary")
        return rep
    bad = hom_violation(x.boundary)
    if bad is not None:
        rep.add("boundary_hom", "boundary is not a homomorphism", list(bad))
    rep.extend(x.action.validate())
    dm = x.boundary.map
    p = np.arange(P.order)[:, None]
    m = np.arange(M.order)[None, :]
    lhs = dm[a]                                         # ∂(act(p, m))
    rhs = P.mul(P.mul(p, dm[m]), P.inv(p))              # p ∂(m) p^-1
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        pp, mm = (int(v) for v in bad[0])
        rep.add("equivariance", "∂(p·m) != p ∂(m) p^-1", [P.label(pp), M.label(mm)])
    mm1 = np.arange(M.order)[:, None]
    mm2 = np.arange(M.order)[None, :]
    lhs = a[dm[mm1], mm2]
    rhs = M.mul(M.mul(mm1, mm2), M.inv(mm1))
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        u, v = (int(t) for t in bad[0])
        rep.add("peiffer", "∂(m)·m' != m m' m^-1", [M.label(u), M.label(v)])
    return rep


def cat1_from_crossed_module(x, name=None):
    """G = M ⋊ P, d(m,p) = (e,p), t(m,p) = (e, ∂(m) p)."""
    rep = validate_crossed_module(x)
    if not rep.ok:
        v = rep.violations[0]
        raise NotACrossedModule(v.code, v.message, witness=v.witness)
    M, P = x.M, x.P
    G = semidirect_product(x.action, name=name or (x.name and f"{x.name}.G"))
    n = G.order
    m = np.arange(n) // P.order
    p = np.arange(n) % P.order
    d = M.identity * P.order + p
    t = M.identity * P.order + P.mul(x.boundary.map[m], p)
    return Cat1Group(G, d, t, name=name or x.name)


def crossed_module_of(x):
    """The crossed module ker d -> im d (boundary t, conjugation action) of a cat1-group."""
    g = x.g
    K = kernel_of(x.d)
    I = image_of(x.d)
    M = K.as_group(name="ker d")
    P = I.as_group(name="im d")
    boundary = GroupHom(M, P, I.position(x.t.map[K.indices]))
    p = I.indices[:, None]
    c = g.mul(g.mul(p, K.indices[None, :]), g.inv(p))
    act = GroupAction(P, M, K.position(c))
    return CrossedModule(boundary, act)


# ---------------------------------------------------------------------------
# homotopy groups in closed form

def pi0_data(y):
    K = kernel_of(y.d0)
    B = Subgroup(y.c0, np.unique(y.d1.map[K.indices]))
    if not is_normal(B):
        raise InternalConsistencyError("d1(ker d0) is not normal in C0")
    return Quotient(whole(y.c0), B, name="pi0")


def pi0(y):
    return pi0_data(y).group


def pi1_subgroup(y):
    return intersect(kernel_of(y.d0), kernel_of(y.d1))


def pi1(y):
    h = pi1_subgroup(y).as_group(name="pi1")
    if not is_abelian(h):
        raise InternalConsistencyError("ker d0 ∩ ker d1 is not abelian")
    return h


# ---------------------------------------------------------------------------
# nerve

def _extend_strings(strings, d1, d0):
    """Append one arrow to each composable string (rows of C1 indices)."""
    last = strings[:, -1]
    si, gi = join_equal(d1[last], d0)
    return np.concatenate([strings[si], gi[:, None]], axis=1)


def composable_strings(d0, d1, n):
    d0 = np.asarray(d0)
    d1 = np.asarray(d1)
    s = np.arange(len(d0))[:, None]
    for _ in range(n - 1):
        s = _extend_strings(s, d1, d0)
    return s


def nerve_of(y, L=None):
    """Nerve of an internal category: level n is the n-fold fiber product of C1 over C0."""
    L = LIMITS.trunc if L is None else L
    if L < 2:
        raise TruncationTooShallow("the nerve needs truncation at least 2")
    c1 = y.c1
    d0m, d1m, im = y.d0.map, y.d1.map, y.i.map
    comp = y.comp_table
    levels = {}

    def level(n):
        if n == 0:
            return y.c0
        if n == 1:
            return c1
        if n not in levels:
            levels[n] = TupleGroup((c1,) * n, builder=lambda: composable_strings(d0m, d1m, n),
                                   name=f"Ner_{n}")
        return levels[n]

    def rows_of(n):
        return np.asarray(level(n).rows)

    def face(n, i):
        src, dst = level(n), level(n - 1)

        def build():
            if n == 1:
                return (d1m if i == 0 else d0m).copy()
            r = rows_of(n)
            if i == 0:
                out = r[:, 1:]
            elif i == n:
                out = r[:, :-1]
            else:
                merged = comp[r[:, i - 1], r[:, i]]
                out = np.concatenate([r[:, :i - 1], merged[:, None], r[:, i + 1:]], axis=1)
            return dst.index_of(out)
        return GroupHom(src, dst, builder=build)

    def degen(n, i):
        src, dst = level(n), level(n + 1)

        def build():
            if n == 0:
                return im.copy()
            r = rows_of(n)
            if i == 0:
                ins = im[d0m[r[:, 0]]]
            else:
                ins = im[d1m[r[:, i - 1]]]
            out = np.concatenate([r[:, :i], ins[:, None], r[:, i:]], axis=1)
            return dst.index_of(out)
        return GroupHom(src, dst, builder=build)

    return TruncSimpGroup(L, level, face, degen, name=f"Ner({y.name})" if y.name else "nerve")


# ---------------------------------------------------------------------------
# the left adjoint: fundamental internal category of a simplicial group

def fundamental_internal_category(h):
    """C1 = H1/d2(ker d0 ∩ ker d1), C0 = H0, structure induced from the faces."""
    if h.trunc < 2:
        raise TruncationTooShallow("needs levels up to 2")
    H0, H1 = h.level(0), h.level(1)
    e1 = H1.identity
    mask = (h.face(2, 0).map == e1) & (h.face(2, 1).map == e1)
    D = Subgroup(H1, np.unique(h.face(2, 2).map[np.flatnonzero(mask)]))
    if not is_normal(D):
        raise QuotientIllFormed("d2(ker d0 ∩ ker d1) is not normal in level 1")
    q = Quotient(whole(H1), D, name="C1")
    c1 = q.group
    c0 = H0 if isinstance(H0, FinGroup) else H0.as_fingroup()
    src_face = h.face(1, 1).map
    tgt_face = h.face(1, 0).map
    # well defined on cosets: faces must be constant on each coset
    for f in (src_face, tgt_face):
        if not np.array_equal(f[q.reps][q.coset_of], f):
            raise QuotientIllFormed("a face is not constant on cosets")
    d0 = GroupHom(c1, c0, src_face[q.reps])
    d1 = GroupHom(c1, c0, tgt_face[q.reps])
    i = GroupHom(c0, c1, q.coset_of[h.degen(0, 0).map])
    y = InternalCatGp(c1, c0, d0, d1, i, name="P(H)")
    pair = first_noncommuting_pair(c1, kernel_of(d0), kernel_of(d1))
    if pair is not None:
        raise InternalConsistencyError("reflexive graph condition fails on the quotient")
    y.projection = q
    return y


def unit_map(h, y=None):
    """The comparison H -> Ner P(H), given on every level by the edges."""
    y = y or fundamental_internal_category(h)
    q = y.projection
    ner = nerve_of(y, h.trunc)
    face = lambda m, i: h.face(m, i).map

    def comp(n):
        if n == 0:
            return GroupHom(h.level(0), ner.level(0), np.arange(h.level(0).order))
        if n == 1:
            return GroupHom(h.level(1), ner.level(1), q.coset_of.copy())

        def build():
            cols = [q.coset_of[edge_map(face, n, a)] for a in range(n)]
            return ner.level(n).index_of(np.stack(cols, axis=1))
        return GroupHom(h.level(n), ner.level(n), builder=build)

    return SimplicialHom(h, ner, comp)


# ---------------------------------------------------------------------------
# morphisms and weak equivalences

class Cat1Morphism:
    def __init__(self, source, target, hom, name=None):
        self.source = source
        self.target = target
        self.hom = hom if isinstance(hom, GroupHom) else GroupHom(source.g, target.g, hom)
        self.name = name


def validate_cat1_morphism(f):
    rep = ValidationReport(subject=f.name or "cat1 morphism")
    bad = hom_violation(f.hom)
    if bad is not None:
        rep.add("hom", "underlying map is not a homomorphism", list(bad))
    m = f.hom.map
    for nm in ("d", "t"):
        a = getattr(f.source, nm).map
        b = getattr(f.target, nm).map
        if not np.array_equal(m[a], b[m]):
            rep.add(f"commutes_{nm}", f"map does not commute with {nm}")
    return rep


class InternalFunctor:
    def __init__(self, source, target, f0, f1, name=None):
        self.source, self.target = source, target
        self.f0 = f0 if isinstance(f0, GroupHom) else GroupHom(source.c0, target.c0, f0)
        self.f1 = f1 if isinstance(f1, GroupHom) else GroupHom(source.c1, target.c1, f1)
        self.name = name


def validate_internal_functor(F):
    rep = ValidationReport(subject=F.name or "internal functor")
    for nm, h in (("f0", F.f0), ("f1", F.f1)):
        if hom_violation(h) is not None:
            rep.add(f"{nm}_hom", f"{nm} is not a homomorphism")
    A, B = F.source, F.target
    f0, f1 = F.f0.map, F.f1.map
    if not np.array_equal(B.d0.map[f1], f0[A.d0.map]):
        rep.add("source", "functor does not preserve sources")
    if not np.array_equal(B.d1.map[f1], f0[A.d1.map]):
        rep.add("target", "functor does not preserve targets")
    if not np.array_equal(f1[A.i.map], B.i.map[f0]):
        rep.add("identity", "functor does not preserve identities")
    if rep.ok:
        p = A.pairs
        if not np.array_equal(f1[A.comp_table[p[:, 0], p[:, 1]]], B.comp_table[f1[p[:, 0]], f1[p[:, 1]]]):
            rep.add("composition", "functor does not preserve composition")
    return rep


def functor_of_morphism(f):
    a = cat1_to_internal(f.source, check=False)
    b = cat1_to_internal(f.target, check=False)
    img_a = image_of(f.source.d)
    img_b = image_of(f.target.d)
    f0 = img_b.position(f.hom.map[img_a.indices])
    return InternalFunctor(a, b, f0, f.hom.map)


def induced_on_pi(F):
    """Induced homs on pi0 and pi1 of an internal functor."""
    qa, qb = pi0_data(F.source), pi0_data(F.target)
    h0 = GroupHom(qa.group, qb.group, qb.coset_of[F.f0.map[qa.reps]])
    sa, sb = pi1_subgroup(F.source), pi1_subgroup(F.target)
    img = F.f1.map[sa.indices]
    if not sb.mask[img].all():
        raise NotAMorphism("functor does not map pi1 into pi1")
    h1 = GroupHom(sa.as_group(), sb.as_group(), sb.position(img))
    return h0, h1


def _bij(h):
    return h.source.order == h.target.order and len(np.unique(h.map)) == h.source.order


def is_weak_equivalence_functor(F, check=True):
    if check:
        rep = validate_internal_functor(F)
        if not rep.ok:
            raise NotAMorphism(rep.violations[0].message)
    h0, h1 = induced_on_pi(F)
    return _bij(h0) and _bij(h1)


def is_weak_equivalence_cat1(f):
    rep = validate_cat1_morphism(f)
    if not rep.ok:
        raise NotAMorphism(rep.violations[0].message, code=rep.violations[0].code)
    return is_weak_equivalence_functor(functor_of_morphism(f), check=False)


def nerve_map(F, L=None):
    """The simplicial map Ner(F) between nerves."""
    L = LIMITS.trunc if L is None else L
    na, nb = nerve_of(F.source, L), nerve_of(F.target, L)

    def comp(n):
        if n == 0:
            return F.f0
        if n == 1:
            return F.f1

        def build():
            return nb.level(n).index_of(F.f1.map[np.asarray(na.level(n).rows)])
        return GroupHom(na.level(n), nb.level(n), builder=build)

    return SimplicialHom(na, nb, comp)
