"""Finite strict 2-groupoids, strict monoids in them and their bar constructions.

A strict 2-groupoid is stored as three finite categories sharing cells:

* the 1-category (objects, 1-cells, ``compose1``),
* the vertical category (1-cells as objects, 2-cells, ``vertical``),
* the horizontal category (objects, 2-cells, ``horizontal``).

Composition tables are dense with -1 off the composable pairs.  All
composites read "first then second".
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InternalConsistencyError, InvalidInput, NotAMonoid
from .grp import FinGroup, is_abelian, join_equal
from .groups import describe
from .limits import check_elements
from .report import ValidationReport
from .tam import (FinCategory, MultiSimpSet, RowIndex, composable_strings, levelwise_nerve,
                  nerve_of_category)


def _pairs_and_comp(table, lhs_end, rhs_start):
    f, g = join_equal(np.asarray(lhs_end), np.asarray(rhs_start))
    return np.stack([f, g], axis=1), np.asarray(table)[f, g]


class StrictTwoGroupoid:
    def __init__(self, objects, cells1, src1, tgt1, cells2, src2, tgt2,
                 compose1, vertical, horizontal, id1, id2, name=None):
        self.objects = [str(o) for o in objects]
        self.cells1 = [str(c) for c in cells1]
        self.cells2 = [str(c) for c in cells2]
        self.src1 = np.asarray(src1, dtype=np.int64)
        self.tgt1 = np.asarray(tgt1, dtype=np.int64)
        self.src2 = np.asarray(src2, dtype=np.int64)
        self.tgt2 = np.asarray(tgt2, dtype=np.int64)
        self.compose1 = np.asarray(compose1, dtype=np.int64).reshape(len(self.cells1), len(self.cells1))
        self.vertical = np.asarray(vertical, dtype=np.int64).reshape(len(self.cells2), len(self.cells2))
        self.horizontal = np.asarray(horizontal, dtype=np.int64).reshape(len(self.cells2), len(self.cells2))
        self.id1 = np.asarray(id1, dtype=np.int64)
        self.id2 = np.asarray(id2, dtype=np.int64)
        self.name = name

    @property
    def sizes(self):
        return len(self.objects), len(self.cells1), len(self.cells2)

    # boundary objects of a 2-cell
    @cached_property
    def src0(self):
        return self.src1[self.src2]

    @cached_property
    def tgt0(self):
        return self.tgt1[self.src2]

    @cached_property
    def one_category(self):
        p, c = _pairs_and_comp(self.compose1, self.tgt1, self.src1)
        return FinCategory(len(self.objects), self.src1, self.tgt1, self.id1, p, c,
                           self.objects, self.cells1, name="1-cells")

    @cached_property
    def vertical_category(self):
        p, c = _pairs_and_comp(self.vertical, self.tgt2, self.src2)
        return FinCategory(len(self.cells1), self.src2, self.tgt2, self.id2, p, c,
                           self.cells1, self.cells2, name="vertical")

    @cached_property
    def horizontal_category(self):
        p, c = _pairs_and_comp(self.horizontal, self.tgt0, self.src0)
        return FinCategory(len(self.objects), self.src0, self.tgt0, self.id2[self.id1], p, c,
                           self.objects, self.cells2, name="horizontal")

    def validate(self):
        rep = ValidationReport(subject=self.name or "strict 2-groupoid")
        n0, n1, n2 = self.sizes
        shapes = [(self.src1, n1, n0), (self.tgt1, n1, n0), (self.src2, n2, n1), (self.tgt2, n2, n1),
                  (self.id1, n0, n1), (self.id2, n1, n2)]
        for arr, length, bound in shapes:
            if len(arr) != length or (arr.size and (arr.min() < 0 or arr.max() >= bound)):
                rep.add("shape", "a boundary or identity array has the wrong shape")
                return rep
        if not (np.array_equal(self.src1[self.src2], self.src1[self.tgt2]) and
                np.array_equal(self.tgt1[self.src2], self.tgt1[self.tgt2])):
            rep.add("globular", "source and target of a 2-cell are not parallel")
            return rep
        for nm, c in (("1-cells", self.one_category), ("vertical", self.vertical_category),
                      ("horizontal", self.horizontal_category)):
            sub = c.validate()
            if not sub.ok:
                rep.extend(sub, prefix=f"{nm}.")
                return rep
            if not c.is_groupoid():
                rep.add("invertible", f"{nm} composition has a non-invertible cell")
        hp = self.horizontal_category.pairs
        a, b = hp[:, 0], hp[:, 1]
        hc = self.horizontal[a, b]
        if not (np.array_equal(self.src2[hc], self.compose1[self.src2[a], self.src2[b]]) and
                np.array_equal(self.tgt2[hc], self.compose1[self.tgt2[a], self.tgt2[b]])):
            rep.add("horizontal_boundary", "horizontal composite has the wrong boundary 1-cells")
            return rep
        p1 = self.one_category.pairs
        if not np.array_equal(self.horizontal[self.id2[p1[:, 0]], self.id2[p1[:, 1]]],
                              self.id2[self.compose1[p1[:, 0], p1[:, 1]]]):
            rep.add("identity_2cells", "identity 2-cells do not compose horizontally")
        # interchange: (a v b) h (a' v b') == (a h a') v (b h b')
        vp = self.vertical_category.pairs
        i, j = join_equal(self.tgt0[vp[:, 0]], self.src0[vp[:, 0]])
        check_elements(len(i), "interchange quadruples")
        A, B = vp[i, 0], vp[i, 1]
        A2, B2 = vp[j, 0], vp[j, 1]
        lhs = self.horizontal[self.vertical[A, B], self.vertical[A2, B2]]
        rhs = self.vertical[self.horizontal[A, A2], self.horizontal[B, B2]]
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            k = bad[0]
            rep.add("interchange", "interchange law fails",
                    [int(A[k]), int(B[k]), int(A2[k]), int(B2[k])])
        return rep

    def to_json(self):
        return {"objects": self.objects,
                "cells1": {"labels": self.cells1, "source": self.src1.tolist(), "target": self.tgt1.tolist()},
                "cells2": {"labels": self.cells2, "source": self.src2.tolist(), "target": self.tgt2.tolist()},
                "compose1": self.compose1.tolist(), "vertical": self.vertical.tolist(),
                "horizontal": self.horizontal.tolist(), "id1": self.id1.tolist(), "id2": self.id2.tolist()}

    @classmethod
    def from_json(cls, doc, name=None):
        try:
            return cls(doc["objects"], doc["cells1"]["labels"], doc["cells1"]["source"],
                       doc["cells1"]["target"], doc["cells2"]["labels"], doc["cells2"]["source"],
                       doc["cells2"]["target"], doc["compose1"], doc["vertical"], doc["horizontal"],
                       doc["id1"], doc["id2"], name=name)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed 2-groupoid: {exc}") from None

    def __repr__(self):
        n0, n1, n2 = self.sizes
        return f"<StrictTwoGroupoid {self.name or ''} {n0}/{n1}/{n2}>"


def _dense(n, pairs, values):
    t = np.full((n, n), -1, dtype=np.int64)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    t[pairs[:, 0], pairs[:, 1]] = values
    return t


def discrete_two_groupoid(points, name=None):
    n = len(points)
    ar = np.arange(n)
    eye = np.where(np.eye(n, dtype=bool), ar[:, None], -1)
    return StrictTwoGroupoid(points, [f"1_{p}" for p in points], ar, ar, [f"1_{p}" for p in points],
                             ar, ar, eye, eye, eye, ar, ar, name=name or "discrete")


def two_cells_from_group(a, name=None):
    """One object, one 1-cell, 2-cells the abelian group a under both compositions."""
    n = a.order
    z = np.zeros(n, dtype=np.int64)
    return StrictTwoGroupoid(["*"], ["1"], [0], [0], [a.label(k) for k in range(n)], z, z,
                             [[0]], a.table, a.table, [0], [a.identity], name=name or f"2cells({a.name})")


def one_cells_from_group(g, name=None):
    """One object, 1-cells the group g, identity 2-cells only."""
    n = g.order
    z = np.zeros(n, dtype=np.int64)
    ar = np.arange(n)
    ident = np.where(np.eye(n, dtype=bool), ar[:, None], -1)
    labels = [g.label(k) for k in range(n)]
    return StrictTwoGroupoid(["*"], labels, z, z, labels, ar, ar, g.table, ident, g.table,
                             [g.identity], ar, name=name or f"1cells({g.name})")


def _group_table(G):
    n = G.order
    check_elements(n * n, "group table")
    ar = np.arange(n)
    return G.mul(np.repeat(ar, n), np.tile(ar, n)).reshape(n, n)


def two_groupoid_of_cat1(x, name=None):
    """One object; 1-cells the object group, 2-cells the arrow group of the internal category."""
    from .catgp import cat1_to_internal
    y = cat1_to_internal(x)
    C0, C1 = y.c0, y.c1
    n2 = C1.order
    vert = _dense(n2, y.pairs, y.comp_table[y.pairs[:, 0], y.pairs[:, 1]])
    return StrictTwoGroupoid(["*"], [C0.label(k) for k in range(C0.order)],
                             np.zeros(C0.order), np.zeros(C0.order),
                             [C1.label(k) for k in range(n2)], y.d0.map, y.d1.map,
                             _group_table(C0), vert, _group_table(C1), [C0.identity], y.i.map,
                             name=name or f"2gpd({x.name})")


def groupoid_of_cat1(x, name=None):
    """The groupoid of a cat1-group as a 2-groupoid with identity 2-cells."""
    from .catgp import cat1_to_internal
    y = cat1_to_internal(x)
    C0, C1 = y.c0, y.c1
    n1 = C1.order
    ar = np.arange(n1)
    comp = _dense(n1, y.pairs, y.comp_table[y.pairs[:, 0], y.pairs[:, 1]])
    ident = np.where(np.eye(n1, dtype=bool), ar[:, None], -1)
    labels = [C1.label(k) for k in range(n1)]
    return StrictTwoGroupoid([C0.label(k) for k in range(C0.order)], labels, y.d0.map, y.d1.map,
                             labels, ar, ar, comp, ident, comp, y.i.map, ar,
                             name=name or f"gpd({x.name})")


# ---------------------------------------------------------------------------
# homotopy of a strict 2-groupoid

@dataclass
class TwoGroupoidPi:
    pi0: list
    pi1: FinGroup
    pi2: FinGroup

    def as_dict(self):
        return {"pi0": list(self.pi0), "pi1": describe(self.pi1), "pi2": describe(self.pi2)}


def pi2_groupoid(x, basepoint=0):
    """Components, 1-automorphisms up to 2-cells, and 2-automorphisms of the identity 1-cell."""
    one = x.one_category
    cls, reps = one.iso_classes
    pi0 = [x.objects[r] for r in reps]
    vcls, vreps = x.vertical_category.iso_classes
    loops = one.hom(basepoint, basepoint)
    classes = np.unique(vcls[loops])
    k = len(classes)
    pos = {int(c): i for i, c in enumerate(classes)}
    rep_of = {int(vcls[f]): int(f) for f in loops[::-1]}
    reps1 = np.array([rep_of[int(c)] for c in classes], dtype=np.int64)
    prod = x.compose1[np.repeat(reps1, k), np.tile(reps1, k)]
    table = np.array([pos[int(c)] for c in vcls[prod]], dtype=np.int64).reshape(k, k)
    pi1 = FinGroup([x.cells1[r] for r in reps1], table,
                   identity=pos[int(vcls[x.id1[basepoint]])], name="pi1")
    pi2 = x.vertical_category.automorphism_group(int(x.id1[basepoint]), name="pi2")
    if not is_abelian(pi2):
        raise InternalConsistencyError("2-automorphisms of an identity 1-cell do not commute")
    return TwoGroupoidPi(pi0, pi1, pi2)


# ---------------------------------------------------------------------------
# the 2-nerve

class _NerveLevels:
    """Composable horizontal strings of vertical r-chains."""

    def __init__(self, x, Lr):
        self.x = x
        self.E = nerve_of_category(x.vertical_category, Lr, name="vertical nerve")
        self._chains = {}
        self._strings = {}

    def chains(self, r):
        """(rows, index) of vertical r-chains; r = 0 gives the 1-cells themselves."""
        if r not in self._chains:
            rows = composable_strings(self.x.vertical_category, r)
            self._chains[r] = (rows, RowIndex(rows))
        return self._chains[r]

    def ends(self, r):
        rows, _ = self.chains(r)
        first = rows[:, 0]
        if r == 0:
            return self.x.src1[first], self.x.tgt1[first]
        return self.x.src0[first], self.x.tgt0[first]

    def hcompose(self, r, a, b):
        rows, idx = self.chains(r)
        if r == 0:
            return self.x.compose1[rows[a, 0], rows[b, 0]]
        return idx.find(self.x.horizontal[rows[a], rows[b]])

    def identity(self, r, obj):
        e = self.x.id1[obj]
        for k in range(r):
            e = self.E.degen(0, (k,), 0)[e]
        return e

    def strings(self, q, r):
        """(rows of chain indices, index) for q horizontally composable r-chains."""
        key = (q, r)
        if key not in self._strings:
            src, tgt = self.ends(r)
            n = len(src)
            S = np.arange(n)[:, None]
            order = np.argsort(src, kind="stable")
            srt = src[order]
            for _ in range(q - 1):
                last = tgt[S[:, -1]]
                lo = np.searchsorted(srt, last, "left")
                hi = np.searchsorted(srt, last, "right")
                cnt = hi - lo
                total = int(cnt.sum())
                check_elements(total * (S.shape[1] + 1), "2-nerve level")
                li = np.repeat(np.arange(len(S)), cnt)
                offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
                S = np.concatenate([S[li], order[np.repeat(lo, cnt) + offs][:, None]], axis=1)
            self._strings[key] = (S, RowIndex(S))
        return self._strings[key]


def two_nerve(x, L=2, name=None):
    """The 2-nerve: level (q, r) holds q horizontally composable vertical r-chains."""
    L = (L, L) if isinstance(L, int) else tuple(L)
    lv = _NerveLevels(x, L[1])
    n_obj = len(x.objects)

    def size(d):
        q, r = d
        return n_obj if q == 0 else len(lv.strings(q, r)[0])

    def face(a, d, i):
        q, r = d
        if a == 0:
            S, _ = lv.strings(q, r)
            if q == 1:
                src, tgt = lv.ends(r)
                return (tgt if i == 0 else src)[S[:, 0]]
            if i == 0:
                new = S[:, 1:]
            elif i == q:
                new = S[:, :-1]
            else:
                mid = lv.hcompose(r, S[:, i - 1], S[:, i])
                new = np.concatenate([S[:, :i - 1], mid[:, None], S[:, i + 1:]], axis=1)
            return lv.strings(q - 1, r)[1].find(new)
        if q == 0:
            return np.arange(n_obj)
        S, _ = lv.strings(q, r)
        f = lv.E.face(0, (r,), i)
        return lv.strings(q, r - 1)[1].find(f[S])

    def degen(a, d, i):
        q, r = d
        if a == 0:
            if q == 0:
                return lv.identity(r, np.arange(n_obj))
            S, _ = lv.strings(q, r)
            src, tgt = lv.ends(r)
            obj = src[S[:, 0]] if i == 0 else tgt[S[:, i - 1]]
            new = np.concatenate([S[:, :i], lv.identity(r, obj)[:, None], S[:, i:]], axis=1)
            return lv.strings(q + 1, r)[1].find(new)
        if q == 0:
            return np.arange(n_obj)
        S, _ = lv.strings(q, r)
        f = lv.E.degen(0, (r,), i)
        return lv.strings(q, r + 1)[1].find(f[S])

    def labels(d):
        q, r = d
        if q == 0:
            return list(x.objects)
        S, _ = lv.strings(q, r)
        lab = lv.E.labels((r,))
        return ["/".join(lab[c] for c in row) for row in S]

    s = MultiSimpSet(L, size, face, degen, labels, name=name or f"nu({x.name})")
    s.levels = lv
    return s


# ---------------------------------------------------------------------------
# strict monoids and the one-object 3-dimensional model

class TwoGroupMonoid:
    """A strict monoid: multiplication tables on objects, 1-cells and 2-cells, and a unit object."""

    def __init__(self, carrier, mult0, mult1, mult2, unit, name=None):
        self.carrier = carrier
        n0, n1, n2 = carrier.sizes
        self.mult0 = np.asarray(mult0, dtype=np.int64).reshape(n0, n0)
        self.mult1 = np.asarray(mult1, dtype=np.int64).reshape(n1, n1)
        self.mult2 = np.asarray(mult2, dtype=np.int64).reshape(n2, n2)
        self.unit = int(unit)
        self.name = name

    def validate(self):
        x = self.carrier
        rep = ValidationReport(subject=self.name or "2-group monoid")
        sub = x.validate()
        if not sub.ok:
            rep.extend(sub, prefix="carrier.")
            return rep
        n0, n1, n2 = x.sizes
        for nm, M, n in (("objects", self.mult0, n0), ("1-cells", self.mult1, n1), ("2-cells", self.mult2, n2)):
            if M.size and (M.min() < 0 or M.max() >= n):
                rep.add("shape", f"multiplication on {nm} out of range")
                return rep
            check_elements(n ** 3, "associativity check")
            if not np.array_equal(M[M], M[:, M]):
                rep.add("associativity", f"multiplication on {nm} is not associative")
        u0 = self.unit
        u1 = x.id1[u0]
        u2 = x.id2[u1]
        for nm, M, u, n in (("objects", self.mult0, u0, n0), ("1-cells", self.mult1, u1, n1),
                            ("2-cells", self.mult2, u2, n2)):
            ar = np.arange(n)
            if not (np.array_equal(M[u], ar) and np.array_equal(M[:, u], ar)):
                rep.add("unit", f"unit law fails on {nm}")
        M0, M1, M2 = self.mult0, self.mult1, self.mult2
        # a strict 2-functor on the product
        if not (np.array_equal(x.src1[M1], M0[x.src1[:, None], x.src1[None, :]]) and
                np.array_equal(x.tgt1[M1], M0[x.tgt1[:, None], x.tgt1[None, :]])):
            rep.add("functor_1cells", "multiplication does not respect 1-cell boundaries")
        if not (np.array_equal(x.src2[M2], M1[x.src2[:, None], x.src2[None, :]]) and
                np.array_equal(x.tgt2[M2], M1[x.tgt2[:, None], x.tgt2[None, :]])):
            rep.add("functor_2cells", "multiplication does not respect 2-cell boundaries")
        if not (np.array_equal(M1[x.id1[:, None], x.id1[None, :]], x.id1[M0]) and
                np.array_equal(M2[x.id2[:, None], x.id2[None, :]], x.id2[M1])):
            rep.add("functor_identities", "multiplication does not preserve identities")
        for nm, table, cat in (("compose1", x.compose1, x.one_category),
                               ("vertical", x.vertical, x.vertical_category),
                               ("horizontal", x.horizontal, x.horizontal_category)):
            P = cat.pairs
            M = M1 if nm == "compose1" else M2
            i, j = np.repeat(np.arange(len(P)), len(P)), np.tile(np.arange(len(P)), len(P))
            check_elements(len(i), "pairs of composable pairs")
            lhs = M[table[P[i, 0], P[i, 1]], table[P[j, 0], P[j, 1]]]
            rhs = table[M[P[i, 0], P[j, 0]], M[P[i, 1], P[j, 1]]]
            if not np.array_equal(lhs, rhs):
                rep.add("functor_" + nm, f"multiplication does not preserve {nm} composition")
        return rep

    def check(self):
        rep = self.validate()
        if not rep.ok:
            raise NotAMonoid(rep.violations[0].message, violation=rep.violations[0].code)
        return self

    def to_json(self):
        return {"carrier": self.carrier.to_json(), "mult0": self.mult0.tolist(),
                "mult1": self.mult1.tolist(), "mult2": self.mult2.tolist(), "unit": self.unit}

    @classmethod
    def from_json(cls, doc, name=None):
        try:
            return cls(StrictTwoGroupoid.from_json(doc["carrier"]), doc["mult0"], doc["mult1"],
                       doc["mult2"], doc["unit"], name=name)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed monoid: {exc}") from None


def trivial_monoid():
    return TwoGroupMonoid(discrete_two_groupoid(["*"]), [[0]], [[0]], [[0]], 0, name="trivial")


def monoid_of_abelian_2cells(a, name=None):
    """The unique monoid on the 2-groupoid with one object, one 1-cell and 2-cells a."""
    return TwoGroupMonoid(two_cells_from_group(a), [[0]], [[0]], a.table, 0, name=name or f"2cells({a.name})")


def monoid_of_group_1cells(g, name=None):
    """One object, 1-cells g with identity 2-cells, multiplication from g (needs g abelian)."""
    return TwoGroupMonoid(one_cells_from_group(g), [[0]], g.table, g.table, 0, name=name or f"1cells({g.name})")


def monoid_of_cat1(x, name=None):
    """The groupoid of a cat1-group with the group law as a strict multiplication."""
    from .catgp import cat1_to_internal
    y = cat1_to_internal(x)
    c = groupoid_of_cat1(x)
    T1 = _group_table(y.c1)
    return TwoGroupMonoid(c, _group_table(y.c0), T1, T1, y.c0.identity, name=name or f"mon({x.name})")


def one_object_from_monoid(m, L=2, check=True, name=None):
    """The reduced bar construction on the 2-nerve of the carrier: level (p, q, r) is nu(q, r)^p."""
    if check:
        m.check()
    L = (L, L, L) if isinstance(L, int) else tuple(L)
    x = m.carrier
    inner = two_nerve(x, (L[1], L[2]))
    lv = inner.levels

    def mul(d, a, b):
        q, r = d
        if q == 0:
            return m.mult0[a, b]
        S, idx = lv.strings(q, r)
        rows, cidx = lv.chains(r)
        if r == 0:
            prod = m.mult1[rows[S[a], 0], rows[S[b], 0]]
        else:
            cells = m.mult2[rows[S[a]], rows[S[b]]]           # (n, q, r)
            prod = cidx.find(cells.reshape(-1, r)).reshape(len(a), q)
        return idx.find(prod)

    def unit(d):
        q, r = d
        if q == 0:
            return m.unit
        e = int(lv.identity(r, np.array([m.unit]))[0])
        S, idx = lv.strings(q, r)
        return int(idx.find(np.full((1, q), e))[0])

    s = levelwise_nerve(inner, L[0], mul, unit, name=name or f"bar({m.name})")
    s.monoid = m
    return s


@dataclass
class BarHomotopy:
    pi1: FinGroup
    pi2: FinGroup
    pi3: FinGroup

    def as_dict(self):
        return {"pi1": describe(self.pi1), "pi2": describe(self.pi2),
                "pi3": describe(self.pi3)}

    def orders(self):
        return (self.pi1.order, self.pi2.order, self.pi3.order)


def homotopy_of_bar(m):
    """pi_{i+1} of the one-object model is pi_i of the carrier at the unit.

    pi_1 is the set of components of the carrier with the group law induced
    by the multiplication on objects.
    """
    x = m.carrier
    h = pi2_groupoid(x, m.unit)
    cls, reps = x.one_category.iso_classes
    k = len(reps)
    table = cls[m.mult0[np.repeat(reps, k), np.tile(reps, k)]].reshape(k, k)
    pi1 = FinGroup(h.pi0, table, identity=int(cls[m.unit]), name="pi1")
    if not is_abelian(h.pi2):
        raise InternalConsistencyError("pi3 of the one-object model is not abelian")
    return BarHomotopy(pi1, h.pi1, h.pi2)
