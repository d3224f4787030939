"""Set-level multi-simplicial structures: categories, nerves, weak 2- and 3-groupoids.

Conventions shared with the group-level modules:

* an arrow f of a category goes from ``src[f]`` to ``tgt[f]``; a composable
  pair (f, g) has ``tgt[f] == src[g]`` and composite "f then g";
* in a nerve, d_0 of an arrow is its target and d_1 its source;
* in a multi-simplicial set the *last* axis is the categorical one, so a
  2-nerve has rows q -> X(p, q) and T collapses the last axis;
* the outer (first) axis of a 3-nerve carries the Segal products.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (InternalConsistencyError, InvalidInput, NotA1Nerve, NotAFunctor,
                     NotAMonoid, NotGroupLevel, NotInH, NotSimplicial, TruncationTooShallow)
from .grp import FinGroup, row_keys
from .groups import trivial_group
from .limits import check_elements
from .report import ClauseReport, ValidationReport
from .sgrp import edge_map, moore_homotopy, diagonal_of


def _deg(d):
    return tuple(int(x) for x in d)


def _key(d):
    return ",".join(str(x) for x in d)


def _step(d, axis, delta):
    d = list(d)
    d[axis] += delta
    return tuple(d)


class RowIndex:
    """Exact lookup of integer rows in a fixed table of distinct rows."""

    def __init__(self, rows):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows[:, None]
        self.rows = rows
        self._keys = row_keys(rows, 4) if rows.shape[1] else None
        self._order = np.argsort(self._keys, kind="stable") if rows.shape[1] else None
        if rows.shape[1] and len(rows) > 1:
            srt = self._keys[self._order]
            if (srt[1:] == srt[:-1]).any():
                raise InternalConsistencyError("rows are not distinct")

    def __len__(self):
        return len(self.rows)

    def find(self, queries, missing="raise"):
        q = np.asarray(queries, dtype=np.int64)
        if q.ndim == 1:
            q = q[:, None]
        if self.rows.shape[1] == 0:
            return np.zeros(len(q), dtype=np.int64)
        k = row_keys(q, 4)
        srt = self._keys[self._order]
        pos = np.searchsorted(srt, k)
        pos_c = np.minimum(pos, len(srt) - 1)
        ok = (pos < len(srt)) & (srt[pos_c] == k)
        out = np.where(ok, self._order[pos_c], -1)
        if missing == "raise" and not ok.all():
            raise InternalConsistencyError("row not found in table")
        return out


# ---------------------------------------------------------------------------
# encoding of product levels

def _digits(idx, base, p):
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty((len(idx), p), dtype=np.int64)
    rest = idx.copy()
    for k in range(p - 1, -1, -1):
        out[:, k] = rest % base
        rest //= base
    return out


def _encode(D, base):
    D = np.asarray(D, dtype=np.int64)
    out = np.zeros(len(D), dtype=np.int64)
    for k in range(D.shape[1]):
        out = out * base + D[:, k]
    return out


# ---------------------------------------------------------------------------
# multi-simplicial sets

class MultiSimpSet:
    """A truncated n-simplicial set with lazily built levels and operators.

    ``size(deg)`` gives the number of elements at a multi-degree,
    ``face(axis, deg, i)`` / ``degen(axis, deg, i)`` index arrays starting at
    ``deg``.  Optional ``labels(deg)`` and ``basepoint(deg)`` callables.
    ``provenance`` records group-level origin where there is one.
    """

    def __init__(self, trunc, size, face, degen, labels=None, basepoint=None,
                 name=None, provenance=None):
        if isinstance(trunc, int):
            trunc = (trunc,)
        self.trunc = _deg(trunc)
        self.arity = len(self.trunc)
        self._size = size
        self._face = face
        self._degen = degen
        self._labels = labels
        self._basepoint = basepoint
        self.name = name
        self.provenance = provenance
        self._cache = {}

    def _get(self, key, fn, *args):
        if key not in self._cache:
            self._cache[key] = fn(*args)
        return self._cache[key]

    def contains(self, deg):
        return len(deg) == self.arity and all(0 <= x <= L for x, L in zip(deg, self.trunc))

    def _need(self, deg):
        if not self.contains(deg):
            raise TruncationTooShallow(f"degree {_key(deg)} outside truncation {list(self.trunc)}")

    def size(self, deg):
        deg = _deg(deg)
        self._need(deg)
        return int(self._get(("n", deg), self._size, deg))

    def face(self, axis, deg, i):
        deg = _deg(deg)
        self._need(deg)
        if not (deg[axis] >= 1 and 0 <= i <= deg[axis]):
            raise InvalidInput(f"no face d{axis}.{i} at {_key(deg)}")
        return self._get(("d", axis, deg, i), lambda: np.asarray(self._face(axis, deg, i), dtype=np.int64))

    def degen(self, axis, deg, i):
        deg = _deg(deg)
        self._need(deg)
        if not (deg[axis] < self.trunc[axis] and 0 <= i <= deg[axis]):
            raise InvalidInput(f"no degeneracy s{axis}.{i} at {_key(deg)}")
        return self._get(("s", axis, deg, i), lambda: np.asarray(self._degen(axis, deg, i), dtype=np.int64))

    def labels(self, deg):
        deg = _deg(deg)
        self._need(deg)
        if self._labels is None:
            return [str(k) for k in range(self.size(deg))]
        return self._get(("l", deg), self._labels, deg)

    def basepoint(self, deg):
        if self._basepoint is None:
            return None
        return int(self._basepoint(_deg(deg)))

    def degrees(self):
        return itertools.product(*[range(L + 1) for L in self.trunc])

    def truncated(self, trunc):
        trunc = (trunc,) * self.arity if isinstance(trunc, int) else _deg(trunc)
        if any(a > b for a, b in zip(trunc, self.trunc)):
            raise TruncationTooShallow("cannot extend a truncation")
        return MultiSimpSet(trunc, self.size, self.face, self.degen,
                            self.labels if self._labels else None,
                            self._basepoint and self.basepoint, self.name, self.provenance)

    def fix(self, axis, n):
        """The (arity-1)-simplicial set obtained by fixing ``axis`` at ``n``."""
        def up(d):
            d = list(d)
            d.insert(axis, n)
            return tuple(d)

        def ax(a):
            return a if a < axis else a + 1

        trunc = self.trunc[:axis] + self.trunc[axis + 1:]
        return MultiSimpSet(
            trunc, lambda d: self.size(up(d)),
            lambda a, d, i: self.face(ax(a), up(d), i),
            lambda a, d, i: self.degen(ax(a), up(d), i),
            (lambda d: self.labels(up(d))) if self._labels else None,
            (lambda d: self.basepoint(up(d))) if self._basepoint else None,
            name=f"{self.name}[{axis}={n}]")

    def line(self, prefix):
        """The simplicial set along the last axis at the given leading degrees."""
        s = self
        for v in prefix:
            s = s.fix(0, v)
        return s

    # -- identities ----------------------------------------------------------

    def validate(self, upto=None):
        rep = ValidationReport(subject=self.name or "multi-simplicial set")
        T = self.trunc if upto is None else tuple(min(a, upto) for a in self.trunc)
        degs = list(itertools.product(*[range(L + 1) for L in T]))
        for deg in degs:
            if self.size(deg) < 0:
                rep.add("size", f"negative size at {_key(deg)}")
        for deg in degs:
            for a in range(self.arity):
                _axis_identities(self, rep, a, deg, T)
                for b in range(a + 1, self.arity):
                    _commutations(self, rep, a, b, deg, T)
        return rep


def _ops(s, a, deg, T):
    """(kind, i, target degree, array) for every operator of axis a at deg."""
    n = deg[a]
    out = []
    if n >= 1:
        out += [("d", i, _step(deg, a, -1), s.face(a, deg, i)) for i in range(n + 1)]
    if n < T[a]:
        out += [("s", i, _step(deg, a, 1), s.degen(a, deg, i)) for i in range(n + 1)]
    return out


def _axis_identities(s, rep, a, deg, T):
    n = deg[a]
    d = lambda dg, i: s.face(a, dg, i)
    sg = lambda dg, i: s.degen(a, dg, i)
    lo, hi = _step(deg, a, -1), _step(deg, a, 1)
    tag = f"{a}@{_key(deg)}"
    if n >= 2:
        for j in range(n + 1):
            for i in range(j):
                if not np.array_equal(d(lo, i)[d(deg, j)], d(lo, j - 1)[d(deg, i)]):
                    rep.add("dd", f"face identity d{i}d{j} fails on axis {tag}", [a, list(deg), i, j])
    if n < T[a]:
        ar = np.arange(s.size(deg))
        for j in range(n + 1):
            up = sg(deg, j)
            for i in range(n + 2):
                lhs = d(hi, i)[up]
                if i in (j, j + 1):
                    rhs = ar
                elif i < j:
                    rhs = sg(lo, j - 1)[d(deg, i)]
                else:
                    rhs = sg(lo, j)[d(deg, i - 1)]
                if not np.array_equal(lhs, rhs):
                    rep.add("ds", f"identity d{i}s{j} fails on axis {tag}", [a, list(deg), i, j])
    if n + 1 < T[a]:
        for j in range(n + 1):
            for i in range(j + 1):
                if not np.array_equal(sg(hi, i)[sg(deg, j)], sg(hi, j + 1)[sg(deg, i)]):
                    rep.add("ss", f"identity s{i}s{j} fails on axis {tag}", [a, list(deg), i, j])


def _commutations(s, rep, a, b, deg, T):
    for ka, i, da, fa in _ops(s, a, deg, T):
        for kb, j, db, fb in _ops(s, b, deg, T):
            after_a = (s.face if kb == "d" else s.degen)(b, da, j)
            after_b = (s.face if ka == "d" else s.degen)(a, db, i)
            if not np.array_equal(after_a[fa], after_b[fb]):
                rep.add("commute", f"{ka}{a}.{i} and {kb}{b}.{j} do not commute at {_key(deg)}",
                        [a, b, list(deg)])


def stored_msset(trunc, sizes, faces, degens, labels=None, basepoints=None, name=None):
    """A multi-simplicial set from explicit dictionaries keyed by degree tuples."""
    return MultiSimpSet(
        trunc, lambda d: sizes[d], lambda a, d, i: faces[(a, d, i)],
        lambda a, d, i: degens[(a, d, i)],
        (lambda d: labels[d]) if labels is not None else None,
        (lambda d: basepoints[d]) if basepoints is not None else None, name=name)


def materialize(s):
    """Evaluate every level and operator; returns a stored copy."""
    sizes, faces, degens, labels = {}, {}, {}, {}
    for deg in s.degrees():
        sizes[deg] = s.size(deg)
        labels[deg] = list(s.labels(deg))
        for a in range(s.arity):
            for i in range(deg[a] + 1):
                if deg[a] >= 1:
                    faces[(a, deg, i)] = s.face(a, deg, i)
                if deg[a] < s.trunc[a]:
                    degens[(a, deg, i)] = s.degen(a, deg, i)
    bp = None
    if s._basepoint is not None:
        bp = {deg: s.basepoint(deg) for deg in s.degrees()}
    return stored_msset(s.trunc, sizes, faces, degens, labels, bp, name=s.name)


def msset_to_dict(s):
    m = materialize(s) if not isinstance(s, dict) else s
    levels = {_key(d): list(m.labels(d)) for d in m.degrees()}
    maps = {}
    for deg in m.degrees():
        for a in range(m.arity):
            for i in range(deg[a] + 1):
                if deg[a] >= 1:
                    maps[f"d{a}.{i}@{_key(deg)}"] = [int(v) for v in m.face(a, deg, i)]
                if deg[a] < m.trunc[a]:
                    maps[f"s{a}.{i}@{_key(deg)}"] = [int(v) for v in m.degen(a, deg, i)]
    trunc = m.trunc[0] if len(set(m.trunc)) == 1 else list(m.trunc)
    return {"arity": m.arity, "trunc": trunc, "levels": levels, "maps": maps}


def msset_from_dict(doc, name=None):
    try:
        arity = int(doc["arity"])
        trunc = doc["trunc"]
        trunc = (int(trunc),) * arity if isinstance(trunc, int) else _deg(trunc)
        if len(trunc) != arity or arity < 1:
            raise InvalidInput("trunc does not match arity")
        levels = {_deg(k.split(",")): [str(x) for x in v] for k, v in doc["levels"].items()}
        faces, degens = {}, {}
        for k, v in doc.get("maps", {}).items():
            op, deg = k.split("@")
            kind, rest = op[0], op[1:]
            a, i = (int(x) for x in rest.split("."))
            (faces if kind == "d" else degens)[(a, _deg(deg.split(",")), i)] = np.asarray(v, dtype=np.int64)
    except (KeyError, ValueError, AttributeError, TypeError) as exc:
        raise InvalidInput(f"malformed multi-simplicial set: {exc}") from None
    sizes = {d: len(v) for d, v in levels.items()}
    for deg in itertools.product(*[range(L + 1) for L in trunc]):
        if deg not in sizes:
            raise InvalidInput(f"missing level {_key(deg)}")
        for a in range(arity):
            for i in range(deg[a] + 1):
                for kind, table, ok, tgt in (("d", faces, deg[a] >= 1, _step(deg, a, -1)),
                                             ("s", degens, deg[a] < trunc[a], _step(deg, a, 1))):
                    if not ok:
                        continue
                    arr = table.get((a, deg, i))
                    if arr is None:
                        raise InvalidInput(f"missing map {kind}{a}.{i}@{_key(deg)}")
                    if len(arr) != sizes[deg] or (arr.size and (arr.min() < 0 or arr.max() >= sizes[tgt])):
                        raise InvalidInput(f"map {kind}{a}.{i}@{_key(deg)} has the wrong shape")
    return stored_msset(trunc, sizes, faces, degens, levels, name=name)


def product_msset(parts, name=None):
    """Levelwise cartesian product; elements encoded in mixed radix (first factor most significant)."""
    parts = list(parts)
    trunc = tuple(min(t) for t in zip(*[p.trunc for p in parts]))

    def sizes_at(d):
        return [p.size(d) for p in parts]

    def size(d):
        n = int(np.prod(sizes_at(d), dtype=object))
        check_elements(n, "product level")
        return n

    def split(d):
        n = size(d)
        ns = sizes_at(d)
        rest = np.arange(n, dtype=np.int64)
        cols = []
        for b in reversed(ns):
            cols.append(rest % b)
            rest //= b
        return cols[::-1], ns

    def join(cols, ns):
        out = np.zeros(len(cols[0]) if cols else 1, dtype=np.int64)
        for c, b in zip(cols, ns):
            out = out * b + c
        return out

    def op(kind, a, d, i):
        cols, _ = split(d)
        tgt = _step(d, a, -1 if kind == "d" else 1)
        new = [(p.face if kind == "d" else p.degen)(a, d, i)[c] for p, c in zip(parts, cols)]
        return join(new, sizes_at(tgt))

    def labels(d):
        cols, _ = split(d)
        labs = [p.labels(d) for p in parts]
        return ["|".join(l[c] for l, c in zip(labs, row)) for row in zip(*cols)]

    def basepoint(d):
        return int(join([np.array([p.basepoint(d)]) for p in parts], sizes_at(d))[0])

    has_bp = all(p._basepoint is not None for p in parts)
    return MultiSimpSet(trunc, size, lambda a, d, i: op("d", a, d, i),
                        lambda a, d, i: op("s", a, d, i), labels,
                        basepoint if has_bp else None, name=name or "product")


def point_msset(trunc, name="point"):
    trunc = _deg(trunc)
    one = lambda *a: np.zeros(1, dtype=np.int64)
    return MultiSimpSet(trunc, lambda d: 1, one, one, lambda d: ["*"], lambda d: 0, name=name)


@dataclass
class MultiSimpMap:
    """Levelwise maps ``component(deg)`` from source to target."""

    source: MultiSimpSet
    target: MultiSimpSet
    component: object
    name: str | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def at(self, deg):
        deg = _deg(deg)
        if deg not in self._cache:
            self._cache[deg] = np.asarray(self.component(deg), dtype=np.int64)
        return self._cache[deg]

    @property
    def trunc(self):
        return tuple(min(a, b) for a, b in zip(self.source.trunc, self.target.trunc))

    def validate(self):
        rep = ValidationReport(subject=self.name or "map")
        A, B = self.source, self.target
        T = self.trunc
        for deg in itertools.product(*[range(L + 1) for L in T]):
            f = self.at(deg)
            if len(f) != A.size(deg) or (f.size and (f.min() < 0 or f.max() >= B.size(deg))):
                rep.add("shape", f"component at {_key(deg)} has the wrong shape", list(deg))
                continue
            for a in range(A.arity):
                for kind, i, tgt, arr in _ops(A, a, deg, T):
                    other = (B.face if kind == "d" else B.degen)(a, deg, i)
                    if not np.array_equal(self.at(tgt)[arr], other[f]):
                        rep.add(kind, f"does not commute with {kind}{a}.{i} at {_key(deg)}", list(deg))
        return rep

    def check(self):
        rep = self.validate()
        if not rep.ok:
            raise NotSimplicial(rep.violations[0].message, witness=rep.violations[0].witness)
        return self

    def fix(self, axis, n):
        def up(d):
            d = list(d)
            d.insert(axis, n)
            return tuple(d)
        return MultiSimpMap(self.source.fix(axis, n), self.target.fix(axis, n),
                            lambda d: self.at(up(d)))

    def then(self, other):
        return MultiSimpMap(self.source, other.target, lambda d: other.at(d)[self.at(d)])


def identity_msmap(s):
    return MultiSimpMap(s, s, lambda d: np.arange(s.size(d)))


# ---------------------------------------------------------------------------
# finite categories

class FinCategory:
    """Objects 0..n_obj-1, arrows with source/target, identities and the composition graph.

    ``pairs`` lists every composable pair (f, g) with tgt f = src g; ``comp``
    holds the composite "f then g" for each pair.
    """

    def __init__(self, n_obj, src, tgt, ident, pairs, comp, obj_labels=None,
                 arr_labels=None, name=None):
        self.n_obj = int(n_obj)
        self.src = np.asarray(src, dtype=np.int64)
        self.tgt = np.asarray(tgt, dtype=np.int64)
        self.ident = np.asarray(ident, dtype=np.int64)
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        comp = np.asarray(comp, dtype=np.int64)
        key = pairs[:, 0] * max(self.n_arr, 1) + pairs[:, 1]
        order = np.argsort(key, kind="stable")
        self.pairs = pairs[order]
        self.comp = comp[order]
        self._pkey = key[order]
        self.obj_labels = obj_labels
        self.arr_labels = arr_labels
        self.name = name

    @property
    def n_arr(self):
        return len(self.src)

    def olabel(self, x):
        return self.obj_labels[x] if self.obj_labels is not None else str(int(x))

    def alabel(self, f):
        return self.arr_labels[f] if self.arr_labels is not None else str(int(f))

    def compose(self, f, g, missing="raise"):
        f, g = np.broadcast_arrays(np.asarray(f, dtype=np.int64), np.asarray(g, dtype=np.int64))
        k = f.ravel() * max(self.n_arr, 1) + g.ravel()
        pos = np.searchsorted(self._pkey, k)
        pc = np.minimum(pos, max(len(self._pkey) - 1, 0))
        ok = (pos < len(self._pkey)) & (self._pkey[pc] == k) if len(self._pkey) else np.zeros(len(k), bool)
        if missing == "raise" and not ok.all():
            raise InvalidInput("arrows are not composable")
        out = np.where(ok, self.comp[pc] if len(self._pkey) else -1, -1)
        return out.reshape(f.shape)

    def validate(self):
        rep = ValidationReport(subject=self.name or "category")
        n, m = self.n_obj, self.n_arr
        if len(self.tgt) != m or len(self.ident) != n:
            rep.add("shape", "source/target/identity arrays have inconsistent lengths")
            return rep
        for nm, arr, bound in (("src", self.src, n), ("tgt", self.tgt, n), ("ident", self.ident, m)):
            if arr.size and (arr.min() < 0 or arr.max() >= bound):
                rep.add("range", f"{nm} out of range")
                return rep
        ob = np.arange(n)
        if not (np.array_equal(self.src[self.ident], ob) and np.array_equal(self.tgt[self.ident], ob)):
            rep.add("identity_ends", "an identity arrow has the wrong endpoints")
        expected = int((np.bincount(self.tgt, minlength=n) * np.bincount(self.src, minlength=n)).sum())
        if len(self.pairs) != expected or len(np.unique(self._pkey)) != len(self._pkey) or \
                not np.array_equal(self.tgt[self.pairs[:, 0]], self.src[self.pairs[:, 1]]):
            rep.add("composable_pairs", "composition is not defined on exactly the composable pairs")
            return rep
        f, g = self.pairs[:, 0], self.pairs[:, 1]
        if self.comp.size and (self.comp.min() < 0 or self.comp.max() >= m):
            rep.add("range", "composite out of range")
            return rep
        if not (np.array_equal(self.src[self.comp], self.src[f]) and np.array_equal(self.tgt[self.comp], self.tgt[g])):
            rep.add("composite_ends", "a composite has the wrong endpoints")
        ar = np.arange(m)
        if not np.array_equal(self.compose(self.ident[self.src], ar), ar):
            rep.add("left_unit", "identity is not a left unit")
        if not np.array_equal(self.compose(ar, self.ident[self.tgt]), ar):
            rep.add("right_unit", "identity is not a right unit")
        # triples (f, g, h): join pairs (f, g) with pairs (g, h) on g
        out_pairs = np.bincount(self.pairs[:, 0], minlength=m)
        total = int(out_pairs[g].sum())
        check_elements(total, "composable triples")
        li = np.repeat(np.arange(len(g)), out_pairs[g])
        starts = np.searchsorted(self.pairs[:, 0], g)
        offs = np.arange(total) - np.repeat(np.cumsum(out_pairs[g]) - out_pairs[g], out_pairs[g])
        rj = np.repeat(starts, out_pairs[g]) + offs
        F, Gc, H = f[li], self.comp[li], self.pairs[rj, 1]
        left = self.compose(Gc, H)                     # (fg)h
        right = self.compose(F, self.comp[rj])          # f(gh)
        bad = np.nonzero(left != right)[0]
        if len(bad):
            k = bad[0]
            rep.add("associativity", "composition is not associative",
                    [int(F[k]), int(self.pairs[li[k], 1]), int(H[k])])
        return rep

    @cached_property
    def inverses(self):
        """inverse arrow of each arrow, -1 where none exists."""
        f, g = self.pairs[:, 0], self.pairs[:, 1]
        right_inv = self.comp == self.ident[self.src[f]]
        back = self.compose(g, f, missing="none")
        both = right_inv & (back == self.ident[self.tgt[f]])
        inv = np.full(self.n_arr, -1, dtype=np.int64)
        inv[f[both]] = g[both]
        return inv

    def is_groupoid(self):
        return bool((self.inverses >= 0).all())

    @cached_property
    def iso_classes(self):
        """(class index per object, minimal representative per class), classes ordered by representative."""
        lab = np.arange(self.n_obj)
        inv = self.inverses >= 0
        s, t = self.src[inv], self.tgt[inv]
        while True:
            m = np.minimum(lab[s], lab[t])
            new = lab.copy()
            np.minimum.at(new, s, m)
            np.minimum.at(new, t, m)
            new = new[new]
            if np.array_equal(new, lab):
                break
            lab = new
        reps, cls = np.unique(lab, return_inverse=True)
        return cls.astype(np.int64), reps.astype(np.int64)

    def hom(self, x, y):
        return np.nonzero((self.src == x) & (self.tgt == y))[0]

    def full_subcategory(self, objs, name=None):
        objs = np.asarray(sorted(set(int(o) for o in objs)), dtype=np.int64)
        pos = np.full(self.n_obj, -1, dtype=np.int64)
        pos[objs] = np.arange(len(objs))
        keep = np.nonzero((pos[self.src] >= 0) & (pos[self.tgt] >= 0))[0]
        apos = np.full(self.n_arr, -1, dtype=np.int64)
        apos[keep] = np.arange(len(keep))
        pk = (apos[self.pairs[:, 0]] >= 0) & (apos[self.pairs[:, 1]] >= 0)
        pairs = apos[self.pairs[pk]]
        comp = apos[self.comp[pk]]
        sub = FinCategory(len(objs), pos[self.src[keep]], pos[self.tgt[keep]], apos[self.ident[objs]],
                          pairs, comp,
                          [self.olabel(o) for o in objs] if self.obj_labels is not None else None,
                          [self.alabel(a) for a in keep] if self.arr_labels is not None else None,
                          name=name)
        sub.object_map = objs
        sub.arrow_map = keep
        return sub

    def automorphism_group(self, x, name=None):
        arrs = self.hom(x, x)
        k = len(arrs)
        check_elements(k * k, "automorphism table")
        pos = {int(a): i for i, a in enumerate(arrs)}
        prod = self.compose(np.repeat(arrs, k), np.tile(arrs, k))
        table = np.array([pos[int(c)] for c in prod], dtype=np.int64).reshape(k, k) if k else np.zeros((0, 0))
        g = FinGroup([self.alabel(a) for a in arrs], table, identity=pos[int(self.ident[x])], name=name)
        g.arrows = arrs
        return g

    def __repr__(self):
        return f"<FinCategory {self.name or ''} objects={self.n_obj} arrows={self.n_arr}>"


def category_from_tables(objects, arrows, src, tgt, ident, compose, name=None):
    """Build a category from a dense composition table (``compose[f][g]`` or -1)."""
    src, tgt = np.asarray(src), np.asarray(tgt)
    pairs, comp = [], []
    for f in range(len(arrows)):
        for g in range(len(arrows)):
            if tgt[f] == src[g]:
                pairs.append((f, g))
                comp.append(compose[f][g])
    return FinCategory(len(objects), src, tgt, ident, np.array(pairs).reshape(-1, 2), comp,
                       [str(o) for o in objects], [str(a) for a in arrows], name=name)


def groupoid_of_group(g, name=None):
    """The one-object groupoid with arrows the elements of g."""
    n = g.order
    ar = np.arange(n)
    pairs = np.stack([np.repeat(ar, n), np.tile(ar, n)], axis=1)
    comp = g.mul(pairs[:, 0], pairs[:, 1])
    return FinCategory(1, np.zeros(n), np.zeros(n), [g.identity], pairs, comp, ["*"],
                       [g.label(i) for i in range(n)], name=name or g.name)


def codiscrete_groupoid(objects, name=None):
    """The contractible groupoid: exactly one arrow between any two objects."""
    objects = [str(o) for o in objects]
    n = len(objects)
    src = np.repeat(np.arange(n), n)
    tgt = np.tile(np.arange(n), n)
    arr = lambda x, y: x * n + y
    m = n * n
    f = np.repeat(np.arange(m), n)
    w = np.tile(np.arange(n), m)
    g = tgt[f] * n + w
    comp = src[f] * n + w
    return FinCategory(n, src, tgt, [arr(x, x) for x in range(n)], np.stack([f, g], 1), comp,
                       objects, [f"{objects[x]}->{objects[y]}" for x, y in zip(src, tgt)], name=name)


def discrete_category(objects, name=None):
    objects = [str(o) for o in objects]
    n = len(objects)
    ar = np.arange(n)
    return FinCategory(n, ar, ar, ar, np.stack([ar, ar], 1), ar, objects,
                       [f"1_{o}" for o in objects], name=name)


@dataclass
class CatFunctor:
    source: FinCategory
    target: FinCategory
    f0: np.ndarray
    f1: np.ndarray
    name: str | None = None

    def __post_init__(self):
        self.f0 = np.asarray(self.f0, dtype=np.int64)
        self.f1 = np.asarray(self.f1, dtype=np.int64)

    def validate(self):
        rep = ValidationReport(subject=self.name or "functor")
        A, B = self.source, self.target
        f0, f1 = self.f0, self.f1
        if len(f0) != A.n_obj or len(f1) != A.n_arr or (f0.size and (f0.min() < 0 or f0.max() >= B.n_obj)) \
                or (f1.size and (f1.min() < 0 or f1.max() >= B.n_arr)):
            rep.add("shape", "object or arrow map has the wrong shape")
            return rep
        if not (np.array_equal(B.src[f1], f0[A.src]) and np.array_equal(B.tgt[f1], f0[A.tgt])):
            rep.add("ends", "arrow map does not respect sources and targets")
            return rep
        if not np.array_equal(f1[A.ident], B.ident[f0]):
            rep.add("identities", "identities are not preserved")
        lhs = f1[A.comp]
        rhs = B.compose(f1[A.pairs[:, 0]], f1[A.pairs[:, 1]], missing="none")
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            rep.add("composition", "composition is not preserved", [int(x) for x in A.pairs[bad[0]]])
        return rep

    def check(self):
        rep = self.validate()
        if not rep.ok:
            raise NotAFunctor(rep.violations[0].message, violation=rep.violations[0].code)
        return self


def equivalence_report(F, check=True):
    """Which of faithful / full / essentially surjective hold (exhaustive)."""
    if check:
        F.check()
    A, B = F.source, F.target
    nA = max(A.n_obj, 1)
    nB = max(B.n_obj, 1)
    # faithful: (src, tgt, image) distinct across arrows
    key = (A.src * nA + A.tgt) * max(B.n_arr, 1) + F.f1
    faithful = len(np.unique(key)) == A.n_arr
    # full: per source hom-set, image size equals target hom-set size
    homB = np.bincount(B.src * nB + B.tgt, minlength=nB * nB)
    img_count = np.bincount(np.unique(key) // max(B.n_arr, 1), minlength=nA * nA)
    x, y = np.divmod(np.arange(nA * nA), nA)
    need = homB[F.f0[x] * nB + F.f0[y]] if A.n_obj else np.zeros(0, dtype=np.int64)
    full = bool((img_count[: A.n_obj * A.n_obj] >= need).all()) if A.n_obj else True
    cls, _ = B.iso_classes
    hit = np.zeros(len(np.unique(cls)) if B.n_obj else 0, dtype=bool)
    if A.n_obj:
        hit[cls[F.f0]] = True
    ess = bool(hit.all())
    return {"faithful": bool(faithful), "full": bool(full), "essentially_surjective": ess}


def equivalence_of_categories(F, check=True):
    r = equivalence_report(F, check)
    return r["faithful"] and r["full"] and r["essentially_surjective"]


# ---------------------------------------------------------------------------
# nerves of categories

def composable_strings(c, n):
    if n == 0:
        return np.arange(c.n_obj)[:, None]
    S = np.arange(c.n_arr)[:, None]
    order = np.argsort(c.src, kind="stable")
    srt = c.src[order]
    for _ in range(n - 1):
        last = c.tgt[S[:, -1]]
        lo = np.searchsorted(srt, last, "left")
        hi = np.searchsorted(srt, last, "right")
        cnt = hi - lo
        total = int(cnt.sum())
        check_elements(total * (S.shape[1] + 1), "nerve level")
        li = np.repeat(np.arange(len(S)), cnt)
        offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        nxt = order[np.repeat(lo, cnt) + offs]
        S = np.concatenate([S[li], nxt[:, None]], axis=1)
    return S


def nerve_of_category(c, L=3, name=None):
    """The nerve as a 1-simplicial set; level n holds composable n-strings."""
    strings = {}
    index = {}

    def lv(n):
        if n not in strings:
            strings[n] = composable_strings(c, n)
            index[n] = RowIndex(strings[n])
        return strings[n]

    def size(d):
        return len(lv(d[0]))

    def face(a, d, i):
        n = d[0]
        S = lv(n)
        if n == 1:
            return c.tgt[S[:, 0]] if i == 0 else c.src[S[:, 0]]
        if i == 0:
            new = S[:, 1:]
        elif i == n:
            new = S[:, :-1]
        else:
            mid = c.compose(S[:, i - 1], S[:, i])
            new = np.concatenate([S[:, :i - 1], mid[:, None], S[:, i + 1:]], axis=1)
        lv(n - 1)
        return index[n - 1].find(new)

    def degen(a, d, i):
        n = d[0]
        S = lv(n)
        if n == 0:
            return c.ident[S[:, 0]]
        obj = c.src[S[:, 0]] if i == 0 else c.tgt[S[:, i - 1]]
        new = np.concatenate([S[:, :i], c.ident[obj][:, None], S[:, i:]], axis=1)
        lv(n + 1)
        return index[n + 1].find(new)

    def labels(d):
        n = d[0]
        S = lv(n)
        if n == 0:
            return [c.olabel(x) for x in S[:, 0]]
        return ["|".join(c.alabel(f) for f in row) for row in S]

    s = MultiSimpSet((L,), size, face, degen, labels, name=name or f"nerve({c.name})")
    s.category = c
    return s


def _edges(s, n):
    face = lambda m, i: s.face(0, (m,), i)
    return [edge_map(face, n, a) for a in range(n)]


def segal_defect(s, n):
    """None if the level-n Segal map of a 1-simplicial set is bijective, else a reason."""
    src, tgt = s.face(0, (1,), 1), s.face(0, (1,), 0)
    E = _edges(s, n)
    for a in range(n - 1):
        if not np.array_equal(tgt[E[a]], src[E[a + 1]]):
            return "edges of a simplex are not composable"
    m1 = s.size((1,))
    n0 = s.size((0,))
    count = np.ones(m1, dtype=object)
    for _ in range(n - 1):
        into = np.zeros(n0, dtype=object)
        np.add.at(into, tgt, count)
        count = into[src]
    strings = int(count.sum()) if m1 else 0
    if strings != s.size((n,)):
        return f"{s.size((n,))} simplices but {strings} composable strings"
    tup = np.stack(E, axis=1) if n else np.zeros((s.size((n,)), 0))
    if len(np.unique(row_keys(tup, 4))) != len(tup):
        return "two simplices share their edges"
    return None


def category_of_nerve(s, check_levels=None, name=None):
    """The category whose nerve is ``s`` (an arity-1 set); raises NotA1Nerve."""
    if s.arity != 1:
        raise InvalidInput("category_of_nerve needs a 1-simplicial set")
    L = s.trunc[0]
    if L < 2:
        raise TruncationTooShallow("a 1-nerve needs level 2 to define composition")
    for n in range(2, min(L, 3 if check_levels is None else check_levels) + 1):
        why = segal_defect(s, n)
        if why is not None:
            raise NotA1Nerve(n, f"Segal map at level {n} is not bijective: {why}")
    E = _edges(s, 2)
    c = FinCategory(s.size((0,)), s.face(0, (1,), 1), s.face(0, (1,), 0), s.degen(0, (0,), 0),
                    np.stack(E, axis=1), s.face(0, (2,), 1), s.labels((0,)), s.labels((1,)),
                    name=name or s.name)
    return c


def is_1_nerve(s, levels=None):
    try:
        category_of_nerve(s, levels)
    except NotA1Nerve:
        return False
    return True


# ---------------------------------------------------------------------------
# the functor T

def _line_category(s, prefix):
    key = ("cat", tuple(prefix))
    if key not in s._cache:
        s._cache[key] = category_of_nerve(s.line(prefix), name=f"{s.name}{list(prefix)}")
    return s._cache[key]


def t_functor(s, name=None):
    """Collapse the last axis to isomorphism classes of objects.

    Each class is labelled by its least representative, so the result is
    deterministic.  Raises NotA1Nerve if a line is not a nerve.
    """
    if s.arity < 2:
        raise InvalidInput("T lowers the arity, which must be at least 2")
    trunc = s.trunc[:-1]

    def classes(d):
        return _line_category(s, d).iso_classes

    def size(d):
        return len(classes(d)[1])

    def op(kind, a, d, i):
        tgt = _step(d, a, -1 if kind == "d" else 1)
        arr = (s.face if kind == "d" else s.degen)(a, d + (0,), i)
        cls_t, _ = classes(tgt)
        cls_s, reps = classes(d)
        out = cls_t[arr[reps]]
        if not np.array_equal(cls_t[arr], out[cls_s]):
            raise NotSimplicial(f"{kind}{a}.{i} at {_key(d)} does not respect isomorphism classes")
        return out

    def labels(d):
        _, reps = classes(d)
        lab = s.labels(d + (0,))
        return [lab[r] for r in reps]

    def basepoint(d):
        b = s.basepoint(d + (0,))
        return int(classes(d)[0][b])

    t = MultiSimpSet(trunc, size, lambda a, d, i: op("d", a, d, i), lambda a, d, i: op("s", a, d, i),
                     labels, basepoint if s._basepoint is not None else None,
                     name=name or f"T({s.name})")
    t.collapsed = s
    return t


def t_map(f, source_t=None, target_t=None):
    """The map induced by f on T."""
    A = source_t or t_functor(f.source)
    B = target_t or t_functor(f.target)

    def comp(d):
        _, reps = _line_category(f.source, d).iso_classes
        cls_b, _ = _line_category(f.target, d).iso_classes
        return cls_b[f.at(d + (0,))[reps]]
    return MultiSimpMap(A, B, comp)


def line_functor(f, prefix):
    """The functor induced by f on the categories of the lines at ``prefix``."""
    A = _line_category(f.source, prefix)
    B = _line_category(f.target, prefix)
    p = tuple(prefix)
    return CatFunctor(A, B, f.at(p + (0,)), f.at(p + (1,)))


# ---------------------------------------------------------------------------
# 2-nerves and weak 2-groupoids

def _is_constant_row(s, prefix):
    """Every operator on the line at ``prefix`` is the identity of one set."""
    line = s.line(prefix)
    L = line.trunc[0]
    n = line.size((0,))
    for m in range(L + 1):
        if line.size((m,)) != n:
            return False
        ar = np.arange(n)
        for i in range(m + 1):
            if m >= 1 and not np.array_equal(line.face(0, (m,), i), ar):
                return False
            if m < L and not np.array_equal(line.degen(0, (m,), i), ar):
                return False
    return True


def segal_target_2(s, n, name=None):
    """Fibre product X(1,-) x_{X(0,-)} ... x_{X(0,-)} X(1,-) (n factors) as a 1-simplicial set."""
    Lq = s.trunc[1]
    tables = {}

    def rows(q):
        if q not in tables:
            src = s.face(0, (1, q), 1)
            tgt = s.face(0, (1, q), 0)
            S = np.arange(s.size((1, q)))[:, None]
            order = np.argsort(src, kind="stable")
            srt = src[order]
            for _ in range(n - 1):
                last = tgt[S[:, -1]]
                lo = np.searchsorted(srt, last, "left")
                hi = np.searchsorted(srt, last, "right")
                cnt = hi - lo
                total = int(cnt.sum())
                check_elements(total * (S.shape[1] + 1), "Segal target level")
                li = np.repeat(np.arange(len(S)), cnt)
                offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
                S = np.concatenate([S[li], order[np.repeat(lo, cnt) + offs][:, None]], axis=1)
            tables[q] = (S, RowIndex(S))
        return tables[q]

    def op(kind, a, d, i):
        q = d[0]
        S, _ = rows(q)
        f = (s.face if kind == "d" else s.degen)(1, (1, q), i)
        q2 = q - 1 if kind == "d" else q + 1
        return rows(q2)[1].find(f[S])

    def labels(d):
        S, _ = rows(d[0])
        lab = s.labels((1, d[0]))
        return ["|".join(lab[c] for c in row) for row in S]

    t = MultiSimpSet((Lq,), lambda d: len(rows(d[0])[0]), lambda a, d, i: op("d", a, d, i),
                     lambda a, d, i: op("s", a, d, i), labels, name=name or f"segal target {n}")
    t.rows = rows
    return t


def segal_map_2(s, n):
    """MultiSimpMap from the row X(n,-) to its Segal target."""
    row = s.line((n,))
    tgt = segal_target_2(s, n)

    def comp(d):
        q = d[0]
        face = lambda m, i: s.face(0, (m, q), i)
        E = np.stack([edge_map(face, n, a) for a in range(n)], axis=1)
        return tgt.rows(q)[1].find(E, missing="none")
    return MultiSimpMap(row, tgt, comp)


def is_weak_2_groupoid(s):
    """Clause report: rows groupoid nerves, row 0 constant, Segal maps equivalences, T a groupoid."""
    rep = ClauseReport(subject=s.name or "2-nerve")
    if s.arity != 2:
        rep.record("arity", False, "a 2-nerve has two simplicial directions")
        return rep
    Lp, Lq = s.trunc
    if Lp < 2 or Lq < 2:
        rep.record("truncation", False, "levels up to 2 are needed in both directions")
        return rep
    why = None
    for p in range(Lp + 1):
        try:
            c = _line_category(s, (p,))
        except NotA1Nerve as exc:
            why = f"row {p}: {exc}"
            break
        v = c.validate()
        if not v.ok:
            why = f"row {p}: {v.violations[0].message}"
            break
        if not c.is_groupoid():
            why = f"row {p} has a non-invertible arrow"
            break
    if not rep.record("rows_are_groupoid_nerves", why is None, why):
        return rep
    ok0 = _is_constant_row(s, (0,))
    if not rep.record("row0_constant", ok0, None if ok0 else "row 0 is not constant"):
        return rep
    why = None
    for n in range(2, Lp + 1):
        f = segal_map_2(s, n)
        if (f.at((0,)) < 0).any() or (f.at((1,)) < 0).any():
            why = f"Segal map {n} leaves its fibre product"
            break
        F = CatFunctor(_line_category(s, (n,)), category_of_nerve(f.target), f.at((0,)), f.at((1,)))
        if not F.validate().ok or not equivalence_of_categories(F, check=False):
            why = f"Segal map {n} is not an equivalence of categories"
            break
    if not rep.record("segal_equivalences", why is None, why):
        return rep
    why = None
    try:
        T = t_functor(s)
        cT = category_of_nerve(T)
        v = cT.validate()
        if not v.ok:
            why = v.violations[0].message
        elif not cT.is_groupoid():
            why = "T has a non-invertible arrow"
    except (NotA1Nerve, NotSimplicial) as exc:
        why = str(exc)
    rep.record("T_groupoid", why is None, why)
    return rep


def is_strict_2_groupoid(s):
    """A weak 2-groupoid whose Segal maps are bijective at every level."""
    rep = is_weak_2_groupoid(s)
    if rep.ok:
        why = None
        for n in range(2, s.trunc[0] + 1):
            f = segal_map_2(s, n)
            for q in range(s.trunc[1] + 1):
                a = f.at((q,))
                if (a < 0).any() or not _bijective(a, f.target.size((q,))):
                    why = f"Segal map {n} is not bijective at level {q}"
                    break
            if why:
                break
        rep.record("segal_bijective", why is None, why)
    return rep


def hom_category(s, x, y):
    """Full subcategory of the row-1 category on objects with source x and target y."""
    c = _line_category(s, (1,))
    src = s.face(0, (1, 0), 1)
    tgt = s.face(0, (1, 0), 0)
    objs = np.nonzero((src == x) & (tgt == y))[0]
    return c.full_subcategory(objs, name=f"hom({x},{y})")


def is_external_equivalence_2(f, check=True):
    """Every induced hom-functor and the induced map on T are equivalences of categories."""
    return external_equivalence_report(f, check)["external_equivalence"]


def external_equivalence_report(f, check=True):
    if check:
        f.check()
    A, B = f.source, f.target
    f10 = f.at((1, 0))
    f11 = f.at((1, 1))
    f00 = f.at((0, 0))
    failing = None
    for x in range(A.size((0, 0))):
        for y in range(A.size((0, 0))):
            h = hom_category(A, x, y)
            k = hom_category(B, int(f00[x]), int(f00[y]))
            pos_o = np.full(B.size((1, 0)), -1, dtype=np.int64)
            pos_o[k.object_map] = np.arange(len(k.object_map))
            pos_a = np.full(B.size((1, 1)), -1, dtype=np.int64)
            pos_a[k.arrow_map] = np.arange(len(k.arrow_map))
            F = CatFunctor(h, k, pos_o[f10[h.object_map]], pos_a[f11[h.arrow_map]])
            r = equivalence_report(F)
            if not all(r.values()):
                failing = {"hom": [x, y], **r}
                break
        if failing:
            break
    TA, TB = t_functor(A), t_functor(B)
    tf = t_map(f, TA, TB)
    G = CatFunctor(category_of_nerve(TA), category_of_nerve(TB), tf.at((0,)), tf.at((1,)))
    tr = equivalence_report(G)
    ok = failing is None and all(tr.values())
    return {"external_equivalence": bool(ok), "hom_failure": failing, "T": tr}


# ---------------------------------------------------------------------------
# group-level structures and the collapsed homotopy formula

def underlying_set(obj, name=None):
    """U of a truncated simplicial or bisimplicial group, remembering the groups."""
    if hasattr(obj, "row") and hasattr(obj, "column"):       # bisimplicial
        trunc = obj.trunc
        grp = lambda d: obj.level(*d)
        face = lambda a, d, i: obj.face(a, d[0], d[1], i).map
        degen = lambda a, d, i: obj.degen(a, d[0], d[1], i).map
    else:
        trunc = (obj.trunc,)
        grp = lambda d: obj.level(d[0])
        face = lambda a, d, i: obj.face(d[0], i).map
        degen = lambda a, d, i: obj.degen(d[0], i).map

    def labels(d):
        g = grp(d)
        return [g.label(k) for k in range(g.order)]

    s = MultiSimpSet(trunc, lambda d: grp(d).order, face, degen, labels,
                     lambda d: grp(d).identity, name=name or f"U({obj.name})",
                     provenance={"kind": "groups", "object": obj})
    s.group_at = grp
    return s


def levelwise_nerve(inner, Lp, mul, unit, name=None, provenance=None):
    """Prepend a bar-construction axis: level (p, d) is inner(d)^p, faces multiply neighbours.

    ``mul(d, a, b)`` multiplies index arrays and ``unit(d)`` is the unit at d;
    both must commute with the inner operators.
    """
    trunc = (Lp,) + inner.trunc

    def size(d):
        p, rest = d[0], d[1:]
        n = inner.size(rest) ** p
        check_elements(n * max(p, 1), "bar level")
        return n

    def digits(d):
        p, rest = d[0], d[1:]
        return _digits(np.arange(size(d)), inner.size(rest), p)

    def face(a, d, i):
        p, rest = d[0], d[1:]
        D = digits(d)
        if a == 0:
            if i == 0:
                new = D[:, 1:]
            elif i == p:
                new = D[:, :-1]
            else:
                m = mul(rest, D[:, i - 1], D[:, i])
                new = np.concatenate([D[:, :i - 1], m[:, None], D[:, i + 1:]], axis=1)
            return _encode(new, inner.size(rest))
        f = inner.face(a - 1, rest, i)
        return _encode(f[D], inner.size(_step(rest, a - 1, -1)))

    def degen(a, d, i):
        rest = d[1:]
        D = digits(d)
        if a == 0:
            u = np.full((len(D), 1), unit(rest), dtype=np.int64)
            return _encode(np.concatenate([D[:, :i], u, D[:, i:]], axis=1), inner.size(rest))
        f = inner.degen(a - 1, rest, i)
        return _encode(f[D], inner.size(_step(rest, a - 1, 1)))

    def labels(d):
        p, rest = d[0], d[1:]
        if p == 0:
            return ["*"]
        lab = inner.labels(rest)
        return ["|".join(lab[c] for c in row) for row in digits(d)]

    def basepoint(d):
        p, rest = d[0], d[1:]
        return int(_encode(np.full((1, p), unit(rest), dtype=np.int64), inner.size(rest))[0])

    s = MultiSimpSet(trunc, size, face, degen, labels, basepoint, name=name, provenance=provenance)
    s.inner = inner
    s.mul = mul
    s.unit = unit
    return s


def levelwise_nerve_map(f_inner, source, target):
    """Apply an inner map on every factor of the bar levels."""
    def comp(d):
        p, rest = d[0], d[1:]
        D = _digits(np.arange(source.size(d)), source.inner.size(rest), p)
        return _encode(f_inner.at(rest)[D], target.inner.size(rest))
    return MultiSimpMap(source, target, comp)


def _group_levelwise_nerve(obj, Lp, name, oracle=None):
    U = underlying_set(obj)
    return levelwise_nerve(U, Lp, lambda d, a, b: U.group_at(d).mul(a, b),
                           lambda d: U.group_at(d).identity, name=name,
                           provenance={"kind": "bar", "object": oracle or obj})


def nerve_of_nerve(x, L=2, name=None, oracle_trunc=5):
    """The 2-nerve of a cat1-group: level (p, q) is N_q^p where N is the group-level nerve.

    It is the nerve of the one-object strict 2-groupoid whose 1-cells are
    the objects of x and whose 2-cells are its arrows.  The recorded origin
    keeps N up to ``oracle_trunc`` so higher homotopy can be inspected.
    """
    from .catgp import cat1_to_internal, nerve_of
    N = nerve_of(cat1_to_internal(x), max(L, oracle_trunc))
    return _group_levelwise_nerve(N.truncated(L), L, name or f"NN({x.name})", oracle=N)


def nerve_of_nerve_map(f, source=None, target=None, L=2):
    """Set-level map between nerve-of-nerve objects induced by a cat1 morphism."""
    from .catgp import functor_of_morphism, nerve_map
    A = source or nerve_of_nerve(f.source, L)
    B = target or nerve_of_nerve(f.target, L)
    F = nerve_map(functor_of_morphism(f), L)
    inner = MultiSimpMap(A.inner, B.inner, lambda d: F.at(d[0]).map)
    return levelwise_nerve_map(inner, A, B)


def group_level_homotopy(s, upto=2, with_shift=True):
    """Homotopy of the diagonal computed on the group-level object that s came from.

    For U of a bisimplicial group this is the Moore homotopy of its diagonal;
    for the levelwise nerve of a simplicial group N the diagonal is one
    delooping of N, so pi_0 = 1 and pi_k = Moore pi_{k-1}(N).
    """
    prov = s.provenance
    if not prov:
        raise NotGroupLevel("no group-level origin recorded for this object")
    obj = prov["object"]
    if prov["kind"] == "groups":
        diag = diagonal_of(obj)
        return [moore_homotopy(diag, k) for k in range(upto + 1)]
    if prov["kind"] == "bar" and not hasattr(obj, "row"):
        return [trivial_group()] + [moore_homotopy(obj, k - 1) for k in range(1, upto + 1)]
    raise NotGroupLevel("group-level diagonal is only available for groups and bars of simplicial groups")


@dataclass
class TwoGroupoidHomotopy:
    pi0: list
    pi1: FinGroup
    pi2: FinGroup
    categories: dict = field(default_factory=dict, repr=False)

    def orders(self):
        return (len(self.pi0), self.pi1.order, self.pi2.order)

    def as_dict(self):
        from .groups import describe
        return {"pi0": list(self.pi0), "pi1": describe(self.pi1), "pi2": describe(self.pi2)}


def collapsed_homotopy(s, check=False):
    """(components of T, automorphisms in T, automorphisms in row 1) at the basepoint.

    For a weak 2-groupoid of group-level origin these compute pi_0, pi_1
    and pi_2 of its diagonal.  Objects without group-level origin raise
    NotGroupLevel.
    """
    if not s.provenance or s._basepoint is None:
        raise NotGroupLevel("the collapsed formula needs a group-level weak 2-groupoid")
    if check:
        rep = is_weak_2_groupoid(s)
        if not rep.ok:
            raise NotGroupLevel(f"not a weak 2-groupoid: {rep.failing}")
    T = t_functor(s)
    cT = category_of_nerve(T)
    cls, reps = cT.iso_classes
    lab = T.labels((0,))
    pi0 = [lab[r] for r in reps]
    bT = T.basepoint((0,))
    pi1 = cT.automorphism_group(bT, name="pi1")
    c1 = _line_category(s, (1,))
    pi2 = c1.automorphism_group(s.basepoint((1, 0)), name="pi2")
    return TwoGroupoidHomotopy(pi0, pi1, pi2, {"T": cT, "row1": c1, "T_set": T})


def _bijective(m, n_target):
    return len(m) == n_target and len(np.unique(m)) == n_target


def external_equivalence_criteria(f, check=True):
    """Compare the definitional verdict with the homotopy-group verdict for f.

    The homotopy verdict asks that f induce a bijection on components of T
    and isomorphisms on automorphisms of the basepoint in T and in the row-1
    category.
    """
    rep = ClauseReport(subject=f.name or "map of weak 2-groupoids")
    ext = external_equivalence_report(f, check)
    ha = collapsed_homotopy(f.source)
    hb = collapsed_homotopy(f.target)
    TA, TB = ha.categories["T_set"], hb.categories["T_set"]
    tf = t_map(f, TA, TB)
    cA, cB = ha.categories["T"], hb.categories["T"]
    clsA, repsA = cA.iso_classes
    clsB, _ = cB.iso_classes
    comp_map = clsB[tf.at((0,))[repsA]]
    pi0_ok = _bijective(comp_map, len(np.unique(clsB)))
    bpA, bpB = TA.basepoint((0,)), TB.basepoint((0,))
    if int(tf.at((0,))[bpA]) != bpB or int(f.at((1, 0))[f.source.basepoint((1, 0))]) != f.target.basepoint((1, 0)):
        raise NotGroupLevel("the map does not preserve basepoints")
    pos1 = {int(a): i for i, a in enumerate(hb.pi1.arrows)}
    m1 = np.array([pos1.get(int(a), -1) for a in tf.at((1,))[ha.pi1.arrows]], dtype=np.int64)
    pos2 = {int(a): i for i, a in enumerate(hb.pi2.arrows)}
    m2 = np.array([pos2.get(int(a), -1) for a in f.at((1, 1))[ha.pi2.arrows]], dtype=np.int64)
    pi1_ok = (m1 >= 0).all() and _bijective(m1, hb.pi1.order)
    pi2_ok = (m2 >= 0).all() and _bijective(m2, hb.pi2.order)
    pi_verdict = bool(pi0_ok and pi1_ok and pi2_ok)
    rep.extras.update({"definitional": ext["external_equivalence"], "pi_criterion": pi_verdict,
                       "pi0_bijective": bool(pi0_ok), "pi1_iso": bool(pi1_ok), "pi2_iso": bool(pi2_ok),
                       "details": {"hom_failure": ext["hom_failure"], "T": ext["T"]}})
    rep.record("verdicts_agree", ext["external_equivalence"] == pi_verdict)
    return rep


# ---------------------------------------------------------------------------
# 3-nerves: the classes H and K

def set_nerve_of_internal_2nerve(nv, L=2, name=None):
    """Level (p, q, r) is the p-fold power of the (q, r) group; p=0 is a point."""
    b = getattr(nv, "b", nv)
    L = (L, L, L) if isinstance(L, int) else _deg(L)
    psi = b.truncated((L[1], L[2]))
    return _group_levelwise_nerve(psi, L[0], name or f"N({getattr(nv, 'name', None) or b.name})")


def outer_segal_defect(s, m, deg):
    """None if X(m, deg) -> X(1, deg)^m is bijective (X(0, -) a point)."""
    face = lambda k, i: s.face(0, (k,) + deg, i)
    E = np.stack([edge_map(face, m, a) for a in range(m)], axis=1)
    n1 = s.size((1,) + deg)
    if s.size((m,) + deg) != n1 ** m:
        return f"level {m},{_key(deg)} has {s.size((m,) + deg)} elements, expected {n1}^{m}"
    code = _encode(E, n1)
    if len(np.unique(code)) != len(code):
        return f"Segal map at {m},{_key(deg)} is not injective"
    return None


def _level0_point(s):
    for deg in itertools.product(*[range(L + 1) for L in s.trunc[1:]]):
        if s.size((0,) + deg) != 1:
            return f"level 0,{_key(deg)} has {s.size((0,) + deg)} elements"
    return None


def _common_3(s, rep):
    if s.arity != 3:
        rep.record("arity", False, "a 3-nerve has three simplicial directions")
        return False
    if min(s.trunc) < 2:
        rep.record("truncation", False, "levels up to 2 are needed in every direction")
        return False
    why = _level0_point(s)
    return rep.record("level0_point", why is None, why)


def _t2_groupoid(s, rep):
    why = None
    try:
        T2 = t_functor(t_functor(s))
        c = category_of_nerve(T2)
        v = c.validate()
        if not v.ok:
            why = v.violations[0].message
        elif not c.is_groupoid():
            why = "T^2 has a non-invertible arrow"
    except (NotA1Nerve, NotSimplicial) as exc:
        why = str(exc)
    return rep.record("T2_groupoid", why is None, why)


def is_h(s):
    """Level 0 a point, outer Segal maps bijective, slices weak 2-groupoids, T^2 a groupoid."""
    rep = ClauseReport(subject=s.name or "3-nerve")
    if not _common_3(s, rep):
        return rep
    why = None
    for m in range(2, s.trunc[0] + 1):
        for deg in itertools.product(*[range(L + 1) for L in s.trunc[1:]]):
            why = outer_segal_defect(s, m, deg)
            if why:
                break
        if why:
            break
    if not rep.record("outer_segal_bijective", why is None, why):
        return rep
    why = None
    for n in range(s.trunc[0] + 1):
        r = is_weak_2_groupoid(s.fix(0, n))
        if not r.ok:
            why = f"slice {n}: {r.failing}"
            break
    if not rep.record("slices_weak_2_groupoids", why is None, why):
        return rep
    _t2_groupoid(s, rep)
    return rep


def outer_segal_map(s, m):
    """X(m, -, -) -> X(1, -, -)^m as a map of 2-simplicial sets."""
    src = s.fix(0, m)
    tgt = product_msset([s.fix(0, 1)] * m, name=f"{s.name}[1]^{m}")

    def comp(deg):
        face = lambda k, i: s.face(0, (k,) + deg, i)
        E = np.stack([edge_map(face, m, a) for a in range(m)], axis=1)
        return _encode(E, s.size((1,) + deg))
    return MultiSimpMap(src, tgt, comp)


def is_k(s):
    """Level 0 a point, every slice a strict 2-groupoid, outer Segal maps external equivalences, T^2 a groupoid."""
    rep = ClauseReport(subject=s.name or "3-nerve")
    if not _common_3(s, rep):
        return rep
    why = None
    for n in range(s.trunc[0] + 1):
        sl = s.fix(0, n)
        r = is_weak_2_groupoid(sl)
        if not r.ok:
            why = f"slice {n}: {r.failing}"
            break
        for m in range(2, sl.trunc[0] + 1):
            f = segal_map_2(sl, m)
            for q in range(sl.trunc[1] + 1):
                a = f.at((q,))
                if (a < 0).any() or not _bijective(a, f.target.size((q,))):
                    why = f"slice {n}: inner Segal map {m} is not bijective at level {q}"
                    break
            if why:
                break
        if why:
            break
    if not rep.record("slices_strict", why is None, why):
        return rep
    why = None
    for m in range(2, s.trunc[0] + 1):
        f = outer_segal_map(s, m)
        if not is_external_equivalence_2(f):
            why = f"outer Segal map {m} is not an external equivalence"
            break
    if not rep.record("outer_segal_external_equivalences", why is None, why):
        return rep
    _t2_groupoid(s, rep)
    return rep


def t2_product_formula(nv, s=None, L=2):
    """Check that T^2 of the set-level nerve is the p-fold power of pi0 pi0 at each level."""
    b = getattr(nv, "b", nv)
    s = s or set_nerve_of_internal_2nerve(nv, L)
    U = underlying_set(b.truncated((s.trunc[1], s.trunc[2])))
    TU = t_functor(U)
    c = category_of_nerve(TU)
    _, reps = c.iso_classes
    lab = TU.labels((0,))
    base = [lab[r] for r in reps]
    T2 = t_functor(t_functor(s))
    out = {"pi0pi0": base, "levels": {}}
    ok = True
    for p in range(s.trunc[0] + 1):
        got = list(T2.labels((p,)))
        want = ["*"] if p == 0 else ["|".join(t) for t in itertools.product(base, repeat=p)]
        out["levels"][p] = got == want
        ok = ok and got == want
    out["ok"] = ok
    return out


# ---------------------------------------------------------------------------
# monoids in weak 2-groupoids and the reduced bar construction

class SetMonoid:
    """A monoid object in 2-simplicial sets: carrier with levelwise mult and unit."""

    def __init__(self, carrier, mult, unit, name=None):
        self.carrier = carrier
        self._mult = mult
        self._unit = unit
        self.name = name
        self._cache = {}

    def mult_table(self, deg):
        deg = _deg(deg)
        if deg not in self._cache:
            n = self.carrier.size(deg)
            check_elements(n * n, "monoid table")
            self._cache[deg] = np.asarray(self._mult(deg), dtype=np.int64).reshape(n, n)
        return self._cache[deg]

    def mul(self, deg, a, b):
        return self.mult_table(deg)[a, b]

    def unit(self, deg):
        return int(self._unit(_deg(deg)))

    def validate(self):
        rep = ValidationReport(subject=self.name or "monoid")
        C = self.carrier
        T = C.trunc
        for deg in C.degrees():
            n = C.size(deg)
            M = self.mult_table(deg)
            if M.shape != (n, n) or (M.size and (M.min() < 0 or M.max() >= n)):
                rep.add("shape", f"multiplication at {_key(deg)} has the wrong shape")
                continue
            u = self.unit(deg)
            ar = np.arange(n)
            if not (np.array_equal(M[u], ar) and np.array_equal(M[:, u], ar)):
                rep.add("unit", f"unit law fails at {_key(deg)}", list(deg))
            check_elements(n ** 3, "associativity check")
            if not np.array_equal(M[M], M[:, M]):
                rep.add("associativity", f"multiplication is not associative at {_key(deg)}", list(deg))
            for a in range(C.arity):
                for kind, i, tgt, arr in _ops(C, a, deg, T):
                    Mt = self.mult_table(tgt)
                    if not np.array_equal(arr[M], Mt[arr[:, None], arr[None, :]]):
                        rep.add("mult_simplicial", f"multiplication does not commute with {kind}{a}.{i} at {_key(deg)}")
                    if arr[u] != self.unit(tgt):
                        rep.add("unit_simplicial", f"unit does not commute with {kind}{a}.{i} at {_key(deg)}")
        return rep

    def check(self):
        rep = self.validate()
        if not rep.ok:
            raise NotAMonoid(rep.violations[0].message, violation=rep.violations[0].code)
        return self


def monoid_from_h(s, check=True):
    """The monoid (X(1,-,-), face of [1]->[2] through the Segal bijection, degeneracy from level 0)."""
    if check:
        rep = is_h(s)
        if not rep.ok:
            raise NotInH(f"not in H: clause {rep.failing} fails", clause=rep.failing)
    carrier = s.fix(0, 1)

    def mult(deg):
        n = carrier.size(deg)
        face = lambda k, i: s.face(0, (k,) + deg, i)
        E = np.stack([edge_map(face, 2, a) for a in range(2)], axis=1)
        code = _encode(E, n)
        inv = np.empty(n * n, dtype=np.int64)
        inv[code] = np.arange(len(code))
        return s.face(0, (2,) + deg, 1)[inv]

    def unit(deg):
        return s.degen(0, (0,) + deg, 0)[0]

    return SetMonoid(carrier, mult, unit, name=f"monoid({s.name})")


def bar_from_monoid(m, Lp=2, check=True, name=None):
    """The reduced bar construction: level p is the p-fold power of the carrier."""
    if check:
        m.check()
    return levelwise_nerve(m.carrier, Lp, m.mul, m.unit, name=name or f"bar({m.name})")


def bar_comparison(s, m=None):
    """The levelwise Segal bijection from s to the bar of its monoid; validated as a map."""
    m = m or monoid_from_h(s, check=False)
    b = bar_from_monoid(m, s.trunc[0], check=False)

    def comp(d):
        p, rest = d[0], d[1:]
        if p == 0:
            return np.zeros(s.size(d), dtype=np.int64)
        face = lambda k, i: s.face(0, (k,) + rest, i)
        E = np.stack([edge_map(face, p, a) for a in range(p)], axis=1)
        return _encode(E, s.size((1,) + rest))
    f = MultiSimpMap(s, b, comp, name="bar comparison")
    rep = f.validate()
    bij = all(_bijective(f.at(d), b.size(d)) for d in s.degrees())
    return f, bool(rep.ok and bij)


def constant_msset(base, arity, L, name=None):
    """A set regarded as a constant multi-simplicial set."""
    base = [str(x) for x in base]
    n = len(base)
    ident = lambda *a: np.arange(n)
    return MultiSimpSet((L,) * arity, lambda d: n, ident, ident, lambda d: base, name=name)


def monoid_nerve_2(elements, table, unit, L=2, name=None):
    """A 2-nerve with discrete rows: level (p, q) is M^p for a finite monoid M."""
    table = np.asarray(table, dtype=np.int64)
    inner = constant_msset(elements, 1, L)
    return levelwise_nerve(inner, L, lambda d, a, b: table[a, b], lambda d: int(unit),
                           name=name or "monoid nerve")


def constant_monoid(elements, table, unit, L=2, name=None):
    """A finite monoid regarded as a monoid in discrete 2-simplicial sets."""
    table = np.asarray(table, dtype=np.int64)
    n = len(elements)
    return SetMonoid(constant_msset(elements, 2, L), lambda d: table.reshape(n * n),
                     lambda d: int(unit), name=name or "monoid")
