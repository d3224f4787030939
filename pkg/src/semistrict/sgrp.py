"""Truncated simplicial and bisimplicial groups, Moore complexes, homotopy groups.

Levels, faces and degeneracies are produced on demand by callables and
cached, so a truncation-5 object only pays for the levels that are used.
Moore complex convention: N_n = intersection of ker d_i over i >= 1, with
boundary d_0.
"""
from __future__ import annotations

import numpy as np

from .errors import (InvalidInput, NotSimplicial, QuotientIllFormed,
                     TruncationTooShallow)
from .grp import (GroupHom, Quotient, Subgroup, hom_violation,
                  identity_hom, is_normal, whole)
from .report import ValidationReport


class TruncSimpGroup:
    """Simplicial group truncated at level ``trunc``.

    ``level(n)`` returns the group in dimension n, ``face(n, i)`` the hom
    d_i: level n -> level n-1 and ``degen(n, i)`` the hom s_i: level n -> n+1.
    """

    def __init__(self, trunc, level, face, degen, name=None):
        self.trunc = int(trunc)
        self._level = level
        self._face = face
        self._degen = degen
        self._cache = {}
        self.name = name

    @classmethod
    def from_lists(cls, levels, faces, degens, name=None):
        """``faces[n][i]`` for n >= 1 and ``degens[n][i]`` for n < L."""
        L = len(levels) - 1
        return cls(L, lambda n: levels[n], lambda n, i: faces[n][i],
                   lambda n, i: degens[n][i], name=name)

    @classmethod
    def constant(cls, g, L, name=None):
        ident = identity_hom(g)
        return cls(L, lambda n: g, lambda n, i: ident, lambda n, i: ident, name=name)

    def _get(self, key, fn, *args):
        if key not in self._cache:
            self._cache[key] = fn(*args)
        return self._cache[key]

    def level(self, n):
        if not 0 <= n <= self.trunc:
            raise TruncationTooShallow(f"level {n} is outside truncation {self.trunc}")
        return self._get(("l", n), self._level, n)

    def face(self, n, i):
        if not (1 <= n <= self.trunc and 0 <= i <= n):
            raise InvalidInput(f"no face d_{i} at level {n}")
        return self._get(("d", n, i), self._face, n, i)

    def degen(self, n, i):
        if not (0 <= n < self.trunc and 0 <= i <= n):
            raise InvalidInput(f"no degeneracy s_{i} at level {n}")
        return self._get(("s", n, i), self._degen, n, i)

    def truncated(self, L):
        if L > self.trunc:
            raise TruncationTooShallow(f"cannot raise truncation {self.trunc} to {L}")
        return TruncSimpGroup(L, self.level, self.face, self.degen, name=self.name)

    def orders(self):
        return [self.level(n).order for n in range(self.trunc + 1)]

    def validate(self, check_homs=True, upto=None):
        return _simplicial_report(self, check_homs, self.trunc if upto is None else upto)


def _simplicial_report(s, check_homs, L, subject=None, skip_through_zero=False):
    """All simplicial identities up to level L.

    With ``skip_through_zero`` the identities d_i s_j = s d at level 1 whose
    right-hand side passes through level 0 are left out (used for objects
    whose bottom level was replaced by a homotopy-equivalent one).
    """
    rep = ValidationReport(subject=subject or (s.name or "simplicial group"))
    d = lambda n, i: s.face(n, i).map
    sg = lambda n, i: s.degen(n, i).map
    if check_homs:
        for n in range(1, L + 1):
            for i in range(n + 1):
                bad = hom_violation(s.face(n, i))
                if bad is not None:
                    rep.add("face_hom", f"d_{i} at level {n} is not a homomorphism", list(bad))
        for n in range(L):
            for i in range(n + 1):
                bad = hom_violation(s.degen(n, i))
                if bad is not None:
                    rep.add("degeneracy_hom", f"s_{i} at level {n} is not a homomorphism", list(bad))
    for n in range(2, L + 1):
        for j in range(n + 1):
            for i in range(j):
                if not np.array_equal(d(n - 1, i)[d(n, j)], d(n - 1, j - 1)[d(n, i)]):
                    rep.add("dd", f"d_{i} d_{j} != d_{j-1} d_{i} at level {n}", [n, i, j])
    for n in range(L):
        size = s.level(n).order
        for j in range(n + 1):
            for i in range(n + 2):
                if skip_through_zero and n == 1 and i not in (j, j + 1):
                    continue
                lhs = d(n + 1, i)[sg(n, j)]
                if i < j:
                    rhs = sg(n - 1, j - 1)[d(n, i)]
                elif i in (j, j + 1):
                    rhs = np.arange(size)
                else:
                    rhs = sg(n - 1, j)[d(n, i - 1)]
                if not np.array_equal(lhs, rhs):
                    rep.add("ds", f"d_{i} s_{j} identity fails at level {n}", [n, i, j])
    for n in range(L - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if not np.array_equal(sg(n + 1, i)[sg(n, j)], sg(n + 1, j + 1)[sg(n, i)]):
                    rep.add("ss", f"s_{i} s_{j} != s_{j+1} s_{i} at level {n}", [n, i, j])
    return rep


class SimplicialHom:
    """Levelwise homs f_n: source level n -> target level n."""

    def __init__(self, source, target, component, trunc=None):
        self.source = source
        self.target = target
        self.trunc = min(source.trunc, target.trunc) if trunc is None else trunc
        self._component = component
        self._cache = {}

    def at(self, n):
        if n not in self._cache:
            f = self._component(n)
            self._cache[n] = f if isinstance(f, GroupHom) else GroupHom(
                self.source.level(n), self.target.level(n), f)
        return self._cache[n]

    def validate(self, check_homs=False, upto=None):
        rep = ValidationReport(subject="simplicial map")
        A, B = self.source, self.target
        L = self.trunc if upto is None else min(upto, self.trunc)
        for n in range(L + 1):
            f = self.at(n).map
            if check_homs and hom_violation(self.at(n)) is not None:
                rep.add("component_hom", f"component at level {n} is not a homomorphism", n)
            if n >= 1:
                for i in range(n + 1):
                    if not np.array_equal(self.at(n - 1).map[A.face(n, i).map], B.face(n, i).map[f]):
                        rep.add("face", f"does not commute with d_{i} at level {n}", [n, i])
            if n < L:
                for i in range(n + 1):
                    if not np.array_equal(self.at(n + 1).map[A.degen(n, i).map], B.degen(n, i).map[f]):
                        rep.add("degeneracy", f"does not commute with s_{i} at level {n}", [n, i])
        return rep

    def check(self, upto=None):
        rep = self.validate(upto=upto)
        if not rep.ok:
            v = rep.violations[0]
            raise NotSimplicial(v.message, witness=v.witness)
        return self


def identity_map(s):
    return SimplicialHom(s, s, lambda n: identity_hom(s.level(n)))


# ---------------------------------------------------------------------------
# Moore complex

def moore_term(s, n):
    """N_n as a Subgroup of level n."""
    g = s.level(n)
    if n == 0:
        return whole(g)
    mask = np.ones(g.order, dtype=bool)
    for i in range(1, n + 1):
        mask &= s.face(n, i).map == s.level(n - 1).identity
    return Subgroup(g, np.flatnonzero(mask))


def moore_boundary(s, n):
    """The restriction of d_0 to N_n, as (indices of N_n, their images)."""
    N = moore_term(s, n)
    return N.indices, s.face(n, 0).map[N.indices]


def moore_cycles(s, n):
    N = moore_term(s, n)
    if n == 0:
        return N
    d0 = s.face(n, 0).map[N.indices]
    return Subgroup(s.level(n), N.indices[d0 == s.level(n - 1).identity])


def moore_boundaries(s, n):
    """Image of d_0 on N_{n+1}, a subgroup of level n."""
    _, img = moore_boundary(s, n + 1)
    return Subgroup(s.level(n), np.unique(img))


def moore_homotopy_data(s, n):
    """The coset structure ker(∂_n)/im(∂_{n+1}) on level n."""
    if n < 0:
        raise InvalidInput("dimension must be non-negative")
    if n + 1 > s.trunc:
        raise TruncationTooShallow(
            f"pi_{n} needs level {n + 1}, truncation is {s.trunc}", needed=n + 1, trunc=s.trunc)
    key = ("pi", n)
    if key in s._cache:
        return s._cache[key]
    Z = moore_cycles(s, n)
    B = moore_boundaries(s, n)
    if not Z.mask[B.indices].all():
        raise QuotientIllFormed(f"boundaries are not cycles in dimension {n}")
    if not is_normal(B, within=Z):
        raise QuotientIllFormed(f"boundaries are not normal in the cycles in dimension {n}")
    q = Quotient(Z, B, name=f"pi_{n}")
    s._cache[key] = q
    return q


def moore_homotopy(s, n):
    return moore_homotopy_data(s, n).group


def induced_map(f, n):
    """The hom pi_n(source) -> pi_n(target) induced by a simplicial map."""
    qa = moore_homotopy_data(f.source, n)
    qb = moore_homotopy_data(f.target, n)
    img = qb.coset_of[f.at(n).map[qa.reps]]
    if (img < 0).any():
        raise NotSimplicial(f"map does not send cycles to cycles in dimension {n}")
    return GroupHom(qa.group, qb.group, img)


def is_weak_equivalence_simp(f, check=True, upto=None):
    """True iff f induces bijections on pi_n for n = 0..L-1."""
    top = f.trunc - 1 if upto is None else upto
    if check:
        f.check(upto=top + 1)
    for n in range(top + 1):
        h = induced_map(f, n)
        if h.source.order != h.target.order or len(np.unique(h.map)) != h.source.order:
            return False
    return True


def homotopy_orders(s, upto=None):
    top = s.trunc - 1 if upto is None else upto
    return [moore_homotopy(s, n).order for n in range(top + 1)]


# ---------------------------------------------------------------------------
# bisimplicial groups

class TruncBisimpGroup:
    """Bisimplicial group on (p, q) in [0, Lp] x [0, Lq].

    Axis 0 moves p, axis 1 moves q.  ``face(axis, p, q, i)`` starts at (p, q).
    """

    def __init__(self, trunc, level, face, degen, name=None):
        if isinstance(trunc, int):
            trunc = (trunc, trunc)
        self.trunc = tuple(int(t) for t in trunc)
        self._level = level
        self._face = face
        self._degen = degen
        self._cache = {}
        self.name = name

    def _get(self, key, fn, *args):
        if key not in self._cache:
            self._cache[key] = fn(*args)
        return self._cache[key]

    def _in(self, p, q):
        return 0 <= p <= self.trunc[0] and 0 <= q <= self.trunc[1]

    def level(self, p, q):
        if not self._in(p, q):
            raise TruncationTooShallow(f"level ({p},{q}) is outside truncation {self.trunc}")
        return self._get(("l", p, q), self._level, p, q)

    def face(self, axis, p, q, i):
        n = (p, q)[axis]
        if not (self._in(p, q) and n >= 1 and 0 <= i <= n):
            raise InvalidInput(f"no face d_{i} on axis {axis} at ({p},{q})")
        return self._get(("d", axis, p, q, i), self._face, axis, p, q, i)

    def degen(self, axis, p, q, i):
        n = (p, q)[axis]
        top = self.trunc[axis]
        if not (self._in(p, q) and n < top and 0 <= i <= n):
            raise InvalidInput(f"no degeneracy s_{i} on axis {axis} at ({p},{q})")
        return self._get(("s", axis, p, q, i), self._degen, axis, p, q, i)

    def row(self, p):
        """The simplicial group q -> (p, q)."""
        return TruncSimpGroup(self.trunc[1], lambda q: self.level(p, q),
                              lambda q, i: self.face(1, p, q, i),
                              lambda q, i: self.degen(1, p, q, i), name=f"row {p}")

    def column(self, q):
        """The simplicial group p -> (p, q)."""
        return TruncSimpGroup(self.trunc[0], lambda p: self.level(p, q),
                              lambda p, i: self.face(0, p, q, i),
                              lambda p, i: self.degen(0, p, q, i), name=f"column {q}")

    def transpose(self):
        return TruncBisimpGroup(
            (self.trunc[1], self.trunc[0]), lambda p, q: self.level(q, p),
            lambda a, p, q, i: self.face(1 - a, q, p, i),
            lambda a, p, q, i: self.degen(1 - a, q, p, i), name=self.name)

    def truncated(self, L):
        L = (L, L) if isinstance(L, int) else L
        return TruncBisimpGroup(L, self.level, self.face, self.degen, name=self.name)

    def validate(self, check_homs=True, skip_through_row0=False):
        rep = ValidationReport(subject=self.name or "bisimplicial group")
        Lp, Lq = self.trunc
        for p in range(Lp + 1):
            rep.extend(_simplicial_report(self.row(p), check_homs, Lq), prefix=f"row{p}.")
        for q in range(Lq + 1):
            rep.extend(_simplicial_report(self.column(q), False, Lp,
                                          skip_through_zero=skip_through_row0), prefix=f"col{q}.")
        for p in range(Lp + 1):
            for q in range(Lq + 1):
                pairs = []
                if p >= 1 and q >= 1:
                    pairs += [("dd", ("d", 0, i), ("d", 1, j)) for i in range(p + 1) for j in range(q + 1)]
                if p >= 1 and q < Lq:
                    pairs += [("ds", ("d", 0, i), ("s", 1, j)) for i in range(p + 1) for j in range(q + 1)]
                if p < Lp and q >= 1:
                    pairs += [("sd", ("s", 0, i), ("d", 1, j)) for i in range(p + 1) for j in range(q + 1)]
                if p < Lp and q < Lq:
                    pairs += [("ss", ("s", 0, i), ("s", 1, j)) for i in range(p + 1) for j in range(q + 1)]
                for code, a, b in pairs:
                    if not np.array_equal(self._path(p, q, [a, b]), self._path(p, q, [b, a])):
                        rep.add("commute_" + code, f"{a} and {b} do not commute at ({p},{q})", [p, q])
        return rep

    def _path(self, p, q, ops):
        """Apply operators in order (first op first) starting at (p, q)."""
        m = None
        for kind, axis, i in ops:
            f = (self.face if kind == "d" else self.degen)(axis, p, q, i).map
            m = f if m is None else f[m]
            step = -1 if kind == "d" else 1
            if axis == 0:
                p += step
            else:
                q += step
        return m


def diagonal_of(b):
    """The diagonal simplicial group n -> (n, n)."""
    L = min(b.trunc)

    def face(n, i):
        h = b.face(0, n, n, i)
        v = b.face(1, n - 1, n, i)
        return v.compose(h)

    def degen(n, i):
        h = b.degen(0, n, n, i)
        v = b.degen(1, n + 1, n, i)
        return v.compose(h)

    return TruncSimpGroup(L, lambda n: b.level(n, n), face, degen, name="diagonal")


def constant_bisimp(s, axis=1, name=None):
    """Bisimplicial group constant along ``axis`` with the simplicial group s along the other."""
    L = s.trunc
    if axis == 1:
        return TruncBisimpGroup(
            (L, L), lambda p, q: s.level(p),
            lambda a, p, q, i: s.face(p, i) if a == 0 else identity_hom(s.level(p)),
            lambda a, p, q, i: s.degen(p, i) if a == 0 else identity_hom(s.level(p)), name=name)
    return TruncBisimpGroup(
        (L, L), lambda p, q: s.level(q),
        lambda a, p, q, i: s.face(q, i) if a == 1 else identity_hom(s.level(q)),
        lambda a, p, q, i: s.degen(q, i) if a == 1 else identity_hom(s.level(q)), name=name)


def _product_hom(P, Q, f, g):
    """f × g : A×B -> A'×B' where P = A×B and Q = A'×B' are TupleGroups."""
    A, B = f.source, g.source

    def build():
        mA = len(A.factors)
        ra = A.index_of(P.rows[:, :mA])
        rb = B.index_of(P.rows[:, mA:])
        rows = np.concatenate([np.asarray(f.target.rows)[f.map[ra]],
                               np.asarray(g.target.rows)[g.map[rb]]], axis=1)
        return Q.index_of(rows)
    return GroupHom(P, Q, builder=build)


def product_simp(s, t):
    """Levelwise direct product of two simplicial groups."""
    from .grp import direct_product
    L = min(s.trunc, t.trunc)
    levels = {}

    def level(n):
        if n not in levels:
            levels[n] = direct_product(s.level(n), t.level(n))
        return levels[n]

    return TruncSimpGroup(
        L, level,
        lambda n, i: _product_hom(level(n), level(n - 1), s.face(n, i), t.face(n, i)),
        lambda n, i: _product_hom(level(n), level(n + 1), s.degen(n, i), t.degen(n, i)))


def product_bisimp(a, b):
    from .grp import direct_product
    L = (min(a.trunc[0], b.trunc[0]), min(a.trunc[1], b.trunc[1]))
    levels = {}

    def level(p, q):
        if (p, q) not in levels:
            levels[p, q] = direct_product(a.level(p, q), b.level(p, q))
        return levels[p, q]

    def face(ax, p, q, i):
        tp, tq = (p - 1, q) if ax == 0 else (p, q - 1)
        return _product_hom(level(p, q), level(tp, tq), a.face(ax, p, q, i), b.face(ax, p, q, i))

    def degen(ax, p, q, i):
        tp, tq = (p + 1, q) if ax == 0 else (p, q + 1)
        return _product_hom(level(p, q), level(tp, tq), a.degen(ax, p, q, i), b.degen(ax, p, q, i))

    return TruncBisimpGroup(L, level, face, degen)


def levelwise_bijective(f, upto=None):
    top = f.trunc if upto is None else upto
    for n in range(top + 1):
        h = f.at(n)
        if h.source.order != h.target.order or len(np.unique(h.map)) != h.source.order:
            return False
    return True


def edge_map(face, n, a):
    """Array sending an n-simplex to its edge (a, a+1); ``face(m, i)`` returns an index array."""
    m = np.arange(len(face(n, 0))) if n >= 1 else None
    cur = None
    for top in range(n, a + 1, -1):          # drop vertices above a+1
        f = face(top, top)
        cur = f if cur is None else f[cur]
    for lvl in range(a + 1, 1, -1):          # drop vertices below a
        f = face(lvl, 0)
        cur = f if cur is None else f[cur]
    if cur is None:
        cur = m
    return cur


def vertex_map(face, n, a):
    """Array sending an n-simplex to its vertex a."""
    cur = None
    for top in range(n, a, -1):
        f = face(top, top)
        cur = f if cur is None else f[cur]
    for lvl in range(a, 0, -1):
        f = face(lvl, 0)
        cur = f if cur is None else f[cur]
    return cur
