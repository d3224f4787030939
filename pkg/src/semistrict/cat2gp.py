"""cat²-groups, multinerves, retraction data, discrete multinerves and Segal maps.

Multinerve layout: axis 0 (index p) is direction 1 (endomorphisms d1, t1),
axis 1 (index q) is direction 2 (d2, t2).  An element of level (p, q) is a
max(p,1) × max(q,1) matrix over G whose rows are direction-2 composable
strings and whose columns are direction-1 composable strings; p = 0 forces
entries into im d1 and q = 0 into im d2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .catgp import (Cat1Group, InternalFunctor, cat1_to_internal, discrete_internal,
                    pi0_data, pi1_subgroup, validate_internal_functor, _cat1_checks,
                    is_weak_equivalence_functor)
from .errors import (InvalidInput, NotAMorphism, RetractionInvalid, SizeCapExceeded,
                     TruncationTooShallow)
from .grp import (GroupHom, TupleGroup, first_noncommuting_pair, generating_set,
                  groups_equal, hom_violation, homs_equal, identity_hom, image_of,
                  join_equal, kernel_of, row_keys)
from .limits import LIMITS, check_elements
from .report import ClauseReport, ValidationReport
from .sgrp import (SimplicialHom, TruncBisimpGroup, TruncSimpGroup, diagonal_of, edge_map,
                   is_weak_equivalence_simp, moore_homotopy, levelwise_bijective)


class Cat2Group:
    def __init__(self, g, d1, t1, d2, t2, name=None):
        self.g = g
        maps = []
        for nm, m in (("d1", d1), ("t1", t1), ("d2", d2), ("t2", t2)):
            if isinstance(m, GroupHom):
                maps.append(m)
                continue
            m = np.asarray(m)
            if m.shape != (g.order,) or (m.size and (m.min() < 0 or m.max() >= g.order)):
                raise InvalidInput(f"{nm} must be an index array of length {g.order}")
            maps.append(GroupHom(g, g, m, name=nm))
        self.d1, self.t1, self.d2, self.t2 = maps
        self.name = name

    def direction(self, k):
        if k == 1:
            return Cat1Group(self.g, self.d1, self.t1, name=f"{self.name}.1")
        if k == 2:
            return Cat1Group(self.g, self.d2, self.t2, name=f"{self.name}.2")
        raise InvalidInput("direction is 1 or 2")

    def swapped(self):
        return Cat2Group(self.g, self.d2, self.t2, self.d1, self.t1, name=f"swap({self.name})")

    def to_json(self, group_name):
        return {"group": group_name, "d1": self.d1.map.tolist(), "t1": self.t1.map.tolist(),
                "d2": self.d2.map.tolist(), "t2": self.t2.map.tolist()}

    def __repr__(self):
        return f"<Cat2Group {self.name or ''} |G|={self.g.order}>"


def discrete_cat2(g, name=None):
    ar = np.arange(g.order)
    return Cat2Group(g, ar, ar, ar, ar, name=name or f"disc2({g.name})")


def trivial_cat2(a, name=None):
    """All four endomorphisms trivial; for abelian a this models K(a, 3)."""
    e = np.full(a.order, a.identity)
    return Cat2Group(a, e, e, e, e, name=name or f"K({a.name},3)")


def cat2_from_cat1(x, direction, name=None):
    """The cat²-group equal to x in ``direction`` and discrete in the other."""
    ar = np.arange(x.g.order)
    if direction == 1:
        return Cat2Group(x.g, x.d.map, x.t.map, ar, ar, name=name or f"{x.name}@1")
    return Cat2Group(x.g, ar, ar, x.d.map, x.t.map, name=name or f"{x.name}@2")


def validate_cat2(x):
    rep = ValidationReport(subject=x.name or "cat2")
    _cat1_checks(rep, x.g, x.d1, x.t1, "1")
    _cat1_checks(rep, x.g, x.d2, x.t2, "2")
    m = {k: getattr(x, k).map for k in ("d1", "t1", "d2", "t2")}
    for a, b in (("d1", "t2"), ("d2", "t1"), ("d1", "d2"), ("t1", "t2")):
        bad = np.flatnonzero(m[a][m[b]] != m[b][m[a]])
        if len(bad):
            rep.add(f"{a}{b}={b}{a}", f"{a}{b} != {b}{a}", x.g.label(bad[0]))
    return rep


# ---------------------------------------------------------------------------
# multinerve

def strings_in(allowed, d, t, n):
    """Composable strings of length n (t(x_k) = d(x_{k+1})) with entries in ``allowed``."""
    allowed = np.asarray(allowed)
    s = allowed[:, None]
    for _ in range(n - 1):
        si, j = join_equal(t[s[:, -1]], d[allowed])
        s = np.concatenate([s[si], allowed[j][:, None]], axis=1)
        check_elements(s.size, "composable strings")
    return s


def stack_rows(R, d, t, p):
    """Stack p rows of R so that t(row_j) = d(row_{j+1}) entrywise; shape (N, p, w)."""
    kt = row_keys(t[R], 2)
    kd = row_keys(d[R], 2)
    S = np.arange(len(R))[:, None]
    for _ in range(p - 1):
        si, j = join_equal(kt[S[:, -1]], kd)
        S = np.concatenate([S[si], j[:, None]], axis=1)
        check_elements(S.size * R.shape[1], "multinerve level")
    return R[S]


def _face_along(A, n, i, d, t, G):
    """Face d_i along axis 1 of a stack A of shape (N, k, w), k = max(n, 1)."""
    if n == 1:
        return (t if i == 0 else d)[A]
    if i == 0:
        return A[:, 1:]
    if i == n:
        return A[:, :-1]
    a, b = A[:, i - 1], A[:, i]
    merged = G.mul(G.mul(a, G.inverses[d[b]]), b)
    return np.concatenate([A[:, :i - 1], merged[:, None], A[:, i + 1:]], axis=1)


def _degen_along(A, n, i, d, t):
    if n == 0:
        return A
    ins = d[A[:, 0]] if i == 0 else t[A[:, i - 1]]
    return np.concatenate([A[:, :i], ins[:, None], A[:, i:]], axis=1)


class Multinerve(TruncBisimpGroup):
    """The bisimplicial group of a cat²-group."""

    def __init__(self, x, L=None):
        L = LIMITS.trunc if L is None else L
        self.cat2 = x
        G = x.g
        if G.order > 65535:
            raise SizeCapExceeded("multinerve keys need |G| < 65536")
        self._G = G
        self._m = {k: np.asarray(getattr(x, k).map) for k in ("d1", "t1", "d2", "t2")}
        ar = np.arange(G.order)
        self._fixed1 = self._m["d1"] == ar
        self._fixed2 = self._m["d2"] == ar
        super().__init__((L, L), self._build_level, self._build_face, self._build_degen,
                         name=f"multinerve({x.name})")

    def _build_level(self, p, q):
        G = self._G
        pp, qq = max(p, 1), max(q, 1)

        def build():
            allowed = np.ones(G.order, dtype=bool)
            if p == 0:
                allowed &= self._fixed1
            if q == 0:
                allowed &= self._fixed2
            E = np.flatnonzero(allowed)
            R = strings_in(E, self._m["d2"], self._m["t2"], qq)
            M = R[:, None, :] if pp == 1 else stack_rows(R, self._m["d1"], self._m["t1"], pp)
            return M.reshape(len(M), pp * qq)

        return TupleGroup((G,) * (pp * qq), builder=build, shape=(pp, qq), name=f"({p},{q})")

    def matrices(self, p, q):
        lv = self.level(p, q)
        return np.asarray(lv.rows).reshape(lv.order, max(p, 1), max(q, 1))

    def _apply(self, axis, p, q, src_target, fn):
        src = self.level(p, q)
        tgt = self.level(*src_target)

        def build():
            A = self.matrices(p, q)
            if axis == 1:
                A = A.transpose(0, 2, 1)
            B = fn(A)
            if axis == 1:
                B = B.transpose(0, 2, 1)
            return tgt.index_of(B.reshape(len(B), -1))
        return GroupHom(src, tgt, builder=build)

    def _dirmaps(self, axis):
        return (self._m["d1"], self._m["t1"]) if axis == 0 else (self._m["d2"], self._m["t2"])

    def _build_face(self, axis, p, q, i):
        d, t = self._dirmaps(axis)
        n = (p, q)[axis]
        tgt = (p - 1, q) if axis == 0 else (p, q - 1)
        return self._apply(axis, p, q, tgt, lambda A: _face_along(A, n, i, d, t, self._G))

    def _build_degen(self, axis, p, q, i):
        d, t = self._dirmaps(axis)
        n = (p, q)[axis]
        tgt = (p + 1, q) if axis == 0 else (p, q + 1)
        return self._apply(axis, p, q, tgt, lambda A: _degen_along(A, n, i, d, t))


def multinerve_of(x, L=None):
    """Memoised per (x, L) so that derived objects share level groups."""
    L = LIMITS.trunc if L is None else L
    memo = x.__dict__.setdefault("_multinerves", {})
    if L not in memo:
        memo[L] = Multinerve(x, L)
    return memo[L]


def homotopy_groups_cat2(x, L=None):
    """(pi1, pi2, pi3) of the classifying space: pi_n = Moore pi_{n-1} of the diagonal."""
    L = 3 if L is None else L
    if L < 3:
        raise TruncationTooShallow("pi3 needs diagonal level 3")
    diag = diagonal_of(multinerve_of(x, L))
    return tuple(moore_homotopy(diag, k) for k in range(3))


class Cat2Morphism:
    def __init__(self, source, target, hom, name=None):
        self.source = source
        self.target = target
        self.hom = hom if isinstance(hom, GroupHom) else GroupHom(source.g, target.g, hom)
        self.name = name


def validate_cat2_morphism(f):
    rep = ValidationReport(subject=f.name or "cat2 morphism")
    if hom_violation(f.hom) is not None:
        rep.add("hom", "underlying map is not a homomorphism")
    m = f.hom.map
    for nm in ("d1", "t1", "d2", "t2"):
        if not np.array_equal(m[getattr(f.source, nm).map], getattr(f.target, nm).map[m]):
            rep.add(f"commutes_{nm}", f"map does not commute with {nm}")
    return rep


def diagonal_map(f, L=3):
    """The entrywise map between multinerve diagonals."""
    a = diagonal_of(multinerve_of(f.source, L))
    b = diagonal_of(multinerve_of(f.target, L))
    m = f.hom.map

    def comp(n):
        src, dst = a.level(n), b.level(n)
        return GroupHom(src, dst, builder=lambda: dst.index_of(m[np.asarray(src.rows)]))

    return SimplicialHom(a, b, comp)


def is_weak_equivalence_cat2(f, L=3):
    rep = validate_cat2_morphism(f)
    if not rep.ok:
        raise NotAMorphism(rep.violations[0].message, code=rep.violations[0].code)
    return is_weak_equivalence_simp(diagonal_map(f, L), check=True, upto=2)


# ---------------------------------------------------------------------------
# retraction data

def object_of_objects(x):
    """φ0: the direction-2 internal category on im d1, as (internal category, im d1 subgroup)."""
    H = image_of(x.d1)
    hg = H.as_group(name="im d1")
    d2 = H.position(x.d2.map[H.indices])
    t2 = H.position(x.t2.map[H.indices])
    c = Cat1Group(hg, d2, t2, name="phi0")
    return cat1_to_internal(c, check=False), H


class RetractionData:
    """A retraction φ0 -> Q (on arrows, ``d``) with section Q -> φ0 (``t``).

    ``d`` is indexed by the arrows of φ0, i.e. by im d1 in increasing G-index
    order; ``t`` sends each element of Q to a G index of an object of φ0.
    """

    def __init__(self, cat2, Q, d, t, name=None):
        self.cat2 = cat2
        self.Q = Q
        self.d = np.asarray(d, dtype=np.int64)
        self.t = np.asarray(t, dtype=np.int64)
        self.name = name

    @cached_property
    def _phi(self):
        return object_of_objects(self.cat2)

    @property
    def phi0(self):
        return self._phi[0]

    @property
    def im_d1(self):
        return self._phi[1]

    @cached_property
    def phi0d(self):
        return discrete_internal(self.Q, name="phi0d")

    def _check_shapes(self):
        phi = self.phi0
        if self.d.shape != (phi.c1.order,):
            raise RetractionInvalid(f"d must have one entry per arrow of phi0 ({phi.c1.order})")
        if self.d.size and (self.d.min() < 0 or self.d.max() >= self.Q.order):
            raise RetractionInvalid("d entry out of range")
        if self.t.shape != (self.Q.order,):
            raise RetractionInvalid(f"t must have one entry per element of Q ({self.Q.order})")

    @cached_property
    def t_arrows(self):
        """t as positions in the arrow list of φ0 (im d1)."""
        H = self.im_d1
        pos = H.position(self.t)
        pos = np.minimum(pos, H.order - 1)
        if not np.array_equal(H.indices[pos], self.t):
            raise RetractionInvalid("t does not land in im d1")
        return pos

    @cached_property
    def t_objects(self):
        phi = self.phi0
        objs = phi.i.map
        pos = np.searchsorted(objs, self.t_arrows)
        pos = np.minimum(pos, len(objs) - 1)
        if not np.array_equal(objs[pos], self.t_arrows):
            raise RetractionInvalid("t does not land in the objects of phi0")
        return pos

    def functor_d(self):
        phi = self.phi0
        return InternalFunctor(phi, self.phi0d, self.d[phi.i.map], self.d, name="d")

    def functor_t(self):
        return InternalFunctor(self.phi0d, self.phi0, self.t_objects, self.t_arrows, name="t")

    def to_json(self, cat2_name, q_name):
        return {"cat2": cat2_name, "Q": q_name, "d": self.d.tolist(), "t": self.t.tolist()}


def validate_retraction(r):
    rep = ValidationReport(subject=r.name or "retraction")
    try:
        r._check_shapes()
        Fd, Ft = r.functor_d(), r.functor_t()
    except RetractionInvalid as exc:
        rep.add("shape", str(exc))
        return rep
    rd = validate_internal_functor(Fd)
    rt = validate_internal_functor(Ft)
    rep.extend(rd, prefix="d.")
    rep.extend(rt, prefix="t.")
    if not rep.ok:
        return rep
    if not np.array_equal(r.d[r.t_arrows], np.arange(r.Q.order)):
        rep.add("dt=id", "d t != id on Q")
    if not is_weak_equivalence_functor(Fd, check=False):
        rep.add("d_weak_equivalence", "d is not a weak equivalence")
    if not is_weak_equivalence_functor(Ft, check=False):
        rep.add("t_weak_equivalence", "t is not a weak equivalence")
    return rep


def identity_retraction(x):
    """The retraction of a cat²-group whose φ0 is already discrete."""
    phi, H = object_of_objects(x)
    Q = phi.c1
    return RetractionData(x, Q, np.arange(Q.order), H.indices.copy(), name="identity")


def sections(q, c0, limit=1000):
    """All homomorphic sections of a quotient ``q`` of c0, as arrays Q -> c0."""
    Q = q.group
    gens = generating_set(Q)
    n = Q.order
    cands = [np.flatnonzero(q.coset_of == g) for g in gens]
    out = []

    def close(images):
        phi = np.full(n, -1, dtype=np.int64)
        phi[Q.identity] = c0.identity
        queue = [Q.identity]
        k = 0
        while k < len(queue):
            x = queue[k]
            k += 1
            for g, v in zip(gens[:len(images)], images):
                y = int(Q.table[x, g])
                w = int(c0.mul(phi[x], v))
                if phi[y] == -1:
                    phi[y] = w
                    queue.append(y)
                elif phi[y] != w:
                    return None
        return phi

    def rec(images):
        if len(out) >= limit:
            return
        phi = close(images)
        if phi is None:
            return
        if len(images) == len(gens):
            out.append(phi)
            return
        for c in cands[len(images)]:
            rec(images + [int(c)])

    rec([])
    return out


def search_retraction(x, max_q=None):
    """Retraction onto π0(φ0) using the lexicographically least section, or None."""
    max_q = LIMITS.retraction_cap if max_q is None else max_q
    phi, H = object_of_objects(x)
    if pi1_subgroup(phi).order != 1:
        return None
    q = pi0_data(phi)
    if len(q) > max_q:
        return None
    secs = sections(q, phi.c0)
    if not secs:
        return None
    best = min(secs, key=lambda s: tuple(s.tolist()))
    Q = q.group
    d = q.coset_of[phi.d0.map]
    t = H.indices[phi.i.map[best]]
    r = RetractionData(x, Q, d, t, name="searched")
    return r


def all_retractions(x, max_q=None, limit=64):
    """Every retraction onto π0(φ0) obtained from a homomorphic section."""
    phi, H = object_of_objects(x)
    if pi1_subgroup(phi).order != 1:
        return []
    q = pi0_data(phi)
    if len(q) > (LIMITS.retraction_cap if max_q is None else max_q):
        return []
    d = q.coset_of[phi.d0.map]
    return [RetractionData(x, q.group, d, H.indices[phi.i.map[s]], name=f"section{k}")
            for k, s in enumerate(sections(q, phi.c0, limit))]


# ---------------------------------------------------------------------------
# internal 2-nerves

class InternalTwoNerve:
    def __init__(self, b, name=None, source=None):
        self.b = b
        self.name = name
        self.source = source

    @property
    def trunc(self):
        return self.b.trunc


def discrete_multinerve(x, r, L=None):
    """Replace row 0 of the multinerve by the constant row on Q."""
    rep = validate_retraction(r)
    if not rep.ok:
        v = rep.violations[0]
        raise RetractionInvalid(v.message, violation=v.code)
    m = multinerve_of(x, L)
    Q = r.Q
    H = r.im_d1
    dQ = r.d
    tG = r.t
    ident = identity_hom(Q)

    def level(p, q):
        return Q if p == 0 else m.level(p, q)

    def face(axis, p, q, i):
        if p == 0:
            return ident
        if axis == 0 and p == 1:
            inner = m.face(0, 1, q, i)
            row0 = m.level(0, q)

            def build():
                first = np.asarray(row0.rows)[:, 0]
                return dQ[H.position(first)][inner.map]
            return GroupHom(m.level(1, q), Q, builder=build)
        return m.face(axis, p, q, i)

    def degen(axis, p, q, i):
        if p == 0 and axis == 1:
            return ident
        if p == 0 and axis == 0:
            tgt = m.level(1, q)
            w = max(q, 1)
            return GroupHom(Q, tgt, builder=lambda: tgt.index_of(np.repeat(tG[:, None], w, axis=1)))
        return m.degen(axis, p, q, i)

    b = TruncBisimpGroup(m.trunc, level, face, degen, name=f"ds({x.name})")
    b.multinerve = m
    return InternalTwoNerve(b, name=b.name, source=(x, r))


# ---------------------------------------------------------------------------
# Segal maps

@dataclass
class SegalResult:
    map: SimplicialHom
    is_iso: bool
    is_weak_equiv: bool


def _segal_simplicial(b, n, axis):
    """Segal map along ``axis`` for index n: a simplicial map in the other index."""
    other = 1 - axis
    L = b.trunc[other]

    def lv(k, m):
        return b.level(k, m) if axis == 0 else b.level(m, k)

    def fc(ax, k, m, i):
        return b.face(ax, k, m, i) if axis == 0 else b.face(ax, m, k, i)

    def dg(ax, k, m, i):
        return b.degen(ax, k, m, i) if axis == 0 else b.degen(ax, m, k, i)

    # axis-local faces for the edge maps, at fixed other index m
    def edge_arrays(m):
        face = lambda k, i: fc(axis, k, m, i).map
        return [edge_map(face, n, a) for a in range(n)]

    targets = {}

    def target_level(m):
        if m in targets:
            return targets[m]
        one = lv(1, m)
        src = fc(axis, 1, m, 1).map     # source of a 1-cell
        tgt = fc(axis, 1, m, 0).map     # target of a 1-cell
        width = len(one.factors)

        def build():
            s = np.arange(one.order)[:, None]
            for _ in range(n - 1):
                si, j = join_equal(tgt[s[:, -1]], src)
                s = np.concatenate([s[si], j[:, None]], axis=1)
                check_elements(s.size * width, "Segal target")
            R = np.asarray(one.rows)
            return np.concatenate([R[s[:, k]] for k in range(n)], axis=1)

        targets[m] = TupleGroup(one.factors * n, builder=build, name=f"segal target {m}")
        targets[m]._blocks = (one, n, width)
        return targets[m]

    def split(m):
        T = target_level(m)
        one, _, width = T._blocks
        R = np.asarray(T.rows)
        return [one.index_of(R[:, k * width:(k + 1) * width]) for k in range(n)]

    def comp_map(opfn, m_from, m_to):
        T_from, T_to = target_level(m_from), target_level(m_to)

        def build():
            parts = split(m_from)
            dst_one = lv(1, m_to)
            R = np.asarray(dst_one.rows)
            f = opfn().map
            return T_to.index_of(np.concatenate([R[f[c]] for c in parts], axis=1))
        return GroupHom(T_from, T_to, builder=build)

    tseq = TruncSimpGroup(
        L, target_level,
        lambda m, i: comp_map(lambda: fc(other, 1, m, i), m, m - 1),
        lambda m, i: comp_map(lambda: dg(other, 1, m, i), m, m + 1),
        name="segal target")
    sseq = TruncSimpGroup(L, lambda m: lv(n, m), lambda m, i: fc(other, n, m, i),
                          lambda m, i: dg(other, n, m, i), name=f"level {n}")

    def comp(m):
        src, T = lv(n, m), target_level(m)

        def build():
            one = lv(1, m)
            R = np.asarray(one.rows)
            cols = [R[e] for e in edge_arrays(m)]
            return T.index_of(np.concatenate(cols, axis=1))
        return GroupHom(src, T, builder=build)

    return SimplicialHom(sseq, tseq, comp)


def segal_map_bisimp(b, n, direction="v"):
    """Segal map for index n in ``direction`` ('v' moves p, 'h' moves q)."""
    axis = {"v": 0, "h": 1, 0: 0, 1: 1}[direction]
    if n < 2 or n > b.trunc[axis]:
        raise InvalidInput(f"Segal index must lie in 2..{b.trunc[axis]}")
    f = _segal_simplicial(b, n, axis)
    iso = levelwise_bijective(f)
    weq = iso or is_weak_equivalence_simp(f, check=True)
    if iso:
        f.check()
    return SegalResult(f, iso, weq)


def validate_internal_two_nerve(nv):
    """Definition of an internal 2-nerve: rows are nerves, row 0 constant, Segal maps weak equivalences."""
    b = nv.b
    Lp, Lq = b.trunc
    rep = ClauseReport(subject=nv.name or "internal 2-nerve")
    bis = b.validate(check_homs=True, skip_through_row0=True)
    rep.record("bisimplicial", bis.ok, None if bis.ok else bis.violations[0].message)
    strict = bis if bis.ok is False else b.validate(check_homs=False)
    rep.extras["strict_bisimplicial"] = strict.ok
    if not strict.ok:
        rep.extras["strict_bisimplicial_failures"] = sorted(set(strict.codes()))
    rows_ok, detail = True, None
    for p in range(Lp + 1):
        for n in range(2, Lq + 1):
            if not row_segal_bijective(b, p, n):
                rows_ok, detail = False, f"row {p}: Segal map {n} not bijective"
                break
        if not rows_ok:
            break
        g1 = b.level(p, 1)
        pair = first_noncommuting_pair(g1, kernel_of(b.face(1, p, 1, 1)), kernel_of(b.face(1, p, 1, 0)))
        if pair is not None:
            rows_ok, detail = False, f"row {p}: [ker d0, ker d1] ≠ 1"
            break
    rep.record("rows_are_nerves", rows_ok, detail)
    const_ok, detail = True, None
    g00 = b.level(0, 0)
    for q in range(Lq + 1):
        if not groups_equal(b.level(0, q), g00):
            const_ok, detail = False, f"level (0,{q}) differs from (0,0)"
            break
        ar = np.arange(g00.order)
        for i in range(q + 1):
            if q >= 1 and not np.array_equal(b.face(1, 0, q, i).map, ar):
                const_ok, detail = False, f"face d_{i} at (0,{q}) is not the identity"
            if q < Lq and not np.array_equal(b.degen(1, 0, q, i).map, ar):
                const_ok, detail = False, f"degeneracy s_{i} at (0,{q}) is not the identity"
    rep.record("row0_constant", const_ok, detail)
    segal_ok, detail, bijective = True, None, True
    for n in range(2, Lp + 1):
        res = segal_map_bisimp(b, n, "v")
        bijective &= res.is_iso
        if not res.is_weak_equiv:
            segal_ok, detail = False, f"Segal map {n} is not a weak equivalence"
            break
    rep.record("segal_weak_equivalences", segal_ok, detail)
    rep.extras["segal_bijective"] = bool(bijective)
    return rep


def row_segal_bijective(b, p, n):
    """Is the level-n Segal map of row p (a simplicial group in q) a bijection?"""
    row = b.row(p)
    face = lambda k, i: row.face(k, i).map
    one = row.level(1)
    src = row.face(1, 1).map
    tgt = row.face(1, 0).map
    s = np.arange(one.order)[:, None]
    for _ in range(n - 1):
        si, j = join_equal(tgt[s[:, -1]], src)
        s = np.concatenate([s[si], j[:, None]], axis=1)
    edges = np.stack([edge_map(face, n, a) for a in range(n)], axis=1)
    distinct = len(np.unique(row_keys(edges, 4)))
    return distinct == len(edges) == len(s)


# ---------------------------------------------------------------------------
# comparing diagonals

@dataclass
class DiagonalComparison:
    agree: bool
    hypothesis: bool
    mismatch: str | None = None
    hypothesis_failure: str | None = None

    def __bool__(self):
        return self.agree

    def as_dict(self):
        return {"agree": self.agree, "hypothesis": "holds" if self.hypothesis else "fails",
                "mismatch": self.mismatch, "hypothesis_failure": self.hypothesis_failure}


def _compare_levels(a, b, degrees, maps):
    for deg in degrees:
        if not groups_equal(a.level(*deg), b.level(*deg)):
            return f"level {deg}"
    for kind, axis, deg, i in maps:
        fa = (a.face if kind == "d" else a.degen)(axis, *deg, i)
        fb = (b.face if kind == "d" else b.degen)(axis, *deg, i)
        if not homs_equal(fa, fb):
            return f"{kind}{axis}_{i} at {deg}"
    return None


def diagonals_agree(psi, chi, L=None):
    """Compare the triple diagonals of two bisimplicial groups.

    The Set-level triple diagonal in degree k is the k-fold product of the
    underlying set of the (k, k) group; its structure maps only involve the
    (k, k) groups, their multiplication and the diagonal operators.  So the
    comparison is: groups (k, k) for 1 <= k <= L as labelled groups,
    diagonal faces from k >= 2, and diagonal degeneracies from k >= 1.
    The hypothesis (agreement at every p > 0) is reported separately.
    """
    psi = getattr(psi, "b", psi)
    chi = getattr(chi, "b", chi)
    L = min(min(psi.trunc), min(chi.trunc)) if L is None else L
    pa, pc = psi.truncated(L), chi.truncated(L)
    da, db = diagonal_of(pa), diagonal_of(pc)

    def same(kind, k, i):
        # compare the two axis operators first; they are often shared objects
        if kind == "d":
            parts = [(1, (k - 1, k), i, pa.face, pc.face), (0, (k, k), i, pa.face, pc.face)]
        else:
            parts = [(1, (k + 1, k), i, pa.degen, pc.degen), (0, (k, k), i, pa.degen, pc.degen)]
        if all(homs_equal(fa(ax, *deg, j), fb(ax, *deg, j)) for ax, deg, j, fa, fb in parts):
            return True
        op = "face" if kind == "d" else "degen"
        return homs_equal(getattr(da, op)(k, i), getattr(db, op)(k, i))

    mismatch = None
    for k in range(1, L + 1):
        if not groups_equal(da.level(k), db.level(k)):
            mismatch = f"diagonal level {k}"
            break
        if k >= 2:
            for i in range(k + 1):
                if not same("d", k, i):
                    mismatch = f"diagonal face d_{i} at level {k}"
                    break
        if mismatch is None and k < L:
            for i in range(k + 1):
                if not same("s", k, i):
                    mismatch = f"diagonal degeneracy s_{i} at level {k}"
                    break
        if mismatch:
            break
    degrees = [(p, q) for p in range(1, L + 1) for q in range(L + 1)]
    maps = []
    for p in range(1, L + 1):
        for q in range(L + 1):
            if q >= 1:
                maps += [("d", 1, (p, q), i) for i in range(q + 1)]
            if q < L:
                maps += [("s", 1, (p, q), i) for i in range(q + 1)]
            if p >= 2:
                maps += [("d", 0, (p, q), i) for i in range(p + 1)]
            if p < L:
                maps += [("s", 0, (p, q), i) for i in range(p + 1)]
    hyp = _compare_levels(pa, pc, degrees, maps)
    return DiagonalComparison(mismatch is None, hyp is None, mismatch, hyp)


def explicit_triple_diagonal(b, k):
    """Level k of the Set-level triple diagonal, with its faces, built directly (small k only)."""
    g = b.level(k, k)
    n = g.order
    check_elements(n ** max(k, 1), "triple diagonal")
    import itertools
    tuples = list(itertools.product(range(n), repeat=k))
    labels = ["|".join(g.label(i) for i in tup) for tup in tuples]
    faces = []
    if k >= 1:
        diag = diagonal_of(b)
        lower = b.level(k - 1, k - 1)
        for i in range(k + 1):
            f = diag.face(k, i).map if k >= 1 else None
            out = []
            for tup in tuples:
                img = [int(f[c]) for c in tup]
                if i == 0:
                    img = img[1:]
                elif i == k:
                    img = img[:-1]
                else:
                    img = img[:i - 1] + [int(lower.mul(img[i - 1], img[i]))] + img[i + 1:]
                out.append("|".join(lower.label(c) for c in img))
            faces.append(out)
    return labels, faces
