"""Finite groups given by Cayley tables, homomorphisms, and subgroup constructions.

Two concrete group classes share one small protocol (``order``, ``identity``,
``mul``, ``inv``, ``label``, ``factors``/``rows``/``index_of``):

* :class:`FinGroup` stores a full Cayley table.
* :class:`TupleGroup` is a subgroup of a direct product of table groups,
  stored as lexicographically sorted rows of component indices.  Nerve
  levels are of this kind; their tables are only built on request.

Every algorithm below is written against the protocol, so the two kinds mix
freely.
"""
from __future__ import annotations

from collections import Counter
from functools import cached_property

import numpy as np

from .errors import (InternalConsistencyError, InvalidInput, NotAHomomorphism,
                     NotNormal, SizeCapExceeded)
from .limits import LIMITS, check_elements
from .report import ValidationReport


def _frozen(a, dtype=np.int64):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def row_keys(rows, width=None):
    """Byte keys whose memcmp order is the lexicographic order of ``rows``."""
    rows = np.asarray(rows)
    if rows.ndim != 2:
        raise ValueError("rows must be two-dimensional")
    if width is None:
        top = int(rows.max()) if rows.size else 0
        width = 1 if top < 2**8 else 2 if top < 2**16 else 4
    code = {1: ">u1", 2: ">u2", 4: ">u4"}[width]
    b = np.ascontiguousarray(rows.astype(code))
    return b.view(np.dtype((np.void, width * rows.shape[1]))).ravel()


def join_equal(left, right):
    """All index pairs (i, j) with ``left[i] == right[j]``, sorted by (i, j).

    Works for integer arrays and for byte keys from :func:`row_keys`.
    """
    left = np.asarray(left)
    right = np.asarray(right)
    order = np.argsort(right, kind="stable")
    srt = right[order]
    lo = np.searchsorted(srt, left, side="left")
    hi = np.searchsorted(srt, left, side="right")
    counts = hi - lo
    total = int(counts.sum())
    check_elements(total, "join")
    li = np.repeat(np.arange(len(left)), counts)
    starts = np.repeat(lo, counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    ri = order[starts + offs]
    return li, ri


# ---------------------------------------------------------------------------
# group classes

class FinGroup:
    """A finite group stored as a Cayley table over labelled elements."""

    def __init__(self, elements, table, identity=None, name=None):
        elements = [str(e) for e in elements]
        n = len(elements)
        if n == 0:
            raise InvalidInput("a group needs at least one element")
        if len(set(elements)) != n:
            raise InvalidInput("element labels must be distinct")
        table = np.asarray(table)
        if table.shape != (n, n):
            raise InvalidInput(f"table must be {n}x{n}, got shape {table.shape}")
        if table.size and (table.min() < 0 or table.max() >= n):
            raise InvalidInput("table entry out of range")
        self.elements = tuple(elements)
        self.table = _frozen(table)
        if identity is None:
            identity = _find_identity(self.table)
            if identity is None:
                raise InvalidInput("no identity element found; give one explicitly")
        if not 0 <= int(identity) < n:
            raise InvalidInput("identity index out of range")
        self.identity = int(identity)
        self.name = name

    @property
    def order(self):
        return len(self.elements)

    @cached_property
    def inverses(self):
        hits = self.table == self.identity
        inv = hits.argmax(axis=1)
        inv[~hits.any(axis=1)] = -1
        inv.setflags(write=False)
        return inv

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self.inverses[a]

    def label(self, i):
        return self.elements[int(i)]

    @cached_property
    def _label_index(self):
        return {lab: i for i, lab in enumerate(self.elements)}

    def index(self, lab):
        return self._label_index[str(lab)]

    # tuple protocol: a table group is its own single factor
    @property
    def factors(self):
        return (self,)

    @cached_property
    def rows(self):
        return _frozen(np.arange(self.order)[:, None])

    def index_of(self, rows, check=True):
        rows = np.asarray(rows).reshape(-1, 1)[:, 0]
        if check and rows.size and (rows.min() < 0 or rows.max() >= self.order):
            raise InternalConsistencyError("element index out of range")
        return rows.astype(np.int64)

    def contains_rows(self, rows):
        rows = np.asarray(rows).reshape(-1, 1)[:, 0]
        return (rows >= 0) & (rows < self.order)

    def as_fingroup(self):
        return self

    def to_json(self):
        return {"elements": list(self.elements), "table": self.table.tolist(),
                "identity": self.identity}

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FinGroup{nm} order={self.order}>"


def _find_identity(table):
    n = table.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], ar) and np.array_equal(table[:, e], ar):
            return e
    return None


class TupleGroup:
    """Subgroup of a direct product of table groups, stored as component rows.

    ``rows`` may be given directly or produced lazily by ``builder``.  The
    rows need not be sorted or unique; they are canonicalised on first use.
    ``shape`` only affects labels (a matrix shape is printed row by row).
    """

    def __init__(self, factors, rows=None, *, builder=None, name=None, shape=None):
        self.factors = tuple(factors)
        if not self.factors:
            raise InvalidInput("a tuple group needs at least one factor")
        for f in self.factors:
            if not isinstance(f, FinGroup):
                raise InvalidInput("tuple group factors must be table groups")
        if rows is None and builder is None:
            raise InvalidInput("give rows or a builder")
        self._given = rows
        self._builder = builder
        self.name = name
        self.shape = shape
        top = max(f.order for f in self.factors)
        self._width = 1 if top <= 2**8 else 2 if top <= 2**16 else 4
        self._uniform = all(f is self.factors[0] for f in self.factors)

    @cached_property
    def _store(self):
        rows = self._builder() if self._given is None else self._given
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.factors))
        check_elements(len(rows), "tuple group")
        keys = row_keys(rows, self._width)
        order = np.argsort(keys, kind="stable")
        rows, keys = rows[order], keys[order]
        if len(keys) > 1:
            keep = np.ones(len(keys), dtype=bool)
            keep[1:] = keys[1:] != keys[:-1]
            rows, keys = rows[keep], keys[keep]
        rows = np.ascontiguousarray(rows)
        rows.setflags(write=False)
        self._given = None
        self._builder = None
        return rows, keys

    @property
    def rows(self):
        return self._store[0]

    @property
    def order(self):
        return len(self._store[0])

    def index_of(self, rows, check=True):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.factors))
        keys = self._store[1]
        k = row_keys(rows, self._width)
        pos = np.searchsorted(keys, k)
        if check:
            bad = pos >= len(keys)
            pos_c = np.minimum(pos, len(keys) - 1)
            bad |= keys[pos_c] != k
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                raise InternalConsistencyError(
                    f"tuple {rows[i].tolist()} is not an element of {self!r}")
        return pos

    def contains_rows(self, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.factors))
        keys = self._store[1]
        k = row_keys(rows, self._width)
        pos = np.minimum(np.searchsorted(keys, k), len(keys) - 1)
        return keys[pos] == k

    def _combine(self, ra, rb):
        if self._uniform:
            return self.factors[0].table[ra, rb]
        out = np.empty_like(ra)
        for j, f in enumerate(self.factors):
            out[:, j] = f.table[ra[:, j], rb[:, j]]
        return out

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        shape = a.shape
        rows = self.rows
        prod = self._combine(rows[a.ravel()], rows[b.ravel()])
        return self.index_of(prod, check=False).reshape(shape)

    def inv(self, a):
        a = np.asarray(a)
        r = self.rows[a.ravel()]
        if self._uniform:
            out = self.factors[0].inverses[r]
        else:
            out = np.empty_like(r)
            for j, f in enumerate(self.factors):
                out[:, j] = f.inverses[r[:, j]]
        return self.index_of(out, check=False).reshape(a.shape)

    @cached_property
    def identity(self):
        e = np.array([[f.identity for f in self.factors]])
        return int(self.index_of(e)[0])

    def label(self, i):
        r = self.rows[int(i)]
        parts = [f.elements[c] for f, c in zip(self.factors, r)]
        if self.shape is not None and len(self.shape) == 2 and self.shape[0] > 1:
            p, q = self.shape
            return "[" + ";".join(",".join(parts[k * q:(k + 1) * q]) for k in range(p)) + "]"
        return "(" + ",".join(parts) + ")"

    @cached_property
    def elements(self):
        check_elements(self.order * len(self.factors), "label list")
        return tuple(self.label(i) for i in range(self.order))

    @cached_property
    def table(self):
        n = self.order
        check_elements(n * n, "Cayley table")
        a = np.repeat(np.arange(n), n)
        b = np.tile(np.arange(n), n)
        t = self.mul(a, b).reshape(n, n)
        t.setflags(write=False)
        return t

    @cached_property
    def inverses(self):
        return self.inv(np.arange(self.order))

    def as_fingroup(self, name=None):
        return FinGroup(self.elements, self.table, self.identity, name=name or self.name)

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        if self._given is None and self._builder is not None:
            return f"<TupleGroup{nm} unbuilt, {len(self.factors)} factors>"
        return f"<TupleGroup{nm} order={self.order} factors={len(self.factors)}>"


def direct_product(*groups, name=None):
    """Direct product of groups as a TupleGroup over their table factors."""
    factors = []
    blocks = []
    for g in groups:
        factors.extend(g.factors)
        blocks.append(np.asarray(g.rows))

    def build():
        out = blocks[0]
        for b in blocks[1:]:
            check_elements(len(out) * len(b), "direct product")
            out = np.concatenate([np.repeat(out, len(b), axis=0),
                                  np.tile(b, (len(out), 1))], axis=1)
        return out

    return TupleGroup(factors, builder=build, name=name)


def power_group(g, n, name=None):
    return direct_product(*([g] * n), name=name)


def groups_equal(a, b):
    """Equality of labelled groups: same labels and the same multiplication."""
    if a is b:
        return True
    if isinstance(a, TupleGroup) and isinstance(b, TupleGroup):
        if len(a.factors) != len(b.factors):
            return False
        if not all(groups_equal(x, y) for x, y in zip(a.factors, b.factors)):
            return False
        return a.rows.shape == b.rows.shape and bool(np.array_equal(a.rows, b.rows))
    if a.order != b.order:
        return False
    if tuple(a.elements) != tuple(b.elements):
        return False
    return a.identity == b.identity and bool(np.array_equal(a.table, b.table))


# ---------------------------------------------------------------------------
# validation

def validate_group(g):
    """List every violated group axiom of a table group."""
    rep = ValidationReport(subject=g.name or "group")
    t = np.asarray(g.table)
    n = t.shape[0]
    ar = np.arange(n)
    rows_ok = (np.sort(t, axis=1) == ar).all(axis=1)
    cols_ok = (np.sort(t, axis=0) == ar[:, None]).all(axis=0)
    if not rows_ok.all() or not cols_ok.all():
        if not rows_ok.all():
            r = int(np.flatnonzero(~rows_ok)[0])
            rep.add("latin", f"not a Latin square: row {r} repeats an entry", {"row": r})
        else:
            c = int(np.flatnonzero(~cols_ok)[0])
            rep.add("latin", f"not a Latin square: column {c} repeats an entry", {"column": c})
    e = g.identity
    if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
        rep.add("identity", f"element {e} is not a two-sided identity", {"identity": e})
    if n > LIMITS.table_cap:
        raise SizeCapExceeded(f"associativity check needs order <= {LIMITS.table_cap}",
                              size=n, cap=LIMITS.table_cap)
    ab_c = t[t, :]            # (a*b)*c indexed [a, b, c]
    a_bc = t[ar[:, None, None], t[None, :, :]]
    bad = np.argwhere(ab_c != a_bc)
    if len(bad):
        i, j, k = (int(v) for v in bad[0])
        rep.add("associativity", f"associativity fails at ({i},{j},{k})", [i, j, k])
    left = (t == e).any(axis=1)
    right = (t == e).any(axis=0)
    if not (left & right).all():
        x = int(np.flatnonzero(~(left & right))[0])
        rep.add("inverse", f"element {x} has no two-sided inverse", {"element": x})
    else:
        inv_r = (t == e).argmax(axis=1)
        if not (t[inv_r, ar] == e).all():
            x = int(np.flatnonzero(t[inv_r, ar] != e)[0])
            rep.add("inverse", f"element {x} has no two-sided inverse", {"element": x})
    return rep


# ---------------------------------------------------------------------------
# homomorphisms

class GroupHom:
    """A homomorphism stored as an index array (possibly built lazily)."""

    def __init__(self, source, target, map=None, *, builder=None, name=None):
        self.source = source
        self.target = target
        self.name = name
        if map is None and builder is None:
            raise InvalidInput("give a map or a builder")
        self._given = map
        self._builder = builder

    @cached_property
    def map(self):
        m = self._builder() if self._given is None else self._given
        m = _frozen(np.asarray(m).reshape(-1))
        if len(m) != self.source.order:
            raise InvalidInput(f"map has length {len(m)}, source has order {self.source.order}")
        self._given = None
        self._builder = None
        return m

    def __call__(self, x):
        return self.map[np.asarray(x)]

    def compose(self, inner):
        """``self ∘ inner``."""
        if inner.target is not self.source and inner.target.order != self.source.order:
            raise InvalidInput("homs are not composable")
        return GroupHom(inner.source, self.target, builder=lambda: self.map[inner.map])

    def then(self, outer):
        return outer.compose(self)

    def to_json(self, source_name, target_name):
        return {"source": source_name, "target": target_name, "map": self.map.tolist()}

    def __repr__(self):
        return f"<GroupHom {self.source!r} -> {self.target!r}>"


def identity_hom(g):
    return GroupHom(g, g, np.arange(g.order))


def trivial_hom(src, dst):
    return GroupHom(src, dst, np.full(src.order, dst.identity))


def homs_equal(f, g):
    if f is g:
        return True
    return (f.source.order == g.source.order and bool(np.array_equal(f.map, g.map)))


def hom_violation(f, gens=None):
    """First pair (x, y) with f(xy) != f(x)f(y), or None."""
    src, dst = f.source, f.target
    m = f.map
    n = src.order
    if gens is None and n * n <= min(LIMITS.element_cap, 1 << 20):
        a = np.repeat(np.arange(n), n)
        b = np.tile(np.arange(n), n)
        bad = m[src.mul(a, b)] != dst.mul(m[a], m[b])
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            return int(a[k]), int(b[k])
        return None
    # enough to test x*s for every x and every generator s
    if gens is None:
        gens = generating_set(src)
    xs = np.arange(n)
    for s in gens:
        bad = m[src.mul(xs, s)] != dst.mul(m, m[s])
        if bad.any():
            return int(np.flatnonzero(bad)[0]), int(s)
    return None


def make_hom(src, dst, map, name=None):
    m = np.asarray(map)
    if m.shape != (src.order,):
        raise InvalidInput(f"map must have length {src.order}")
    if m.size and (m.min() < 0 or m.max() >= dst.order):
        raise InvalidInput("map entry out of range")
    f = GroupHom(src, dst, m, name=name)
    bad = hom_violation(f)
    if bad is not None:
        raise NotAHomomorphism(*bad)
    return f


def is_hom(f):
    return hom_violation(f) is None


def is_bijective(f):
    m = f.map
    return f.source.order == f.target.order and len(np.unique(m)) == len(m)


# ---------------------------------------------------------------------------
# subgroups

class Subgroup:
    """A subgroup given as a sorted index set into its parent."""

    def __init__(self, parent, indices, name=None):
        self.parent = parent
        self.indices = _frozen(np.unique(np.asarray(indices, dtype=np.int64)))
        self.name = name

    @property
    def order(self):
        return len(self.indices)

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.indices] = True
        m.setflags(write=False)
        return m

    def __contains__(self, x):
        return bool(self.mask[int(x)])

    def __len__(self):
        return self.order

    def position(self, x):
        """Index of parent element(s) x inside this subgroup's list."""
        return np.searchsorted(self.indices, x)

    def as_group(self, name=None):
        idx = self.indices
        k = len(idx)
        check_elements(k * k, "subgroup table")
        a = np.repeat(idx, k)
        b = np.tile(idx, k)
        t = self.position(self.parent.mul(a, b)).reshape(k, k)
        labels = [self.parent.label(i) for i in idx]
        e = int(self.position(self.parent.identity))
        return FinGroup(labels, t, e, name=name)

    def inclusion(self, as_group=None):
        h = as_group or self.as_group()
        return GroupHom(h, self.parent, self.indices)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash(self.indices.tobytes())

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent!r}>"


def whole(g):
    return Subgroup(g, np.arange(g.order))


def trivial_subgroup(g):
    return Subgroup(g, [g.identity])


def generated(g, gens):
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    mask = np.zeros(g.order, dtype=bool)
    mask[g.identity] = True
    frontier = np.array([g.identity], dtype=np.int64)
    if gens.size == 0:
        return Subgroup(g, frontier)
    while frontier.size:
        prod = np.unique(g.mul(frontier[:, None], gens[None, :]).ravel())
        new = prod[~mask[prod]]
        mask[new] = True
        frontier = new
    return Subgroup(g, np.flatnonzero(mask))


def generating_set(g, sub=None, by_order=False):
    """Greedy generating set of ``sub`` (default: all of g), deterministic."""
    elems = np.arange(g.order) if sub is None else np.asarray(sub.indices)
    if by_order:
        orders = element_orders(g)[elems]
        elems = elems[np.lexsort((elems, -orders))]
    have = np.zeros(g.order, dtype=bool)
    have[g.identity] = True
    gens = []
    target = len(elems)
    for x in elems:
        if have[x]:
            continue
        gens.append(int(x))
        have = generated(g, gens).mask
        if int(have.sum()) == target:
            break
    return gens


def kernel_of(f):
    return Subgroup(f.source, np.flatnonzero(f.map == f.target.identity))


def image_of(f):
    return Subgroup(f.target, np.unique(f.map))


def intersect(a, b):
    return Subgroup(a.parent, np.intersect1d(a.indices, b.indices))


def is_normal(sub, within=None):
    """Is ``sub`` normal in ``within`` (default: the whole parent)?"""
    g = sub.parent
    conj = np.arange(g.order) if within is None else within.indices
    ngens = generating_set(g, sub)
    if not ngens:
        return True
    x = conj[:, None]
    y = np.asarray(ngens)[None, :]
    c = g.mul(g.mul(x, y), g.inv(x))
    return bool(sub.mask[c].all())


def first_noncommuting_pair(g, a, b):
    """First (x, y) in a × b, in index order, with xy != yx; None if they commute."""
    A, B = a.indices, b.indices
    if len(A) * len(B) <= LIMITS.element_cap:
        step = max(1, (1 << 20) // max(1, len(B)))
        for start in range(0, len(A), step):
            x = A[start:start + step][:, None]
            bad = g.mul(x, B[None, :]) != g.mul(B[None, :], x)
            if bad.any():
                i, j = np.argwhere(bad)[0]
                return int(x[i, 0]), int(B[j])
        return None
    ga = generating_set(g, a)
    gb = generating_set(g, b)
    for x in ga:
        bad = g.mul(x, np.asarray(gb)) != g.mul(np.asarray(gb), x)
        if bad.any():
            return int(x), int(gb[int(np.flatnonzero(bad)[0])])
    return None


def commutator_of(a, b, g=None):
    """Subgroup generated by all commutators x y x^-1 y^-1 with x in a, y in b."""
    g = g or a.parent
    A, B = a.indices, b.indices
    check_elements(len(A) * len(B), "commutator scan")
    x = A[:, None]
    y = B[None, :]
    c = g.mul(g.mul(x, y), g.inv(g.mul(y, x)))
    return generated(g, np.unique(c))


def is_abelian(g):
    if isinstance(g, FinGroup):
        return bool(np.array_equal(g.table, g.table.T))
    gens = np.asarray(generating_set(g))
    if gens.size == 0:
        return True
    return bool((g.mul(gens[:, None], gens[None, :]) == g.mul(gens[None, :], gens[:, None])).all())


# ---------------------------------------------------------------------------
# quotients

class Quotient:
    """Cosets of a normal subgroup ``sub`` inside ``within`` (default: everything).

    Cosets are numbered by their minimal parent index, so the result does not
    depend on how ``sub`` was produced.
    """

    def __init__(self, within, sub, name=None):
        g = within.parent
        K = within.indices
        I = sub.indices
        if not sub.mask[g.identity]:
            raise InternalConsistencyError("subgroup does not contain the identity")
        minrep = np.empty(len(K), dtype=np.int64)
        step = max(1, (1 << 22) // max(1, len(I)))
        for s in range(0, len(K), step):
            minrep[s:s + step] = g.mul(K[s:s + step, None], I[None, :]).min(axis=1)
        reps = np.unique(minrep)
        coset_of = np.full(g.order, -1, dtype=np.int64)
        coset_of[K] = np.searchsorted(reps, minrep)
        self.parent = g
        self.within = within
        self.sub = sub
        self.reps = _frozen(reps)
        coset_of.setflags(write=False)
        self.coset_of = coset_of
        self.name = name

    @cached_property
    def group(self):
        r = self.reps
        k = len(r)
        check_elements(k * k, "quotient table")
        t = self.coset_of[self.parent.mul(np.repeat(r, k), np.tile(r, k))].reshape(k, k)
        if (t < 0).any():
            raise InternalConsistencyError("quotient product left the ambient subgroup")
        labels = ["[" + self.parent.label(x) + "]" for x in r]
        e = int(self.coset_of[self.parent.identity])
        return FinGroup(labels, t, e, name=self.name)

    def projection(self):
        if self.within.order != self.parent.order:
            raise InvalidInput("projection is only defined on the whole parent")
        return GroupHom(self.parent, self.group, self.coset_of)

    def __len__(self):
        return len(self.reps)


def quotient_by(g, n, name=None):
    """Quotient group and projection; raises NotNormal unless ``n`` is normal."""
    if not is_normal(n):
        raise NotNormal("subgroup is not normal", order=n.order)
    q = Quotient(whole(g), n, name=name)
    return q.group, q.projection()


# ---------------------------------------------------------------------------
# fiber products and semidirect products

def fiber_product(f, g, name=None):
    """Pullback A ×_C B of f: A -> C and g: B -> C, with its two projections."""
    if f.target is not g.target and f.target.order != g.target.order:
        raise InvalidInput("fiber product needs a shared target")
    A, B = f.source, g.source
    ai, bi = join_equal(f.map, g.map)
    rows = np.concatenate([np.asarray(A.rows)[ai], np.asarray(B.rows)[bi]], axis=1)
    P = TupleGroup(A.factors + B.factors, rows, name=name)
    mA = len(A.factors)
    pr1 = GroupHom(P, A, builder=lambda: A.index_of(P.rows[:, :mA]))
    pr2 = GroupHom(P, B, builder=lambda: B.index_of(P.rows[:, mA:]))
    return P, pr1, pr2


class GroupAction:
    """Left action of ``group`` (P) on ``module`` (M); ``act[p, m]``."""

    def __init__(self, group, module, act):
        self.group = group
        self.module = module
        act = np.asarray(act)
        if act.shape != (group.order, module.order):
            raise InvalidInput(f"action must be a {group.order}x{module.order} array")
        if act.size and (act.min() < 0 or act.max() >= module.order):
            raise InvalidInput("action entry out of range")
        self.act = _frozen(act)

    def validate(self):
        rep = ValidationReport(subject="action")
        P, M, a = self.group, self.module, self.act
        if not np.array_equal(a[P.identity], np.arange(M.order)):
            rep.add("action_identity", "the identity does not act trivially")
        n = P.order
        pp = P.mul(np.repeat(np.arange(n), n), np.tile(np.arange(n), n)).reshape(n, n)
        lhs = a[pp]                        # act(pq, m)  [p, q, m]
        rhs = a[np.arange(n)[:, None, None], a[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            p, q, m = (int(v) for v in bad[0])
            rep.add("action_compatibility", f"act(pq,m) != act(p,act(q,m)) at ({p},{q},{m})", [p, q, m])
        for p in range(n):
            ap = a[p]
            if len(np.unique(ap)) != M.order:
                rep.add("action_automorphism", f"act({p},-) is not bijective", {"p": p})
                break
            if hom_violation(GroupHom(M, M, ap)) is not None:
                rep.add("action_automorphism", f"act({p},-) is not a homomorphism", {"p": p})
                break
        return rep

    @classmethod
    def trivial(cls, group, module):
        return cls(group, module, np.tile(np.arange(module.order), (group.order, 1)))

    @classmethod
    def by_conjugation(cls, g, normal):
        """Conjugation of g on a normal subgroup (module = subgroup as group)."""
        h = normal.as_group()
        idx = normal.indices
        x = np.arange(g.order)[:, None]
        c = g.mul(g.mul(x, idx[None, :]), g.inv(x))
        return cls(g, h, normal.position(c))


def semidirect_product(action, name=None):
    """M ⋊ P with (m,p)(m',p') = (m · act(p,m'), pp'); element (m,p) has index m|P|+p."""
    M, P, a = action.module, action.group, action.act
    nm, np_ = M.order, P.order
    n = nm * np_
    check_elements(n * n, "semidirect product table")
    m1 = np.repeat(np.arange(n) // np_, n)
    p1 = np.repeat(np.arange(n) % np_, n)
    m2 = np.tile(np.arange(n) // np_, n)
    p2 = np.tile(np.arange(n) % np_, n)
    mm = M.mul(m1, a[p1, m2])
    pp = P.mul(p1, p2)
    table = (mm * np_ + pp).reshape(n, n)
    labels = [f"({M.label(m)},{P.label(p)})" for m in range(nm) for p in range(np_)]
    return FinGroup(labels, table, M.identity * np_ + P.identity, name=name)


# ---------------------------------------------------------------------------
# element orders and isomorphism search

def element_orders(g):
    n = g.order
    orders = np.zeros(n, dtype=np.int64)
    allx = np.arange(n)
    cur = allx.copy()
    k = 1
    while True:
        hit = (cur == g.identity) & (orders == 0)
        orders[hit] = k
        if (orders > 0).all():
            return orders
        cur = g.mul(cur, allx)
        k += 1
        if k > n + 1:
            raise InternalConsistencyError("element order exceeds group order")


def order_profile(g):
    return sorted(Counter(element_orders(g).tolist()).items())


def find_isomorphism(a, b):
    """An isomorphism a -> b, or None.  Deterministic backtracking search."""
    if a.order != b.order:
        return None
    if a.order > LIMITS.iso_cap:
        raise SizeCapExceeded(f"isomorphism search is capped at order {LIMITS.iso_cap}",
                              size=a.order, cap=LIMITS.iso_cap)
    oa, ob = element_orders(a), element_orders(b)
    if sorted(oa.tolist()) != sorted(ob.tolist()):
        return None
    if is_abelian(a) != is_abelian(b):
        return None
    n = a.order
    gens = generating_set(a, by_order=True)
    if not gens:
        return GroupHom(a, b, np.array([b.identity]))
    ta, tb = a.table, b.table
    cands = [[int(y) for y in np.flatnonzero(ob == oa[g])] for g in gens]

    def extend(images):
        # BFS closure of the partial assignment on <gens[:k]>
        k = len(images)
        phi = np.full(n, -1, dtype=np.int64)
        used = np.zeros(n, dtype=bool)
        phi[a.identity] = b.identity
        used[b.identity] = True
        queue = [a.identity]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            for j in range(k):
                y = int(ta[x, gens[j]])
                v = int(tb[phi[x], images[j]])
                if phi[y] == -1:
                    if used[v]:
                        return None
                    phi[y] = v
                    used[v] = True
                    queue.append(y)
                elif phi[y] != v:
                    return None
        return phi

    def search(images):
        phi = extend(images)
        if phi is None:
            return None
        if len(images) == len(gens):
            return phi
        for c in cands[len(images)]:
            res = search(images + [c])
            if res is not None:
                return res
        return None

    phi = search([])
    if phi is None:
        return None
    f = GroupHom(a, b, phi)
    if hom_violation(f) is not None or len(np.unique(phi)) != n:
        raise InternalConsistencyError("isomorphism search produced a non-isomorphism")
    return f


def is_isomorphic(a, b):
    return find_isomorphism(a, b) is not None


def abelian_invariants(g):
    """Invariant factors n1 | n2 | ... of an abelian group (empty for the trivial group)."""
    orders = element_orders(g)
    n = g.order
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, int(p**0.5) + 1))]
    per_prime = {}
    for p in primes:
        sizes = []
        k = 0
        prev = 0
        exps = []
        while True:
            k += 1
            cnt = int(np.sum((p**k) % orders == 0))
            s = round(np.log(cnt) / np.log(p))
            sizes.append(s)
            if s == prev:
                break
            prev = s
            if k > 64:
                break
        # number of cyclic factors of exponent >= k is sizes[k-1]-sizes[k-2]
        ge = [sizes[0]] + [sizes[i] - sizes[i - 1] for i in range(1, len(sizes))]
        for i in range(len(ge)):
            cnt_exact = ge[i] - (ge[i + 1] if i + 1 < len(ge) else 0)
            exps.extend([i + 1] * cnt_exact)
        per_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for i in range(width):
        f = 1
        for p, ex in per_prime.items():
            if i < len(ex):
                f *= p ** ex[i]
        factors.append(f)
    return sorted(factors)
